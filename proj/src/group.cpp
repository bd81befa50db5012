#include "tori/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "tori/error.hpp"

namespace tori {

namespace {

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[static_cast<std::size_t>(b[x])];
  return c;
}

void check_permutation(const Permutation& p, std::size_t degree) {
  if (p.size() != degree) throw InvalidInput("generator has length " + std::to_string(p.size()) + ", expected degree " + std::to_string(degree));
  std::vector<char> seen(degree, 0);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= degree || seen[static_cast<std::size_t>(v)])
      throw InvalidInput("generator is not a permutation of {0.." + std::to_string(degree - 1) + "}");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

GroupPtr Group::generate(std::size_t degree, const std::vector<Permutation>& generators,
                         std::vector<std::string> generator_names, std::string name,
                         std::size_t max_order) {
  if (degree == 0) throw InvalidInput("permutation degree must be positive");
  if (generator_names.size() != generators.size()) throw InvalidInput("one name per generator required");
  for (const auto& g : generators) check_permutation(g, degree);

  Permutation id(degree);
  for (std::size_t x = 0; x < degree; ++x) id[x] = static_cast<int>(x);

  std::set<Permutation> seen{id};
  std::deque<Permutation> queue{id};
  while (!queue.empty()) {
    Permutation e = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      Permutation n = compose(e, g);
      if (seen.insert(n).second) {
        if (seen.size() > max_order)
          throw ResourceLimit("group order exceeds the configured maximum of " + std::to_string(max_order));
        queue.push_back(std::move(n));
      }
    }
  }

  auto grp = std::shared_ptr<Group>(new Group());
  grp->name_ = std::move(name);
  grp->degree_ = degree;
  grp->elements_.assign(seen.begin(), seen.end());
  const std::size_t n = grp->elements_.size();
  std::map<Permutation, int> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(grp->elements_[i], static_cast<int>(i));

  grp->table_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      grp->table_[a * n + b] = index.at(compose(grp->elements_[a], grp->elements_[b]));
  grp->inverse_.resize(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (grp->table_[a * n + b] == 0) grp->inverse_[a] = static_cast<int>(b);
  grp->orders_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    int k = 1;
    for (int x = static_cast<int>(a); x != 0; x = grp->multiply(x, static_cast<int>(a))) ++k;
    grp->orders_[a] = a == 0 ? 1 : k;
  }
  for (const auto& g : generators) grp->generators_.push_back(index.at(g));
  grp->generator_names_ = std::move(generator_names);

  // Display words: breadth-first over positive words in the generators.
  std::vector<std::vector<int>> letters(n);
  std::vector<char> reached(n, 0);
  reached[0] = 1;
  std::deque<int> bfs{0};
  while (!bfs.empty()) {
    int e = bfs.front();
    bfs.pop_front();
    for (std::size_t j = 0; j < grp->generators_.size(); ++j) {
      int x = grp->multiply(e, grp->generators_[j]);
      if (reached[static_cast<std::size_t>(x)]) continue;
      reached[static_cast<std::size_t>(x)] = 1;
      letters[static_cast<std::size_t>(x)] = letters[static_cast<std::size_t>(e)];
      letters[static_cast<std::size_t>(x)].push_back(static_cast<int>(j));
      bfs.push_back(x);
    }
  }
  grp->words_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto& w = letters[x];
    if (w.empty()) {
      grp->words_[x] = "1";
      continue;
    }
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
      std::size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      if (!out.empty()) out += '*';
      out += grp->generator_names_[static_cast<std::size_t>(w[i])];
      if (j - i > 1) out += "^" + std::to_string(j - i);
      i = j;
    }
    grp->words_[x] = std::move(out);
  }
  return grp;
}

int Group::power(int a, long exponent) const {
  const long ord = element_order(a);
  long e = ((exponent % ord) + ord) % ord;
  int r = identity();
  for (long i = 0; i < e; ++i) r = multiply(r, a);
  return r;
}

std::optional<int> Group::index_of(const Permutation& p) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || *it != p) return std::nullopt;
  return static_cast<int>(it - elements_.begin());
}

bool Group::is_abelian() const {
  for (int a : generators_)
    for (int b : generators_)
      if (multiply(a, b) != multiply(b, a)) return false;
  return true;
}

bool Group::is_central(int x) const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [&](int g) { return multiply(x, g) == multiply(g, x); });
}

std::vector<int> Group::center() const {
  std::vector<int> z;
  for (int x = 0; x < static_cast<int>(order()); ++x)
    if (is_central(x)) z.push_back(x);
  return z;
}

int Group::parse_word(std::string_view word) const {
  word = trim(word);
  if (word.empty()) throw InvalidInput("empty group word");
  int result = identity();
  std::size_t start = 0;
  while (start <= word.size()) {
    std::size_t end = word.find('*', start);
    if (end == std::string_view::npos) end = word.size();
    std::string_view term = trim(word.substr(start, end - start));
    if (term.empty()) throw InvalidInput("malformed group word '" + std::string(word) + "'");

    int factor;
    if (term == "1" || term == "e") {
      factor = identity();
    } else if (term.front() == '#') {
      int idx = -1;
      auto [ptr, ec] = std::from_chars(term.data() + 1, term.data() + term.size(), idx);
      if (ec != std::errc() || ptr != term.data() + term.size() || idx < 0 || static_cast<std::size_t>(idx) >= order())
        throw InvalidInput("bad element index '" + std::string(term) + "'");
      factor = idx;
    } else {
      std::string_view base = term;
      long exponent = 1;
      if (auto caret = term.find('^'); caret != std::string_view::npos) {
        base = trim(term.substr(0, caret));
        std::string_view ex = trim(term.substr(caret + 1));
        auto [ptr, ec] = std::from_chars(ex.data(), ex.data() + ex.size(), exponent);
        if (ec != std::errc() || ptr != ex.data() + ex.size())
          throw InvalidInput("bad exponent in '" + std::string(term) + "'");
      }
      auto it = std::find(generator_names_.begin(), generator_names_.end(), base);
      if (it == generator_names_.end())
        throw InvalidInput("unknown generator '" + std::string(base) + "' for group " + name_);
      factor = power(generators_[static_cast<std::size_t>(it - generator_names_.begin())], exponent);
    }
    result = multiply(result, factor);
    if (end == word.size()) break;
    start = end + 1;
  }
  return result;
}

std::string Group::word(int x) const { return words_.at(static_cast<std::size_t>(x)); }

// ---------------------------------------------------------------------------
// Subgroups

Subgroup::Subgroup(GroupPtr parent, std::vector<int> members) : parent_(std::move(parent)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  members_ = std::move(members);
  membership_.assign(parent_->order(), 0);
  for (int x : members_) {
    if (x < 0 || static_cast<std::size_t>(x) >= parent_->order()) throw InvalidInput("subgroup member out of range");
    membership_[static_cast<std::size_t>(x)] = 1;
  }
  if (members_.empty() || members_.front() != parent_->identity()) throw InvalidInput("subgroup must contain the identity");
  for (int a : members_)
    for (int b : members_)
      if (!contains(parent_->multiply(a, b))) throw InvalidInput("member list is not closed under multiplication");

  // Greedy generating set in ascending element order.
  std::vector<char> span(parent_->order(), 0);
  span[0] = 1;
  std::vector<int> covered{0};
  for (int x : members_) {
    if (span[static_cast<std::size_t>(x)]) continue;
    generators_.push_back(x);
    std::deque<int> queue(covered.begin(), covered.end());
    while (!queue.empty()) {
      int e = queue.front();
      queue.pop_front();
      for (int g : generators_) {
        int y = parent_->multiply(e, g);
        if (!span[static_cast<std::size_t>(y)]) {
          span[static_cast<std::size_t>(y)] = 1;
          covered.push_back(y);
          queue.push_back(y);
        }
      }
    }
  }
}

GroupPtr Subgroup::as_group() const {
  std::vector<Permutation> gens;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    gens.push_back(parent_->element(generators_[i]));
    names.push_back("h" + std::to_string(i + 1));
  }
  return Group::generate(parent_->degree(), gens, std::move(names), parent_->name() + describe(),
                         std::max(parent_->order(), kDefaultMaxOrder));
}

int Subgroup::local_index(int x) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), x);
  return it != members_.end() && *it == x ? static_cast<int>(it - members_.begin()) : -1;
}

std::string Subgroup::describe() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ", ";
    out += parent_->word(members_[i]);
  }
  return out + "}";
}

Subgroup subgroup_closure(const GroupPtr& g, std::span<const int> generators) {
  std::vector<char> in(g->order(), 0);
  for (int x : generators)
    if (x < 0 || static_cast<std::size_t>(x) >= g->order()) throw InvalidInput("generator index out of range");
  in[0] = 1;
  std::vector<int> members{0};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    for (int x : generators) {
      int y = g->multiply(e, x);
      if (!in[static_cast<std::size_t>(y)]) {
        in[static_cast<std::size_t>(y)] = 1;
        members.push_back(y);
        queue.push_back(y);
      }
    }
  }
  return Subgroup(g, std::move(members));
}

Subgroup trivial_subgroup(const GroupPtr& g) { return Subgroup(g, {0}); }

Subgroup whole_group(const GroupPtr& g) {
  std::vector<int> all(g->order());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return Subgroup(g, std::move(all));
}

Subgroup conjugate(const Subgroup& s, int by) {
  std::vector<int> m;
  m.reserve(s.order());
  for (int x : s.members()) m.push_back(s.parent().conjugate(x, by));
  return Subgroup(s.parent_ptr(), std::move(m));
}

bool is_normal(const Subgroup& s) {
  const Group& g = s.parent();
  for (int by : g.generators())
    for (int x : s.generators())
      if (!s.contains(g.conjugate(x, by))) return false;
  return true;
}

bool is_subgroup_of(const Subgroup& small, const Subgroup& big) {
  return std::all_of(small.members().begin(), small.members().end(), [&](int x) { return big.contains(x); });
}

namespace {

std::vector<int> conjugate_members(const Group& g, const std::vector<int>& members, int by) {
  std::vector<int> m;
  m.reserve(members.size());
  for (int x : members) m.push_back(g.conjugate(x, by));
  std::sort(m.begin(), m.end());
  return m;
}

std::vector<int> cyclic_members(const Group& g, int x) {
  std::vector<int> m{0};
  for (int y = x; y != 0; y = g.multiply(y, x)) m.push_back(y);
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

std::vector<Subgroup> cyclic_subgroup_classes(const GroupPtr& g) {
  // member list -> smallest generating element
  std::map<std::vector<int>, int> cyclic;
  for (int x = 0; x < static_cast<int>(g->order()); ++x) cyclic.emplace(cyclic_members(*g, x), x);

  std::vector<std::pair<std::vector<int>, int>> sorted(cyclic.begin(), cyclic.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.second < b.second;
  });

  std::set<std::vector<int>> assigned;
  std::vector<Subgroup> reps;
  for (const auto& [members, gen] : sorted) {
    if (assigned.count(members)) continue;
    for (int by = 0; by < static_cast<int>(g->order()); ++by) assigned.insert(conjugate_members(*g, members, by));
    reps.emplace_back(g, members);
  }
  return reps;
}

std::vector<Subgroup> subgroup_classes(const GroupPtr& g) {
  std::vector<std::vector<int>> cyclic;
  {
    std::set<std::vector<int>> seen;
    for (int x = 0; x < static_cast<int>(g->order()); ++x)
      if (seen.insert(cyclic_members(*g, x)).second) cyclic.push_back(cyclic_members(*g, x));
  }
  std::set<std::vector<int>> all(cyclic.begin(), cyclic.end());
  std::deque<std::vector<int>> queue(cyclic.begin(), cyclic.end());
  while (!queue.empty()) {
    std::vector<int> k = std::move(queue.front());
    queue.pop_front();
    std::vector<char> in(g->order(), 0);
    for (int x : k) in[static_cast<std::size_t>(x)] = 1;
    Subgroup ks(g, k);
    for (const auto& c : cyclic) {
      if (std::all_of(c.begin(), c.end(), [&](int x) { return in[static_cast<std::size_t>(x)] != 0; })) continue;
      std::vector<int> gens = ks.generators();
      gens.push_back(*std::find_if(c.begin(), c.end(), [&](int x) {
        return g->element_order(x) == static_cast<int>(c.size());
      }));
      Subgroup joined = subgroup_closure(g, gens);
      if (all.insert(joined.members()).second) queue.push_back(joined.members());
    }
  }

  std::vector<std::vector<int>> sorted(all.begin(), all.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::set<std::vector<int>> assigned;
  std::vector<Subgroup> reps;
  for (const auto& members : sorted) {
    if (assigned.count(members)) continue;
    for (int by = 0; by < static_cast<int>(g->order()); ++by) assigned.insert(conjugate_members(*g, members, by));
    reps.emplace_back(g, members);
  }
  return reps;
}

Cosets left_cosets(const Subgroup& s) {
  const Group& g = s.parent();
  Cosets c;
  c.coset_of.assign(g.order(), -1);
  for (int x = 0; x < static_cast<int>(g.order()); ++x) {
    if (c.coset_of[static_cast<std::size_t>(x)] >= 0) continue;
    const int id = static_cast<int>(c.representatives.size());
    c.representatives.push_back(x);
    for (int m : s.members()) c.coset_of[static_cast<std::size_t>(g.multiply(x, m))] = id;
  }
  return c;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

CentralDatum make_central_datum(const Group& g, int iota, int p) {
  if (iota < 0 || static_cast<std::size_t>(iota) >= g.order()) throw InvalidInput("iota is not an element of the group");
  if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
  if (g.element_order(iota) != p)
    throw InvalidInput("iota = " + g.word(iota) + " has order " + std::to_string(g.element_order(iota)) +
                       ", expected p = " + std::to_string(p));
  if (!g.is_central(iota)) throw InvalidInput("iota = " + g.word(iota) + " is not central");
  return {iota, p};
}

std::vector<CentralDatum> central_prime_order_elements(const Group& g) {
  std::vector<CentralDatum> out;
  for (int x : g.center())
    if (is_prime(g.element_order(x))) out.push_back({x, g.element_order(x)});
  return out;
}

// ---------------------------------------------------------------------------
// Abelianization and transfer

const IntVector& Abelianization::image(const Subgroup& s, int x) const {
  int k = s.local_index(x);
  if (k < 0) throw InvalidInput("element is not in the subgroup");
  return coordinates[static_cast<std::size_t>(k)];
}

IntVector Abelianization::add(const IntVector& a, const IntVector& b) const {
  IntVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  reduce_coordinates(c, presentation.torsion);
  return c;
}

Abelianization abelianization(const Subgroup& s) {
  const Group& g = s.parent();
  std::vector<int> commutators;
  for (int x : s.members())
    for (int y : s.members())
      commutators.push_back(g.multiply(g.multiply(x, y), g.multiply(g.inverse(x), g.inverse(y))));
  Subgroup k = subgroup_closure(s.parent_ptr(), commutators);

  // Cosets of [S,S] inside S, reached breadth-first along the generators.
  const auto& gens = s.generators();
  const std::size_t ngen = gens.size();
  std::vector<int> coset(g.order(), -1);
  std::vector<int> coset_rep;
  std::vector<IntVector> word;
  auto coset_id = [&](int x) {
    if (coset[static_cast<std::size_t>(x)] < 0) {
      const int id = static_cast<int>(coset_rep.size());
      coset_rep.push_back(x);
      for (int m : k.members()) coset[static_cast<std::size_t>(g.multiply(x, m))] = id;
      return std::pair{id, true};
    }
    return std::pair{coset[static_cast<std::size_t>(x)], false};
  };
  coset_id(0);
  word.push_back(IntVector(ngen));
  for (std::size_t c = 0; c < coset_rep.size(); ++c)
    for (std::size_t j = 0; j < ngen; ++j) {
      auto [id, fresh] = coset_id(g.multiply(coset_rep[c], gens[j]));
      if (fresh) {
        IntVector w = word[c];
        w[j] += 1;
        word.push_back(std::move(w));
      }
    }

  // Relations vec(c) + e_j - vec(c s_j) span the relation lattice of S^ab.
  std::vector<IntVector> relations;
  for (std::size_t c = 0; c < coset_rep.size(); ++c)
    for (std::size_t j = 0; j < ngen; ++j) {
      const int d = coset[static_cast<std::size_t>(g.multiply(coset_rep[c], gens[j]))];
      IntVector r(ngen);
      for (std::size_t i = 0; i < ngen; ++i) r[i] = word[c][i] - word[static_cast<std::size_t>(d)][i];
      r[j] += 1;
      relations.push_back(std::move(r));
    }

  Abelianization ab;
  if (ngen == 0) {
    ab.coordinates.assign(s.order(), IntVector{});
    return ab;
  }
  SmithForm f = snf(IntMatrix::from_columns(ngen, relations));
  if (f.rank != ngen) throw InternalError("abelianization of a finite group came out infinite");
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < f.rank; ++t)
    if (f.S(t, t) != 1) {
      keep.push_back(t);
      ab.presentation.torsion.push_back(f.S(t, t));
    }
  std::vector<IntVector> coset_coords(coset_rep.size());
  for (std::size_t c = 0; c < coset_rep.size(); ++c) {
    IntVector full = f.U * std::span<const Integer>(word[c]);
    IntVector v;
    for (std::size_t t : keep) v.push_back(full[t]);
    reduce_coordinates(v, ab.presentation.torsion);
    coset_coords[c] = std::move(v);
  }
  for (int x : s.members()) ab.coordinates.push_back(coset_coords[static_cast<std::size_t>(coset[static_cast<std::size_t>(x)])]);
  return ab;
}

Transfer::Transfer(Subgroup s) : s_(std::move(s)), ab_(abelianization(s_)), cosets_(left_cosets(s_)) {}

std::vector<int> Transfer::orbit_contributions(int g, std::optional<std::uint64_t> shuffle_seed) const {
  const Group& G = s_.parent();
  if (g < 0 || static_cast<std::size_t>(g) >= G.order()) throw InvalidInput("transfer argument is not a group element");
  const std::size_t n = cosets_.count();
  std::optional<std::mt19937_64> rng;
  if (shuffle_seed) rng.emplace(*shuffle_seed);

  std::vector<char> visited(n, 0);
  std::vector<int> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<std::size_t> orbit;
    std::size_t j = start;
    do {
      visited[j] = 1;
      orbit.push_back(j);
      j = static_cast<std::size_t>(cosets_.coset_of[static_cast<std::size_t>(G.multiply(g, cosets_.representatives[j]))]);
    } while (j != start);
    const long f = static_cast<long>(orbit.size());

    int r = cosets_.representatives[start];
    if (rng) {
      std::uniform_int_distribution<std::size_t> pick_coset(0, orbit.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_member(0, s_.order() - 1);
      r = G.multiply(cosets_.representatives[orbit[pick_coset(*rng)]], s_.members()[pick_member(*rng)]);
    }
    const int contribution = G.multiply(G.multiply(G.inverse(r), G.power(g, f)), r);
    if (!s_.contains(contribution)) throw InternalError("transfer contribution left the subgroup");
    out.push_back(contribution);
  }
  return out;
}

IntVector Transfer::evaluate(int g, std::optional<std::uint64_t> shuffle_seed) const {
  IntVector acc(ab_.presentation.torsion.size());
  for (int c : orbit_contributions(g, shuffle_seed)) acc = ab_.add(acc, ab_.image(s_, c));
  return acc;
}

}  // namespace tori
