#include "tori/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

#include "tori/error.hpp"

namespace tori {

namespace {

Permutation cycle_on(int n, int shift) {
  Permutation p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = (i + shift) % n;
  return p;
}

// Regular representation of <x, y | x^n, y^2 = x^t, y x y^-1 = x^k>; element
// x^a y^b sits at point a + n*b.
GroupPtr metacyclic(int n, int k, int t, std::vector<std::string> names, std::string name) {
  const int order = 2 * n;
  auto point = [n](int a, int b) { return ((a % n) + n) % n + n * b; };
  auto left_mul = [&](int a, int b) {
    Permutation p(static_cast<std::size_t>(order));
    int kb = b ? k : 1;
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < 2; ++d) {
        int na = a + kb * c + (b && d ? t : 0);
        p[static_cast<std::size_t>(point(c, d))] = point(na, b ^ d);
      }
    return p;
  };
  return Group::generate(static_cast<std::size_t>(order), {left_mul(1, 0), left_mul(0, 1)}, std::move(names),
                         std::move(name));
}

// Left regular representation of a group given by a multiplication rule on
// 0..order-1 (0 the identity).
GroupPtr from_rule(int order, const std::function<int(int, int)>& mul, const std::vector<int>& gens,
                   std::vector<std::string> names, std::string name) {
  std::vector<Permutation> perms;
  for (int g : gens) {
    Permutation p(static_cast<std::size_t>(order));
    for (int x = 0; x < order; ++x) p[static_cast<std::size_t>(x)] = mul(g, x);
    perms.push_back(std::move(p));
  }
  return Group::generate(static_cast<std::size_t>(order), perms, std::move(names), std::move(name));
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string letter_name(std::size_t i) {
  std::string s(1, static_cast<char>('a' + static_cast<int>(i % 26)));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

int parse_int(std::string_view s, std::string_view context) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidInput("cannot read an integer from '" + std::string(s) + "' in '" + std::string(context) + "'");
  return v;
}

int param_int(const nlohmann::json& params, std::size_t i, const std::string& name) {
  if (!params.is_array() || params.size() <= i || !params[i].is_number_integer())
    throw InvalidInput("catalog entry '" + name + "' expects integer parameter #" + std::to_string(i + 1));
  return params[i].get<int>();
}

}  // namespace

GroupPtr cyclic_group(int n) {
  if (n < 1) throw InvalidInput("cyclic group order must be positive");
  if (n == 1) return Group::generate(1, {}, {}, "C1");
  return Group::generate(static_cast<std::size_t>(n), {cycle_on(n, 1)}, {"g"}, "C" + std::to_string(n));
}

GroupPtr dihedral_group(int order) {
  if (order < 4 || order % 2 != 0) throw InvalidInput("dihedral group order must be even and at least 4");
  const int n = order / 2;
  const std::string name = "D" + std::to_string(order);
  if (n == 2) return Group::generate(4, {{1, 0, 3, 2}, {2, 3, 0, 1}}, {"r", "s"}, name);
  Permutation s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (n - i) % n;
  return Group::generate(static_cast<std::size_t>(n), {cycle_on(n, 1), s}, {"r", "s"}, name);
}

GroupPtr dicyclic_group(int order) {
  if (order < 8 || order % 4 != 0) throw InvalidInput("dicyclic group order must be a multiple of 4, at least 8");
  const int n = order / 2;
  if (order == 8) return metacyclic(n, -1, n / 2, {"i", "j"}, "Q8");
  const std::string name = (is_power_of_two(order) ? "Q" : "Dic") + std::to_string(order);
  return metacyclic(n, -1, n / 2, {"x", "y"}, name);
}

GroupPtr quaternion_group(int order) {
  if (!is_power_of_two(order) || order < 8) throw InvalidInput("quaternion group order must be a power of 2, at least 8");
  return dicyclic_group(order);
}

GroupPtr semidihedral_group(int order) {
  if (!is_power_of_two(order) || order < 16) throw InvalidInput("semidihedral group order must be a power of 2, at least 16");
  const int n = order / 2;
  return metacyclic(n, n / 2 - 1, 0, {"x", "y"}, "SD" + std::to_string(order));
}

GroupPtr modular_group(int order) {
  if (!is_power_of_two(order) || order < 16) throw InvalidInput("modular group order must be a power of 2, at least 16");
  const int n = order / 2;
  return metacyclic(n, n / 2 + 1, 0, {"x", "y"}, "M" + std::to_string(order));
}

GroupPtr c4_semidirect_c4() {
  // x^a y^b, y x y^-1 = x^-1
  auto mul = [](int u, int v) {
    int a = u % 4, b = u / 4, c = v % 4, d = v / 4;
    int na = (a + (b % 2 ? -c : c) + 8) % 4;
    return na + 4 * ((b + d) % 4);
  };
  return from_rule(16, mul, {1, 4}, {"x", "y"}, "C4:C4");
}

GroupPtr c2sq_semidirect_c4() {
  // a^i b^j c^k with a^4 = b^2 = c^2 = 1, b central, c a c = a b
  auto mul = [](int u, int v) {
    int i1 = u % 4, j1 = (u / 4) % 2, k1 = u / 8;
    int i2 = v % 4, j2 = (v / 4) % 2, k2 = v / 8;
    if (k1) j2 = (j2 + i2) % 2;
    return (i1 + i2) % 4 + 4 * ((j1 + j2) % 2) + 8 * ((k1 + k2) % 2);
  };
  return from_rule(16, mul, {1, 8}, {"a", "c"}, "C2^2:C4");
}

GroupPtr pauli_group() {
  // i^a X^u Z^v with Z X = -X Z
  auto mul = [](int s, int t) {
    int a1 = s % 4, u1 = (s / 4) % 2, v1 = s / 8;
    int a2 = t % 4, u2 = (t / 4) % 2, v2 = t / 8;
    int a = (a1 + a2 + 2 * (v1 * u2)) % 4;
    return a + 4 * (u1 ^ u2) + 8 * (v1 ^ v2);
  };
  return from_rule(16, mul, {4, 8, 1}, {"x", "z", "i"}, "Pauli");
}

GroupPtr symmetric_group(int n) {
  if (n < 1 || n > 4) throw InvalidInput("symmetric groups are available for n <= 4");
  const std::string name = "S" + std::to_string(n);
  if (n == 1) return Group::generate(1, {}, {}, name);
  Permutation a = cycle_on(n, 0);
  std::swap(a[0], a[1]);
  if (n == 2) return Group::generate(2, {a}, {"a"}, name);
  return Group::generate(static_cast<std::size_t>(n), {a, cycle_on(n, 1)}, {"a", "b"}, name);
}

GroupPtr alternating_group(int n) {
  if (n < 3 || n > 5) throw InvalidInput("alternating groups are available for 3 <= n <= 5");
  const std::string name = "A" + std::to_string(n);
  Permutation a = cycle_on(n, 0);
  a[0] = 1, a[1] = 2, a[2] = 0;
  if (n == 3) return Group::generate(3, {a}, {"a"}, name);
  Permutation b = cycle_on(n, 0);
  if (n % 2 == 1) {
    b = cycle_on(n, 1);
  } else {
    for (int i = 1; i < n; ++i) b[static_cast<std::size_t>(i)] = i == n - 1 ? 1 : i + 1;
  }
  return Group::generate(static_cast<std::size_t>(n), {a, b}, {"a", "b"}, name);
}

GroupPtr abelian_group(const std::vector<int>& cyclic_factors) {
  if (cyclic_factors.empty()) return cyclic_group(1);
  std::vector<GroupPtr> f;
  for (int n : cyclic_factors) f.push_back(cyclic_group(n));
  return direct_product(f);
}

GroupPtr elementary_abelian_group(int p, int k) {
  if (!is_prime(p) || k < 1) throw InvalidInput("elementary abelian group needs a prime p and k >= 1");
  return abelian_group(std::vector<int>(static_cast<std::size_t>(k), p));
}

GroupPtr direct_product(const std::vector<GroupPtr>& factors, std::size_t max_order) {
  if (factors.empty()) return cyclic_group(1);
  if (factors.size() == 1) return factors.front();
  std::size_t degree = 0, order = 1;
  for (const auto& f : factors) degree += f->degree(), order *= f->order();
  if (order > max_order) throw ResourceLimit("direct product order " + std::to_string(order) + " exceeds the configured maximum of " + std::to_string(max_order));

  std::vector<Permutation> gens;
  std::vector<std::string> names;
  std::string name;
  std::size_t offset = 0;
  for (const auto& f : factors) {
    for (int g : f->generators()) {
      Permutation p(degree);
      for (std::size_t x = 0; x < degree; ++x) p[x] = static_cast<int>(x);
      for (std::size_t x = 0; x < f->degree(); ++x) p[offset + x] = static_cast<int>(offset) + f->element(g)[x];
      gens.push_back(std::move(p));
      names.push_back(letter_name(names.size()));
    }
    offset += f->degree();
    name += (name.empty() ? "" : "x") + f->name();
  }
  return Group::generate(degree, gens, std::move(names), std::move(name), max_order);
}

std::vector<CatalogEntry> catalog_entries() {
  return {
      {"trivial", "[]", "C1", "-", "the trivial group"},
      {"cyclic", "[n]", "Cn", "g", "cyclic group of order n"},
      {"dihedral", "[order]", "D<order>", "r, s", "dihedral group of the given (even) order; D8 has order 8"},
      {"quaternion", "[order]", "Q<order>", "i, j (Q8); x, y", "generalized quaternion group, order a power of 2 >= 8"},
      {"dicyclic", "[order]", "Dic<order>", "x, y", "dicyclic group <x, y | x^{2n}, y^2 = x^n, yxy^-1 = x^-1>"},
      {"semidihedral", "[order]", "SD<order>", "x, y", "semidihedral 2-group, order >= 16"},
      {"modular", "[order]", "M<order>", "x, y", "modular 2-group <x, y | x^{n}, y^2, yxy^-1 = x^{n/2+1}>, order >= 16"},
      {"symmetric", "[n]", "Sn", "a = (0 1), b = (0 1 ... n-1)", "symmetric group, n <= 4"},
      {"alternating", "[n]", "An", "a, b", "alternating group, 3 <= n <= 5"},
      {"elementary_abelian", "[k] or [p, k]", "C2^k", "a, b, c, ...", "elementary abelian group (C_p)^k"},
      {"abelian", "[d1, d2, ...]", "Cd1xCd2", "a, b, c, ...", "direct product of cyclic groups"},
      {"c4_semidirect_c4", "[]", "C4:C4", "x, y", "<x, y | x^4, y^4, y x y^-1 = x^-1>, order 16"},
      {"c2sq_semidirect_c4", "[]", "C2^2:C4", "a, c", "<a, b, c | a^4, b^2, c^2, b central, c a c = a b>, order 16"},
      {"pauli", "[]", "Pauli", "x, z, i", "Pauli group C4 o D8, order 16"},
      {"product", "[spec, spec, ...]", "AxB", "a, b, c, ...", "direct product of catalog entries"},
  };
}

GroupPtr group_from_shorthand(std::string_view shorthand, std::size_t max_order) {
  std::string_view s = shorthand;
  if (s.substr(0, 8) == "catalog:") s.remove_prefix(8);
  if (s.empty()) throw InvalidInput("empty group name");

  std::vector<GroupPtr> factors;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('x', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view token = s.substr(start, end - start);
    int power = 1;
    auto caret = token.find('^');
    if (caret != std::string_view::npos && token.find(':') == std::string_view::npos) {
      power = parse_int(token.substr(caret + 1), shorthand);
      token = token.substr(0, caret);
      if (power < 1) throw InvalidInput("bad power in '" + std::string(shorthand) + "'");
    }
    GroupPtr g;
    auto number = [&](std::size_t prefix) { return parse_int(token.substr(prefix), shorthand); };
    if (token == "C4:C4") g = c4_semidirect_c4();
    else if (token == "C2^2:C4") g = c2sq_semidirect_c4();
    else if (token == "Pauli") g = pauli_group();
    else if (token == "1") g = cyclic_group(1);
    else if (token.substr(0, 3) == "Dic") g = dicyclic_group(number(3));
    else if (token.substr(0, 2) == "SD") g = semidihedral_group(number(2));
    else if (!token.empty() && token[0] == 'C') g = cyclic_group(number(1));
    else if (!token.empty() && token[0] == 'D') g = dihedral_group(number(1));
    else if (!token.empty() && token[0] == 'Q') g = quaternion_group(number(1));
    else if (!token.empty() && token[0] == 'M') g = modular_group(number(1));
    else if (!token.empty() && token[0] == 'S') g = symmetric_group(number(1));
    else if (!token.empty() && token[0] == 'A') g = alternating_group(number(1));
    else throw InvalidInput("unknown catalog group '" + std::string(token) + "' (see the catalog command)");
    for (int i = 0; i < power; ++i) factors.push_back(g);
    if (end == s.size()) break;
    start = end + 1;
  }
  GroupPtr g = direct_product(factors, max_order);
  if (g->order() > max_order)
    throw ResourceLimit("group order " + std::to_string(g->order()) + " exceeds the configured maximum of " + std::to_string(max_order));
  return g;
}

GroupPtr build_group(const nlohmann::json& spec, std::size_t max_order) {
  if (spec.is_string()) return group_from_shorthand(spec.get<std::string>(), max_order);
  if (!spec.is_object()) throw InvalidInput("group specification must be an object or a catalog string");

  if (spec.contains("permutations")) {
    const auto& p = spec.at("permutations");
    if (!p.is_object() || !p.contains("degree") || !p.contains("generators"))
      throw InvalidInput("permutations spec needs 'degree' and 'generators'");
    if (!p.at("degree").is_number_integer() || p.at("degree").get<long>() < 1)
      throw InvalidInput("permutation degree must be a positive integer");
    const auto degree = p.at("degree").get<std::size_t>();
    std::vector<Permutation> gens;
    for (const auto& g : p.at("generators")) {
      if (!g.is_array()) throw InvalidInput("each generator must be an image array");
      Permutation perm;
      for (const auto& v : g) {
        if (!v.is_number_integer()) throw InvalidInput("permutation images must be integers");
        perm.push_back(v.get<int>());
      }
      gens.push_back(std::move(perm));
    }
    std::vector<std::string> names;
    if (p.contains("names")) {
      for (const auto& n : p.at("names")) names.push_back(n.get<std::string>());
    } else {
      for (std::size_t i = 0; i < gens.size(); ++i) names.push_back(letter_name(i));
    }
    std::string name = p.value("name", std::string("perm"));
    return Group::generate(degree, gens, std::move(names), std::move(name), max_order);
  }

  if (!spec.contains("catalog")) throw InvalidInput("group specification needs a 'catalog' or 'permutations' key");
  const auto& c = spec.at("catalog");
  if (c.is_string()) return group_from_shorthand(c.get<std::string>(), max_order);
  if (!c.is_object() || !c.contains("name") || !c.at("name").is_string())
    throw InvalidInput("catalog spec needs a 'name'");
  const std::string name = c.at("name").get<std::string>();
  const nlohmann::json params = c.value("params", nlohmann::json::array());

  GroupPtr g;
  if (name == "trivial") g = cyclic_group(1);
  else if (name == "cyclic") g = cyclic_group(param_int(params, 0, name));
  else if (name == "dihedral") g = dihedral_group(param_int(params, 0, name));
  else if (name == "quaternion") g = quaternion_group(params.empty() ? 8 : param_int(params, 0, name));
  else if (name == "dicyclic") g = dicyclic_group(param_int(params, 0, name));
  else if (name == "semidihedral") g = semidihedral_group(param_int(params, 0, name));
  else if (name == "modular") g = modular_group(param_int(params, 0, name));
  else if (name == "symmetric") g = symmetric_group(param_int(params, 0, name));
  else if (name == "alternating") g = alternating_group(param_int(params, 0, name));
  else if (name == "c4_semidirect_c4") g = c4_semidirect_c4();
  else if (name == "c2sq_semidirect_c4") g = c2sq_semidirect_c4();
  else if (name == "pauli") g = pauli_group();
  else if (name == "elementary_abelian")
    g = params.size() >= 2 ? elementary_abelian_group(param_int(params, 0, name), param_int(params, 1, name))
                           : elementary_abelian_group(2, param_int(params, 0, name));
  else if (name == "abelian") {
    std::vector<int> f;
    for (std::size_t i = 0; i < params.size(); ++i) f.push_back(param_int(params, i, name));
    g = abelian_group(f);
  } else if (name == "product") {
    std::vector<GroupPtr> f;
    for (const auto& sub : params)
      f.push_back(sub.is_string() ? group_from_shorthand(sub.get<std::string>(), max_order)
                                  : build_group(nlohmann::json{{"catalog", sub}}, max_order));
    g = direct_product(f, max_order);
  } else {
    throw InvalidInput("unknown catalog entry '" + name + "' (see the catalog command)");
  }
  if (g->order() > max_order) throw ResourceLimit("group order exceeds the configured maximum");
  return g;
}

// ---------------------------------------------------------------------------

std::vector<GroupPtr> abelian_groups_up_to(int max_order) {
  std::vector<GroupPtr> out;
  for (int n = 1; n <= max_order; ++n) {
    // invariant-factor chains d1 | d2 | ... with product n
    std::vector<std::vector<int>> chains;
    std::vector<int> chain;
    std::function<void(int, int)> extend = [&](int remaining, int last) {
      if (remaining == 1) {
        chains.push_back(chain);
        return;
      }
      for (int d = 2; d <= remaining; ++d) {
        if (remaining % d != 0 || (last > 0 && d % last != 0)) continue;
        // remaining/d must itself be a product of multiples of d
        int rest = remaining / d;
        if (rest != 1 && rest % d != 0) continue;
        chain.push_back(d);
        extend(rest, d);
        chain.pop_back();
      }
    };
    extend(n, 0);
    std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    if (n == 1) chains = {{}};
    for (const auto& ch : chains) out.push_back(abelian_group(ch));
  }
  return out;
}

std::vector<GroupPtr> two_groups_up_to(int max_order) {
  std::vector<GroupPtr> out;
  for (auto& g : abelian_groups_up_to(max_order))
    if (g->order() > 1 && is_power_of_two(static_cast<int>(g->order()))) out.push_back(g);
  if (max_order >= 8) {
    out.push_back(dihedral_group(8));
    out.push_back(quaternion_group(8));
  }
  if (max_order >= 16) {
    out.push_back(dihedral_group(16));
    out.push_back(quaternion_group(16));
    out.push_back(semidihedral_group(16));
    out.push_back(modular_group(16));
    out.push_back(direct_product({dihedral_group(8), cyclic_group(2)}));
    out.push_back(direct_product({quaternion_group(8), cyclic_group(2)}));
    out.push_back(c4_semidirect_c4());
    out.push_back(c2sq_semidirect_c4());
    out.push_back(pauli_group());
  }
  std::stable_sort(out.begin(), out.end(), [](const GroupPtr& a, const GroupPtr& b) { return a->order() < b->order(); });
  return out;
}

std::vector<GroupPtr> catalog_groups_up_to(int max_order) {
  std::vector<GroupPtr> out = abelian_groups_up_to(max_order);
  for (int order = 6; order <= max_order; order += 2) out.push_back(dihedral_group(order));
  for (int order = 8; order <= max_order; order += 4) out.push_back(dicyclic_group(order));
  if (max_order >= 12) out.push_back(alternating_group(4));
  if (max_order >= 16) {
    out.push_back(semidihedral_group(16));
    out.push_back(modular_group(16));
    out.push_back(direct_product({dihedral_group(8), cyclic_group(2)}));
    out.push_back(direct_product({quaternion_group(8), cyclic_group(2)}));
    out.push_back(c4_semidirect_c4());
    out.push_back(c2sq_semidirect_c4());
    out.push_back(pauli_group());
  }
  if (max_order >= 24) out.push_back(symmetric_group(4));
  std::stable_sort(out.begin(), out.end(), [](const GroupPtr& a, const GroupPtr& b) { return a->order() < b->order(); });
  return out;
}

}  // namespace tori
