#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tori/intlinalg.hpp"

namespace tori {

using Permutation = std::vector<int>;  // image array on {0, ..., degree-1}

inline constexpr std::size_t kDefaultMaxOrder = 64;

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A finite permutation group stored with its full Cayley table. Elements are
// sorted by image tuple, so index 0 is the identity and indices are stable.
// Products compose right to left: (a*b)(x) = a(b(x)).
class Group {
 public:
  static GroupPtr generate(std::size_t degree, const std::vector<Permutation>& generators,
                           std::vector<std::string> generator_names, std::string name,
                           std::size_t max_order = kDefaultMaxOrder);

  const std::string& name() const { return name_; }
  std::size_t order() const { return elements_.size(); }
  std::size_t degree() const { return degree_; }
  int identity() const { return 0; }

  const Permutation& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }
  int multiply(int a, int b) const { return table_[static_cast<std::size_t>(a) * order() + static_cast<std::size_t>(b)]; }
  int inverse(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  int power(int a, long exponent) const;
  int element_order(int a) const { return orders_[static_cast<std::size_t>(a)]; }
  int conjugate(int x, int by) const { return multiply(multiply(by, x), inverse(by)); }  // by x by^-1
  std::optional<int> index_of(const Permutation& p) const;

  const std::vector<int>& generators() const { return generators_; }
  const std::vector<std::string>& generator_names() const { return generator_names_; }

  bool is_abelian() const;
  bool is_central(int x) const;
  std::vector<int> center() const;

  // Words such as "g^2", "a*b^-1", "1". Throws InvalidInput on unknown names.
  int parse_word(std::string_view word) const;
  // Shortest word in the named generators (breadth-first, lexicographic tie-break).
  std::string word(int x) const;

 private:
  Group() = default;

  std::string name_;
  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<int> orders_;
  std::vector<int> generators_;
  std::vector<std::string> generator_names_;
  std::vector<std::string> words_;
};

// A subgroup, stored as the sorted list of parent element indices.
class Subgroup {
 public:
  Subgroup(GroupPtr parent, std::vector<int> members);

  const Group& parent() const { return *parent_; }
  const GroupPtr& parent_ptr() const { return parent_; }
  const std::vector<int>& members() const { return members_; }
  const std::vector<int>& generators() const { return generators_; }
  std::size_t order() const { return members_.size(); }
  std::size_t index() const { return parent_->order() / members_.size(); }
  bool contains(int x) const { return membership_[static_cast<std::size_t>(x)] != 0; }
  bool is_trivial() const { return members_.size() == 1; }
  bool is_whole() const { return members_.size() == parent_->order(); }

  // The subgroup as a group in its own right; element k is members()[k].
  GroupPtr as_group() const;
  // Position of a parent element among members(), or -1.
  int local_index(int x) const;

  std::string describe() const;  // "{1, g^2}"

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_ == b.parent_ && a.members_ == b.members_;
  }

 private:
  GroupPtr parent_;
  std::vector<int> members_;
  std::vector<char> membership_;
  std::vector<int> generators_;
};

Subgroup subgroup_closure(const GroupPtr& g, std::span<const int> generators);
Subgroup trivial_subgroup(const GroupPtr& g);
Subgroup whole_group(const GroupPtr& g);
Subgroup conjugate(const Subgroup& s, int by);  // by S by^-1
bool is_normal(const Subgroup& s);
bool is_subgroup_of(const Subgroup& small, const Subgroup& big);

// One representative per conjugacy class of cyclic subgroups (trivial one
// included), sorted by order, then by smallest generating element index.
std::vector<Subgroup> cyclic_subgroup_classes(const GroupPtr& g);

// One representative per conjugacy class of subgroups, sorted by order, then
// by member list.
std::vector<Subgroup> subgroup_classes(const GroupPtr& g);

// Left cosets xS, numbered in order of their smallest element.
struct Cosets {
  std::vector<int> representatives;  // smallest element of each coset
  std::vector<int> coset_of;         // element index -> coset number
  std::size_t count() const { return representatives.size(); }
};
Cosets left_cosets(const Subgroup& s);

// A central element of prime order p.
struct CentralDatum {
  int iota = 0;
  int p = 0;
};
CentralDatum make_central_datum(const Group& g, int iota, int p);
std::vector<CentralDatum> central_prime_order_elements(const Group& g);
bool is_prime(long n);

// S / [S, S] as a finite abelian group with the quotient map.
struct Abelianization {
  AbelianPresentation presentation;
  std::vector<IntVector> coordinates;  // indexed like Subgroup::members()

  const IntVector& image(const Subgroup& s, int x) const;
  IntVector add(const IntVector& a, const IntVector& b) const;
};
Abelianization abelianization(const Subgroup& s);

// Ver_{G -> S}, evaluated through the orbit form on G/S.
class Transfer {
 public:
  explicit Transfer(Subgroup s);

  const Subgroup& subgroup() const { return s_; }
  const Abelianization& target() const { return ab_; }

  IntVector operator()(int g) const { return evaluate(g, std::nullopt); }
  // With a seed, coset representatives and orbit starting points are drawn at
  // random; the class in S^ab must not change.
  IntVector evaluate(int g, std::optional<std::uint64_t> shuffle_seed) const;

  // The per-orbit contributions r^-1 g^f r (elements of S).
  std::vector<int> orbit_contributions(int g, std::optional<std::uint64_t> shuffle_seed = std::nullopt) const;

 private:
  Subgroup s_;
  Abelianization ab_;
  Cosets cosets_;
};

}  // namespace tori
