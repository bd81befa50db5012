#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tori {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  IntVector column(std::size_t j) const;

  IntMatrix transpose() const;
  IntMatrix column_range(std::size_t first, std::size_t count) const;
  IntMatrix row_range(std::size_t first, std::size_t count) const;
  bool is_zero() const;

  // Elementary operations, used by the normal-form routines.
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const Integer> v);
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);

// U * A * V == S with S diagonal, d_1 | d_2 | ..., nonnegative, zeros last.
struct SmithForm {
  IntMatrix S;
  IntMatrix U;
  IntMatrix V;
  IntMatrix U_inverse;
  std::size_t rank = 0;

  IntVector invariant_factors() const;  // the first `rank` diagonal entries
};

SmithForm snf(const IntMatrix& a);

// Row-style Hermite normal form: echelon, positive pivots, entries above a
// pivot reduced into [0, pivot). Zero rows are kept at the bottom.
IntMatrix hermite_normal_form(const IntMatrix& a);

// Columns form a saturated lattice basis of {x : A x = 0}, in Hermite shape.
IntMatrix kernel_basis(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);
Integer determinant(const IntMatrix& a);

// Finite-or-not abelian group Z^free_rank + Z/t_1 + ... with t_i > 1, t_i | t_{i+1}.
struct AbelianPresentation {
  std::size_t free_rank = 0;
  IntVector torsion;

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool is_finite() const { return free_rank == 0; }
  Integer order() const;  // throws InvalidInput when infinite
  std::string to_string() const;

  friend bool operator==(const AbelianPresentation&, const AbelianPresentation&) = default;
};

AbelianPresentation presentation_from_factors(std::size_t ambient_rank,
                                              const IntVector& invariant_factors);

// Z^ambient_rank modulo the span of the columns of sub_basis.
AbelianPresentation quotient_presentation(std::size_t ambient_rank, const IntMatrix& sub_basis);

// Solves K C = B exactly; K must have full column rank. A column of B outside
// the integer span of K raises InternalError.
IntMatrix image_in_kernel_coordinates(const IntMatrix& b, const IntMatrix& k);

// A subgroup of a finite abelian group, carried with explicit generators.
struct FiniteSubgroup {
  AbelianPresentation presentation;
  std::vector<IntVector> generators;  // source coordinates, one per torsion factor
};

// Kernel of the homomorphism (+)Z/source_orders -> (+)Z/target_orders whose
// j-th column gives the image of the j-th source generator.
FiniteSubgroup finite_kernel(const IntVector& source_orders, const IntVector& target_orders,
                             const IntMatrix& images);

// Reduce coordinates entrywise into [0, order).
void reduce_coordinates(IntVector& coords, const IntVector& orders);

}  // namespace tori
