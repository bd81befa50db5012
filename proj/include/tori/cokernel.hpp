#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tori/intlinalg.hpp"

namespace tori {

// Row-compressed sparse integer matrix. Bar-resolution coboundaries have a
// handful of nonzeros per row, so this is the natural storage for them.
class SparseMatrix {
 public:
  struct Entry {
    std::uint32_t col;
    Integer value;
  };
  using Row = std::vector<Entry>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  Row& row(std::size_t i) { return rows_[i]; }
  std::size_t nonzeros() const;

  IntVector multiply(std::span<const Integer> v) const;
  SparseMatrix multiply(const SparseMatrix& b) const;
  bool is_zero() const { return nonzeros() == 0; }
  IntMatrix to_dense() const;
  static SparseMatrix from_dense(const IntMatrix& a);

 private:
  std::size_t cols_ = 0;
  std::vector<Row> rows_;
};

// Accumulates (row, col, value) triplets; duplicates are summed, zeros dropped.
class SparseBuilder {
 public:
  SparseBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void add(std::size_t row, std::size_t col, const Integer& value);
  void add(std::size_t row, std::size_t col, long value);
  SparseMatrix build();

 private:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Integer value;
  };
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> triplets_;
};

// Structure of coker(A) = Z^m / A Z^k together with the coordinate map on its
// torsion part.
//
// Unit pivots are eliminated first with a Markowitz-style choice (fewest
// column entries, then fewest row entries, then smallest index); each row
// operation is logged so that vectors can be pushed through U and back. The
// remaining block is handed to the dense Smith form.
class CokernelSolver {
 public:
  explicit CokernelSolver(SparseMatrix a);

  std::size_t ambient_rank() const { return rows_; }
  const AbelianPresentation& presentation() const { return presentation_; }
  const IntVector& torsion_orders() const { return presentation_.torsion; }

  // Coordinates of the class of y in the torsion part, reduced into
  // [0, order). Throws InternalError if y has a nonzero free component.
  IntVector torsion_coordinates(std::span<const Integer> y) const;

  // Returns true when y lies in the image of A.
  bool in_image(std::span<const Integer> y) const;

  // A vector of Z^m whose class generates the k-th torsion factor.
  IntVector torsion_generator(std::size_t k) const;

  std::size_t unit_pivots() const { return unit_pivots_; }
  std::size_t residual_rows() const { return residual_rows_.size(); }

 private:
  struct RowOp {
    std::uint32_t target;
    std::uint32_t pivot;
    Integer factor;  // y[target] -= factor * y[pivot]
  };

  IntVector transformed(std::span<const Integer> y) const;

  std::size_t rows_ = 0;
  std::vector<RowOp> ops_;
  std::size_t unit_pivots_ = 0;
  std::vector<std::uint32_t> residual_rows_;  // rows entering the dense stage
  std::vector<std::uint32_t> free_rows_;      // rows with no surviving entries
  SmithForm residual_;
  std::vector<std::size_t> torsion_index_;    // diagonal positions with d > 1
  AbelianPresentation presentation_;
};

}  // namespace tori
