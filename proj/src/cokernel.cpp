#include "tori/cokernel.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "tori/error.hpp"

namespace tori {

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

IntVector SparseMatrix::multiply(std::span<const Integer> v) const {
  if (v.size() != cols_) throw InvalidInput("sparse product dimension mismatch");
  IntVector out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i])
      if (sgn(v[e.col]) != 0) mpz_addmul(out[i].get_mpz_t(), e.value.get_mpz_t(), v[e.col].get_mpz_t());
  return out;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& b) const {
  if (cols_ != b.rows()) throw InvalidInput("sparse product dimension mismatch");
  SparseBuilder builder(rows(), b.cols());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i])
      for (const auto& f : b.row(e.col)) builder.add(i, f.col, Integer(e.value * f.value));
  return builder.build();
}

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix a(rows(), cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i]) a(i, e.col) = e.value;
  return a;
}

SparseMatrix SparseMatrix::from_dense(const IntMatrix& a) {
  SparseMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) != 0) s.rows_[i].push_back({static_cast<std::uint32_t>(j), a(i, j)});
  return s;
}

void SparseBuilder::add(std::size_t row, std::size_t col, const Integer& value) {
  if (sgn(value) == 0) return;
  if (row >= rows_ || col >= cols_) throw InvalidInput("sparse entry out of range");
  triplets_.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), value});
}

void SparseBuilder::add(std::size_t row, std::size_t col, long value) {
  if (value != 0) add(row, col, Integer(value));
}

SparseMatrix SparseBuilder::build() {
  std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows_, cols_);
  for (auto& t : triplets_) {
    auto& r = m.row(t.row);
    if (!r.empty() && r.back().col == t.col) {
      r.back().value += t.value;
      if (sgn(r.back().value) == 0) r.pop_back();
    } else {
      r.push_back({t.col, std::move(t.value)});
    }
  }
  triplets_.clear();
  return m;
}

// ---------------------------------------------------------------------------

namespace {

const Integer* find_entry(const SparseMatrix::Row& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const SparseMatrix::Entry& e, std::uint32_t c) { return e.col < c; });
  return it != row.end() && it->col == col ? &it->value : nullptr;
}

bool is_unit(const Integer& x) { return mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0; }

// row -= factor * prow
void subtract_row(SparseMatrix::Row& row, const SparseMatrix::Row& prow, const Integer& factor,
                  SparseMatrix::Row& merged) {
  merged.clear();
  merged.reserve(row.size() + prow.size());
  auto x = row.begin();
  auto y = prow.begin();
  while (x != row.end() || y != prow.end()) {
    if (y == prow.end() || (x != row.end() && x->col < y->col)) {
      merged.push_back(std::move(*x++));
    } else if (x == row.end() || y->col < x->col) {
      merged.push_back({y->col, Integer(-factor * y->value)});
      ++y;
    } else {
      mpz_submul(x->value.get_mpz_t(), factor.get_mpz_t(), y->value.get_mpz_t());
      if (sgn(x->value) != 0) merged.push_back(std::move(*x));
      ++x;
      ++y;
    }
  }
  row.swap(merged);
}

}  // namespace

CokernelSolver::CokernelSolver(SparseMatrix a) : rows_(a.rows()) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  if (m > std::numeric_limits<std::uint32_t>::max() || k > std::numeric_limits<std::uint32_t>::max())
    throw ResourceLimit("matrix too large for the cokernel solver");

  std::vector<char> row_active(m, 1), col_active(k, 1);
  std::vector<std::uint32_t> col_count(k, 0);
  std::vector<std::vector<std::uint32_t>> col_rows(k);
  for (std::uint32_t i = 0; i < m; ++i)
    for (const auto& e : a.row(i)) {
      ++col_count[e.col];
      col_rows[e.col].push_back(i);
    }

  using Key = std::pair<std::uint32_t, std::uint32_t>;  // (count, column)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::uint32_t c = 0; c < k; ++c)
    if (col_count[c] > 0) heap.push({col_count[c], c});
  auto touch = [&](std::uint32_t c) {
    if (col_active[c] && col_count[c] > 0) heap.push({col_count[c], c});
  };

  SparseMatrix::Row merged;
  std::vector<std::uint32_t> support;
  while (!heap.empty()) {
    auto [count, c] = heap.top();
    heap.pop();
    if (!col_active[c] || count != col_count[c]) continue;

    // Live support of column c; compact the candidate list as we go.
    support.clear();
    auto& cand = col_rows[c];
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (std::uint32_t r : cand)
      if (row_active[r] && find_entry(a.row(r), c)) support.push_back(r);
    cand = support;

    std::uint32_t pivot = std::numeric_limits<std::uint32_t>::max();
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t r : support) {
      if (!is_unit(*find_entry(a.row(r), c))) continue;
      if (a.row(r).size() < best_len) {
        best_len = a.row(r).size();
        pivot = r;
      }
    }
    if (pivot == std::numeric_limits<std::uint32_t>::max()) continue;  // revisited if the column changes

    const SparseMatrix::Row& prow = a.row(pivot);
    const Integer unit = *find_entry(prow, c);
    for (std::uint32_t r : support) {
      if (r == pivot) continue;
      auto& row = a.row(r);
      Integer factor = *find_entry(row, c) * unit;
      // row -= factor * prow, merged column by column
      merged.clear();
      merged.reserve(row.size() + prow.size());
      auto x = row.begin();
      auto y = prow.begin();
      while (x != row.end() || y != prow.end()) {
        if (y == prow.end() || (x != row.end() && x->col < y->col)) {
          merged.push_back(std::move(*x++));
        } else if (x == row.end() || y->col < x->col) {
          Integer v = -factor * y->value;
          merged.push_back({y->col, std::move(v)});
          ++col_count[y->col];
          col_rows[y->col].push_back(r);
          touch(y->col);
          ++y;
        } else {
          mpz_submul(x->value.get_mpz_t(), factor.get_mpz_t(), y->value.get_mpz_t());
          if (sgn(x->value) != 0) {
            merged.push_back(std::move(*x));
          } else {
            --col_count[x->col];
            touch(x->col);
          }
          ++x;
          ++y;
        }
      }
      row.swap(merged);
      ops_.push_back({r, pivot, std::move(factor)});
    }
    row_active[pivot] = 0;
    for (const auto& e : prow) {
      --col_count[e.col];
      touch(e.col);
    }
    col_active[c] = 0;
    ++unit_pivots_;
  }

  // What survives is typically tall and thin. Bring it to echelon form with
  // logged Euclid steps so that the dense stage sees at most one row per
  // column; a dense Smith form of the tall block would need U of size rows^2.
  std::vector<std::uint32_t> residual_cols;
  std::vector<std::uint32_t> col_pos(k, 0);
  for (std::uint32_t c = 0; c < k; ++c)
    if (col_active[c] && col_count[c] > 0) {
      col_pos[c] = static_cast<std::uint32_t>(residual_cols.size());
      residual_cols.push_back(c);
    }
  std::vector<std::uint32_t> open;
  for (std::uint32_t i = 0; i < m; ++i)
    if (row_active[i] && !a.row(i).empty()) open.push_back(i);
  std::vector<std::uint32_t> live;
  for (std::uint32_t c : residual_cols) {
    for (;;) {
      live.clear();
      for (std::uint32_t r : open)
        if (find_entry(a.row(r), c)) live.push_back(r);
      if (live.empty()) break;
      std::uint32_t pivot = live.front();
      for (std::uint32_t r : live) {
        int cmp = mpz_cmpabs(find_entry(a.row(r), c)->get_mpz_t(), find_entry(a.row(pivot), c)->get_mpz_t());
        if (cmp < 0 || (cmp == 0 && a.row(r).size() < a.row(pivot).size())) pivot = r;
      }
      if (live.size() == 1) {
        open.erase(std::find(open.begin(), open.end(), pivot));
        break;
      }
      const Integer pv = *find_entry(a.row(pivot), c);
      for (std::uint32_t r : live) {
        if (r == pivot) continue;
        Integer factor;
        mpz_tdiv_q(factor.get_mpz_t(), find_entry(a.row(r), c)->get_mpz_t(), pv.get_mpz_t());
        subtract_row(a.row(r), a.row(pivot), factor, merged);
        ops_.push_back({r, pivot, std::move(factor)});
      }
    }
  }

  // Dense stage on whatever survived.
  for (std::uint32_t i = 0; i < m; ++i) {
    if (!row_active[i]) continue;
    (a.row(i).empty() ? free_rows_ : residual_rows_).push_back(i);
  }
  IntMatrix dense(residual_rows_.size(), residual_cols.size());
  for (std::size_t t = 0; t < residual_rows_.size(); ++t)
    for (const auto& e : a.row(residual_rows_[t])) dense(t, col_pos[e.col]) = e.value;
  residual_ = snf(dense);

  presentation_.free_rank = free_rows_.size() + residual_rows_.size() - residual_.rank;
  for (std::size_t t = 0; t < residual_.rank; ++t)
    if (residual_.S(t, t) != 1) {
      torsion_index_.push_back(t);
      presentation_.torsion.push_back(residual_.S(t, t));
    }
}

IntVector CokernelSolver::transformed(std::span<const Integer> y) const {
  if (y.size() != rows_) throw InvalidInput("vector length does not match the cokernel ambient rank");
  IntVector z(y.begin(), y.end());
  for (const auto& op : ops_)
    if (sgn(z[op.pivot]) != 0) mpz_submul(z[op.target].get_mpz_t(), op.factor.get_mpz_t(), z[op.pivot].get_mpz_t());
  return z;
}

IntVector CokernelSolver::torsion_coordinates(std::span<const Integer> y) const {
  IntVector z = transformed(y);
  for (auto r : free_rows_)
    if (sgn(z[r]) != 0) throw InternalError("class has a nonzero free component");
  IntVector w(residual_rows_.size());
  for (std::size_t t = 0; t < residual_rows_.size(); ++t) w[t] = z[residual_rows_[t]];
  IntVector v = residual_.U * std::span<const Integer>(w);
  for (std::size_t t = residual_.rank; t < v.size(); ++t)
    if (sgn(v[t]) != 0) throw InternalError("class has a nonzero free component");
  IntVector coords;
  coords.reserve(torsion_index_.size());
  for (std::size_t idx = 0; idx < torsion_index_.size(); ++idx) {
    Integer c = v[torsion_index_[idx]];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), presentation_.torsion[idx].get_mpz_t());
    coords.push_back(std::move(c));
  }
  return coords;
}

bool CokernelSolver::in_image(std::span<const Integer> y) const {
  IntVector z = transformed(y);
  for (auto r : free_rows_)
    if (sgn(z[r]) != 0) return false;
  IntVector w(residual_rows_.size());
  for (std::size_t t = 0; t < residual_rows_.size(); ++t) w[t] = z[residual_rows_[t]];
  IntVector v = residual_.U * std::span<const Integer>(w);
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t < residual_.rank) {
      if (!mpz_divisible_p(v[t].get_mpz_t(), residual_.S(t, t).get_mpz_t())) return false;
    } else if (sgn(v[t]) != 0) {
      return false;
    }
  }
  return true;
}

IntVector CokernelSolver::torsion_generator(std::size_t k) const {
  if (k >= torsion_index_.size()) throw InvalidInput("torsion generator index out of range");
  IntVector z(rows_);
  const std::size_t col = torsion_index_[k];
  for (std::size_t t = 0; t < residual_rows_.size(); ++t) z[residual_rows_[t]] = residual_.U_inverse(t, col);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it)
    if (sgn(z[it->pivot]) != 0) mpz_addmul(z[it->target].get_mpz_t(), it->factor.get_mpz_t(), z[it->pivot].get_mpz_t());
  return z;
}

}  // namespace tori
