#include "tori/intlinalg.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

#include "tori/error.hpp"

namespace tori {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw InvalidInput("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::column_range(std::size_t first, std::size_t count) const {
  IntMatrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
  return m;
}

IntMatrix IntMatrix::row_range(std::size_t first, std::size_t count) const {
  IntMatrix m(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (sgn(factor) == 0) return;
  Integer* d = data_.data() + dst * cols_;
  const Integer* s = data_.data() + src * cols_;
  for (std::size_t j = 0; j < cols_; ++j)
    if (sgn(s[j]) != 0) mpz_addmul(d[j].get_mpz_t(), factor.get_mpz_t(), s[j].get_mpz_t());
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (sgn(factor) == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) {
    const Integer& s = (*this)(i, src);
    if (sgn(s) != 0) mpz_addmul((*this)(i, dst).get_mpz_t(), factor.get_mpz_t(), s.get_mpz_t());
  }
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t j = 0; j < cols_; ++j) mpz_neg((*this)(i, j).get_mpz_t(), (*this)(i, j).get_mpz_t());
}

void IntMatrix::negate_col(std::size_t j) {
  for (std::size_t i = 0; i < rows_; ++i) mpz_neg((*this)(i, j).get_mpz_t(), (*this)(i, j).get_mpz_t());
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product dimension mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0) mpz_addmul(c(i, j).get_mpz_t(), x.get_mpz_t(), b(k, j).get_mpz_t());
    }
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("matrix difference dimension mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

IntVector operator*(const IntMatrix& a, std::span<const Integer> v) {
  if (a.cols() != v.size()) throw InvalidInput("matrix-vector dimension mismatch");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) != 0 && sgn(v[j]) != 0)
        mpz_addmul(out[i].get_mpz_t(), a(i, j).get_mpz_t(), v[j].get_mpz_t());
  return out;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("hstack row mismatch");
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidInput("vstack column mismatch");
  IntMatrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// Tracks U and U^{-1} alongside the row operations applied to the work matrix.
struct SmithState {
  IntMatrix a;
  IntMatrix u;
  IntMatrix u_inv;
  IntMatrix v;

  void swap_rows(std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    u.swap_rows(i, j);
    u_inv.swap_cols(i, j);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    v.swap_cols(i, j);
  }
  // row_dst += f * row_src
  void add_row(std::size_t dst, std::size_t src, const Integer& f) {
    a.add_row_multiple(dst, src, f);
    u.add_row_multiple(dst, src, f);
    u_inv.add_col_multiple(src, dst, -f);
  }
  // col_dst += f * col_src
  void add_col(std::size_t dst, std::size_t src, const Integer& f) {
    a.add_col_multiple(dst, src, f);
    v.add_col_multiple(dst, src, f);
  }
  void negate_row(std::size_t i) {
    a.negate_row(i);
    u.negate_row(i);
    u_inv.negate_col(i);
  }
};

// Nonzero entry of minimal absolute value in the trailing block; ties go to
// the smallest row, then the smallest column.
std::optional<std::pair<std::size_t, std::size_t>> min_pivot(const IntMatrix& a, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  const Integer* best_value = nullptr;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      const Integer& x = a(i, j);
      if (sgn(x) == 0) continue;
      if (!best || cmpabs(x, *best_value) < 0) {
        best = {i, j};
        best_value = &x;
        if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0) return best;
      }
    }
  return best;
}

}  // namespace

IntVector SmithForm::invariant_factors() const {
  IntVector d(rank);
  for (std::size_t i = 0; i < rank; ++i) d[i] = S(i, i);
  return d;
}

SmithForm snf(const IntMatrix& input) {
  const std::size_t m = input.rows();
  const std::size_t n = input.cols();
  SmithState st{input, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n)};
  IntMatrix& a = st.a;
  Integer q;

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    auto piv = min_pivot(a, t);
    if (!piv) break;
    st.swap_rows(t, piv->first);
    st.swap_cols(t, piv->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(a(i, t)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        st.add_row(i, t, -q);
        if (sgn(a(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(a(t, j)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        st.add_col(j, t, -q);
        if (sgn(a(t, j)) != 0) clean = false;
      }
      if (!clean) {
        // A remainder smaller than the pivot survived; promote the smallest one.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(a(i, t)) != 0 && cmpabs(a(i, t), a(bi, bj)) < 0) bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(a(t, j)) != 0 && cmpabs(a(t, j), a(bi, bj)) < 0) bi = t, bj = j;
        st.swap_rows(t, bi);
        st.swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility into the trailing block.
      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < m && !offending; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(a(i, j)) != 0 && !mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            offending = i;
            break;
          }
      if (!offending) break;
      st.add_row(t, *offending, Integer(1));
    }
    if (sgn(a(t, t)) < 0) st.negate_row(t);
  }
  return SmithForm{std::move(st.a), std::move(st.u), std::move(st.v), std::move(st.u_inv), t};
}

std::size_t rank(const IntMatrix& a) { return snf(a).rank; }

Integer determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw InvalidInput("determinant of a non-square matrix");
  // Bareiss fraction-free elimination.
  IntMatrix a = input;
  const std::size_t n = a.rows();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j));
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return n == 0 ? Integer(1) : Integer(sign * a(n - 1, n - 1));
}

// ---------------------------------------------------------------------------
// Hermite normal form and kernels

IntMatrix hermite_normal_form(const IntMatrix& input) {
  IntMatrix h = input;
  const std::size_t m = h.rows();
  const std::size_t n = h.cols();
  std::size_t pr = 0;
  Integer g, s, t, qa, qb, tmp;
  for (std::size_t c = 0; c < n && pr < m; ++c) {
    for (std::size_t i = pr + 1; i < m; ++i) {
      if (sgn(h(i, c)) == 0) continue;
      if (sgn(h(pr, c)) == 0) {
        h.swap_rows(pr, i);
        continue;
      }
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(pr, c).get_mpz_t(), h(i, c).get_mpz_t());
      mpz_divexact(qa.get_mpz_t(), h(pr, c).get_mpz_t(), g.get_mpz_t());
      mpz_divexact(qb.get_mpz_t(), h(i, c).get_mpz_t(), g.get_mpz_t());
      // [s t; -qb qa] has determinant s*qa + t*qb = 1.
      for (std::size_t j = c; j < n; ++j) {
        tmp = s * h(pr, j) + t * h(i, j);
        h(i, j) = qa * h(i, j) - qb * h(pr, j);
        h(pr, j) = tmp;
      }
    }
    if (sgn(h(pr, c)) == 0) continue;
    if (sgn(h(pr, c)) < 0) h.negate_row(pr);
    for (std::size_t i = 0; i < pr; ++i) {
      if (sgn(h(i, c)) == 0) continue;
      mpz_fdiv_q(tmp.get_mpz_t(), h(i, c).get_mpz_t(), h(pr, c).get_mpz_t());
      h.add_row_multiple(i, pr, -tmp);
    }
    ++pr;
  }
  return h;
}

IntMatrix kernel_basis(const IntMatrix& a) {
  SmithForm f = snf(a);
  const std::size_t n = a.cols();
  const std::size_t dim = n - f.rank;
  if (dim == 0) return IntMatrix(n, 0);
  IntMatrix k = f.V.column_range(f.rank, dim);
  return hermite_normal_form(k.transpose()).transpose();
}

// ---------------------------------------------------------------------------
// Abelian presentations

Integer AbelianPresentation::order() const {
  if (free_rank != 0) throw InvalidInput("order of an infinite abelian group");
  Integer o = 1;
  for (const auto& t : torsion) o *= t;
  return o;
}

std::string AbelianPresentation::to_string() const {
  if (is_trivial()) return "0";
  std::string out;
  if (free_rank > 0) out = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
  for (const auto& t : torsion) {
    if (!out.empty()) out += " x ";
    out += "Z/" + t.get_str();
  }
  return out;
}

AbelianPresentation presentation_from_factors(std::size_t ambient_rank,
                                              const IntVector& invariant_factors) {
  AbelianPresentation p;
  p.free_rank = ambient_rank - invariant_factors.size();
  for (const auto& d : invariant_factors) {
    if (d == 0) ++p.free_rank;
    else if (d != 1) p.torsion.push_back(abs(d));
  }
  return p;
}

AbelianPresentation quotient_presentation(std::size_t ambient_rank, const IntMatrix& sub_basis) {
  if (sub_basis.cols() == 0) return AbelianPresentation{ambient_rank, {}};
  if (sub_basis.rows() != ambient_rank) throw InvalidInput("sub_basis has the wrong number of rows");
  return presentation_from_factors(ambient_rank, snf(sub_basis).invariant_factors());
}

IntMatrix image_in_kernel_coordinates(const IntMatrix& b, const IntMatrix& k) {
  if (b.rows() != k.rows()) throw InvalidInput("image and kernel live in different ambient spaces");
  const std::size_t kappa = k.cols();
  if (kappa == 0) {
    if (!b.is_zero()) throw InternalError("vector outside the (zero) kernel span");
    return IntMatrix(0, b.cols());
  }
  SmithForm f = snf(k);
  IntMatrix y = f.U * b;
  IntMatrix w(kappa, b.cols());
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      if (i < f.rank) {
        const Integer& d = f.S(i, i);
        if (!mpz_divisible_p(y(i, j).get_mpz_t(), d.get_mpz_t()))
          throw InternalError("vector not in the integer span of the kernel basis");
        mpz_divexact(w(i, j).get_mpz_t(), y(i, j).get_mpz_t(), d.get_mpz_t());
      } else if (sgn(y(i, j)) != 0) {
        throw InternalError("vector not in the rational span of the kernel basis");
      }
    }
  return f.V * w;
}

void reduce_coordinates(IntVector& coords, const IntVector& orders) {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (sgn(orders[i]) > 0) mpz_fdiv_r(coords[i].get_mpz_t(), coords[i].get_mpz_t(), orders[i].get_mpz_t());
}

FiniteSubgroup finite_kernel(const IntVector& source_orders, const IntVector& target_orders,
                             const IntMatrix& images) {
  const std::size_t s = source_orders.size();
  const std::size_t t = target_orders.size();
  if (images.rows() != t || images.cols() != s) throw InvalidInput("finite_kernel: image matrix shape");
  if (s == 0) return {};

  // {(c, y) : images * c + diag(target) * y = 0}, projected onto c.
  IntMatrix aug(t, s + t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < s; ++j) aug(i, j) = images(i, j);
    aug(i, s + i) = target_orders[i];
  }
  IntMatrix kb = kernel_basis(aug);
  IntMatrix gens(s, kb.cols());
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < kb.cols(); ++j) gens(i, j) = kb(i, j);

  // Lattice basis of the projection: nonzero rows of the HNF of its transpose.
  IntMatrix h = hermite_normal_form(gens.transpose());
  std::size_t r = 0;
  while (r < h.rows() && !std::all_of(h.row(r).begin(), h.row(r).end(), [](const Integer& x) { return sgn(x) == 0; }))
    ++r;
  IntMatrix lattice = h.row_range(0, r).transpose();  // s x r
  if (r != s) throw InternalError("finite_kernel: kernel lattice is not of full rank");

  IntMatrix relations(s, s);
  for (std::size_t i = 0; i < s; ++i) relations(i, i) = source_orders[i];
  IntMatrix coords = image_in_kernel_coordinates(relations, lattice);
  SmithForm f = snf(coords);

  FiniteSubgroup out;
  out.presentation = presentation_from_factors(s, f.invariant_factors());
  for (std::size_t i = 0; i < f.rank; ++i) {
    if (f.S(i, i) == 1) continue;
    IntVector g = lattice * std::span<const Integer>(f.U_inverse.column(i));
    reduce_coordinates(g, source_orders);
    out.generators.push_back(std::move(g));
  }
  return out;
}

}  // namespace tori
