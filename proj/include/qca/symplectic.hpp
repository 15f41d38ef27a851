#pragma once

// Matrices over the Laurent ring and module vectors, the symplectic form
// Omega, pseudo-unitarity, exact determinants, powers, inverses of
// unit-determinant matrices, and the doubling construction that turns any
// invertible CA matrix into a pseudo-unitary one.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qca/fpoly.hpp"

namespace qca {

// Element of the free module R^k. For QCA matrices k = 2N and entries
// 0..N-1 are the X-parts, entries N..2N-1 the Z-parts of the unit cell.
class ModuleVector {
 public:
  ModuleVector() = default;
  explicit ModuleVector(std::vector<LaurentPoly> entries)
      : e_(std::move(entries)) {
    for (const auto& p : e_)
      if (p.dim() != e_.front().dim())
        throw std::invalid_argument("mixed variable counts in module vector");
  }
  static ModuleVector zero(int size, int dim) {
    return ModuleVector(std::vector<LaurentPoly>(static_cast<std::size_t>(size),
                                                 LaurentPoly::zero(dim)));
  }
  static ModuleVector unit(int size, int dim, int index) {
    ModuleVector q = zero(size, dim);
    q.e_[static_cast<std::size_t>(index)] = LaurentPoly::one(dim);
    return q;
  }

  int size() const { return static_cast<int>(e_.size()); }
  int dim() const { return e_.empty() ? 1 : e_.front().dim(); }
  const LaurentPoly& operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  LaurentPoly& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }
  const std::vector<LaurentPoly>& entries() const { return e_; }

  std::size_t total_weight() const {
    std::size_t w = 0;
    for (const auto& p : e_) w += p.weight();
    return w;
  }
  bool is_zero() const { return total_weight() == 0; }

  // u^k q
  ModuleVector shifted(const Exponent& k) const {
    std::vector<LaurentPoly> out;
    out.reserve(e_.size());
    for (const auto& p : e_) out.push_back(p.shifted(k));
    return ModuleVector(std::move(out));
  }

  bool operator==(const ModuleVector&) const = default;

 private:
  std::vector<LaurentPoly> e_;
};

class PolyMatrix {
 public:
  PolyMatrix() : size_(0), dim_(1) {}
  PolyMatrix(int size, int dim)
      : size_(size),
        dim_(dim),
        m_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size),
           LaurentPoly::zero(dim)) {
    if (size < 1) throw std::invalid_argument("matrix size must be >= 1");
  }
  static PolyMatrix identity(int size, int dim) {
    PolyMatrix m(size, dim);
    for (int i = 0; i < size; ++i) m.at(i, i) = LaurentPoly::one(dim);
    return m;
  }

  int size() const { return size_; }
  int dim() const { return dim_; }
  const LaurentPoly& at(int r, int c) const {
    return m_[static_cast<std::size_t>(r) * static_cast<std::size_t>(size_) +
              static_cast<std::size_t>(c)];
  }
  LaurentPoly& at(int r, int c) {
    return m_[static_cast<std::size_t>(r) * static_cast<std::size_t>(size_) +
              static_cast<std::size_t>(c)];
  }

  // max |exponent of variable var| over all entries; the per-step growth of
  // the propagation cone in that direction.
  Coord max_abs_degree(int var) const {
    Coord m = 0;
    for (const auto& p : m_) m = std::max(m, p.max_abs_degree(var));
    return m;
  }

  bool operator==(const PolyMatrix&) const = default;

 private:
  int size_;
  int dim_;
  std::vector<LaurentPoly> m_;  // row-major
};

inline ModuleVector mat_apply(const PolyMatrix& m, const ModuleVector& q) {
  if (m.size() != q.size())
    throw std::invalid_argument("matrix/vector size mismatch");
  std::vector<LaurentPoly> out(static_cast<std::size_t>(m.size()),
                               LaurentPoly::zero(m.dim()));
  for (int r = 0; r < m.size(); ++r)
    for (int c = 0; c < m.size(); ++c) {
      if (m.at(r, c).is_zero() || q[c].is_zero()) continue;
      out[static_cast<std::size_t>(r)] =
          out[static_cast<std::size_t>(r)] + m.at(r, c) * q[c];
    }
  return ModuleVector(std::move(out));
}

inline PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("matrix size mismatch");
  PolyMatrix r(a.size(), a.dim());
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k < a.size(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < a.size(); ++j) {
        if (b.at(k, j).is_zero()) continue;
        r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
      }
    }
  return r;
}

inline PolyMatrix mat_pow(const PolyMatrix& a, long n) {
  if (n < 0) throw std::invalid_argument("matrix power must be >= 0");
  PolyMatrix result = PolyMatrix::identity(a.size(), a.dim());
  PolyMatrix base = a;
  while (n > 0) {
    if (n & 1) result = mat_mul(result, base);
    n >>= 1;
    if (n > 0) base = mat_mul(base, base);
  }
  return result;
}

inline PolyMatrix transpose(const PolyMatrix& m) {
  PolyMatrix r(m.size(), m.dim());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r.at(j, i) = m.at(i, j);
  return r;
}

inline PolyMatrix involute(const PolyMatrix& m) {
  PolyMatrix r(m.size(), m.dim());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r.at(i, j) = m.at(i, j).involute();
  return r;
}

inline PolyMatrix mat_add(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("matrix size mismatch");
  PolyMatrix r(a.size(), a.dim());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
  return r;
}

namespace detail {

// Cofactor expansion over the active row/column sets, expanding along the
// line with the fewest nonzero entries and, on ties, the smallest total term
// count. Signs do not exist in characteristic 2.
inline LaurentPoly det_rec(const PolyMatrix& m, std::vector<int> rows,
                           std::vector<int> cols) {
  const std::size_t n = rows.size();
  if (n == 1) return m.at(rows[0], cols[0]);
  if (n == 2)
    return m.at(rows[0], cols[0]) * m.at(rows[1], cols[1]) +
           m.at(rows[0], cols[1]) * m.at(rows[1], cols[0]);

  auto line_score = [&](bool is_row, std::size_t idx) {
    std::size_t nonzero = 0, terms = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const LaurentPoly& p = is_row ? m.at(rows[idx], cols[k])
                                    : m.at(rows[k], cols[idx]);
      if (!p.is_zero()) {
        ++nonzero;
        terms += p.weight();
      }
    }
    return std::make_pair(nonzero, terms);
  };

  bool best_is_row = true;
  std::size_t best_idx = 0;
  auto best = line_score(true, 0);
  for (std::size_t i = 1; i < n; ++i) {
    auto s = line_score(true, i);
    if (s < best) { best = s; best_is_row = true; best_idx = i; }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto s = line_score(false, i);
    if (s < best) { best = s; best_is_row = false; best_idx = i; }
  }
  if (best.first == 0) return LaurentPoly::zero(m.dim());

  LaurentPoly acc = LaurentPoly::zero(m.dim());
  for (std::size_t k = 0; k < n; ++k) {
    const LaurentPoly& pivot = best_is_row ? m.at(rows[best_idx], cols[k])
                                           : m.at(rows[k], cols[best_idx]);
    if (pivot.is_zero()) continue;
    std::vector<int> sub_rows, sub_cols;
    sub_rows.reserve(n - 1);
    sub_cols.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (best_is_row ? i != best_idx : i != k) sub_rows.push_back(rows[i]);
      if (best_is_row ? i != k : i != best_idx) sub_cols.push_back(cols[i]);
    }
    acc = acc + pivot * det_rec(m, std::move(sub_rows), std::move(sub_cols));
  }
  return acc;
}

}  // namespace detail

inline LaurentPoly determinant(const PolyMatrix& m) {
  std::vector<int> rows(static_cast<std::size_t>(m.size()));
  std::vector<int> cols(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < m.size(); ++i) rows[static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(i)] = i;
  return detail::det_rec(m, std::move(rows), std::move(cols));
}

// The 2N x 2N block-antidiagonal form matrix [[0, 1_N], [1_N, 0]].
inline PolyMatrix omega_matrix(int size, int dim) {
  if (size % 2 != 0)
    throw std::invalid_argument("symplectic form needs even size");
  PolyMatrix w(size, dim);
  const int n = size / 2;
  for (int i = 0; i < n; ++i) {
    w.at(i, n + i) = LaurentPoly::one(dim);
    w.at(n + i, i) = LaurentPoly::one(dim);
  }
  return w;
}

// Omega(q, q') = sum_{a,b} omega^{ab} qbar_a q'_b. R-linear in the second
// argument, involuted-linear in the first.
inline LaurentPoly omega_form(const ModuleVector& q, const ModuleVector& qp) {
  if (q.size() != qp.size())
    throw std::invalid_argument("vector size mismatch");
  if (q.size() % 2 != 0)
    throw std::invalid_argument("symplectic form needs even size");
  const int n = q.size() / 2;
  LaurentPoly acc = LaurentPoly::zero(q.dim());
  for (int i = 0; i < n; ++i) {
    acc = acc + q[i].involute() * qp[n + i];
    acc = acc + q[n + i].involute() * qp[i];
  }
  return acc;
}

// True iff involute-transpose(M) . omega . M = omega entrywise.
inline bool is_pseudo_unitary(const PolyMatrix& m) {
  if (m.size() % 2 != 0) return false;
  PolyMatrix omega = omega_matrix(m.size(), m.dim());
  PolyMatrix herm = involute(transpose(m));
  return mat_mul(mat_mul(herm, omega), m) == omega;
}

// Inverse of a matrix whose determinant is a unit of R (a single monomial
// u^k): adjugate scaled by u^{-k}.
inline PolyMatrix mat_inverse_unit(const PolyMatrix& m) {
  LaurentPoly det = determinant(m);
  if (!det.is_monomial())
    throw std::domain_error("matrix is not invertible over R: det = " +
                            format_poly(det));
  const Exponent scale = -det.term(0);
  const int n = m.size();
  PolyMatrix inv(n, m.dim());
  if (n == 1) {
    inv.at(0, 0) = LaurentPoly::monomial(scale);
    return inv;
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      std::vector<int> rows, cols;
      for (int i = 0; i < n; ++i) {
        if (i != r) rows.push_back(i);
        if (i != c) cols.push_back(i);
      }
      // adjugate: transposed cofactors, no signs in characteristic 2
      inv.at(c, r) = detail::det_rec(m, std::move(rows), std::move(cols)).shifted(scale);
    }
  return inv;
}

// blockdiag(A(u), (A(u^-1)^T)^-1): pseudo-unitary whenever A is invertible
// over R.
inline PolyMatrix doubled(const PolyMatrix& a) {
  PolyMatrix b = mat_inverse_unit(transpose(involute(a)));
  const int k = a.size();
  PolyMatrix out(2 * k, a.dim());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      out.at(i, j) = a.at(i, j);
      out.at(k + i, k + j) = b.at(i, j);
    }
  return out;
}

}  // namespace qca
