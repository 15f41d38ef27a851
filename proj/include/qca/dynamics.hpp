#pragma once

// Orbit iteration and the decision procedures: weight/support trajectories,
// the determinant mixing test, soliton search with verified witnesses, the
// exact classifier for the 2x2 palindromic family, and a brute-force oracle
// that rechecks the soliton search on small windows.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qca/parallel.hpp"
#include "qca/symplectic.hpp"

namespace qca {

struct TrajectorySample {
  long n;
  std::size_t hamming;  // total term count of L^n q
  std::size_t support;  // distinct lattice sites touched by L^n q
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

// Number of distinct exponents appearing in any entry.
inline std::size_t support_size(const ModuleVector& q) {
  const int d = q.dim();
  std::vector<Coord> flat;
  flat.reserve(q.total_weight() * static_cast<std::size_t>(d));
  for (const auto& p : q.entries())
    flat.insert(flat.end(), p.flat().begin(), p.flat().end());
  if (flat.empty()) return 0;
  std::vector<std::size_t> idx(flat.size() / static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        flat.begin() + static_cast<long>(a) * d, flat.begin() + static_cast<long>(a + 1) * d,
        flat.begin() + static_cast<long>(b) * d, flat.begin() + static_cast<long>(b + 1) * d);
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t count = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (less(idx[i - 1], idx[i])) ++count;
  return count;
}

// Samples (n, |L^n q|, support) for n = 0..steps by iterating mat_apply on
// the vector; matrix powers grow much faster than a single orbit.
inline Trajectory weight_trajectory(const PolyMatrix& l, const ModuleVector& q0,
                                    long steps) {
  if (q0.is_zero())
    throw std::invalid_argument("trajectory needs a nonzero initial vector");
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  Trajectory t;
  t.samples.reserve(static_cast<std::size_t>(steps) + 1);
  ModuleVector q = q0;
  for (long n = 0; n <= steps; ++n) {
    t.samples.push_back({n, q.total_weight(), support_size(q)});
    if (n < steps) q = mat_apply(l, q);
  }
  return t;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "n,hamming,support\n";
  for (const auto& s : t.samples)
    os << s.n << ',' << s.hamming << ',' << s.support << '\n';
}

struct MixingReport {
  long horizon;
  std::optional<long> periodic_n;  // first n with det(L^n - 1) = 0
  bool mixing_up_to_horizon() const { return !periodic_n.has_value(); }
};

// Theorem-level criterion: L is mixing iff det(L^n - 1) != 0 for all n > 0.
// Exact refuter, horizon-bounded confirmer.
inline MixingReport mixing_test(const PolyMatrix& l, long n_max) {
  if (n_max < 1) throw std::invalid_argument("horizon must be >= 1");
  const PolyMatrix id = PolyMatrix::identity(l.size(), l.dim());
  PolyMatrix ln = id;
  for (long n = 1; n <= n_max; ++n) {
    ln = mat_mul(ln, l);
    if (determinant(mat_add(ln, id)).is_zero()) return {n_max, n};
  }
  return {n_max, std::nullopt};
}

struct SolitonWitness {
  long n;         // period
  Exponent k;     // translation
  ModuleVector q;  // nonzero, satisfies L^n q = u^k q

  // Witnesses are only built through this check so that the defining
  // equation is re-verified with exact arithmetic.
  static SolitonWitness checked(const PolyMatrix& l, long n, Exponent k,
                                ModuleVector q) {
    if (q.is_zero()) throw std::invalid_argument("soliton witness must be nonzero");
    ModuleVector lhs = q;
    for (long i = 0; i < n; ++i) lhs = mat_apply(l, lhs);
    if (lhs != q.shifted(k))
      throw std::invalid_argument("soliton witness fails L^n q = u^k q");
    return SolitonWitness{n, std::move(k), std::move(q)};
  }
};

namespace detail {

// Search order over candidate translations: |k| ascending lexicographically,
// positive component before negative on ties. For one variable this is
// 0, 1, -1, 2, -2, ...
inline bool exponent_key_less(const Exponent& a, const Exponent& b) {
  for (int i = 0; i < a.dim(); ++i) {
    Coord aa = a[i] < 0 ? -a[i] : a[i];
    Coord ab = b[i] < 0 ? -b[i] : b[i];
    if (aa != ab) return aa < ab;
  }
  for (int i = 0; i < a.dim(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

// All exponents in the box |k_i| <= bound_i, sorted by the search order.
inline std::vector<Exponent> exponent_box(const std::vector<Coord>& bounds) {
  std::vector<Exponent> out;
  std::vector<Coord> cur(bounds.size());
  std::size_t total = 1;
  for (Coord b : bounds) total *= static_cast<std::size_t>(2 * b + 1);
  out.reserve(total);
  for (std::size_t flatidx = 0; flatidx < total; ++flatidx) {
    std::size_t rest = flatidx;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      std::size_t radix = static_cast<std::size_t>(2 * bounds[i] + 1);
      cur[i] = static_cast<Coord>(rest % radix) - bounds[i];
      rest /= radix;
    }
    out.push_back(Exponent(cur));
  }
  std::sort(out.begin(), out.end(), exponent_key_less);
  return out;
}

// Dense F2 matrix with bit-packed rows; kernel_basis returns one vector per
// free column of the reduced system, in column order.
class F2Matrix {
 public:
  F2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64),
        bits_(rows * words_, 0) {}

  void flip(std::size_t r, std::size_t c) {
    bits_[r * words_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
  }
  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + (c >> 6)] >> (c & 63)) & 1;
  }

  std::vector<std::vector<std::uint8_t>> kernel_basis() const {
    std::vector<std::uint64_t> work = bits_;
    auto row = [&](std::size_t r) { return work.data() + r * words_; };
    std::vector<std::size_t> pivot_row_of_col(cols_, SIZE_MAX);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
      std::size_t piv = SIZE_MAX;
      for (std::size_t r = rank; r < rows_; ++r)
        if ((row(r)[c >> 6] >> (c & 63)) & 1) { piv = r; break; }
      if (piv == SIZE_MAX) continue;
      if (piv != rank)
        for (std::size_t w = 0; w < words_; ++w)
          std::swap(row(piv)[w], row(rank)[w]);
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == rank) continue;
        if ((row(r)[c >> 6] >> (c & 63)) & 1)
          for (std::size_t w = 0; w < words_; ++w) row(r)[w] ^= row(rank)[w];
      }
      pivot_row_of_col[c] = rank;
      ++rank;
    }
    std::vector<std::vector<std::uint8_t>> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (pivot_row_of_col[f] != SIZE_MAX) continue;
      std::vector<std::uint8_t> v(cols_, 0);
      v[f] = 1;
      for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t pr = pivot_row_of_col[c];
        if (pr != SIZE_MAX && ((row(pr)[f >> 6] >> (f & 63)) & 1)) v[c] = 1;
      }
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  std::size_t rows_, cols_, words_;
  std::vector<std::uint64_t> bits_;
};

// Canonical choice among candidate witnesses: fewest terms, then earliest
// (entry, exponent) term list under the search order.
inline bool witness_vector_less(const ModuleVector& a, const ModuleVector& b) {
  if (a.total_weight() != b.total_weight())
    return a.total_weight() < b.total_weight();
  auto key = [](const ModuleVector& v) {
    std::vector<std::pair<int, Exponent>> items;
    for (int e = 0; e < v.size(); ++e) {
      auto terms = v[e].terms();
      std::sort(terms.begin(), terms.end(), exponent_key_less);
      for (auto& t : terms) items.emplace_back(e, std::move(t));
    }
    return items;
  };
  auto ka = key(a), kb = key(b);
  for (std::size_t i = 0; i < std::min(ka.size(), kb.size()); ++i) {
    if (ka[i].first != kb[i].first) return ka[i].first < kb[i].first;
    if (ka[i].second != kb[i].second)
      return exponent_key_less(ka[i].second, kb[i].second);
  }
  return ka.size() < kb.size();
}

// Nonzero solutions of A q = 0 with every entry of q supported on the
// exponent box |e_i| <= window, as an F2 linear system. Returns candidates
// mapped back to module vectors (unverified).
inline std::vector<ModuleVector> kernel_window_candidates(const PolyMatrix& a,
                                                          Coord window,
                                                          std::size_t cost_cap) {
  const int d = a.dim();
  const int size = a.size();
  std::vector<Exponent> win = exponent_box(std::vector<Coord>(static_cast<std::size_t>(d), window));
  const std::size_t nvars = win.size() * static_cast<std::size_t>(size);
  if (nvars > cost_cap)
    throw cost_error("kernel window too large: " + std::to_string(nvars) +
                     " unknowns exceeds cap " + std::to_string(cost_cap));

  // Equations are indexed by (output row, output exponent); collect the
  // output exponent range first.
  Coord reach = window;
  for (int v = 0; v < d; ++v) reach = std::max(reach, window + a.max_abs_degree(v));
  std::vector<Exponent> eq_box = exponent_box(std::vector<Coord>(static_cast<std::size_t>(d), reach));
  std::sort(eq_box.begin(), eq_box.end());
  auto eq_index = [&](const Exponent& e) -> std::size_t {
    auto it = std::lower_bound(eq_box.begin(), eq_box.end(), e);
    return static_cast<std::size_t>(it - eq_box.begin());
  };

  F2Matrix sys(eq_box.size() * static_cast<std::size_t>(size), nvars);
  for (int row = 0; row < size; ++row)
    for (int col = 0; col < size; ++col) {
      const LaurentPoly& p = a.at(row, col);
      for (std::size_t t = 0; t < p.weight(); ++t) {
        Exponent shift = p.term(t);
        for (std::size_t v = 0; v < win.size(); ++v) {
          Exponent out = win[v] + shift;
          std::size_t eq = static_cast<std::size_t>(row) * eq_box.size() + eq_index(out);
          std::size_t var = static_cast<std::size_t>(col) * win.size() + v;
          sys.flip(eq, var);
        }
      }
    }

  std::vector<ModuleVector> out;
  for (const auto& kv : sys.kernel_basis()) {
    std::vector<LaurentPoly> entries;
    for (int col = 0; col < size; ++col) {
      std::vector<Exponent> terms;
      for (std::size_t v = 0; v < win.size(); ++v)
        if (kv[static_cast<std::size_t>(col) * win.size() + v]) terms.push_back(win[v]);
      entries.push_back(LaurentPoly::from_terms(d, terms));
    }
    ModuleVector q(std::move(entries));
    if (!q.is_zero()) out.push_back(std::move(q));
  }
  return out;
}

inline std::optional<ModuleVector> extract_from_power(
    const PolyMatrix& ln, const Exponent& k, Coord window,
    std::size_t cost_cap = 1 << 16) {
  PolyMatrix a = ln;
  const LaurentPoly uk = LaurentPoly::monomial(k);
  for (int i = 0; i < a.size(); ++i) a.at(i, i) = a.at(i, i) + uk;
  std::vector<ModuleVector> candidates = kernel_window_candidates(a, window, cost_cap);
  std::optional<ModuleVector> best;
  for (auto& q : candidates) {
    ModuleVector lhs = mat_apply(ln, q);
    if (lhs != q.shifted(k)) continue;
    if (!best || witness_vector_less(q, *best)) best = std::move(q);
  }
  return best;
}

}  // namespace detail

// Kernel vector of L^n - u^k over a finite coefficient window. Returns the
// canonical minimal solution, or nullopt when the window holds none (the
// caller retries with a larger window).
inline std::optional<ModuleVector> witness_extract(const PolyMatrix& l, long n,
                                                   const Exponent& k,
                                                   Coord window) {
  return detail::extract_from_power(mat_pow(l, n), k, window);
}

// Scans n = 1..n_max and all translations k inside the propagation cone
// |k_i| <= n * D_i (D_i = max |exponent of variable i| over entries of L).
// Returns the verified witness at the smallest (n, then |k| in search
// order), or nullopt when the horizon holds none.
inline std::optional<SolitonWitness> soliton_search(const PolyMatrix& l,
                                                    long n_max,
                                                    Coord window_start = 4) {
  if (n_max < 1) throw std::invalid_argument("horizon must be >= 1");
  if (window_start < 1) throw std::invalid_argument("window must be >= 1");
  const int d = l.dim();
  std::vector<Coord> degs(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) degs[static_cast<std::size_t>(v)] = l.max_abs_degree(v);

  PolyMatrix ln = PolyMatrix::identity(l.size(), l.dim());
  for (long n = 1; n <= n_max; ++n) {
    ln = mat_mul(ln, l);
    std::vector<Coord> bounds(static_cast<std::size_t>(d));
    for (int v = 0; v < d; ++v)
      bounds[static_cast<std::size_t>(v)] = checked_mul(n, degs[static_cast<std::size_t>(v)]);
    std::vector<Exponent> ks = detail::exponent_box(bounds);

    // Determinant checks over the k grid are independent; fill a result
    // slot per k and pick the first hit in search order afterwards.
    std::vector<std::uint8_t> hit(ks.size(), 0);
    parallel_for(ks.size(), [&](std::size_t i) {
      PolyMatrix a = ln;
      const LaurentPoly uk = LaurentPoly::monomial(ks[i]);
      for (int r = 0; r < a.size(); ++r) a.at(r, r) = a.at(r, r) + uk;
      hit[i] = determinant(a).is_zero() ? 1 : 0;
    });
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (!hit[i]) continue;
      // det(L^n - u^k) = 0 guarantees a kernel vector in some finite
      // window; escalate until it shows up.
      for (Coord window = window_start; window <= 512; window *= 2) {
        auto q = detail::extract_from_power(ln, ks[i], window);
        if (q) return SolitonWitness::checked(l, n, ks[i], std::move(*q));
      }
      throw cost_error("soliton witness extraction exceeded the window cap");
    }
  }
  return std::nullopt;
}

// Independent recheck of soliton_search: solves the windowed kernel for
// every (n, k) in the cone directly (no determinants) and verifies
// L^n q = u^k q on each candidate.
inline std::optional<SolitonWitness> brute_force_soliton_oracle(
    const PolyMatrix& l, long n_max, Coord support_bound) {
  if (n_max < 1) throw std::invalid_argument("horizon must be >= 1");
  const int d = l.dim();
  std::size_t win_size = 1;
  for (int v = 0; v < d; ++v)
    win_size *= static_cast<std::size_t>(2 * support_bound + 1);
  if (win_size * static_cast<std::size_t>(l.size()) > 4096)
    throw cost_error("oracle window too large");

  PolyMatrix ln = PolyMatrix::identity(l.size(), l.dim());
  for (long n = 1; n <= n_max; ++n) {
    ln = mat_mul(ln, l);
    std::vector<Coord> bounds(static_cast<std::size_t>(d));
    for (int v = 0; v < d; ++v)
      bounds[static_cast<std::size_t>(v)] = checked_mul(n, l.max_abs_degree(v));
    for (const Exponent& k : detail::exponent_box(bounds)) {
      PolyMatrix a = ln;
      const LaurentPoly uk = LaurentPoly::monomial(k);
      for (int r = 0; r < a.size(); ++r) a.at(r, r) = a.at(r, r) + uk;
      std::optional<ModuleVector> best;
      for (auto& q : detail::kernel_window_candidates(a, support_bound, 4096)) {
        ModuleVector lhs = q;
        for (long i = 0; i < n; ++i) lhs = mat_apply(l, lhs);
        if (lhs != q.shifted(k)) continue;
        if (!best || detail::witness_vector_less(q, *best)) best = std::move(q);
      }
      if (best)
        return SolitonWitness::checked(l, n, k, std::move(*best));
    }
  }
  return std::nullopt;
}

enum class Verdict { periodic, glider, fractal_like };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::periodic: return "periodic";
    case Verdict::glider: return "glider";
    case Verdict::fractal_like: return "fractal-like";
  }
  return "?";
}

struct ClassifierReport {
  Verdict verdict;
  long horizon;                 // n_max checked; 0 for closed-form verdicts
  bool exact;                   // true when produced by the closed-form classifier
  std::optional<SolitonWitness> witness;   // present for glider verdicts
  std::optional<long> periodic_n;          // present for periodic verdicts
};

// Horizon-bounded trichotomy: periodic when the mixing test fails, glider
// when a soliton shows up, fractal-like otherwise (valid up to the horizon).
inline ClassifierReport classify(const PolyMatrix& l, long n_max) {
  MixingReport mix = mixing_test(l, n_max);
  if (mix.periodic_n)
    return {Verdict::periodic, n_max, false, std::nullopt, mix.periodic_n};
  if (auto w = soliton_search(l, n_max))
    return {Verdict::glider, n_max, false, std::move(w), std::nullopt};
  return {Verdict::fractal_like, n_max, false, std::nullopt, std::nullopt};
}

// b_0 = 0, b_1 = 1, b_{n+1} = t b_n + b_{n-1}. Powers of [[0,1],[1,t]] are
// [[b_{n-1}, b_n], [b_n, b_{n+1}]] and det(L^n - 1) = b_{n-1} + b_{n+1}.
inline std::vector<LaurentPoly> b_sequence(const LaurentPoly& t, long n) {
  if (n < 0) throw std::invalid_argument("b_sequence needs n >= 0");
  std::vector<LaurentPoly> b;
  b.reserve(static_cast<std::size_t>(n) + 1);
  b.push_back(LaurentPoly::zero(t.dim()));
  if (n >= 1) b.push_back(LaurentPoly::one(t.dim()));
  for (long i = 2; i <= n; ++i)
    b.push_back(t * b[static_cast<std::size_t>(i - 1)] + b[static_cast<std::size_t>(i - 2)]);
  return b;
}

// Exact classifier for L = [[0,1],[1,t]] with palindromic t in one
// variable: constant t is periodic, t = u^m + u^-m has the glider
// (1, u^m), anything else is fractal.
inline ClassifierReport classify_palindromic(const LaurentPoly& t) {
  if (t.dim() != 1)
    throw std::invalid_argument("palindromic classifier needs one variable");
  if (t != t.involute())
    throw std::invalid_argument(
        "t is not palindromic; [[0,1],[1,t]] would not be pseudo-unitary");
  const PolyMatrix l = [&] {
    PolyMatrix m(2, 1);
    m.at(0, 1) = LaurentPoly::one(1);
    m.at(1, 0) = LaurentPoly::one(1);
    m.at(1, 1) = t;
    return m;
  }();

  const bool constant = t.is_zero() || t.is_one();
  if (constant) {
    MixingReport mix = mixing_test(l, 6);  // constant t fails by n = 3
    return {Verdict::periodic, 0, true, std::nullopt, mix.periodic_n};
  }
  if (t.weight() == 2) {
    Exponent hi = t.deg_extremes().second;
    Coord m = hi[0];
    if (m > 0 && t == LaurentPoly::monomial1(m) + LaurentPoly::monomial1(-m)) {
      ModuleVector q = ModuleVector(
          {LaurentPoly::one(1), LaurentPoly::monomial1(m)});
      auto w = SolitonWitness::checked(l, 1, Exponent({m}), std::move(q));
      return {Verdict::glider, 0, true, std::move(w), std::nullopt};
    }
  }
  return {Verdict::fractal_like, 0, true, std::nullopt, std::nullopt};
}

}  // namespace qca
