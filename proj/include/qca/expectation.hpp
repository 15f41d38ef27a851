#pragma once

// Product-state moments, the thermalization certificate, beta-coefficient
// extraction for the XX-coupling QCA, the weighted-automaton contraction
// that evaluates expectation values in time linear in the word length, and
// a dense finite-window oracle that rechecks it end to end.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qca/dynamics.hpp"
#include "qca/pauli.hpp"

namespace qca {

using Complex = std::complex<double>;

// One-site density matrix: eigenvalues p and 1-p, with 1-p on the
// eigenvector pointing along the Bloch angles (degrees).
struct ProductStateParams {
  double p = 0;
  double theta_deg = 0;
  double phi_deg = 0;
};

struct OneSiteMoments {
  std::array<double, 4> w{1, 0, 0, 0};  // indexed by PauliLetter

  double operator[](PauliLetter l) const { return w[static_cast<std::size_t>(l)]; }
};

inline OneSiteMoments moments_from_bloch(const ProductStateParams& s) {
  if (!(s.p >= 0.0 && s.p <= 0.5))
    throw std::domain_error("state parameter p must lie in [0, 0.5]");
  const double th = s.theta_deg * std::numbers::pi / 180.0;
  const double ph = s.phi_deg * std::numbers::pi / 180.0;
  const double r = 1.0 - 2.0 * s.p;
  OneSiteMoments m;
  m.w = {1.0, r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph),
         r * std::cos(th)};
  return m;
}

inline Eigen::Matrix2cd bloch_density(const ProductStateParams& s) {
  OneSiteMoments m = moments_from_bloch(s);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Identity();
  rho += m[PauliLetter::X] * letter_matrix(PauliLetter::X);
  rho += m[PauliLetter::Y] * letter_matrix(PauliLetter::Y);
  rho += m[PauliLetter::Z] * letter_matrix(PauliLetter::Z);
  return 0.5 * rho;
}

// lambda(omega) = sup over nontrivial Pauli monomials of |omega(P)|. For a
// uniform product state this is attained on a single site.
inline double lambda_of_state(const OneSiteMoments& m) {
  return std::max({std::abs(m[PauliLetter::X]), std::abs(m[PauliLetter::Y]),
                   std::abs(m[PauliLetter::Z])});
}

// C = 2^(N V^2) with V the number of lattice points in the sup-distance
// ball of radius R, V = (2R+1)^d. Overflows to +inf for huge parameters,
// which only makes the certificate more conservative.
inline double c_beta(int qubits_per_cell, int range, int dims) {
  if (qubits_per_cell < 1 || range < 1 || dims < 1)
    throw std::invalid_argument("certificate parameters must be >= 1");
  double v = 1;
  for (int i = 0; i < dims; ++i) v *= static_cast<double>(2 * range + 1);
  return std::exp2(static_cast<double>(qubits_per_cell) * v * v);
}

// True iff lambda(omega) * C_beta < 1, the sufficient condition for the
// state omega∘beta to thermalize under any soliton-free Clifford QCA.
inline bool thermalization_certificate(const OneSiteMoments& m,
                                       int qubits_per_cell, int range,
                                       int dims) {
  double lambda = lambda_of_state(m);
  if (lambda == 0.0) return true;
  return lambda * c_beta(qubits_per_cell, range, dims) < 1.0;
}

// Generator of the non-Clifford QCA beta: a product of commuting two-site
// unitaries. v1 ships the XX coupling exp(i g X ⊗ X); the angle is g, the
// declared range is R.
struct BetaSpec {
  enum class Kind { xx };
  Kind kind = Kind::xx;
  double g = 0;
  int range = 1;
};

inline Eigen::Matrix4cd xx_coupling(double g) {
  const Complex i{0, 1};
  Eigen::Matrix4cd xx = Eigen::Matrix4cd::Zero();
  xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1;
  return std::cos(g) * Eigen::Matrix4cd::Identity() + i * std::sin(g) * xx;
}

namespace detail {

// Flattens a 2^m x 2^m matrix into a radix-4 array: the digit of qubit q is
// 2 r_q + c_q (qubit 0 owns the most significant row/column bit and the
// least significant digit). With transposed = true, stores A(c, r).
inline std::vector<Complex> flatten_pair_digits(const Eigen::MatrixXcd& a,
                                                int m, bool transposed) {
  const std::size_t dim = std::size_t{1} << m;
  std::vector<Complex> w(dim * dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      std::size_t idx = 0;
      for (int q = 0; q < m; ++q) {
        std::size_t rq = (r >> (m - 1 - q)) & 1;
        std::size_t cq = (c >> (m - 1 - q)) & 1;
        idx |= (2 * rq + cq) << (2 * q);
      }
      w[idx] = transposed ? a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r))
                          : a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  return w;
}

// Coefficients of A in the Pauli basis, indexed like basis_element:
// coeffs[g] = tr(P_g^dagger A) / 2^m. One linear pass per qubit.
inline std::vector<Complex> pauli_transform(const Eigen::MatrixXcd& a, int m) {
  std::vector<Complex> w = flatten_pair_digits(a, m, false);
  const Complex i{0, 1};
  for (int q = 0; q < m; ++q) {
    const std::size_t stride = std::size_t{1} << (2 * q);
    for (std::size_t base = 0; base < w.size(); base += stride * 4) {
      for (std::size_t off = 0; off < stride; ++off) {
        Complex w00 = w[base + off];                 // (r,c) = (0,0)
        Complex w01 = w[base + off + stride];        // (0,1)
        Complex w10 = w[base + off + 2 * stride];    // (1,0)
        Complex w11 = w[base + off + 3 * stride];    // (1,1)
        w[base + off] = 0.5 * (w00 + w11);           // I
        w[base + off + stride] = 0.5 * (w01 + w10);  // X
        w[base + off + 2 * stride] = 0.5 * i * (w01 - w10);  // Y
        w[base + off + 3 * stride] = 0.5 * (w00 - w11);      // Z
      }
    }
  }
  return w;
}

// tr(rho^(⊗m) A) for a one-site density matrix rho.
inline Complex product_state_trace(const Eigen::MatrixXcd& a,
                                   const Eigen::Matrix2cd& rho, int m) {
  std::vector<Complex> w = flatten_pair_digits(a, m, true);
  const std::array<Complex, 4> v{rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1)};
  std::size_t size = w.size();
  for (int q = 0; q < m; ++q) {
    const std::size_t quarter = size / 4;
    for (std::size_t j = 0; j < quarter; ++j)
      w[j] = v[0] * w[4 * j] + v[1] * w[4 * j + 1] + v[2] * w[4 * j + 2] +
             v[3] * w[4 * j + 3];
    size = quarter;
  }
  return w[0];
}

// A <- (1 ⊗ U ⊗ 1) A (1 ⊗ U ⊗ 1)^dagger with U on adjacent qubits
// (j, j+1) of an m-qubit window, in place.
inline void conjugate_adjacent_gate(Eigen::MatrixXcd& a,
                                    const Eigen::Matrix4cd& u, int j, int m) {
  const std::size_t dim = std::size_t{1} << m;
  const std::size_t bj = std::size_t{1} << (m - 1 - j);
  const std::size_t bj1 = std::size_t{1} << (m - 2 - j);
  std::array<std::size_t, 4> off{0, bj1, bj, bj + bj1};
  std::array<Complex, 4> tmp;
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (bj | bj1)) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      for (int s = 0; s < 4; ++s)
        tmp[static_cast<std::size_t>(s)] = a(static_cast<Eigen::Index>(base + off[static_cast<std::size_t>(s)]),
                                             static_cast<Eigen::Index>(c));
      for (int s = 0; s < 4; ++s) {
        Complex acc = 0;
        for (int t = 0; t < 4; ++t) acc += u(s, t) * tmp[static_cast<std::size_t>(t)];
        a(static_cast<Eigen::Index>(base + off[static_cast<std::size_t>(s)]),
          static_cast<Eigen::Index>(c)) = acc;
      }
    }
  }
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (bj | bj1)) continue;
    for (std::size_t r = 0; r < dim; ++r) {
      for (int s = 0; s < 4; ++s)
        tmp[static_cast<std::size_t>(s)] = a(static_cast<Eigen::Index>(r),
                                             static_cast<Eigen::Index>(base + off[static_cast<std::size_t>(s)]));
      for (int s = 0; s < 4; ++s) {
        Complex acc = 0;
        for (int t = 0; t < 4; ++t) acc += std::conj(u(s, t)) * tmp[static_cast<std::size_t>(t)];
        a(static_cast<Eigen::Index>(r),
          static_cast<Eigen::Index>(base + off[static_cast<std::size_t>(s)])) = acc;
      }
    }
  }
}

inline Eigen::Matrix4cd coupling_gate(const BetaSpec& b) {
  switch (b.kind) {
    case BetaSpec::Kind::xx: return xx_coupling(b.g);
  }
  throw std::invalid_argument("unknown coupling kind");
}

}  // namespace detail

// beta(e_a) = sum_{b,c,l} beta^{bcl}_a e^{left}_b ⊗ e^{mid}_c ⊗ e^{right}_l
// over supersites of R sites. Entries below 1e-13 are exact zeros of the
// conjugation and are chopped.
class BetaTensor {
 public:
  BetaTensor(int supersite_qubits, std::vector<Complex> coef)
      : nq_(supersite_qubits), dim_(std::size_t{1} << (2 * supersite_qubits)),
        c_(std::move(coef)) {}

  int supersite_qubits() const { return nq_; }
  std::size_t dim() const { return dim_; }
  Complex at(std::size_t a, std::size_t b, std::size_t c, std::size_t l) const {
    return c_[((a * dim_ + b) * dim_ + c) * dim_ + l];
  }

 private:
  int nq_;
  std::size_t dim_;
  std::vector<Complex> c_;
};

inline BetaTensor beta_coefficients(const BetaSpec& spec) {
  if (spec.range < 1) throw std::invalid_argument("coupling range must be >= 1");
  if (spec.range > 2)
    throw cost_error("supersites of range > 2 exceed the bond dimension cap");
  const Eigen::Matrix4cd u = detail::coupling_gate(spec);

  // the two-site unitaries must commute with their own translates
  Eigen::MatrixXcd u01 = kron(u, Eigen::MatrixXcd::Identity(2, 2));
  Eigen::MatrixXcd u12 = kron(Eigen::MatrixXcd::Identity(2, 2), u);
  if ((u01 * u12 - u12 * u01).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("coupling does not commute with its translates");

  const int nq = spec.range;  // one qubit per cell
  const int m = 3 * nq;
  const std::size_t d = std::size_t{1} << (2 * nq);
  const Eigen::MatrixXcd pad = Eigen::MatrixXcd::Identity(1 << nq, 1 << nq);

  Eigen::MatrixXcd uwin = Eigen::MatrixXcd::Identity(1 << m, 1 << m);
  for (int j = nq - 1; j <= 2 * nq - 1; ++j) {
    Eigen::MatrixXcd g = kron(Eigen::MatrixXcd::Identity(1 << j, 1 << j), u);
    g = kron(g, Eigen::MatrixXcd::Identity(1 << (m - j - 2), 1 << (m - j - 2)));
    uwin = g * uwin;
  }

  std::vector<Complex> out(d * d * d * d);
  for (std::size_t a = 0; a < d; ++a) {
    Eigen::MatrixXcd e = kron(kron(pad, basis_element(a, nq)), pad);
    Eigen::MatrixXcd conj = uwin * e * uwin.adjoint();
    std::vector<Complex> coef = detail::pauli_transform(conj, m);
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t l = 0; l < d; ++l) {
          Complex v = coef[b | (c << (2 * nq)) | (l << (4 * nq))];
          double re = std::abs(v.real()) < 1e-13 ? 0.0 : v.real();
          double im = std::abs(v.imag()) < 1e-13 ? 0.0 : v.imag();
          out[((a * d + b) * d + c) * d + l] = Complex{re, im};
        }
  }
  return BetaTensor(nq, std::move(out));
}

// Moments of a supersite basis element: the product of its letters'
// one-site moments.
inline double supersite_moment(const OneSiteMoments& m, std::size_t index,
                               int qubits) {
  double v = 1;
  for (int q = 0; q < qubits; ++q) v *= m.w[(index >> (2 * q)) & 3];
  return v;
}

// The weighted automaton of the contraction: bond space A ⊗ A, start
// vector e_1 ⊗ e_1, final functional gamma(e_i ⊗ e_j) = w_i w_j, and one
// transition map per input letter,
//   M^{kl}_{a,ij} = sum_{b,c,d} w_d f^d_{ib} f^k_{jc} beta^{bcl}_a.
struct AutomatonData {
  int supersite_qubits;
  std::size_t dim;  // 4^supersite_qubits
  std::vector<Eigen::MatrixXcd> transitions;
  Eigen::VectorXcd start;
  Eigen::RowVectorXcd gamma;
};

inline AutomatonData build_automaton(const OneSiteMoments& m,
                                     const BetaTensor& beta) {
  const int nq = beta.supersite_qubits();
  const std::size_t d = beta.dim();
  const std::size_t bond = d * d;
  const StructureTable table(nq);

  std::vector<double> w(d);
  for (std::size_t a = 0; a < d; ++a) w[a] = supersite_moment(m, a, nq);

  AutomatonData out;
  out.supersite_qubits = nq;
  out.dim = d;
  out.transitions.assign(d, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(bond),
                                                   static_cast<Eigen::Index>(bond)));
  for (std::size_t a = 0; a < d; ++a) {
    Eigen::MatrixXcd& ma = out.transitions[a];
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t l = 0; l < d; ++l) {
          Complex coeff = beta.at(a, b, c, l);
          if (coeff == Complex{0, 0}) continue;
          for (std::size_t i = 0; i < d; ++i) {
            auto [dd, ph1] = table.product(i, b);
            double wd = w[dd];
            if (wd == 0.0) continue;
            Complex left = wd * phase_value(ph1) * coeff;
            for (std::size_t j = 0; j < d; ++j) {
              auto [k, ph2] = table.product(j, c);
              ma(static_cast<Eigen::Index>(k * d + l),
                 static_cast<Eigen::Index>(i * d + j)) += left * phase_value(ph2);
            }
          }
        }
  }
  out.start = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bond));
  out.start(0) = 1;
  out.gamma = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(bond));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.gamma(static_cast<Eigen::Index>(i * d + j)) = w[i] * w[j];
  return out;
}

// gamma ∘ M_{a_K} ∘ ... ∘ M_{a_1} applied to the start vector; cost linear
// in the word length. Site letters are grouped into supersites of R sites,
// padding the tail with identities.
inline Complex evaluate(const AutomatonData& a,
                        std::span<const PauliLetter> site_letters) {
  const int nq = a.supersite_qubits;
  Eigen::VectorXcd v = a.start;
  for (std::size_t pos = 0; pos < site_letters.size();
       pos += static_cast<std::size_t>(nq)) {
    std::size_t index = 0;
    for (int q = 0; q < nq; ++q) {
      std::size_t p = pos + static_cast<std::size_t>(q);
      PauliLetter l = p < site_letters.size() ? site_letters[p] : PauliLetter::I;
      index |= static_cast<std::size_t>(l) << (2 * q);
    }
    v = a.transitions[index] * v;
  }
  return a.gamma * v;
}

// tr(rho U P U^dagger) on a dense window of K + 2R sites: the product
// state on the window, all coupling factors overlapping the word's
// interval, and the word itself as a Pauli kron product.
inline Complex dense_oracle(std::span<const PauliLetter> word,
                            const ProductStateParams& s, const BetaSpec& b) {
  const int r = b.range;
  const int m = static_cast<int>(word.size()) + 2 * r;
  if (m > 14) throw cost_error("dense oracle window exceeds the 14 qubit cap");
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(1 << r, 1 << r);
  for (PauliLetter l : word) p = kron(p, letter_matrix(l));
  p = kron(p, Eigen::MatrixXcd::Identity(1 << r, 1 << r));

  const Eigen::Matrix4cd u = detail::coupling_gate(b);
  for (int j = r - 1; j < r + static_cast<int>(word.size()); ++j)
    detail::conjugate_adjacent_gate(p, u, j, m);

  return detail::product_state_trace(p, bloch_density(s), m);
}

// |omega_0 ∘ beta (P_{L^n q0})|: iterates the orbit, converts to a letter
// word over its support (phases dropped; the matrix picture only fixes
// monomials up to sign), and runs the automaton.
inline double expect_evolved(const PolyMatrix& l, const ModuleVector& q0,
                             long n, const ProductStateParams& s,
                             const BetaSpec& b) {
  if (q0.is_zero()) throw std::invalid_argument("initial vector must be nonzero");
  if (n < 0) throw std::invalid_argument("time step must be >= 0");
  AutomatonData a = build_automaton(moments_from_bloch(s), beta_coefficients(b));
  ModuleVector q = q0;
  for (long i = 0; i < n; ++i) q = mat_apply(l, q);
  return std::abs(evaluate(a, letter_word(q).letters));
}

// Full series n = 0..steps sharing one automaton and one orbit sweep.
inline std::vector<double> expect_series(const PolyMatrix& l,
                                         const ModuleVector& q0, long steps,
                                         const ProductStateParams& s,
                                         const BetaSpec& b) {
  if (q0.is_zero()) throw std::invalid_argument("initial vector must be nonzero");
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  AutomatonData a = build_automaton(moments_from_bloch(s), beta_coefficients(b));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  ModuleVector q = q0;
  for (long n = 0; n <= steps; ++n) {
    out.push_back(std::abs(evaluate(a, letter_word(q).letters)));
    if (n < steps) q = mat_apply(l, q);
  }
  return out;
}

// --- CLI parameter strings ----------------------------------------------

inline ProductStateParams parse_state_params(std::string_view text) {
  ProductStateParams s;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eq = text.find('=', pos);
    if (eq == std::string_view::npos)
      throw parse_error("expected key=value in state string", pos);
    std::string_view key = text.substr(pos, eq - pos);
    std::size_t end = text.find(',', eq);
    if (end == std::string_view::npos) end = text.size();
    std::string value(text.substr(eq + 1, end - eq - 1));
    char* stop = nullptr;
    double v = std::strtod(value.c_str(), &stop);
    if (stop == value.c_str() || *stop != '\0')
      throw parse_error("expected number in state string", eq + 1);
    if (key == "p") s.p = v;
    else if (key == "theta") s.theta_deg = v;
    else if (key == "phi") s.phi_deg = v;
    else throw parse_error("unknown state parameter '" + std::string(key) + "'", pos);
    pos = end == text.size() ? end : end + 1;
  }
  return s;
}

inline BetaSpec parse_beta_spec(std::string_view text) {
  BetaSpec b;
  std::size_t colon = text.find(':');
  std::string_view kind = colon == std::string_view::npos ? text : text.substr(0, colon);
  if (kind != "xx")
    throw parse_error("unknown coupling kind '" + std::string(kind) + "'", 0);
  b.kind = BetaSpec::Kind::xx;
  if (colon == std::string_view::npos) return b;
  std::size_t pos = colon + 1;
  while (pos < text.size()) {
    std::size_t eq = text.find('=', pos);
    if (eq == std::string_view::npos)
      throw parse_error("expected key=value in coupling string", pos);
    std::string_view key = text.substr(pos, eq - pos);
    std::size_t end = text.find(',', eq);
    if (end == std::string_view::npos) end = text.size();
    std::string value(text.substr(eq + 1, end - eq - 1));
    if (key == "g") {
      char* stop = nullptr;
      b.g = std::strtod(value.c_str(), &stop);
      if (stop == value.c_str() || *stop != '\0')
        throw parse_error("expected number for g", eq + 1);
    } else if (key == "R") {
      char* stop = nullptr;
      long r = std::strtol(value.c_str(), &stop, 10);
      if (stop == value.c_str() || *stop != '\0' || r < 1)
        throw parse_error("expected positive integer for R", eq + 1);
      b.range = static_cast<int>(r);
    } else {
      throw parse_error("unknown coupling parameter '" + std::string(key) + "'", pos);
    }
    pos = end == text.size() ? end : end + 1;
  }
  return b;
}

}  // namespace qca
