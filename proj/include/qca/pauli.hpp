#pragma once

// Concrete finite-dimensional Pauli algebra: letter products with exact
// phases, the module-vector <-> Pauli-monomial encoding (X-before-Z order,
// so the (1,1) bit pair is the letter Y carrying phase -i), multi-qubit
// structure constants, and dense matrix realizations for the oracles.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qca/symplectic.hpp"

namespace qca {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char letter_char(PauliLetter l) { return "IXYZ"[static_cast<int>(l)]; }

struct LetterProduct {
  PauliLetter letter;
  int phase_pow;  // product = i^phase_pow * letter
};

// Single-qubit products: X.Y = iZ, Y.Z = iX, Z.X = iY and reversed order
// flips the sign; equal letters square to the identity.
constexpr LetterProduct letter_mul(PauliLetter a, PauliLetter b) {
  if (a == PauliLetter::I) return {b, 0};
  if (b == PauliLetter::I) return {a, 0};
  if (a == b) return {PauliLetter::I, 0};
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  // remaining letter index: {1,2,3} \ {ia, ib}
  const int ic = 6 - ia - ib;
  // cyclic (X,Y,Z) order gains +i, anticyclic -i
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {static_cast<PauliLetter>(ic), cyclic ? 1 : 3};
}

inline std::complex<double> phase_value(int phase_pow) {
  switch (((phase_pow % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// One qubit of one lattice cell.
struct CellSite {
  Exponent site;
  int qubit = 0;  // index inside the unit cell

  bool operator==(const CellSite&) const = default;
  std::strong_ordering operator<=>(const CellSite& o) const {
    if (auto c = site <=> o.site; c != std::strong_ordering::equal) return c;
    return qubit <=> o.qubit;
  }
};

// Finitely supported product of Pauli letters with an explicit phase in
// {1, i, -1, -i}. Unlisted sites are the identity.
class PauliMonomial {
 public:
  using SiteMap = std::map<CellSite, PauliLetter>;

  static PauliMonomial identity() { return PauliMonomial(); }

  PauliMonomial& set(CellSite site, PauliLetter l) {
    if (l == PauliLetter::I)
      letters_.erase(site);
    else
      letters_[std::move(site)] = l;
    return *this;
  }
  PauliMonomial& multiply_phase(int pow) {
    phase_pow_ = (phase_pow_ + pow) % 4;
    return *this;
  }

  const SiteMap& letters() const { return letters_; }
  PauliLetter at(const CellSite& s) const {
    auto it = letters_.find(s);
    return it == letters_.end() ? PauliLetter::I : it->second;
  }
  int phase_pow() const { return phase_pow_; }
  std::complex<double> phase() const { return phase_value(phase_pow_); }
  bool is_identity_letters() const { return letters_.empty(); }

  friend PauliMonomial operator*(const PauliMonomial& a, const PauliMonomial& b) {
    PauliMonomial r = a;
    r.phase_pow_ = (a.phase_pow_ + b.phase_pow_) % 4;
    for (const auto& [site, letter] : b.letters_) {
      auto it = r.letters_.find(site);
      if (it == r.letters_.end()) {
        r.letters_.emplace(site, letter);
        continue;
      }
      LetterProduct p = letter_mul(it->second, letter);
      r.phase_pow_ = (r.phase_pow_ + p.phase_pow) % 4;
      if (p.letter == PauliLetter::I)
        r.letters_.erase(it);
      else
        it->second = p.letter;
    }
    return r;
  }

  bool operator==(const PauliMonomial&) const = default;
  // Equal up to the phase factor.
  bool same_letters(const PauliMonomial& o) const { return letters_ == o.letters_; }

 private:
  SiteMap letters_;
  int phase_pow_ = 0;
};

inline PauliMonomial pauli_mul(const PauliMonomial& a, const PauliMonomial& b) {
  return a * b;
}

// Per site and cell qubit, X^x Z^z in X-before-Z order with overall phase
// +1; the (1,1) pair is recorded as letter Y with phase -i since XZ = -iY.
inline PauliMonomial vec_to_pauli(const ModuleVector& q) {
  if (q.size() % 2 != 0)
    throw std::invalid_argument("module vector needs even length");
  const int n = q.size() / 2;
  PauliMonomial out;
  for (int mu = 0; mu < n; ++mu) {
    const LaurentPoly& xs = q[mu];
    const LaurentPoly& zs = q[n + mu];
    for (std::size_t t = 0; t < xs.weight(); ++t) {
      Exponent e = xs.term(t);
      bool z = zs.contains(e);
      out.set({e, mu}, z ? PauliLetter::Y : PauliLetter::X);
      if (z) out.multiply_phase(3);  // XZ = -i Y
    }
    for (std::size_t t = 0; t < zs.weight(); ++t) {
      Exponent e = zs.term(t);
      if (!xs.contains(e)) out.set({e, mu}, PauliLetter::Z);
    }
  }
  return out;
}

// Inverse of vec_to_pauli on letters (the phase is dropped).
inline ModuleVector pauli_to_vec(const PauliMonomial& p, int qubits_per_cell,
                                 int dim) {
  std::vector<std::vector<Exponent>> xterms(static_cast<std::size_t>(qubits_per_cell));
  std::vector<std::vector<Exponent>> zterms(static_cast<std::size_t>(qubits_per_cell));
  for (const auto& [site, letter] : p.letters()) {
    if (site.qubit < 0 || site.qubit >= qubits_per_cell)
      throw std::invalid_argument("cell qubit index out of range");
    if (site.site.dim() != dim)
      throw std::invalid_argument("site dimension mismatch");
    if (letter == PauliLetter::X || letter == PauliLetter::Y)
      xterms[static_cast<std::size_t>(site.qubit)].push_back(site.site);
    if (letter == PauliLetter::Z || letter == PauliLetter::Y)
      zterms[static_cast<std::size_t>(site.qubit)].push_back(site.site);
  }
  std::vector<LaurentPoly> entries;
  for (int mu = 0; mu < qubits_per_cell; ++mu)
    entries.push_back(LaurentPoly::from_terms(dim, xterms[static_cast<std::size_t>(mu)]));
  for (int mu = 0; mu < qubits_per_cell; ++mu)
    entries.push_back(LaurentPoly::from_terms(dim, zterms[static_cast<std::size_t>(mu)]));
  return ModuleVector(std::move(entries));
}

// Letters of a one-variable, one-qubit-per-cell monomial over its support
// interval [start, start + letters.size() - 1], identity letters filling
// interior gaps.
struct LetterWord {
  Coord start = 0;
  std::vector<PauliLetter> letters;
};

inline LetterWord letter_word(const ModuleVector& q) {
  if (q.size() != 2)
    throw std::invalid_argument("letter words need one qubit per cell");
  if (q.dim() != 1)
    throw std::invalid_argument("letter words need one spatial dimension");
  LetterWord w;
  if (q.is_zero()) return w;
  Coord lo = 0, hi = 0;
  bool first = true;
  for (const auto& p : q.entries()) {
    if (p.is_zero()) continue;
    auto [l, h] = p.deg_extremes();
    lo = first ? l[0] : std::min(lo, l[0]);
    hi = first ? h[0] : std::max(hi, h[0]);
    first = false;
  }
  w.start = lo;
  for (Coord s = lo; s <= hi; ++s) {
    bool x = q[0].contains(Exponent({s}));
    bool z = q[1].contains(Exponent({s}));
    w.letters.push_back(x ? (z ? PauliLetter::Y : PauliLetter::X)
                          : (z ? PauliLetter::Z : PauliLetter::I));
  }
  return w;
}

// --- text form ---------------------------------------------------------
//
// Letters with a signed site index and an optional cell-qubit suffix,
// concatenated with '*': "X0", "Z-3", "Y2@1", "X0*Z2".

inline PauliMonomial parse_pauli_string(std::string_view text) {
  PauliMonomial out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  bool expect_factor = true;
  while (true) {
    skip_ws();
    if (pos >= text.size()) {
      if (expect_factor) throw parse_error("expected Pauli letter", pos);
      break;
    }
    char c = text[pos];
    PauliLetter l;
    switch (c) {
      case 'I': l = PauliLetter::I; break;
      case 'X': l = PauliLetter::X; break;
      case 'Y': l = PauliLetter::Y; break;
      case 'Z': l = PauliLetter::Z; break;
      default: throw parse_error("expected Pauli letter", pos);
    }
    ++pos;
    std::size_t istart = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == istart) throw parse_error("expected site index", pos);
    Coord site = 0;
    bool neg = text[istart] == '-';
    std::size_t dstart = (text[istart] == '+' || text[istart] == '-') ? istart + 1 : istart;
    if (dstart == pos) throw parse_error("expected site index", dstart);
    for (std::size_t i = dstart; i < pos; ++i)
      site = checked_add(checked_mul(site, 10), text[i] - '0');
    if (neg) site = checked_neg(site);
    int mu = 0;
    if (pos < text.size() && text[pos] == '@') {
      ++pos;
      std::size_t mstart = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == mstart) throw parse_error("expected cell qubit index", pos);
      mu = 0;
      for (std::size_t i = mstart; i < pos; ++i) mu = mu * 10 + (text[i] - '0');
    }
    CellSite cs{Exponent({site}), mu};
    if (out.at(cs) != PauliLetter::I)
      throw parse_error("duplicate site in Pauli string", istart);
    out.set(cs, l);
    expect_factor = false;
    skip_ws();
    if (pos < text.size()) {
      if (text[pos] != '*') throw parse_error("expected '*'", pos);
      ++pos;
      expect_factor = true;
    }
  }
  return out;
}

inline std::string format_pauli_string(const PauliMonomial& p) {
  if (p.letters().empty()) return "I0";
  std::string out;
  bool first = true;
  for (const auto& [site, letter] : p.letters()) {
    if (!first) out += '*';
    first = false;
    out += letter_char(letter);
    out += std::to_string(site.site[0]);
    if (site.qubit != 0) out += '@' + std::to_string(site.qubit);
  }
  return out;
}

// --- multi-qubit basis bookkeeping --------------------------------------
//
// Basis elements of the n-qubit algebra are indexed in base 4: the letter
// of qubit q sits in bits 2q..2q+1, and index 0 is the unit.

inline PauliLetter basis_letter(std::size_t index, int qubit) {
  return static_cast<PauliLetter>((index >> (2 * qubit)) & 3);
}

class StructureTable {
 public:
  explicit StructureTable(int qubits) : qubits_(qubits), dim_(std::size_t{1} << (2 * qubits)) {
    if (qubits < 1) throw std::invalid_argument("structure table needs >= 1 qubit");
  }

  int qubits() const { return qubits_; }
  std::size_t dim() const { return dim_; }

  struct Entry {
    std::size_t index;
    int phase_pow;
  };

  // e_b e_c = i^phase e_a: the single nonzero structure constant per (b,c).
  Entry product(std::size_t b, std::size_t c) const {
    std::size_t a = 0;
    int phase = 0;
    for (int q = 0; q < qubits_; ++q) {
      LetterProduct p = letter_mul(basis_letter(b, q), basis_letter(c, q));
      a |= static_cast<std::size_t>(p.letter) << (2 * q);
      phase = (phase + p.phase_pow) % 4;
    }
    return {a, phase};
  }

  // f^a_{bc}
  std::complex<double> f(std::size_t a, std::size_t b, std::size_t c) const {
    Entry e = product(b, c);
    return e.index == a ? phase_value(e.phase_pow) : std::complex<double>{0, 0};
  }

 private:
  int qubits_;
  std::size_t dim_;
};

// --- dense realizations --------------------------------------------------

inline Eigen::Matrix2cd letter_matrix(PauliLetter l) {
  const std::complex<double> i{0, 1};
  Eigen::Matrix2cd m;
  switch (l) {
    case PauliLetter::I: m << 1, 0, 0, 1; break;
    case PauliLetter::X: m << 0, 1, 1, 0; break;
    case PauliLetter::Y: m << 0, -i, i, 0; break;
    case PauliLetter::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// Kronecker product of the window's letters (qubit 0 leftmost) times the
// phase. Sites are ordered lattice-ascending, cell qubits inside a site.
inline Eigen::MatrixXcd dense_matrix(const PauliMonomial& p, Coord window_lo,
                                     Coord window_hi, int qubits_per_cell) {
  if (window_hi < window_lo)
    throw std::invalid_argument("empty dense window");
  long sites = window_hi - window_lo + 1;
  long qubits = sites * qubits_per_cell;
  if (qubits > 14)
    throw cost_error("dense window exceeds the 14 qubit cap");
  for (const auto& [site, letter] : p.letters()) {
    (void)letter;
    if (site.site.dim() != 1)
      throw std::invalid_argument("dense windows are one-dimensional");
    if (site.site[0] < window_lo || site.site[0] > window_hi)
      throw cost_error("monomial support outside the dense window");
    if (site.qubit >= qubits_per_cell)
      throw std::invalid_argument("cell qubit index out of range");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (Coord s = window_lo; s <= window_hi; ++s)
    for (int mu = 0; mu < qubits_per_cell; ++mu)
      m = kron(m, letter_matrix(p.at({Exponent({s}), mu})));
  return p.phase() * m;
}

// Pauli basis element of an n-qubit window as a dense matrix.
inline Eigen::MatrixXcd basis_element(std::size_t index, int qubits) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) m = kron(m, letter_matrix(basis_letter(index, q)));
  return m;
}

}  // namespace qca
