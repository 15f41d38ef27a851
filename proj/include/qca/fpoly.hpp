#pragma once

// Exact arithmetic in the ring of Laurent polynomials in d variables with
// coefficients in F2. A polynomial is a finite set of integer exponent
// vectors (presence = coefficient 1): addition is symmetric difference of
// term sets, multiplication is convolution mod 2. Terms are kept sorted in
// lexicographic exponent order so equality is structural.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qca/common.hpp"

namespace qca {

// Exponent of a monomial u^k = u_1^{k_1}...u_d^{k_d}: one signed integer
// per ring variable.
class Exponent {
 public:
  Exponent() = default;
  explicit Exponent(std::vector<Coord> components) : c_(std::move(components)) {}
  explicit Exponent(std::initializer_list<Coord> components) : c_(components) {}
  static Exponent zero(int dim) { return Exponent(std::vector<Coord>(dim, 0)); }

  int dim() const { return static_cast<int>(c_.size()); }
  Coord operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<Coord>& components() const { return c_; }

  Exponent operator+(const Exponent& o) const {
    std::vector<Coord> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = checked_add(c_[i], o.c_[i]);
    return Exponent(std::move(r));
  }
  Exponent operator-() const {
    std::vector<Coord> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = checked_neg(c_[i]);
    return Exponent(std::move(r));
  }

  bool operator==(const Exponent&) const = default;
  std::strong_ordering operator<=>(const Exponent& o) const {
    return std::lexicographical_compare_three_way(c_.begin(), c_.end(),
                                                  o.c_.begin(), o.c_.end());
  }

 private:
  std::vector<Coord> c_;
};

namespace detail {

// Sorts a flat array of n contiguous d-tuples lexicographically and cancels
// duplicate tuples mod 2 (a tuple appearing an even number of times drops
// out). Returns the canonical flat array.
inline std::vector<Coord> canonical_terms(std::vector<Coord> flat, int dim) {
  const std::size_t d = static_cast<std::size_t>(dim);
  const std::size_t n = flat.size() / d;
  if (n <= 1) return flat;
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  auto tuple_less = [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(
        flat.begin() + a * d, flat.begin() + (a + 1) * d,
        flat.begin() + b * d, flat.begin() + (b + 1) * d);
  };
  auto tuple_eq = [&](std::uint32_t a, std::uint32_t b) {
    return std::equal(flat.begin() + a * d, flat.begin() + (a + 1) * d,
                      flat.begin() + b * d);
  };
  std::sort(idx.begin(), idx.end(), tuple_less);
  std::vector<Coord> out;
  out.reserve(flat.size());
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && tuple_eq(idx[i], idx[j])) ++j;
    if ((j - i) % 2 == 1)
      out.insert(out.end(), flat.begin() + idx[i] * d,
                 flat.begin() + (idx[i] + 1) * d);
    i = j;
  }
  return out;
}

}  // namespace detail

class LaurentPoly {
 public:
  // Span threshold below which 1-variable multiplication runs on a windowed
  // bit vector instead of the sparse term list.
  static constexpr Coord kBitsetSpanLimit = Coord{1} << 20;

  LaurentPoly() : dim_(1) {}
  explicit LaurentPoly(int dim) : dim_(check_dim(dim)) {}

  static LaurentPoly zero(int dim) { return LaurentPoly(dim); }
  static LaurentPoly one(int dim) {
    LaurentPoly p(dim);
    p.flat_.assign(static_cast<std::size_t>(dim), 0);
    return p;
  }
  static LaurentPoly monomial(const Exponent& e) {
    LaurentPoly p(e.dim());
    p.flat_ = e.components();
    return p;
  }
  // 1-variable convenience: u^k.
  static LaurentPoly monomial1(Coord k) {
    return monomial(Exponent(std::vector<Coord>{k}));
  }
  static LaurentPoly from_terms(int dim, const std::vector<Exponent>& terms) {
    LaurentPoly p(dim);
    p.flat_.reserve(terms.size() * static_cast<std::size_t>(dim));
    for (const auto& e : terms) {
      if (e.dim() != dim)
        throw std::invalid_argument("term dimension mismatch");
      p.flat_.insert(p.flat_.end(), e.components().begin(), e.components().end());
    }
    p.flat_ = detail::canonical_terms(std::move(p.flat_), dim);
    return p;
  }

  int dim() const { return dim_; }
  std::size_t weight() const { return flat_.size() / static_cast<std::size_t>(dim_); }
  bool is_zero() const { return flat_.empty(); }
  bool is_one() const {
    return weight() == 1 && std::all_of(flat_.begin(), flat_.end(),
                                        [](Coord c) { return c == 0; });
  }
  // True iff the polynomial is a unit of the ring, i.e. a single monomial.
  bool is_monomial() const { return weight() == 1; }

  std::span<const Coord> term_span(std::size_t i) const {
    return std::span<const Coord>(flat_.data() + i * static_cast<std::size_t>(dim_),
                                  static_cast<std::size_t>(dim_));
  }
  Exponent term(std::size_t i) const {
    auto s = term_span(i);
    return Exponent(std::vector<Coord>(s.begin(), s.end()));
  }
  std::vector<Exponent> terms() const {
    std::vector<Exponent> out;
    out.reserve(weight());
    for (std::size_t i = 0; i < weight(); ++i) out.push_back(term(i));
    return out;
  }
  const std::vector<Coord>& flat() const { return flat_; }

  bool contains(const Exponent& e) const {
    if (e.dim() != dim_) return false;
    const auto& c = e.components();
    for (std::size_t i = 0; i < weight(); ++i) {
      auto s = term_span(i);
      if (std::equal(s.begin(), s.end(), c.begin())) return true;
    }
    return false;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    a.require_same_dim(b);
    LaurentPoly r(a.dim_);
    const std::size_t d = static_cast<std::size_t>(a.dim_);
    r.flat_.reserve(a.flat_.size() + b.flat_.size());
    // Merge of two sorted term lists; equal tuples cancel in characteristic 2.
    std::size_t i = 0, j = 0;
    const std::size_t na = a.weight(), nb = b.weight();
    while (i < na && j < nb) {
      auto sa = a.term_span(i), sb = b.term_span(j);
      auto cmp = std::lexicographical_compare_three_way(sa.begin(), sa.end(),
                                                        sb.begin(), sb.end());
      if (cmp == std::strong_ordering::less) {
        r.flat_.insert(r.flat_.end(), sa.begin(), sa.end());
        ++i;
      } else if (cmp == std::strong_ordering::greater) {
        r.flat_.insert(r.flat_.end(), sb.begin(), sb.end());
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
    for (; i < na; ++i) {
      auto s = a.term_span(i);
      r.flat_.insert(r.flat_.end(), s.begin(), s.end());
    }
    for (; j < nb; ++j) {
      auto s = b.term_span(j);
      r.flat_.insert(r.flat_.end(), s.begin(), s.end());
    }
    (void)d;
    return r;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.require_same_dim(b);
    if (a.is_zero() || b.is_zero()) return LaurentPoly(a.dim_);
    if (a.dim_ == 1) {
      Coord amin = a.flat_.front(), amax = a.flat_.back();
      Coord bmin = b.flat_.front(), bmax = b.flat_.back();
      Coord span_a = amax - amin, span_b = bmax - bmin;
      if (span_a + span_b + 1 <= kBitsetSpanLimit)
        return mul_bitset1(a, b, amin, bmin, span_a + span_b + 1);
    }
    return mul_sparse(a, b);
  }

  // r(u) -> r(u^-1): every exponent negated componentwise.
  LaurentPoly involute() const {
    LaurentPoly r(dim_);
    r.flat_.resize(flat_.size());
    const std::size_t d = static_cast<std::size_t>(dim_);
    const std::size_t n = weight();
    // Negating every component reverses the lexicographic term order, so the
    // canonical layout is restored by writing tuples back to front.
    for (std::size_t i = 0; i < n; ++i) {
      auto s = term_span(i);
      Coord* dst = r.flat_.data() + (n - 1 - i) * d;
      for (std::size_t k = 0; k < d; ++k) dst[k] = checked_neg(s[k]);
    }
    return r;
  }

  // Multiplication by the monomial u^e.
  LaurentPoly shifted(const Exponent& e) const {
    if (e.dim() != dim_) throw std::invalid_argument("shift dimension mismatch");
    LaurentPoly r(dim_);
    r.flat_.resize(flat_.size());
    const std::size_t d = static_cast<std::size_t>(dim_);
    for (std::size_t i = 0; i < flat_.size(); ++i)
      r.flat_[i] = checked_add(flat_[i], e[static_cast<int>(i % d)]);
    return r;
  }

  // Componentwise (min, max) exponent over the term set. Undefined for the
  // zero polynomial.
  std::pair<Exponent, Exponent> deg_extremes() const {
    if (is_zero())
      throw std::domain_error("deg_extremes of the zero polynomial");
    std::vector<Coord> lo(term_span(0).begin(), term_span(0).end());
    std::vector<Coord> hi = lo;
    for (std::size_t i = 1; i < weight(); ++i) {
      auto s = term_span(i);
      for (int k = 0; k < dim_; ++k) {
        lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k)]);
        hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k)]);
      }
    }
    return {Exponent(std::move(lo)), Exponent(std::move(hi))};
  }

  // max |exponent of variable var| over the term set; 0 for the zero
  // polynomial.
  Coord max_abs_degree(int var) const {
    Coord m = 0;
    for (std::size_t i = 0; i < weight(); ++i) {
      Coord c = term_span(i)[static_cast<std::size_t>(var)];
      m = std::max(m, c < 0 ? checked_neg(c) : c);
    }
    return m;
  }

  bool operator==(const LaurentPoly&) const = default;

  std::string str() const;

 private:
  static int check_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("variable count must be >= 1");
    return dim;
  }
  void require_same_dim(const LaurentPoly& o) const {
    if (dim_ != o.dim_)
      throw std::invalid_argument("polynomial dimension mismatch");
  }

  static LaurentPoly mul_sparse(const LaurentPoly& a, const LaurentPoly& b) {
    const std::size_t d = static_cast<std::size_t>(a.dim_);
    std::vector<Coord> prod;
    prod.reserve(a.weight() * b.weight() * d);
    for (std::size_t i = 0; i < a.weight(); ++i) {
      auto sa = a.term_span(i);
      for (std::size_t j = 0; j < b.weight(); ++j) {
        auto sb = b.term_span(j);
        for (std::size_t k = 0; k < d; ++k)
          prod.push_back(checked_add(sa[k], sb[k]));
      }
    }
    LaurentPoly r(a.dim_);
    r.flat_ = detail::canonical_terms(std::move(prod), a.dim_);
    return r;
  }

  // 1-variable fast path: convolution as shifted XOR on a windowed bit
  // vector. Bit i of the accumulator stands for exponent lo + i.
  static LaurentPoly mul_bitset1(const LaurentPoly& a, const LaurentPoly& b,
                                 Coord amin, Coord bmin, Coord span) {
    const LaurentPoly& outer = a.weight() <= b.weight() ? a : b;
    const LaurentPoly& inner = a.weight() <= b.weight() ? b : a;
    Coord inner_min = (&inner == &a) ? amin : bmin;
    Coord outer_min = (&outer == &a) ? amin : bmin;

    const std::size_t nwords = static_cast<std::size_t>((span + 63) / 64);
    std::vector<std::uint64_t> inner_bits(
        static_cast<std::size_t>((inner.flat_.back() - inner_min) / 64 + 1), 0);
    for (Coord e : inner.flat_) {
      Coord off = e - inner_min;
      inner_bits[static_cast<std::size_t>(off >> 6)] ^= std::uint64_t{1}
                                                        << (off & 63);
    }
    std::vector<std::uint64_t> acc(nwords, 0);
    for (Coord e : outer.flat_) {
      const std::size_t shift = static_cast<std::size_t>(e - outer_min);
      const std::size_t word = shift >> 6;
      const unsigned rem = static_cast<unsigned>(shift & 63);
      if (rem == 0) {
        for (std::size_t w = 0; w < inner_bits.size(); ++w)
          acc[word + w] ^= inner_bits[w];
      } else {
        for (std::size_t w = 0; w < inner_bits.size(); ++w) {
          acc[word + w] ^= inner_bits[w] << rem;
          if (word + w + 1 < acc.size())
            acc[word + w + 1] ^= inner_bits[w] >> (64 - rem);
        }
      }
    }
    const Coord lo = checked_add(amin, bmin);
    LaurentPoly r(1);
    for (std::size_t w = 0; w < nwords; ++w) {
      std::uint64_t bits = acc[w];
      while (bits) {
        unsigned tz = static_cast<unsigned>(__builtin_ctzll(bits));
        r.flat_.push_back(checked_add(lo, static_cast<Coord>(w * 64 + tz)));
        bits &= bits - 1;
      }
    }
    return r;
  }

  int dim_;
  std::vector<Coord> flat_;  // weight() sorted d-tuples, lex order
};

inline LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
inline LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }
inline LaurentPoly involute(const LaurentPoly& p) { return p.involute(); }
inline std::size_t weight(const LaurentPoly& p) { return p.weight(); }

// --- text form -------------------------------------------------------------
//
//   poly   := term ('+' term)*
//   term   := '0' | '1' | factor ('*'? factor)*
//   factor := var ('^' signed-int)?
//   var    := 'u'            (one variable)
//           | 'u1' .. 'ud'   (d > 1 variables)
//
// Whitespace is insignificant. '+' of identical terms cancels.

inline std::string format_poly(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.weight(); ++i) {
    if (i != 0) out += " + ";
    auto s = p.term_span(i);
    bool all_zero = std::all_of(s.begin(), s.end(), [](Coord c) { return c == 0; });
    if (all_zero) {
      out += '1';
      continue;
    }
    bool first = true;
    for (int v = 0; v < p.dim(); ++v) {
      Coord e = s[static_cast<std::size_t>(v)];
      if (e == 0) continue;
      if (!first) out += '*';
      first = false;
      out += 'u';
      if (p.dim() > 1) out += std::to_string(v + 1);
      if (e != 1) {
        out += '^';
        out += std::to_string(e);
      }
    }
  }
  return out;
}

inline std::string LaurentPoly::str() const { return format_poly(*this); }

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) {
  return os << format_poly(p);
}

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  LaurentPoly parse() {
    std::vector<Coord> flat;
    parse_term(flat);
    skip_ws();
    while (!eof()) {
      expect('+');
      parse_term(flat);
      skip_ws();
    }
    return LaurentPoly::from_terms(dim_, explode(flat));
  }

 private:
  std::vector<Exponent> explode(const std::vector<Coord>& flat) const {
    std::vector<Exponent> out;
    const std::size_t d = static_cast<std::size_t>(dim_);
    for (std::size_t i = 0; i + d <= flat.size(); i += d)
      out.push_back(Exponent(std::vector<Coord>(flat.begin() + i, flat.begin() + i + d)));
    return out;
  }

  void parse_term(std::vector<Coord>& flat) {
    skip_ws();
    if (eof()) throw parse_error("expected term", pos_);
    char c = s_[pos_];
    if (c == '0') {
      ++pos_;
      require_term_end();
      return;  // the zero term contributes nothing
    }
    if (c == '1') {
      ++pos_;
      require_term_end();
      flat.insert(flat.end(), static_cast<std::size_t>(dim_), 0);
      return;
    }
    std::vector<Coord> acc(static_cast<std::size_t>(dim_), 0);
    parse_factor(acc);
    while (true) {
      skip_ws();
      if (!eof() && s_[pos_] == '*') {
        ++pos_;
        skip_ws();
        parse_factor(acc);
        continue;
      }
      if (!eof() && s_[pos_] == 'u') {  // '*' between factors is optional
        parse_factor(acc);
        continue;
      }
      break;
    }
    flat.insert(flat.end(), acc.begin(), acc.end());
  }

  void parse_factor(std::vector<Coord>& acc) {
    skip_ws();
    if (eof() || s_[pos_] != 'u')
      throw parse_error("expected variable", pos_);
    ++pos_;
    int var = 0;
    if (dim_ > 1) {
      std::size_t start = pos_;
      while (!eof() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
      if (pos_ == start)
        throw parse_error("expected variable index", pos_);
      long idx = 0;
      auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, idx);
      (void)ptr;
      if (ec != std::errc{} || idx < 1 || idx > dim_)
        throw parse_error("variable index out of range", start);
      var = static_cast<int>(idx - 1);
    }
    Coord e = 1;
    skip_ws();
    if (!eof() && s_[pos_] == '^') {
      ++pos_;
      e = parse_int();
    }
    acc[static_cast<std::size_t>(var)] = checked_add(acc[static_cast<std::size_t>(var)], e);
  }

  Coord parse_int() {
    skip_ws();
    std::size_t start = pos_;
    bool negative = false;
    if (!eof() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      negative = s_[pos_] == '-';
      ++pos_;
    }
    std::size_t digits = pos_;
    while (!eof() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
    if (pos_ == digits) throw parse_error("expected integer", start);
    Coord value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + digits, s_.data() + pos_, value);
    (void)ptr;
    if (ec == std::errc::result_out_of_range)
      throw parse_error("exponent overflow", start);
    if (ec != std::errc{}) throw parse_error("expected integer", start);
    return negative ? checked_neg(value) : value;
  }

  void require_term_end() {
    skip_ws();
    if (!eof() && s_[pos_] != '+')
      throw parse_error("expected '+' or end of input", pos_);
  }

  void expect(char c) {
    if (eof() || s_[pos_] != c)
      throw parse_error(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                      s_[pos_] == '\r'))
      ++pos_;
  }
  bool eof() const { return pos_ >= s_.size(); }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline LaurentPoly parse_poly(std::string_view text, int dim) {
  return detail::PolyParser(text, dim).parse();
}

}  // namespace qca
