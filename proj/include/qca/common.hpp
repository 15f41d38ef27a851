#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qca {

// Lattice offsets and monomial exponents. All exponent arithmetic is
// checked: overflow throws instead of wrapping.
using Coord = std::int64_t;

// Thrown by the text parsers; position() is a 0-based byte offset into the
// offending input.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) +
                           ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Thrown when a request exceeds a configured cost cap (dense windows,
// kernel windows, enumeration bounds).
class cost_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Coord checked_add(Coord a, Coord b) {
  Coord r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("exponent overflow in addition");
  return r;
}

inline Coord checked_neg(Coord a) {
  Coord r;
  if (__builtin_sub_overflow(Coord{0}, a, &r))
    throw std::overflow_error("exponent overflow in negation");
  return r;
}

inline Coord checked_mul(Coord a, Coord b) {
  Coord r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("exponent overflow in multiplication");
  return r;
}

}  // namespace qca
