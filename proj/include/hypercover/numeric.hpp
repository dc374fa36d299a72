#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hypercover {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Canonical "num/den" form; integers are written as "num/1".
std::string to_fraction_string(const Rational& q);

/// Accepts "num/den", a plain integer, or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);

BigInt parse_bigint(std::string_view text);

/// 2^k as an exact rational (k may be negative).
Rational pow2(long k);

/// Number of bits in the minimal binary representation of x (bits(0) == 1).
std::uint32_t bit_length(const BigInt& x);
std::uint32_t bit_length(std::uint64_t x);

/// Smallest integer k >= 0 with base^k >= x. Requires base > 1.
std::uint64_t ceil_log(const Rational& base, const Rational& x);

/// ceil(log2(x)) for x >= 1, exact.
std::uint32_t ceil_log2(std::uint64_t x);

BigInt ceil(const Rational& q);
BigInt floor(const Rational& q);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace hypercover
