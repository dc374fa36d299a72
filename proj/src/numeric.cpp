#include "hypercover/numeric.hpp"

#include <cctype>
#include <string>

#include "hypercover/errors.hpp"

namespace hypercover {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigInt parse_bigint(std::string_view text) {
  std::string_view s = trim(text);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (!all_digits(digits)) {
    throw Error(ErrorCode::BadInput, "not an integer: '" + std::string(text) + "'");
  }
  std::string normalized(s.front() == '+' ? s.substr(1) : s);
  return BigInt(normalized, 10);
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(s.substr(0, slash));
    BigInt den = parse_bigint(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::BadInput, "zero denominator: '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const BigInt ex = parse_bigint(s.substr(e + 1));
    if (!ex.fits_slong_p() || abs(ex) > 4096) {
      throw Error(ErrorCode::BadInput, "exponent out of range: '" + std::string(text) + "'");
    }
    exponent = ex.get_si();
    s = s.substr(0, e);
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw Error(ErrorCode::BadInput, "not a number: '" + std::string(text) + "'");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  BigInt num(digits, 10);
  exponent -= static_cast<long>(frac_part.size());
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(num, scale) : Rational(num * scale, 1);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational pow2(long k) {
  BigInt p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k < 0 ? -k : k));
  return k < 0 ? Rational(BigInt(1), p) : Rational(p);
}

std::uint32_t bit_length(const BigInt& x) {
  if (x == 0) return 1;
  return static_cast<std::uint32_t>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

std::uint32_t bit_length(std::uint64_t x) {
  std::uint32_t bits = 1;
  while (x >>= 1) ++bits;
  return bits;
}

std::uint64_t ceil_log(const Rational& base, const Rational& x) {
  if (base <= 1) throw Error(ErrorCode::BadInput, "ceil_log needs base > 1");
  std::uint64_t k = 0;
  Rational power = 1;
  while (power < x) {
    power *= base;
    ++k;
  }
  return k;
}

std::uint32_t ceil_log2(std::uint64_t x) {
  std::uint32_t k = 0;
  while (k < 64 && (std::uint64_t{1} << k) < x) ++k;
  return k;
}

BigInt ceil(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt floor(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace hypercover
