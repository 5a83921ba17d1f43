#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace homdist {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an operation refuses an input that exceeds its configured
/// desk-scale size limit. A refusal is not a wrong answer.
class size_limit_error : public std::runtime_error {
 public:
  explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic splitmix64 generator. std:: distributions are
/// implementation-defined, so bounded draws are derived here directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  /// Bernoulli draw with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("Rng::chance: zero denominator");
    return next() % den < num;
  }

 private:
  std::uint64_t state_;
};

/// Exact decimal-or-fraction string to rational ("3/4", "-0.25", "1e-3").
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw parse_error("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw parse_error("zero denominator in rational literal: " + s);
    return Rational(num, den);
  }
  std::string mantissa = s;
  long long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mantissa = s.substr(0, epos);
    exp10 = std::stoll(s.substr(epos + 1));
  }
  auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  if (mantissa.empty() || mantissa == "-" || mantissa == "+")
    throw parse_error("malformed rational literal: " + s);
  // strip leading zeros: cpp_int would read them as an octal prefix
  bool negative = mantissa[0] == '-';
  std::string digits = mantissa.substr(mantissa[0] == '-' || mantissa[0] == '+' ? 1 : 0);
  if (digits.find_first_not_of("0123456789") != std::string::npos)
    throw parse_error("malformed rational literal: " + s);
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  if (digits.empty()) digits = "0";
  Rational r{Integer((negative ? "-" : "") + digits)};
  for (long long i = 0; i < exp10; ++i) r *= 10;
  for (long long i = 0; i > exp10; --i) r /= 10;
  return r;
}

}  // namespace homdist
