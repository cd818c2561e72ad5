#include "wshift/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <mutex>

namespace wshift {

const Integer& factorial(unsigned n) {
  static std::mutex mutex;
  static std::deque<Integer> table{Integer{1}};
  std::lock_guard lock(mutex);
  while (table.size() <= n) {
    const auto k = static_cast<unsigned>(table.size());
    table.push_back(table.back() * k);
  }
  return table[n];
}

Integer binomial(long long n, unsigned k) {
  if (n < 0) {
    // C(-n, k) = (-1)^k C(n + k - 1, k)
    Integer magnitude = binomial(-n + static_cast<long long>(k) - 1, k);
    return (k % 2 == 0) ? magnitude : Integer{-magnitude};
  }
  if (static_cast<unsigned long long>(k) > static_cast<unsigned long long>(n)) return Integer{0};
  Integer result{1};
  for (unsigned i = 1; i <= k; ++i) {
    result *= static_cast<unsigned long long>(n) - k + i;
    result /= i;
  }
  return result;
}

Rational parse_rational(std::string_view text) {
  std::string s{text};
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  const auto slash = s.find('/');
  auto valid_integer = [](std::string_view part) {
    if (part.empty()) return false;
    std::size_t start = (part.front() == '-' || part.front() == '+') ? 1 : 0;
    if (start == part.size()) return false;
    for (std::size_t i = start; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string part) {
    if (!part.empty() && part.front() == '+') part.erase(part.begin());
    return part;
  };
  if (slash == std::string::npos) {
    if (!valid_integer(s)) throw std::invalid_argument("malformed rational: '" + s + "'");
    return Rational{Integer{strip_plus(s)}};
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("malformed rational: '" + s + "'");
  Integer d{den};
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  return Rational{Integer{strip_plus(num)}, d};
}

std::string to_string(const Rational& r) { return r.str(); }

namespace {
unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}
}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(HighPrecision::default_precision()) {
  HighPrecision::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { HighPrecision::default_precision(saved_digits10_); }

std::string format_sig17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace wshift
