#include "wshift/hypercontraction.hpp"

#include <algorithm>
#include <stdexcept>

namespace wshift {

Rational defect_diag(const WeightFunction& weight, unsigned k, const MultiIndex& alpha) {
  if (k < 1) throw std::domain_error("defect order must be at least 1");
  if (alpha.dim() != weight.dim()) throw DimensionMismatch("index dimension differs from weight dimension");
  const Rational rho_alpha = weight.rho(alpha);
  Rational sum{0};
  for (const auto& beta : enumerate_below(alpha, k)) {
    Rational term = Rational{multinomial(k, beta)} * weight.rho(alpha - beta);
    if (degree(beta) % 2 == 1)
      sum -= term;
    else
      sum += term;
  }
  return sum / rho_alpha;
}

Rational defect_diag_radial(const RadialSequence& profile, unsigned k, unsigned N) {
  if (k < 1) throw std::domain_error("defect order must be at least 1");
  Rational sum{0};
  for (unsigned i = 0; i <= std::min(k, N); ++i) {
    Rational term = Rational{binomial(k, i)} * profile(N - i);
    if (i % 2 == 1)
      sum -= term;
    else
      sum += term;
  }
  return sum / profile(N);
}

std::string HyperReport::verdict_string() const {
  if (verdict == Verdict::violation) return "violation";
  return "no-violation-up-to-D=" + std::to_string(degree_bound);
}

HyperReport is_n_hyper_up_to(const WeightFunction& weight, unsigned n, unsigned max_degree) {
  if (n < 1) throw std::domain_error("hypercontraction order must be at least 1");
  HyperReport report;
  report.order = n;
  report.degree_bound = max_degree;
  const auto indices = enumerate_leq_degree(weight.dim(), max_degree);
  for (unsigned k = 1; k <= n; ++k) {
    for (const auto& alpha : indices) {
      ++report.entries_checked;
      Rational d = defect_diag(weight, k, alpha);
      if (d < 0) {
        report.verdict = HyperReport::Verdict::violation;
        report.witness = DefectWitness{k, alpha, std::move(d)};
        return report;
      }
    }
  }
  return report;
}

NecessaryCheck necessary_condition(const WeightFunction& weight, unsigned n, const MultiIndex& alpha) {
  if (n < 1) throw std::domain_error("hypercontraction order must be at least 1");
  if (alpha.dim() != weight.dim()) throw DimensionMismatch("index dimension differs from weight dimension");
  if (alpha.is_zero()) throw std::domain_error("necessary condition is stated for nonzero indices");
  const Rational rho_alpha = weight.rho(alpha);
  NecessaryCheck out;
  out.lhs = 0;
  for (std::size_t j = 0; j < alpha.dim(); ++j)
    if (auto beta = alpha.lowered(j)) out.lhs += weight.rho(*beta);
  out.lhs /= rho_alpha;
  const unsigned d = degree(alpha);
  out.rhs = Rational{d, d + n - 1};
  out.holds = out.lhs <= out.rhs;
  return out;
}

bool radial_necessary(const RadialSequence& profile, unsigned n, unsigned i) {
  if (n < 1) throw std::domain_error("hypercontraction order must be at least 1");
  if (i < 1) throw std::domain_error("radial necessary condition needs i >= 1");
  return profile(i - 1) / profile(i) <= Rational{i, i + n - 1};
}

unsigned subnormality_obstruction(const WeightFunction& weight, const MultiIndex& alpha) {
  const Rational lhs = necessary_condition(weight, 1, alpha).lhs;
  const unsigned d = degree(alpha);
  // lhs > d/(d+n-1)  <=>  n > d(1 - lhs)/lhs + 1; the smallest such integer is floor(.) + 2.
  const Rational x = Rational{d} * (1 - lhs) / lhs;
  Integer fl = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
  if (x < 0 && Rational{fl} != x) fl -= 1;
  Integer n = fl + 2;
  if (n < 1) n = 1;
  return n.convert_to<unsigned>();
}

GrowthDiagnostic growth_diagnostic(const RadialSequence& profile, unsigned n, unsigned k_min,
                                   unsigned k_max, double factor) {
  if (k_min < 1 || k_max < k_min) throw std::domain_error("growth diagnostic needs 1 <= k_min <= k_max");
  if (n < 1) throw std::domain_error("growth diagnostic needs n >= 1");
  GrowthDiagnostic out;
  auto value = [&](unsigned k) {
    Rational q = profile(k) / Rational{boost::multiprecision::pow(Integer{k}, n - 1)};
    return q;
  };
  Rational lo = value(k_min), hi = lo;
  out.argmin = out.argmax = k_min;
  for (unsigned k = k_min + 1; k <= k_max; ++k) {
    Rational v = value(k);
    if (v < lo) { lo = v; out.argmin = k; }
    if (v > hi) { hi = v; out.argmax = k; }
  }
  out.min = lo.convert_to<double>();
  out.max = hi.convert_to<double>();
  const unsigned mid = k_min + (k_max - k_min) / 2;
  const Rational ratio = value(k_max) / value(mid);
  out.end_to_mid = ratio.convert_to<double>();
  out.divergent = ratio > Rational{factor} || ratio * Rational{factor} < 1;
  return out;
}

}  // namespace wshift
