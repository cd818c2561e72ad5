#include "wshift/similarity.hpp"

#include <stdexcept>

#include "wshift/metric.hpp"

namespace wshift {

namespace {

void check_pair(const WeightFunction& w1, const WeightFunction& w2, const MultiIndex& alpha,
                std::size_t direction) {
  if (w1.dim() != w2.dim() || alpha.dim() != w1.dim())
    throw DimensionMismatch("weights and index must share a dimension");
  if (direction >= w1.dim()) throw DimensionMismatch("ray direction out of range");
}

}  // namespace

Rational ray_ratio_sq(const WeightFunction& w1, const WeightFunction& w2, const MultiIndex& alpha,
                      std::size_t direction, unsigned length) {
  check_pair(w1, w2, alpha, direction);
  const MultiIndex end = alpha.shifted(direction, length + 1);
  return (w1.rho(alpha) * w2.rho(end)) / (w1.rho(end) * w2.rho(alpha));
}

Rational ray_ratio_sq_product(const WeightFunction& w1, const WeightFunction& w2,
                              const MultiIndex& alpha, std::size_t direction, unsigned length) {
  check_pair(w1, w2, alpha, direction);
  Rational product{1};
  MultiIndex step = alpha;
  for (unsigned k = 0; k <= length; ++k) {
    product *= shift_weight_sq(w1, step, direction) / shift_weight_sq(w2, step, direction);
    step = step.shifted(direction);
  }
  return product;
}

std::string RatioScanReport::verdict_string() const {
  return verdict == Verdict::growth_flagged ? "growth-flagged" : "bounded-in-scan";
}

namespace {

struct Extrema {
  bool seen = false;
  Rational min, max;
  RayWitness argmin, argmax;

  void offer(const Rational& r, const MultiIndex& alpha, std::size_t i, unsigned l) {
    if (!seen || r < min) { min = r; argmin = {alpha, i, l}; }
    if (!seen || r > max) { max = r; argmax = {alpha, i, l}; }
    seen = true;
  }
};

}  // namespace

RatioScanReport similarity_scan(const WeightFunction& w1, const WeightFunction& w2, unsigned D,
                                unsigned L, double growth_factor) {
  if (w1.dim() != w2.dim()) throw DimensionMismatch("weights must share a dimension");
  if (!(growth_factor > 1)) throw std::invalid_argument("growth factor must exceed 1");
  const std::size_t m = w1.dim();
  const unsigned half = L / 2;
  Extrema full, partial;
  for (const auto& alpha : enumerate_leq_degree(m, D)) {
    const Rational r1 = w1.rho(alpha), r2 = w2.rho(alpha);
    for (std::size_t i = 0; i < m; ++i) {
      MultiIndex end = alpha;
      for (unsigned l = 0; l <= L; ++l) {
        end = end.shifted(i);
        const Rational r = (r1 * w2.rho(end)) / (w1.rho(end) * r2);
        full.offer(r, alpha, i, l);
        if (l <= half) partial.offer(r, alpha, i, l);
      }
    }
  }
  RatioScanReport report;
  report.degree_bound = D;
  report.length_bound = L;
  report.growth_factor = growth_factor;
  report.min_ratio_sq = full.min;
  report.max_ratio_sq = full.max;
  report.argmin = full.argmin;
  report.argmax = full.argmax;
  report.spread = full.max / full.min;
  report.half_spread = partial.max / partial.min;
  if (L > 0 && report.spread >= Rational{growth_factor} * report.half_spread)
    report.verdict = RatioScanReport::Verdict::growth_flagged;
  return report;
}

std::vector<RayRow> similarity_rows(const WeightFunction& w1, const WeightFunction& w2,
                                    unsigned D, unsigned L) {
  std::vector<RayRow> rows;
  for (const auto& alpha : enumerate_leq_degree(w1.dim(), D))
    for (std::size_t i = 0; i < w1.dim(); ++i)
      for (unsigned l = 0; l <= L; ++l)
        rows.push_back({degree(alpha), i, l, ray_ratio_sq(w1, w2, alpha, i, l)});
  return rows;
}

MetricRatioReport metric_ratio_report(const WeightFunction& w1, const WeightFunction& w2,
                                      const std::vector<Eigen::VectorXcd>& samples,
                                      unsigned eval_degree, unsigned precision_bits) {
  if (w1.dim() != w2.dim()) throw DimensionMismatch("weights must share a dimension");
  if (samples.empty()) throw std::invalid_argument("metric ratio needs at least one sample");
  PrecisionScope scope(precision_bits);
  MetricSeries<HighPrecision> s1(w1, eval_degree), s2(w2, eval_degree);
  MetricRatioReport out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto x = squared_moduli<HighPrecision>(samples[k]);
    const HighPrecision q = s1.value(x).first / s2.value(x).first;
    const double v = q.convert_to<double>();
    if (k == 0 || v < out.min) { out.min = v; out.argmin = k; }
    if (k == 0 || v > out.max) { out.max = v; out.argmax = k; }
  }
  return out;
}

}  // namespace wshift
