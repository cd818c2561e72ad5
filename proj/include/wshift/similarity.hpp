#pragma once

#include <Eigen/Core>
#include <vector>

#include "wshift/weights.hpp"

namespace wshift {

/// Squared product of weight ratios along the ray alpha, alpha + e_i, ..., alpha + (l+1) e_i,
/// in telescoped form:
///   [rho1(alpha)/rho1(alpha + (l+1)e_i)] / [rho2(alpha)/rho2(alpha + (l+1)e_i)].
Rational ray_ratio_sq(const WeightFunction& w1, const WeightFunction& w2, const MultiIndex& alpha,
                      std::size_t direction, unsigned length);

/// The same quantity as an explicit product of l+1 squared shift-weight quotients.
/// Kept for cross-checking the telescoped form.
Rational ray_ratio_sq_product(const WeightFunction& w1, const WeightFunction& w2,
                              const MultiIndex& alpha, std::size_t direction, unsigned length);

struct RayWitness {
  MultiIndex alpha;
  std::size_t direction = 0;
  unsigned length = 0;
};

struct RatioScanReport {
  enum class Verdict { bounded_in_scan, growth_flagged };
  Rational min_ratio_sq;
  Rational max_ratio_sq;
  RayWitness argmin;
  RayWitness argmax;
  unsigned degree_bound = 0;
  unsigned length_bound = 0;
  // Spread max/min at the full length bound and at half of it.
  Rational spread;
  Rational half_spread;
  double growth_factor = 1.5;
  Verdict verdict = Verdict::bounded_in_scan;

  std::string verdict_string() const;
};

constexpr double kDefaultGrowthFactor = 1.5;

/// Extrema of ray_ratio_sq over |alpha| <= D, every direction, 0 <= l <= L. Ties keep the
/// first ray in (graded alpha, direction, length) order. Growth is flagged when the spread
/// at L reaches growth_factor times the spread at floor(L/2).
RatioScanReport similarity_scan(const WeightFunction& w1, const WeightFunction& w2, unsigned D,
                                unsigned L, double growth_factor = kDefaultGrowthFactor);

/// One row per scanned ray, for plotting: (|alpha|, direction, length, ratio).
struct RayRow {
  unsigned degree;
  std::size_t direction;
  unsigned length;
  Rational ratio_sq;
};
std::vector<RayRow> similarity_rows(const WeightFunction& w1, const WeightFunction& w2,
                                    unsigned D, unsigned L);

struct MetricRatioReport {
  double min = 0;
  double max = 0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
};

/// Extrema of h1(w)/h2(w) over the samples. Throws OutsideBall or UnreliableTail.
MetricRatioReport metric_ratio_report(const WeightFunction& w1, const WeightFunction& w2,
                                      const std::vector<Eigen::VectorXcd>& samples,
                                      unsigned eval_degree,
                                      unsigned precision_bits = kDefaultPrecisionBits);

}  // namespace wshift
