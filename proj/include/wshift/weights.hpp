#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wshift/multiindex.hpp"
#include "wshift/numeric.hpp"

namespace wshift {

/// Radial profile a(i) > 0. A radial weight is rho(alpha) = a(|alpha|) |alpha|!/alpha!,
/// which makes the kernel sum_i a(i) <z, w>^i.
class RadialSequence {
 public:
  enum class Kind { list, power, geometric, polynomial };

  /// Explicit values a(0..size-1); evaluation past the end throws SequenceExhausted.
  static RadialSequence list(std::vector<Rational> values);
  /// a(i) = C(n + i - 1, i), the profile of (1 - <z,w>)^{-n}.
  static RadialSequence power(unsigned n);
  /// a(i) = r^i.
  static RadialSequence geometric(Rational ratio);
  /// a(i) = sum_k c_k i^k. Coefficients must be nonnegative with c_0 > 0.
  static RadialSequence polynomial(std::vector<Rational> coefficients);

  Rational operator()(unsigned i) const;

  Kind kind() const { return kind_; }
  /// Largest index that can be evaluated, when bounded.
  std::optional<unsigned> max_index() const;

  unsigned power_order() const { return order_; }
  const Rational& ratio() const { return ratio_; }
  const std::vector<Rational>& values() const { return values_; }

 private:
  RadialSequence() = default;

  Kind kind_ = Kind::power;
  unsigned order_ = 1;
  Rational ratio_{1};
  std::vector<Rational> values_;  // list entries or polynomial coefficients
};

enum class WeightKind { power, radial, table, perturbed45 };

/// One block of the constructed non-hypercontractive perturbation. The base point is
/// base_degree * e_2 and `divisors[k-1]` divides rho_n at base + k e_1, k = 1 .. 2 block - 1.
struct PerturbationBlock {
  unsigned block = 0;
  unsigned base_degree = 0;
  std::vector<unsigned> divisors;
};

/// Strictly positive weight map rho on Z_+^m: a radial base profile plus finitely many
/// exact overrides. All four supported kinds fit this shape.
class WeightFunction {
 public:
  using OverrideMap = std::map<MultiIndex, Rational, GradedLess>;

  /// rho_n(alpha) = (n + |alpha| - 1)! / (alpha! (n - 1)!).
  static WeightFunction power_kernel(unsigned n, std::size_t m);
  static WeightFunction radial(RadialSequence profile, std::size_t m);
  /// Explicit values at finitely many indices; everything else comes from `fallback`,
  /// which must itself be a power or radial weight of the same dimension.
  static WeightFunction table(std::size_t m, OverrideMap entries, const WeightFunction& fallback);
  /// rho_n divided by k at base_l + k e_1 (1 <= k <= l) and at base_l + (2l - k) e_1
  /// (1 <= k <= l - 1), for blocks l = 1 .. blocks with base_l on the e_2 axis.
  static WeightFunction perturbed45(unsigned n, std::size_t m, unsigned blocks);

  WeightKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  Rational rho(const MultiIndex& alpha) const;
  /// Value of the radial base profile alone, ignoring overrides.
  Rational base_rho(const MultiIndex& alpha) const;

  const RadialSequence& profile() const { return profile_; }
  const OverrideMap& overrides() const { return overrides_; }

  /// n for power and perturbed kernels.
  unsigned order() const { return profile_.power_order(); }
  unsigned block_count() const { return static_cast<unsigned>(blocks_.size()); }
  const std::vector<PerturbationBlock>& perturbation_blocks() const { return blocks_; }

  /// Largest degree at which rho can be evaluated, when the radial profile is an explicit list.
  std::optional<unsigned> max_degree() const { return profile_.max_index(); }

  bool is_radial() const { return overrides_.empty(); }

 private:
  WeightFunction(WeightKind kind, std::size_t dim, RadialSequence profile)
      : kind_(kind), dim_(dim), profile_(std::move(profile)) {}

  WeightKind kind_;
  std::size_t dim_;
  RadialSequence profile_;
  OverrideMap overrides_;
  std::vector<PerturbationBlock> blocks_;
};

/// Smallest admissible base degrees b_1 < b_2 < ... for the perturbed construction:
/// b_l > max(n^n 2^{3l+1}/(n-1)! - n, n - 2) and b_l + 2l < b_{l+1}.
std::vector<unsigned> perturbed45_base_degrees(unsigned n, unsigned blocks);

/// Squared forward shift weight rho(alpha) / rho(alpha + e_i).
Rational shift_weight_sq(const WeightFunction& weight, const MultiIndex& alpha,
                         std::size_t direction);

/// Display-only square root of shift_weight_sq.
double shift_weight(const WeightFunction& weight, const MultiIndex& alpha, std::size_t direction);

/// Value of h(w) = sum_{|alpha| <= eval_degree} rho(alpha) |w^alpha|^2 and a bound on the
/// omitted tail.
struct MetricEvaluation {
  HighPrecision value;
  HighPrecision tail_bound;
};

/// Throws OutsideBall for |w| >= 1 and UnreliableTail when the tail ratio reaches 1.
MetricEvaluation eval_metric(const WeightFunction& weight, const Eigen::VectorXcd& w,
                             unsigned eval_degree, unsigned precision_bits = kDefaultPrecisionBits);

std::string to_string(WeightKind kind);

}  // namespace wshift
