#include "wshift/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "wshift/metric.hpp"

namespace wshift {

// ---- RadialSequence ----

RadialSequence RadialSequence::list(std::vector<Rational> values) {
  if (values.empty()) throw std::invalid_argument("radial list must not be empty");
  for (const auto& v : values)
    if (v <= 0) throw std::invalid_argument("radial list entries must be positive");
  RadialSequence s;
  s.kind_ = Kind::list;
  s.values_ = std::move(values);
  return s;
}

RadialSequence RadialSequence::power(unsigned n) {
  if (n < 1) throw std::invalid_argument("power profile needs n >= 1");
  RadialSequence s;
  s.kind_ = Kind::power;
  s.order_ = n;
  return s;
}

RadialSequence RadialSequence::geometric(Rational ratio) {
  if (ratio <= 0) throw std::invalid_argument("geometric ratio must be positive");
  RadialSequence s;
  s.kind_ = Kind::geometric;
  s.ratio_ = std::move(ratio);
  return s;
}

RadialSequence RadialSequence::polynomial(std::vector<Rational> coefficients) {
  if (coefficients.empty() || coefficients.front() <= 0)
    throw std::invalid_argument("polynomial profile needs a positive constant term");
  for (const auto& c : coefficients)
    if (c < 0) throw std::invalid_argument("polynomial profile coefficients must be nonnegative");
  RadialSequence s;
  s.kind_ = Kind::polynomial;
  s.values_ = std::move(coefficients);
  return s;
}

Rational RadialSequence::operator()(unsigned i) const {
  switch (kind_) {
    case Kind::list:
      if (i >= values_.size())
        throw SequenceExhausted("radial list has no entry at index " + std::to_string(i));
      return values_[i];
    case Kind::power:
      return Rational{binomial(static_cast<long long>(order_) + i - 1, i)};
    case Kind::geometric:
      return Rational{boost::multiprecision::pow(boost::multiprecision::numerator(ratio_), i),
                      boost::multiprecision::pow(boost::multiprecision::denominator(ratio_), i)};
    case Kind::polynomial: {
      Rational acc{0};
      for (auto it = values_.rbegin(); it != values_.rend(); ++it) acc = acc * i + *it;
      return acc;
    }
  }
  throw std::logic_error("unknown radial kind");
}

std::optional<unsigned> RadialSequence::max_index() const {
  if (kind_ == Kind::list) return static_cast<unsigned>(values_.size() - 1);
  return std::nullopt;
}

// ---- WeightFunction ----

WeightFunction WeightFunction::power_kernel(unsigned n, std::size_t m) {
  if (m < 1) throw DimensionMismatch("dimension must be at least 1");
  return WeightFunction(WeightKind::power, m, RadialSequence::power(n));
}

WeightFunction WeightFunction::radial(RadialSequence profile, std::size_t m) {
  if (m < 1) throw DimensionMismatch("dimension must be at least 1");
  return WeightFunction(WeightKind::radial, m, std::move(profile));
}

WeightFunction WeightFunction::table(std::size_t m, OverrideMap entries,
                                     const WeightFunction& fallback) {
  if (fallback.kind() != WeightKind::power && fallback.kind() != WeightKind::radial)
    throw std::invalid_argument("table fallback must be a power or radial weight");
  if (fallback.dim() != m) throw DimensionMismatch("table fallback dimension differs");
  for (const auto& [alpha, value] : entries) {
    if (alpha.dim() != m) throw DimensionMismatch("table entry " + alpha.str() + " has wrong dimension");
    if (value <= 0) throw std::invalid_argument("table entry " + alpha.str() + " must be positive");
  }
  WeightFunction w(WeightKind::table, m, fallback.profile());
  w.overrides_ = std::move(entries);
  return w;
}

std::vector<unsigned> perturbed45_base_degrees(unsigned n, unsigned blocks) {
  if (n < 2) throw std::invalid_argument("perturbed construction needs n >= 2");
  std::vector<unsigned> out;
  const Integer n_pow_n = boost::multiprecision::pow(Integer{n}, n);
  for (unsigned l = 1; l <= blocks; ++l) {
    Rational bound = Rational{n_pow_n * boost::multiprecision::pow(Integer{2}, 3 * l + 1),
                              factorial(n - 1)} -
                     Rational{n};
    if (bound < Rational{n - 2}) bound = Rational{n - 2};
    // smallest integer strictly above the bound
    Integer floor_bound = boost::multiprecision::numerator(bound) /
                          boost::multiprecision::denominator(bound);
    if (bound < 0 && Rational{floor_bound} != bound) floor_bound -= 1;
    Integer candidate = floor_bound + 1;
    if (!out.empty()) {
      const Integer chained = Integer{out.back()} + 2 * (l - 1) + 1;
      if (candidate < chained) candidate = chained;
    }
    if (candidate > std::numeric_limits<unsigned>::max())
      throw std::overflow_error("perturbation base degree does not fit in an index");
    out.push_back(candidate.convert_to<unsigned>());
  }
  return out;
}

WeightFunction WeightFunction::perturbed45(unsigned n, std::size_t m, unsigned blocks) {
  if (n < 2) throw std::invalid_argument("perturbed construction needs n >= 2");
  if (m < 2) throw DimensionMismatch("perturbed construction needs m >= 2");
  if (blocks < 2) throw std::invalid_argument("perturbed construction needs at least 2 blocks");
  WeightFunction w(WeightKind::perturbed45, m, RadialSequence::power(n));
  const auto bases = perturbed45_base_degrees(n, blocks);
  for (unsigned l = 1; l <= blocks; ++l) {
    PerturbationBlock block{l, bases[l - 1], std::vector<unsigned>(2 * l - 1, 1)};
    for (unsigned k = 1; k <= l; ++k) block.divisors[k - 1] = k;
    for (unsigned k = 1; k + 1 <= l; ++k) block.divisors[2 * l - k - 1] = k;
    MultiIndex base = MultiIndex::zero(m).shifted(1, block.base_degree);
    for (unsigned offset = 1; offset <= 2 * l - 1; ++offset) {
      const unsigned divisor = block.divisors[offset - 1];
      if (divisor == 1) continue;
      MultiIndex alpha = base.shifted(0, offset);
      Rational value = w.base_rho(alpha) / divisor;
      w.overrides_.emplace(std::move(alpha), std::move(value));
    }
    w.blocks_.push_back(std::move(block));
  }
  return w;
}

Rational WeightFunction::base_rho(const MultiIndex& alpha) const {
  if (alpha.dim() != dim_) throw DimensionMismatch("index dimension differs from weight dimension");
  const unsigned d = degree(alpha);
  if (profile_.kind() == RadialSequence::Kind::power) {
    const unsigned n = profile_.power_order();
    return Rational{factorial(n + d - 1), factorial(alpha) * factorial(n - 1)};
  }
  return profile_(d) * Rational{factorial(d), factorial(alpha)};
}

Rational WeightFunction::rho(const MultiIndex& alpha) const {
  if (!overrides_.empty()) {
    if (alpha.dim() != dim_) throw DimensionMismatch("index dimension differs from weight dimension");
    if (auto it = overrides_.find(alpha); it != overrides_.end()) return it->second;
  }
  return base_rho(alpha);
}

Rational shift_weight_sq(const WeightFunction& weight, const MultiIndex& alpha,
                         std::size_t direction) {
  if (direction >= weight.dim()) throw DimensionMismatch("shift direction out of range");
  return weight.rho(alpha) / weight.rho(alpha.shifted(direction));
}

double shift_weight(const WeightFunction& weight, const MultiIndex& alpha, std::size_t direction) {
  return std::sqrt(shift_weight_sq(weight, alpha, direction).convert_to<double>());
}

MetricEvaluation eval_metric(const WeightFunction& weight, const Eigen::VectorXcd& w,
                             unsigned eval_degree, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  MetricSeries<HighPrecision> series(weight, eval_degree);
  auto [value, tail] = series.value(squared_moduli<HighPrecision>(w));
  return {value, tail};
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::power: return "power";
    case WeightKind::radial: return "radial";
    case WeightKind::table: return "table";
    case WeightKind::perturbed45: return "perturbed45";
  }
  return "unknown";
}

}  // namespace wshift
