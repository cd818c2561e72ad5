#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "wshift/weights.hpp"

namespace wshift {

/// h and its derivatives with respect to the squared moduli x_i = |w_i|^2.
/// Since h depends on w only through x, every complex derivative follows from these.
template <typename Real>
struct MetricJet {
  Real value;
  std::vector<Real> gradient;  // dh/dx_i
  std::vector<Real> hessian;   // d^2h/dx_i dx_j, row-major
  // Bounds on the part of each series past the truncation degree.
  Real value_tail;
  Real gradient_tail;
  Real hessian_tail;
};

template <typename Real>
Real integer_power(const Real& base, unsigned exponent) {
  Real result{1};
  Real factor = base;
  while (exponent) {
    if (exponent & 1u) result *= factor;
    exponent >>= 1;
    if (exponent) factor *= factor;
  }
  return result;
}

/// Squared moduli of a point, in the working precision.
template <typename Real>
std::vector<Real> squared_moduli(const Eigen::VectorXcd& w) {
  std::vector<Real> x;
  x.reserve(static_cast<std::size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Real re{w[i].real()}, im{w[i].imag()};
    x.push_back(re * re + im * im);
  }
  return x;
}

/// Truncated power series of h(w) = sum rho(alpha) |w^alpha|^2 for one weight, with its
/// coefficients converted once into the working precision.
///
/// The radial base contributes A(t) = sum_i a(i) t^i with t = |w|^2; the finitely many
/// overrides contribute (rho - base)(alpha) x^alpha each. Construct inside the
/// PrecisionScope that later evaluations will use.
///
/// The tail estimate takes the largest ratio a(i+1)/a(i) over the last few retained degrees
/// and sums the geometric series it dominates. That is a rigorous bound whenever the ratio
/// is nonincreasing past the truncation degree (power and geometric profiles); for other
/// profiles it is an estimate.
template <typename Real>
class MetricSeries {
 public:
  static constexpr unsigned kRatioWindow = 8;

  MetricSeries(const WeightFunction& weight, unsigned eval_degree)
      : dim_(weight.dim()), degree_(eval_degree) {
    const RadialSequence& a = weight.profile();
    radial_.reserve(eval_degree + 1);
    for (unsigned i = 0; i <= eval_degree; ++i) radial_.push_back(to_real<Real>(a(i)));

    Rational best{0};
    const unsigned lo = eval_degree > kRatioWindow ? eval_degree - kRatioWindow : 0;
    if (eval_degree == 0) {
      best = a(1) / a(0);
    } else {
      for (unsigned i = lo; i < eval_degree; ++i) best = std::max(best, Rational{a(i + 1) / a(i)});
    }
    tail_ratio_ = to_real<Real>(best);

    for (const auto& [alpha, value] : weight.overrides()) {
      Rational diff = value - weight.base_rho(alpha);
      if (diff == 0) continue;
      Correction c{alpha, to_real<Real>(diff), degree(alpha)};
      (c.degree <= eval_degree ? corrections_ : tail_corrections_).push_back(std::move(c));
    }
    rho_zero_ = to_real<Real>(weight.rho(MultiIndex::zero(dim_)));
  }

  std::size_t dim() const { return dim_; }
  unsigned eval_degree() const { return degree_; }

  /// h at squared moduli x, plus its tail bound.
  std::pair<Real, Real> value(const std::vector<Real>& x) const {
    const Real t = check_inside(x);
    if (t == 0) return {rho_zero_, Real{0}};
    Real h = horner(t, 0);
    for (const auto& c : corrections_) h += c.coeff * monomial(x, c.alpha);
    Real tail = radial_tail(t, 0);
    for (const auto& c : tail_corrections_) tail += abs(c.coeff) * monomial(x, c.alpha);
    return {h, tail};
  }

  MetricJet<Real> jet(const std::vector<Real>& x) const {
    if (degree_ < 2) throw std::invalid_argument("metric jet needs evaluation degree >= 2");
    const Real t = check_inside(x);
    const std::size_t m = dim_;
    MetricJet<Real> out;
    out.value = (t == 0) ? rho_zero_ : horner(t, 0);
    const Real d1 = horner(t, 1);
    const Real d2 = horner(t, 2);
    out.gradient.assign(m, d1);
    out.hessian.assign(m * m, d2);
    if (t != 0) {
      for (const auto& c : corrections_) out.value += c.coeff * monomial(x, c.alpha);
    }
    for (const auto& c : corrections_) accumulate_derivatives(c, x, out.gradient, out.hessian, false);

    out.value_tail = radial_tail(t, 0);
    out.gradient_tail = radial_tail(t, 1);
    out.hessian_tail = radial_tail(t, 2);
    if (!tail_corrections_.empty()) {
      std::vector<Real> g(m, Real{0}), hh(m * m, Real{0});
      for (const auto& c : tail_corrections_) {
        out.value_tail += abs(c.coeff) * monomial(x, c.alpha);
        accumulate_derivatives(c, x, g, hh, true);
      }
      out.gradient_tail += *std::max_element(g.begin(), g.end());
      out.hessian_tail += *std::max_element(hh.begin(), hh.end());
    }
    return out;
  }

 private:
  struct Correction {
    MultiIndex alpha;
    Real coeff;
    unsigned degree;
  };

  static Real abs(const Real& v) { return v < 0 ? Real{-v} : v; }

  Real check_inside(const std::vector<Real>& x) const {
    if (x.size() != dim_) throw DimensionMismatch("point dimension differs from weight dimension");
    Real t{0};
    for (const auto& xi : x) t += xi;
    if (!(t < 1)) throw OutsideBall("point is not inside the unit ball");
    return t;
  }

  // k-th derivative of A(t) by Horner's rule.
  Real horner(const Real& t, unsigned k) const {
    Real acc{0};
    for (unsigned i = degree_ + 1; i-- > k;) {
      Real coeff = radial_[i];
      for (unsigned j = 0; j < k; ++j) coeff *= (i - j);
      acc = acc * t + coeff;
    }
    return acc;
  }

  // Bound on sum_{i > D} i(i-1)..(i-k+1) a(i) t^{i-k}.
  Real radial_tail(const Real& t, unsigned k) const {
    if (t == 0) return Real{0};
    const unsigned D = degree_;
    Real growth = Real{D + 2} / Real{D + 2 - k};
    Real q = tail_ratio_ * t * growth;
    if (!(q < 1)) throw UnreliableTail("series tail ratio is not below 1 at this point");
    // first omitted term, bounded through a(D+1) <= a(D) * ratio
    Real first = radial_[D] * tail_ratio_ * integer_power(t, D + 1 - k);
    for (unsigned j = 0; j < k; ++j) first *= (D + 1 - j);
    return first / (Real{1} - q);
  }

  static Real monomial(const std::vector<Real>& x, const MultiIndex& alpha) {
    Real out{1};
    for (std::size_t i = 0; i < x.size(); ++i)
      if (alpha[i]) out *= integer_power(x[i], alpha[i]);
    return out;
  }

  void accumulate_derivatives(const Correction& c, const std::vector<Real>& x,
                              std::vector<Real>& gradient, std::vector<Real>& hessian,
                              bool absolute) const {
    const std::size_t m = dim_;
    const Real coeff = absolute ? abs(c.coeff) : c.coeff;
    for (std::size_t i = 0; i < m; ++i) {
      if (c.alpha[i] == 0) continue;
      MultiIndex ai = *c.alpha.lowered(i);
      gradient[i] += coeff * Real{c.alpha[i]} * monomial(x, ai);
      for (std::size_t j = 0; j < m; ++j) {
        if (ai[j] == 0) continue;
        MultiIndex aij = *ai.lowered(j);
        hessian[i * m + j] += coeff * Real{c.alpha[i]} * Real{ai[j]} * monomial(x, aij);
      }
    }
  }

  std::size_t dim_;
  unsigned degree_;
  std::vector<Real> radial_;
  Real tail_ratio_;
  Real rho_zero_;
  std::vector<Correction> corrections_;
  std::vector<Correction> tail_corrections_;
};

}  // namespace wshift
