#pragma once

#include <optional>
#include <string>

#include "wshift/multiindex.hpp"
#include "wshift/weights.hpp"

namespace wshift {

/// Diagonal entry <(I - M_T)^k(I) e_alpha, e_alpha> of the defect operator of the
/// backward shift tuple:
///   sum_{beta <= alpha, |beta| <= k} (-1)^{|beta|} k!/(beta!(k-|beta|)!) rho(alpha-beta)/rho(alpha).
/// Exact; may be negative.
Rational defect_diag(const WeightFunction& weight, unsigned k, const MultiIndex& alpha);

/// Same quantity for a radial weight, reduced to its profile:
///   (1/a(N)) sum_{i=0}^{min(k,N)} (-1)^i C(k,i) a(N-i).
/// Terms with N - i < 0 are dropped; they correspond to beta not below alpha.
Rational defect_diag_radial(const RadialSequence& profile, unsigned k, unsigned N);

struct DefectWitness {
  unsigned k = 0;
  MultiIndex alpha;
  Rational value;
};

/// Result of a finite scan. "no-violation" only covers the scanned indices.
struct HyperReport {
  enum class Verdict { no_violation_up_to_bound, violation };
  Verdict verdict = Verdict::no_violation_up_to_bound;
  std::optional<DefectWitness> witness;
  unsigned order = 0;
  unsigned degree_bound = 0;
  std::size_t entries_checked = 0;

  bool violated() const { return verdict == Verdict::violation; }
  /// "no-violation-up-to-D=<D>" or "violation"; always names the scan bound.
  std::string verdict_string() const;
};

/// Scans d_k(alpha) for 1 <= k <= n and |alpha| <= max_degree, in order of k and then
/// graded order of alpha, and stops at the first negative entry.
HyperReport is_n_hyper_up_to(const WeightFunction& weight, unsigned n, unsigned max_degree);

struct NecessaryCheck {
  bool holds = true;
  Rational lhs;  // sum_{beta <= alpha, |alpha - beta| = 1} rho(beta)/rho(alpha)
  Rational rhs;  // |alpha| / (|alpha| + n - 1)
};

/// Necessary condition for n-hypercontractivity at a nonzero index. Throws
/// std::domain_error for alpha = 0 or n = 0.
NecessaryCheck necessary_condition(const WeightFunction& weight, unsigned n, const MultiIndex& alpha);

/// Radial form: a(i-1)/a(i) <= i/(i+n-1). Requires i >= 1.
bool radial_necessary(const RadialSequence& profile, unsigned n, unsigned i);

/// Smallest n for which necessary_condition fails at alpha (always finite, since the
/// right side tends to 0 while the left side is fixed and positive).
unsigned subnormality_obstruction(const WeightFunction& weight, const MultiIndex& alpha);

struct GrowthDiagnostic {
  double min = 0;  // min of a(k)/k^{n-1} over the range
  double max = 0;
  unsigned argmin = 0;
  unsigned argmax = 0;
  double end_to_mid = 1;  // value at k_max over value at the midpoint of the range
  bool divergent = false;
};

/// Empirical bracketing of a(k) against k^{n-1}. Flags divergence when the value at k_max
/// and at the midpoint of the range differ by more than `factor` in either direction.
GrowthDiagnostic growth_diagnostic(const RadialSequence& profile, unsigned n, unsigned k_min,
                                   unsigned k_max, double factor = 2.0);

}  // namespace wshift
