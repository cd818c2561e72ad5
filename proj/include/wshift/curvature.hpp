#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wshift/weights.hpp"

namespace wshift {

constexpr unsigned kDefaultEvalDegree = 600;

/// Complex Hessian H[i][j] = d^2 log h / dw_i dw̄_j at a point. The line-bundle curvature
/// coefficient matrix is -H.
struct CurvatureMatrix {
  Eigen::VectorXcd at;
  Eigen::MatrixXcd hessian;
  /// First-order estimate of the entrywise error caused by truncating the series.
  double tail_bound = 0;
  /// log h, or psi = log(h1/h2) for a difference.
  double potential = 0;

  Eigen::MatrixXcd curvature() const { return -hessian; }
};

/// Entries are formed in the working precision and rounded to double only at the end.
/// Throws OutsideBall for |w| >= 1, UnreliableTail when the series tail cannot be bounded,
/// std::invalid_argument when eval_degree < 2.
CurvatureMatrix log_metric_hessian(const WeightFunction& weight, const Eigen::VectorXcd& w,
                                   unsigned eval_degree = kDefaultEvalDegree,
                                   unsigned precision_bits = kDefaultPrecisionBits);

/// Same as log_metric_hessian at many points, sharing one series.
std::vector<CurvatureMatrix> log_metric_hessians(const WeightFunction& weight,
                                                 const std::vector<Eigen::VectorXcd>& points,
                                                 unsigned eval_degree = kDefaultEvalDegree,
                                                 unsigned precision_bits = kDefaultPrecisionBits);

/// Sign of a curvature difference. first_minus_second is the Hessian of log(h1/h2).
enum class DifferenceOrder { first_minus_second, second_minus_first };

DifferenceOrder parse_difference_order(std::string_view text);
std::string to_string(DifferenceOrder order);

/// Hessian of psi = log(h1/h2) (or its negative), with the subtraction done before rounding.
CurvatureMatrix curvature_difference(const WeightFunction& w1, const WeightFunction& w2,
                                     const Eigen::VectorXcd& w,
                                     unsigned eval_degree = kDefaultEvalDegree,
                                     unsigned precision_bits = kDefaultPrecisionBits,
                                     DifferenceOrder order = DifferenceOrder::first_minus_second);

/// True iff the smallest eigenvalue is >= -tol * max|entry|. Throws std::invalid_argument
/// if H is not Hermitian to within tol * max(1, max|entry|).
bool psd_check(const Eigen::MatrixXcd& hessian, double tol);

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& hessian);

struct GridSpec {
  unsigned steps = 10;
  unsigned angles = 8;
};

/// Parses "radial:<steps>x<angles>".
GridSpec parse_grid_spec(std::string_view text);
std::string to_string(const GridSpec& spec);

struct GridPoint {
  Eigen::VectorXcd w;
  unsigned shell = 0;
  double radius = 0;
};

/// Radii k/steps for k < steps, plus 1 - 1/(2 steps). At each nonzero radius the directions
/// are unit modulus profiles on a spherical-angle grid (angles^(m-1) of them, duplicates
/// dropped), each combined with the common phases 2 pi j / angles. Radius 0 appears once.
std::vector<GridPoint> radial_grid(std::size_t m, const GridSpec& spec);

struct PshPointRecord {
  Eigen::VectorXcd w;
  unsigned shell = 0;
  double psi = 0;
  Eigen::MatrixXcd hessian;
  Eigen::VectorXd eigenvalues;
};

struct PshShellSummary {
  double radius = 0;
  double psi_min = 0;
  double psi_max = 0;
  double eigen_min = 0;
  std::size_t points = 0;
};

struct PshReport {
  double psi_min = 0;
  double psi_max = 0;
  double eigen_min = 0;
  std::size_t argmin_psi = 0;
  std::size_t argmax_psi = 0;
  std::size_t argmin_eigen = 0;
  bool psd_on_grid = true;
  std::vector<PshShellSummary> shells;
  /// Largest |d psi_extremum / ds| between the two outermost shells, s = -log(1 - r^2).
  double boundary_slope = 0;
  double trend_threshold = 0.5;
  std::vector<PshPointRecord> points;

  bool unbounded_trend() const { return boundary_slope >= trend_threshold; }
  /// "unbounded-trend" or "bounded-on-grid".
  std::string trend() const;
};

struct PshOptions {
  unsigned eval_degree = kDefaultEvalDegree;
  unsigned precision_bits = kDefaultPrecisionBits;
  double tol = 1e-9;
  double trend_threshold = 0.5;
  DifferenceOrder order = DifferenceOrder::first_minus_second;
};

/// Evidence for boundedness and plurisubharmonicity of psi = log(h1/h2) on a grid.
PshReport psh_boundedness_report(const WeightFunction& w1, const WeightFunction& w2,
                                 const std::vector<GridPoint>& grid, const PshOptions& options = {});

/// Largest entrywise deviation between the analytic Hessian of log h and a central
/// finite-difference Hessian taken over the real and imaginary parts of each coordinate.
/// Throws OutsideBall when the stencil leaves the ball.
double finite_diff_check(const WeightFunction& weight, const Eigen::VectorXcd& w, double step,
                         unsigned eval_degree = kDefaultEvalDegree,
                         unsigned precision_bits = kDefaultPrecisionBits);

}  // namespace wshift
