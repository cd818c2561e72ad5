#include "wshift/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "wshift/metric.hpp"

namespace wshift {

namespace {

using HP = HighPrecision;

// Real and imaginary parts of the Hessian of log h, still in working precision.
struct WideHessian {
  std::size_t m = 0;
  std::vector<HP> re, im;
  HP log_h;
  HP tail;
};

WideHessian wide_hessian(const MetricSeries<HP>& series, const Eigen::VectorXcd& w) {
  const std::size_t m = series.dim();
  if (static_cast<std::size_t>(w.size()) != m) throw DimensionMismatch("point dimension differs from weight dimension");
  std::vector<HP> a(m), b(m), x(m);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = HP{w[i].real()};
    b[i] = HP{w[i].imag()};
    x[i] = a[i] * a[i] + b[i] * b[i];
  }
  const MetricJet<HP> jet = series.jet(x);
  const HP& h = jet.value;
  WideHessian out;
  out.m = m;
  out.re.assign(m * m, HP{0});
  out.im.assign(m * m, HP{0});
  HP g_max{0}, hh_max{0};
  for (std::size_t i = 0; i < m; ++i) {
    g_max = std::max(g_max, HP{abs(jet.gradient[i])});
    for (std::size_t j = 0; j < m; ++j) {
      const HP coeff = jet.hessian[i * m + j] / h - jet.gradient[i] * jet.gradient[j] / (h * h);
      hh_max = std::max(hh_max, HP{abs(jet.hessian[i * m + j])});
      out.re[i * m + j] = coeff * (a[i] * a[j] + b[i] * b[j]);
      out.im[i * m + j] = coeff * (a[i] * b[j] - b[i] * a[j]);
      if (i == j) out.re[i * m + j] += jet.gradient[i] / h;
    }
  }
  out.log_h = log(h);
  // Linearised effect of the truncated tails on each entry (|w_i w_j| <= 1).
  out.tail = jet.hessian_tail / h + jet.gradient_tail / h + 2 * jet.gradient_tail * g_max / (h * h) +
             jet.value_tail * (hh_max / (h * h) + 2 * g_max * g_max / (h * h * h) + g_max / (h * h));
  return out;
}

CurvatureMatrix round_to_double(const Eigen::VectorXcd& w, const std::vector<HP>& re,
                                const std::vector<HP>& im, const HP& tail, const HP& potential) {
  const auto m = w.size();
  CurvatureMatrix out;
  out.at = w;
  out.hessian.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const std::size_t k = static_cast<std::size_t>(i * m + j);
      out.hessian(i, j) = {re[k].convert_to<double>(), im[k].convert_to<double>()};
    }
  out.tail_bound = tail.convert_to<double>();
  out.potential = potential.convert_to<double>();
  return out;
}

struct WideDifference {
  std::vector<HP> re, im;
  HP psi;
  HP tail;
};

WideDifference wide_difference(const MetricSeries<HP>& s1, const MetricSeries<HP>& s2,
                               const Eigen::VectorXcd& w, DifferenceOrder order) {
  WideHessian h1 = wide_hessian(s1, w), h2 = wide_hessian(s2, w);
  if (order == DifferenceOrder::second_minus_first) std::swap(h1, h2);
  WideDifference out;
  out.re.resize(h1.re.size());
  out.im.resize(h1.im.size());
  for (std::size_t k = 0; k < h1.re.size(); ++k) {
    out.re[k] = h1.re[k] - h2.re[k];
    out.im[k] = h1.im[k] - h2.im[k];
  }
  out.psi = h1.log_h - h2.log_h;
  out.tail = h1.tail + h2.tail;
  return out;
}

}  // namespace

CurvatureMatrix log_metric_hessian(const WeightFunction& weight, const Eigen::VectorXcd& w,
                                   unsigned eval_degree, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  MetricSeries<HP> series(weight, eval_degree);
  const WideHessian wide = wide_hessian(series, w);
  return round_to_double(w, wide.re, wide.im, wide.tail, wide.log_h);
}

std::vector<CurvatureMatrix> log_metric_hessians(const WeightFunction& weight,
                                                 const std::vector<Eigen::VectorXcd>& points,
                                                 unsigned eval_degree, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  MetricSeries<HP> series(weight, eval_degree);
  std::vector<CurvatureMatrix> out;
  out.reserve(points.size());
  for (const auto& w : points) {
    const WideHessian wide = wide_hessian(series, w);
    out.push_back(round_to_double(w, wide.re, wide.im, wide.tail, wide.log_h));
  }
  return out;
}

DifferenceOrder parse_difference_order(std::string_view text) {
  if (text == "first-minus-second") return DifferenceOrder::first_minus_second;
  if (text == "second-minus-first") return DifferenceOrder::second_minus_first;
  throw std::invalid_argument("difference order must be first-minus-second or second-minus-first");
}

std::string to_string(DifferenceOrder order) {
  return order == DifferenceOrder::first_minus_second ? "first-minus-second" : "second-minus-first";
}

CurvatureMatrix curvature_difference(const WeightFunction& w1, const WeightFunction& w2,
                                     const Eigen::VectorXcd& w, unsigned eval_degree,
                                     unsigned precision_bits, DifferenceOrder order) {
  if (w1.dim() != w2.dim()) throw DimensionMismatch("weights must share a dimension");
  PrecisionScope scope(precision_bits);
  MetricSeries<HP> s1(w1, eval_degree), s2(w2, eval_degree);
  const WideDifference d = wide_difference(s1, s2, w, order);
  return round_to_double(w, d.re, d.im, d.tail, d.psi);
}

bool psd_check(const Eigen::MatrixXcd& hessian, double tol) {
  if (hessian.rows() != hessian.cols()) throw DimensionMismatch("Hessian must be square");
  if (hessian.size() == 0) return true;
  const double scale = hessian.cwiseAbs().maxCoeff();
  const double asymmetry = (hessian - hessian.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > tol * std::max(1.0, scale))
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  return hermitian_eigenvalues(hessian)(0) >= -tol * scale;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& hessian) {
  const Eigen::MatrixXcd symmetric = (hessian + hessian.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

GridSpec parse_grid_spec(std::string_view text) {
  constexpr std::string_view prefix = "radial:";
  const auto fail = [&] {
    return std::invalid_argument("grid must look like radial:<steps>x<angles>, got '" + std::string(text) + "'");
  };
  if (text.substr(0, prefix.size()) != prefix) throw fail();
  const std::string_view body = text.substr(prefix.size());
  const auto x = body.find('x');
  if (x == std::string_view::npos) throw fail();
  const auto parse = [&](std::string_view digits) {
    if (digits.empty() || digits.size() > 6 || digits.find_first_not_of("0123456789") != std::string_view::npos)
      throw fail();
    return static_cast<unsigned>(std::stoul(std::string(digits)));
  };
  GridSpec spec{parse(body.substr(0, x)), parse(body.substr(x + 1))};
  if (spec.steps < 1 || spec.angles < 1) throw fail();
  return spec;
}

std::string to_string(const GridSpec& spec) {
  return "radial:" + std::to_string(spec.steps) + "x" + std::to_string(spec.angles);
}

namespace {

// Unit vectors with nonnegative entries: c_1 = cos p_1, c_2 = sin p_1 cos p_2, ...,
// angles p_k on an even grid over [0, pi/2].
std::vector<Eigen::VectorXd> modulus_profiles(std::size_t m, unsigned angles) {
  std::vector<double> grid;
  if (angles == 1) {
    grid.push_back(std::numbers::pi / 4);
  } else {
    for (unsigned k = 0; k < angles; ++k) grid.push_back(std::numbers::pi / 2 * k / (angles - 1));
  }
  std::vector<Eigen::VectorXd> out;
  std::vector<unsigned> counter(m > 0 ? m - 1 : 0, 0);
  while (true) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(m));
    double carry = 1;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      c[static_cast<Eigen::Index>(i)] = carry * std::cos(grid[counter[i]]);
      carry *= std::sin(grid[counter[i]]);
    }
    c[static_cast<Eigen::Index>(m - 1)] = carry;
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (std::abs(c[i]) < 1e-15) c[i] = 0;
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const Eigen::VectorXd& v) { return (v - c).cwiseAbs().maxCoeff() < 1e-12; });
    if (!duplicate) out.push_back(c);
    std::size_t pos = 0;
    while (pos < counter.size() && ++counter[pos] == grid.size()) counter[pos++] = 0;
    if (pos == counter.size()) break;
  }
  return out;
}

}  // namespace

std::vector<GridPoint> radial_grid(std::size_t m, const GridSpec& spec) {
  if (m < 1) throw DimensionMismatch("grid dimension must be at least 1");
  std::vector<double> radii;
  for (unsigned k = 0; k < spec.steps; ++k) radii.push_back(static_cast<double>(k) / spec.steps);
  radii.push_back(1.0 - 1.0 / (2.0 * spec.steps));

  const auto profiles = modulus_profiles(m, spec.angles);
  std::vector<GridPoint> out;
  for (unsigned shell = 0; shell < radii.size(); ++shell) {
    const double r = radii[shell];
    if (r == 0) {
      out.push_back({Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m)), shell, 0.0});
      continue;
    }
    for (const auto& c : profiles) {
      for (unsigned j = 0; j < spec.angles; ++j) {
        const std::complex<double> phase = std::polar(1.0, 2 * std::numbers::pi * j / spec.angles);
        Eigen::VectorXcd w = (r * c).cast<std::complex<double>>() * phase;
        out.push_back({std::move(w), shell, r});
      }
    }
  }
  return out;
}

std::string PshReport::trend() const { return unbounded_trend() ? "unbounded-trend" : "bounded-on-grid"; }

PshReport psh_boundedness_report(const WeightFunction& w1, const WeightFunction& w2,
                                 const std::vector<GridPoint>& grid, const PshOptions& options) {
  if (w1.dim() != w2.dim()) throw DimensionMismatch("weights must share a dimension");
  if (grid.empty()) throw std::invalid_argument("grid must not be empty");
  PrecisionScope scope(options.precision_bits);
  MetricSeries<HP> s1(w1, options.eval_degree), s2(w2, options.eval_degree);

  PshReport report;
  report.trend_threshold = options.trend_threshold;
  std::map<unsigned, PshShellSummary> shells;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const GridPoint& p = grid[k];
    const WideDifference d = wide_difference(s1, s2, p.w, options.order);
    const CurvatureMatrix H = round_to_double(p.w, d.re, d.im, d.tail, d.psi);
    PshPointRecord rec{p.w, p.shell, d.psi.convert_to<double>(), H.hessian, hermitian_eigenvalues(H.hessian)};
    const double eig = rec.eigenvalues.size() ? rec.eigenvalues(0) : 0.0;
    if (!psd_check(H.hessian, options.tol)) report.psd_on_grid = false;

    if (k == 0 || rec.psi < report.psi_min) { report.psi_min = rec.psi; report.argmin_psi = k; }
    if (k == 0 || rec.psi > report.psi_max) { report.psi_max = rec.psi; report.argmax_psi = k; }
    if (k == 0 || eig < report.eigen_min) { report.eigen_min = eig; report.argmin_eigen = k; }

    auto [it, fresh] = shells.try_emplace(p.shell);
    PshShellSummary& s = it->second;
    if (fresh) {
      s = {p.radius, rec.psi, rec.psi, eig, 0};
    } else {
      s.psi_min = std::min(s.psi_min, rec.psi);
      s.psi_max = std::max(s.psi_max, rec.psi);
      s.eigen_min = std::min(s.eigen_min, eig);
    }
    ++s.points;
    report.points.push_back(std::move(rec));
  }
  for (auto& [shell, summary] : shells) report.shells.push_back(summary);

  if (report.shells.size() >= 2) {
    const auto& outer = report.shells.back();
    const auto& inner = report.shells[report.shells.size() - 2];
    const double ds = std::log1p(-inner.radius * inner.radius) - std::log1p(-outer.radius * outer.radius);
    if (ds > 0) {
      report.boundary_slope = std::max(std::abs(outer.psi_min - inner.psi_min),
                                       std::abs(outer.psi_max - inner.psi_max)) / ds;
    }
  }
  return report;
}

double finite_diff_check(const WeightFunction& weight, const Eigen::VectorXcd& w, double step,
                         unsigned eval_degree, unsigned precision_bits) {
  if (!(step > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const CurvatureMatrix analytic = log_metric_hessian(weight, w, eval_degree, precision_bits);

  PrecisionScope scope(precision_bits);
  MetricSeries<HP> series(weight, eval_degree);
  const std::size_t m = weight.dim();
  if (static_cast<std::size_t>(w.size()) != m) throw DimensionMismatch("point dimension differs from weight dimension");
  // Real coordinates: Re w_1..Re w_m, Im w_1..Im w_m.
  std::vector<HP> base(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    base[i] = HP{w[static_cast<Eigen::Index>(i)].real()};
    base[m + i] = HP{w[static_cast<Eigen::Index>(i)].imag()};
  }
  const HP h{step};
  auto log_h = [&](std::size_t a, int sa, std::size_t b, int sb) {
    std::vector<HP> p = base;
    p[a] += sa * h;
    p[b] += sb * h;
    std::vector<HP> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = p[i] * p[i] + p[m + i] * p[m + i];
    return HP{log(series.value(x).first)};
  };
  const HP centre = log_h(0, 0, 0, 0);
  std::vector<HP> second(4 * m * m);
  for (std::size_t a = 0; a < 2 * m; ++a) {
    for (std::size_t b = a; b < 2 * m; ++b) {
      HP v;
      if (a == b) {
        v = (log_h(a, 1, a, 0) - 2 * centre + log_h(a, -1, a, 0)) / (h * h);
      } else {
        v = (log_h(a, 1, b, 1) - log_h(a, 1, b, -1) - log_h(a, -1, b, 1) + log_h(a, -1, b, -1)) / (4 * h * h);
      }
      second[a * 2 * m + b] = v;
      second[b * 2 * m + a] = v;
    }
  }
  double deviation = 0;
  const std::size_t n2 = 2 * m;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const HP re = (second[i * n2 + j] + second[(m + i) * n2 + (m + j)]) / 4;
      const HP im = (second[i * n2 + (m + j)] - second[(m + i) * n2 + j]) / 4;
      const std::complex<double> fd{re.convert_to<double>(), im.convert_to<double>()};
      deviation = std::max(deviation, std::abs(fd - analytic.hessian(static_cast<Eigen::Index>(i),
                                                                     static_cast<Eigen::Index>(j))));
    }
  }
  return deviation;
}

}  // namespace wshift
