#include "wshift/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "wshift/hypercontraction.hpp"
#include "wshift/metric.hpp"
#include "wshift/similarity.hpp"
#include "wshift/truncation.hpp"
#include "wshift/weights_json.hpp"

namespace wshift::cli {

namespace {

using ojson = nlohmann::ordered_json;

ojson complex_json(std::complex<double> z) { return ojson::array({z.real(), z.imag()}); }

ojson point_json(const Eigen::VectorXcd& w) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < w.size(); ++i) out.push_back(complex_json(w[i]));
  return out;
}

ojson matrix_json(const Eigen::MatrixXcd& H) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < H.cols(); ++j) row.push_back(complex_json(H(i, j)));
    out.push_back(row);
  }
  return out;
}

ojson vector_json(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ojson ray_json(const RayWitness& r) {
  return ojson{{"alpha", to_json(r.alpha)}, {"direction", r.direction + 1}, {"length", r.length}};
}

ojson header(const std::string& command) {
  return ojson{{"schema_version", kSchemaVersion}, {"command", command}};
}

std::string csv_number(double v) { return format_sig17(v); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const ojson& value, const std::string& prefix, std::ostringstream& out) {
  if (value.is_object()) {
    for (const auto& [key, inner] : value.items())
      flatten(inner, prefix.empty() ? key : prefix + "." + key, out);
    return;
  }
  std::string rendered;
  if (value.is_string())
    rendered = value.get<std::string>();
  else if (value.is_number_float())
    rendered = csv_number(value.get<double>());
  else
    rendered = value.dump();
  out << csv_quote(prefix) << ',' << csv_quote(rendered) << '\n';
}

// key,value rows for commands without a natural table.
std::string summary_csv(const ojson& report) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(report, "", out);
  return out.str();
}

MultiIndex parse_alpha(std::string text, std::size_t m) {
  if (!text.empty() && text.front() == '[') text.erase(0, 1);
  if (!text.empty() && text.back() == ']') text.pop_back();
  std::vector<unsigned> entries;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto first = part.find_first_not_of(' ');
    const auto last = part.find_last_not_of(' ');
    if (first == std::string::npos) throw std::invalid_argument("empty entry in --alpha");
    part = part.substr(first, last - first + 1);
    if (part.find_first_not_of("0123456789") != std::string::npos || part.size() > 9)
      throw std::invalid_argument("--alpha entries must be nonnegative integers");
    entries.push_back(static_cast<unsigned>(std::stoul(part)));
  }
  if (entries.size() != m)
    throw DimensionMismatch("--alpha has " + std::to_string(entries.size()) + " entries, weight has m=" +
                            std::to_string(m));
  return MultiIndex(std::move(entries));
}

struct Result {
  ojson report;
  std::string csv;  // empty: fall back to key,value rows
};

struct Config {
  std::vector<std::string> weights;
  unsigned n = 2;
  unsigned degree = 20;
  unsigned ray_length = 8;
  std::string grid = "radial:10x8";
  unsigned eval_degree = kDefaultEvalDegree;
  unsigned precision_bits = kDefaultPrecisionBits;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";

  IdentitySuiteBounds identity;
  std::string alpha;
  double growth_factor = kDefaultGrowthFactor;
  std::string order = "first-minus-second";
  double trend_threshold = 0.5;
  unsigned m = 2;
  unsigned blocks = 2;
};

std::vector<WeightFunction> load_weights(const Config& c, std::size_t min, std::size_t max) {
  if (c.weights.size() < min || c.weights.size() > max)
    throw std::invalid_argument("expected " + std::to_string(min) + (min == max ? "" : "-" + std::to_string(max)) +
                                " --weights file(s), got " + std::to_string(c.weights.size()));
  std::vector<WeightFunction> out;
  for (const auto& path : c.weights) out.push_back(load_weight_file(path));
  if (out.size() == 2 && out[0].dim() != out[1].dim())
    throw DimensionMismatch("the two weights have different dimensions");
  return out;
}

// ---- subcommands ----

Result run_verify_identities(const Config& c) {
  const IdentitySuiteResult r = verify_identity_suite(c.identity);
  ojson rep = header("verify-identities");
  rep["bounds"] = {{"beta_degree_max", c.identity.beta_degree_max},
                   {"dim_max", c.identity.dim_max},
                   {"convolution_n_max", c.identity.convolution_n_max},
                   {"alternating_n_max", c.identity.alternating_n_max},
                   {"multinomial_k_max", c.identity.multinomial_k_max}};
  rep["checks"] = {{"vandermonde", r.vandermonde_checks},
                   {"binomial_convolution", r.convolution_checks},
                   {"alternating_sum", r.alternating_checks},
                   {"multinomial", r.multinomial_checks}};
  rep["verdict"] = r.failure ? "identity-failed" : "all-identities-hold";
  if (r.failure) rep["witness"] = {{"identity", r.failure->identity}, {"arguments", r.failure->arguments}};
  return {rep, ""};
}

Result run_check_hyper(const Config& c) {
  const auto weights = load_weights(c, 1, 1);
  const HyperReport r = is_n_hyper_up_to(weights[0], c.n, c.degree);
  ojson rep = header("check-hyper");
  rep["weight"] = weight_to_json(weights[0]);
  rep["n"] = c.n;
  rep["degree"] = c.degree;
  rep["entries_checked"] = r.entries_checked;
  rep["verdict"] = r.verdict_string();
  if (r.witness) {
    rep["witness"] = {{"k", r.witness->k},
                      {"alpha", to_json(r.witness->alpha)},
                      {"defect", to_string(r.witness->value)},
                      {"defect_approx", r.witness->value.convert_to<double>()}};
  }
  return {rep, ""};
}

ojson necessary_json(const MultiIndex& alpha, const NecessaryCheck& check) {
  return {{"alpha", to_json(alpha)},
          {"lhs", to_string(check.lhs)},
          {"rhs", to_string(check.rhs)},
          {"holds", check.holds}};
}

Result run_necessary(const Config& c) {
  const auto weights = load_weights(c, 1, 1);
  const WeightFunction& W = weights[0];
  ojson rep = header("necessary");
  rep["weight"] = weight_to_json(W);
  rep["n"] = c.n;
  std::ostringstream csv;
  csv << "degree,alpha,lhs,rhs,holds\n";
  if (!c.alpha.empty()) {
    const MultiIndex alpha = parse_alpha(c.alpha, W.dim());
    const NecessaryCheck check = necessary_condition(W, c.n, alpha);
    rep["check"] = necessary_json(alpha, check);
    csv << degree(alpha) << ',' << csv_quote(alpha.str()) << ',' << to_string(check.lhs) << ','
        << to_string(check.rhs) << ',' << (check.holds ? "true" : "false") << '\n';
    if (!check.holds) {
      ojson witness = necessary_json(alpha, check);
      witness["obstruction_n"] = subnormality_obstruction(W, alpha);
      rep["witness"] = witness;
    }
    return {rep, csv.str()};
  }
  rep["degree"] = c.degree;
  std::size_t checked = 0, violations = 0;
  for (const auto& alpha : enumerate_leq_degree(W.dim(), c.degree)) {
    if (alpha.is_zero()) continue;
    const NecessaryCheck check = necessary_condition(W, c.n, alpha);
    ++checked;
    csv << degree(alpha) << ',' << csv_quote(alpha.str()) << ',' << to_string(check.lhs) << ','
        << to_string(check.rhs) << ',' << (check.holds ? "true" : "false") << '\n';
    if (check.holds) continue;
    if (violations++ == 0) {
      ojson witness = necessary_json(alpha, check);
      witness["obstruction_n"] = subnormality_obstruction(W, alpha);
      rep["witness"] = witness;
    }
  }
  rep["indices_checked"] = checked;
  rep["violations"] = violations;
  rep["verdict"] = violations ? "violation" : "no-violation-up-to-D=" + std::to_string(c.degree);
  // keep the witness last for readability
  if (rep.contains("witness")) {
    ojson w = rep["witness"];
    rep.erase("witness");
    rep["witness"] = w;
  }
  return {rep, csv.str()};
}

Result run_similarity_scan(const Config& c) {
  const auto weights = load_weights(c, 2, 2);
  const RatioScanReport r = similarity_scan(weights[0], weights[1], c.degree, c.ray_length, c.growth_factor);
  ojson rep = header("similarity-scan");
  rep["weights"] = ojson::array({weight_to_json(weights[0]), weight_to_json(weights[1])});
  rep["degree"] = r.degree_bound;
  rep["ray_length"] = r.length_bound;
  rep["min_ratio_sq"] = to_string(r.min_ratio_sq);
  rep["max_ratio_sq"] = to_string(r.max_ratio_sq);
  rep["argmin"] = ray_json(r.argmin);
  rep["argmax"] = ray_json(r.argmax);
  rep["spread"] = to_string(r.spread);
  rep["half_length_spread"] = to_string(r.half_spread);
  rep["growth_factor"] = r.growth_factor;
  rep["verdict"] = r.verdict_string();
  if (r.verdict == RatioScanReport::Verdict::growth_flagged) {
    ojson witness = ray_json(r.argmax);
    witness["ratio_sq"] = to_string(r.max_ratio_sq);
    rep["witness"] = witness;
  }
  std::string csv;
  if (c.format == "csv") {
    std::ostringstream out;
    out << "degree,alpha,direction,length,ratio_sq,ratio_sq_approx\n";
    for (const auto& alpha : enumerate_leq_degree(weights[0].dim(), c.degree))
      for (std::size_t i = 0; i < weights[0].dim(); ++i)
        for (unsigned l = 0; l <= c.ray_length; ++l) {
          const Rational q = ray_ratio_sq(weights[0], weights[1], alpha, i, l);
          out << degree(alpha) << ',' << csv_quote(alpha.str()) << ',' << i + 1 << ',' << l << ','
              << to_string(q) << ',' << csv_number(q.convert_to<double>()) << '\n';
        }
    csv = out.str();
  }
  return {rep, csv};
}

std::string point_csv_header(std::size_t m) {
  std::ostringstream out;
  out << "shell,radius";
  for (std::size_t i = 1; i <= m; ++i) out << ",re_w" << i << ",im_w" << i;
  out << ",potential";
  for (std::size_t i = 1; i <= m; ++i) out << ",eigenvalue" << i;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) out << ",re_h" << i << j << ",im_h" << i << j;
  out << '\n';
  return out.str();
}

void point_csv_row(std::ostringstream& out, unsigned shell, double radius, const Eigen::VectorXcd& w,
                   double potential, const Eigen::VectorXd& eig, const Eigen::MatrixXcd& H) {
  out << shell << ',' << csv_number(radius);
  for (Eigen::Index i = 0; i < w.size(); ++i) out << ',' << csv_number(w[i].real()) << ',' << csv_number(w[i].imag());
  out << ',' << csv_number(potential);
  for (Eigen::Index i = 0; i < eig.size(); ++i) out << ',' << csv_number(eig[i]);
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < H.cols(); ++j)
      out << ',' << csv_number(H(i, j).real()) << ',' << csv_number(H(i, j).imag());
  out << '\n';
}

Result run_curvature(const Config& c) {
  const auto weights = load_weights(c, 1, 2);
  const GridSpec spec = parse_grid_spec(c.grid);
  const auto grid = radial_grid(weights[0].dim(), spec);
  const std::size_t m = weights[0].dim();
  ojson rep = header("curvature");
  ojson wj = ojson::array();
  for (const auto& w : weights) wj.push_back(weight_to_json(w));
  rep["weights"] = wj;
  rep["grid"] = to_string(spec);
  rep["eval_degree"] = c.eval_degree;
  rep["precision_bits"] = c.precision_bits;
  rep["tol"] = c.tol;
  rep["convention"] = "hessian is d^2 log h / dw_i dw̄_j; curvature is its negative";
  std::ostringstream csv;
  csv << point_csv_header(m);
  ojson points = ojson::array();

  if (weights.size() == 1) {
    std::vector<Eigen::VectorXcd> ws;
    for (const auto& p : grid) ws.push_back(p.w);
    const auto hs = log_metric_hessians(weights[0], ws, c.eval_degree, c.precision_bits);
    std::optional<std::size_t> bad;
    double eig_min = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const Eigen::VectorXd eig = hermitian_eigenvalues(hs[k].hessian);
      if (k == 0 || eig[0] < eig_min) eig_min = eig[0];
      if (!bad && !psd_check(hs[k].hessian, c.tol)) bad = k;
      points.push_back({{"w", point_json(hs[k].at)},
                        {"shell", grid[k].shell},
                        {"log_h", hs[k].potential},
                        {"hessian", matrix_json(hs[k].hessian)},
                        {"curvature", matrix_json(hs[k].curvature())},
                        {"eigenvalues", vector_json(eig)},
                        {"tail_bound", hs[k].tail_bound}});
      point_csv_row(csv, grid[k].shell, grid[k].radius, hs[k].at, hs[k].potential, eig, hs[k].hessian);
    }
    rep["eigen_min"] = eig_min;
    rep["psd_on_grid"] = !bad.has_value();
    rep["points"] = points;
    if (bad) rep["witness"] = {{"kind", "not-psd"}, {"point", points[*bad]}};
    return {rep, csv.str()};
  }

  PshOptions options;
  options.eval_degree = c.eval_degree;
  options.precision_bits = c.precision_bits;
  options.tol = c.tol;
  options.trend_threshold = c.trend_threshold;
  options.order = parse_difference_order(c.order);
  const PshReport r = psh_boundedness_report(weights[0], weights[1], grid, options);
  rep["order"] = to_string(options.order);
  rep["psi_min"] = r.psi_min;
  rep["psi_max"] = r.psi_max;
  rep["argmin_psi"] = point_json(r.points[r.argmin_psi].w);
  rep["argmax_psi"] = point_json(r.points[r.argmax_psi].w);
  rep["eigen_min"] = r.eigen_min;
  rep["argmin_eigen"] = point_json(r.points[r.argmin_eigen].w);
  rep["psd_on_grid"] = r.psd_on_grid;
  rep["boundary_slope"] = r.boundary_slope;
  rep["trend_threshold"] = r.trend_threshold;
  rep["trend"] = r.trend();
  ojson shells = ojson::array();
  for (const auto& s : r.shells)
    shells.push_back({{"radius", s.radius},
                      {"points", s.points},
                      {"psi_min", s.psi_min},
                      {"psi_max", s.psi_max},
                      {"eigen_min", s.eigen_min}});
  rep["shells"] = shells;
  for (const auto& p : r.points) {
    points.push_back({{"w", point_json(p.w)},
                      {"shell", p.shell},
                      {"psi", p.psi},
                      {"hessian", matrix_json(p.hessian)},
                      {"curvature_difference", matrix_json(-p.hessian)},
                      {"eigenvalues", vector_json(p.eigenvalues)}});
    point_csv_row(csv, p.shell, grid[&p - r.points.data()].radius, p.w, p.psi, p.eigenvalues, p.hessian);
  }
  rep["points"] = points;
  if (!r.psd_on_grid) {
    rep["witness"] = {{"kind", "not-psd"},
                      {"w", point_json(r.points[r.argmin_eigen].w)},
                      {"eigenvalue", r.eigen_min}};
  } else if (r.unbounded_trend()) {
    rep["witness"] = {{"kind", "unbounded-trend"}, {"boundary_slope", r.boundary_slope}};
  }
  return {rep, csv.str()};
}

Result run_truncate(const Config& c) {
  const auto weights = load_weights(c, 1, 1);
  const WeightFunction& W = weights[0];
  const TruncatedTuple tt = build_truncated(W, c.degree);
  ojson rep = header("truncate");
  rep["weight"] = weight_to_json(W);
  rep["degree"] = c.degree;
  rep["dimension"] = tt.size();
  rep["storage"] = c.degree < kSparseDegreeThreshold ? "dense" : "sparse";
  ojson nnz = ojson::array();
  for (const auto& t : tt.shifts) nnz.push_back(t.nonzeros());
  rep["shift_nonzeros"] = nnz;
  ojson comm = ojson::array();
  for (const auto& k : commutator_checks(tt))
    comm.push_back({{"i", k.i + 1},
                    {"j", k.j + 1},
                    {"mismatched_columns", k.mismatched_columns},
                    {"frobenius", k.mismatched_columns == 0 ? ojson("0") : ojson(csv_number(k.frobenius))}});
  rep["commutators"] = comm;

  ojson defects = ojson::array();
  std::optional<ojson> witness;
  for (unsigned k = 1; k <= c.n; ++k) {
    const auto diag = defect_operator(tt, k);
    std::size_t lo = 0, hi = 0;
    for (std::size_t p = 1; p < diag.size(); ++p) {
      if (diag[p] < diag[lo]) lo = p;
      if (diag[p] > diag[hi]) hi = p;
    }
    const auto fl = float_defect_operator<double>(tt, k);
    double deviation = 0;
    for (std::size_t p = 0; p < diag.size(); ++p)
      deviation = std::max(deviation, std::abs(fl.diagonal[p] - diag[p].convert_to<double>()));
    defects.push_back({{"k", k},
                       {"min", to_string(diag[lo])},
                       {"argmin", to_json(tt.basis[lo])},
                       {"max", to_string(diag[hi])},
                       {"argmax", to_json(tt.basis[hi])},
                       {"float_max_deviation", deviation},
                       {"float_max_off_diagonal", fl.max_off_diagonal}});
    if (!witness) {
      for (std::size_t p = 0; p < diag.size(); ++p)
        if (diag[p] < 0) {
          witness = ojson{{"k", k}, {"alpha", to_json(tt.basis[p])}, {"defect", to_string(diag[p])}};
          break;
        }
    }
  }
  rep["defects"] = defects;

  const MultiIndex alpha = c.alpha.empty() ? MultiIndex::zero(W.dim()).shifted(0, c.degree)
                                           : parse_alpha(c.alpha, W.dim());
  const auto curve = decay_curve(tt, alpha, degree(alpha) + 1);
  ojson cj = ojson::array();
  std::ostringstream csv;
  csv << "k,value,value_approx\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    cj.push_back(to_string(curve[k]));
    csv << k << ',' << to_string(curve[k]) << ',' << csv_number(curve[k].convert_to<double>()) << '\n';
  }
  rep["decay_curve"] = {{"alpha", to_json(alpha)}, {"values", cj}};
  if (witness) rep["witness"] = *witness;
  return {rep, csv.str()};
}

Result run_example45_command(const Config& c) {
  Example45Options o;
  o.n = c.n;
  o.m = c.m;
  o.blocks = c.blocks;
  o.eval_degree = c.eval_degree;
  o.precision_bits = c.precision_bits;
  o.grid = parse_grid_spec(c.grid);
  o.tol = c.tol;
  o.trend_threshold = c.trend_threshold;
  ojson rep = run_example45(o);
  return {rep, example45_csv(rep)};
}

// ---- perturbed-kernel stages ----

// sup of x^alpha over x >= 0 with sum x = t: t^|alpha| prod (alpha_i/|alpha|)^alpha_i.
Rational monomial_sup(const MultiIndex& alpha, const Rational& t) {
  const unsigned d = degree(alpha);
  if (d == 0) return Rational{1};
  Integer num{1};
  for (unsigned a : alpha.entries())
    if (a) num *= boost::multiprecision::pow(Integer{a}, a);
  const Integer den = boost::multiprecision::pow(Integer{d}, d);
  const Rational tp{boost::multiprecision::pow(boost::multiprecision::numerator(t), d),
                    boost::multiprecision::pow(boost::multiprecision::denominator(t), d)};
  return Rational{num, den} * tp;
}

Rational rational_power(const Rational& r, unsigned k) {
  return Rational{boost::multiprecision::pow(boost::multiprecision::numerator(r), k),
                  boost::multiprecision::pow(boost::multiprecision::denominator(r), k)};
}

constexpr unsigned kKernelCheckDegree = 4000;

ojson stage_kernel_bound(const WeightFunction& W, const Example45Options& o) {
  const Rational low_bound{7, 8}, high_bound{9, 8};
  std::vector<Rational> ts;
  for (unsigned k = 0; k < 20; ++k) ts.push_back(Rational{k, 20});
  ts.push_back(Rational{99, 100});

  std::vector<std::pair<MultiIndex, Rational>> corrections;
  for (const auto& [alpha, value] : W.overrides()) corrections.emplace_back(alpha, value - W.base_rho(alpha));

  // Numeric cross-check of the full series on actual points of each |w|^2 shell.
  PrecisionScope scope(o.precision_bits);
  MetricSeries<HighPrecision> series(W, kKernelCheckDegree);
  std::vector<Eigen::VectorXcd> directions;
  for (const auto& p : radial_grid(W.dim(), GridSpec{2, o.grid.angles}))
    if (p.shell == 1) directions.push_back(p.w / p.radius);

  bool exact_ok = true, numeric_ok = true, at_zero_is_one = false;
  std::optional<Rational> margin;
  double max_tail = 0;
  ojson rows = ojson::array();
  for (const auto& t : ts) {
    Rational lower{1}, upper{1};
    const Rational damp = rational_power(1 - t, o.n);
    for (const auto& [alpha, c] : corrections) {
      const Rational term = c * monomial_sup(alpha, t) * damp;
      (c < 0 ? lower : upper) += term;
    }
    if (t == 0) at_zero_is_one = (lower == 1 && upper == 1);
    const bool inside = lower > low_bound && upper < high_bound;
    exact_ok = exact_ok && inside;
    const Rational row_margin = std::min(Rational{lower - low_bound}, Rational{high_bound - upper});
    if (!margin || row_margin < *margin) margin = row_margin;

    double num_min = 0, num_max = 0;
    const HighPrecision damp_hp = to_real<HighPrecision>(damp);
    const HighPrecision lower_hp = to_real<HighPrecision>(lower), upper_hp = to_real<HighPrecision>(upper);
    for (std::size_t d = 0; d < directions.size(); ++d) {
      // scaling the squared moduli by the exact t keeps the shell exact up to direction rounding
      std::vector<HighPrecision> x = squared_moduli<HighPrecision>(directions[d]);
      for (auto& xi : x) xi *= to_real<HighPrecision>(t);
      const auto [h, tail] = series.value(x);
      const HighPrecision v = h * damp_hp, vt = tail * damp_hp;
      const double vd = v.convert_to<double>();
      max_tail = std::max(max_tail, vt.convert_to<double>());
      if (d == 0 || vd < num_min) num_min = vd;
      if (d == 0 || vd > num_max) num_max = vd;
      // the true value lies in [v, v + vt]; allow only the rounding of the direction
      if (v + vt < lower_hp - 1e-12 || v > upper_hp + 1e-12) numeric_ok = false;
    }
    rows.push_back({{"t", to_string(t)},
                    {"lower", lower.convert_to<double>()},
                    {"upper", upper.convert_to<double>()},
                    {"series_min", num_min},
                    {"series_max", num_max}});
  }
  return {{"passed", exact_ok && numeric_ok && at_zero_is_one},
          {"interval", {"7/8", "9/8"}},
          {"margin", margin->convert_to<double>()},
          {"exact_enclosure_inside", exact_ok},
          {"series_within_enclosure", numeric_ok},
          {"value_at_zero_is_one", at_zero_is_one},
          {"series_degree", kKernelCheckDegree},
          {"series_tail_max", max_tail},
          {"rows", rows}};
}

}  // namespace

ojson run_example45(const Example45Options& o) {
  const WeightFunction W = WeightFunction::perturbed45(o.n, o.m, o.blocks);
  const WeightFunction P = WeightFunction::power_kernel(o.n, o.m);
  const auto& blocks = W.perturbation_blocks();
  const auto& last = blocks.back();
  const MultiIndex beta = MultiIndex::zero(o.m).shifted(1, last.base_degree);
  const MultiIndex witness_alpha = beta.shifted(0, last.block);

  ojson rep = header("example45");
  rep["n"] = o.n;
  rep["m"] = o.m;
  rep["blocks"] = o.blocks;
  ojson bases = ojson::array();
  for (const auto& b : blocks) bases.push_back(b.base_degree);
  rep["base_degrees"] = bases;
  rep["perturbed_entries"] = W.overrides().size();

  ojson stages;
  stages["kernel_bound"] = stage_kernel_bound(W, o);

  {
    const NecessaryCheck check = necessary_condition(W, o.n, witness_alpha);
    stages["necessary_condition"] = {{"passed", !check.holds},
                                     {"alpha", to_json(witness_alpha)},
                                     {"lhs", to_string(check.lhs)},
                                     {"rhs", to_string(check.rhs)},
                                     {"holds", check.holds},
                                     {"obstruction_n", subnormality_obstruction(W, witness_alpha)}};
  }
  {
    bool ok = true;
    ojson rays = ojson::array();
    for (const auto& b : blocks) {
      const MultiIndex base = MultiIndex::zero(o.m).shifted(1, b.base_degree);
      const Rational q = ray_ratio_sq(W, P, base, 0, b.block - 1);
      ok = ok && q == Rational{b.block};
      rays.push_back({{"alpha", to_json(base)},
                      {"direction", 1},
                      {"length", b.block - 1},
                      {"ratio_sq", to_string(q)},
                      {"expected", b.block}});
    }
    stages["ray_ratio"] = {{"passed", ok}, {"rays", rays}};
  }
  {
    const unsigned D = last.base_degree + 2 * last.block - 1;
    const HyperReport r = is_n_hyper_up_to(W, o.n, D);
    ojson s = {{"passed", r.violated()}, {"degree", D}, {"verdict", r.verdict_string()},
               {"entries_checked", r.entries_checked}};
    if (r.witness)
      s["defect_witness"] = {{"k", r.witness->k},
                             {"alpha", to_json(r.witness->alpha)},
                             {"defect", to_string(r.witness->value)}};
    stages["hypercontraction"] = s;
  }
  {
    PshOptions options;
    options.eval_degree = o.eval_degree;
    options.precision_bits = o.precision_bits;
    options.tol = o.tol;
    options.trend_threshold = o.trend_threshold;
    const PshReport r = psh_boundedness_report(W, P, radial_grid(o.m, o.grid), options);
    const bool inside = r.psi_min > std::log(7.0 / 8.0) && r.psi_max < std::log(9.0 / 8.0);
    stages["psh_boundedness"] = {{"passed", inside && !r.unbounded_trend()},
                                 {"grid", to_string(o.grid)},
                                 {"eval_degree", o.eval_degree},
                                 {"psi_min", r.psi_min},
                                 {"psi_max", r.psi_max},
                                 {"psi_interval", {std::log(7.0 / 8.0), std::log(9.0 / 8.0)}},
                                 {"eigen_min", r.eigen_min},
                                 {"psd_on_grid", r.psd_on_grid},
                                 {"boundary_slope", r.boundary_slope},
                                 {"trend", r.trend()}};
  }
  rep["stages"] = stages;
  std::vector<std::string> failed;
  for (const auto& [name, s] : stages.items())
    if (!s["passed"].get<bool>()) failed.push_back(name);
  rep["passed"] = failed.empty();
  if (!failed.empty()) rep["witness"] = {{"failed_stages", failed}};
  return rep;
}

std::string example45_csv(const ojson& report) {
  std::ostringstream out;
  out << "t,lower,upper,series_min,series_max\n";
  for (const auto& row : report.at("stages").at("kernel_bound").at("rows"))
    out << row["t"].get<std::string>() << ',' << csv_number(row["lower"].get<double>()) << ','
        << csv_number(row["upper"].get<double>()) << ',' << csv_number(row["series_min"].get<double>()) << ','
        << csv_number(row["series_max"].get<double>()) << '\n';
  return out.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const std::filesystem::path tmp =
      dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      throw std::invalid_argument("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::invalid_argument("cannot move output into '" + path.string() + "': " + ec.message());
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and high-precision checks for multivariable weighted shifts.", "wshift"};
  app.require_subcommand(1);

  std::map<std::string, Config> configs;
  std::map<std::string, std::function<Result(const Config&)>> runners;

  auto add_output = [](CLI::App* sub, Config& c) {
    sub->add_option("--out", c.out, "Write the report to this path (atomically) instead of stdout");
    sub->add_option("--format", c.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };
  auto add_weights = [](CLI::App* sub, Config& c, int count) {
    sub->add_option("--weights", c.weights, count == 1 ? "Weight spec JSON file" : "Weight spec JSON file(s)")
        ->required()
        ->expected(1, count)
        ->check(CLI::ExistingFile);
  };
  auto add_numeric = [](CLI::App* sub, Config& c) {
    sub->add_option("--eval-degree", c.eval_degree, "Series truncation degree")
        ->check(CLI::Range(2u, 1000000u))
        ->capture_default_str();
    sub->add_option("--precision-bits", c.precision_bits, "Working mantissa bits (>= 53)")
        ->check(CLI::Range(53u, 1000000u))
        ->capture_default_str();
    sub->add_option("--tol", c.tol, "Relative tolerance for Hermitian and PSD checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--grid", c.grid, "Evaluation grid radial:<steps>x<angles>")->capture_default_str();
    sub->add_option("--trend-threshold", c.trend_threshold,
                    "Boundary slope of psi against -log(1-r^2) that counts as unbounded")
        ->capture_default_str();
  };

  {
    Config& c = configs["verify-identities"];
    auto* sub = app.add_subcommand("verify-identities", "Check the combinatorial identities exhaustively");
    sub->add_option("--beta-max", c.identity.beta_degree_max, "Largest |beta| for the Vandermonde identity")
        ->capture_default_str();
    sub->add_option("--dim-max", c.identity.dim_max, "Largest dimension m")->capture_default_str();
    sub->add_option("--n-max", c.identity.convolution_n_max, "Largest n for the binomial convolution")
        ->check(CLI::Range(2u, 10000u))
        ->capture_default_str();
    sub->add_option("--alternating-n-max", c.identity.alternating_n_max, "Largest n for the alternating sum")
        ->capture_default_str();
    sub->add_option("--k-max", c.identity.multinomial_k_max, "Largest power in the multinomial check")
        ->capture_default_str();
    add_output(sub, c);
    runners["verify-identities"] = run_verify_identities;
  }
  {
    Config& c = configs["check-hyper"];
    auto* sub = app.add_subcommand("check-hyper", "Scan defect diagonals d_k(alpha), 1 <= k <= n");
    add_weights(sub, c, 1);
    sub->add_option("--n", c.n, "Hypercontraction order")->check(CLI::Range(1u, 100000u))->capture_default_str();
    sub->add_option("--degree", c.degree, "Largest |alpha| scanned")->capture_default_str();
    add_output(sub, c);
    runners["check-hyper"] = run_check_hyper;
  }
  {
    Config& c = configs["necessary"];
    auto* sub = app.add_subcommand("necessary", "Check the necessary condition at one index or up to a degree");
    add_weights(sub, c, 1);
    sub->add_option("--n", c.n, "Hypercontraction order")->check(CLI::Range(1u, 100000u))->capture_default_str();
    sub->add_option("--degree", c.degree, "Largest |alpha| scanned when --alpha is absent")->capture_default_str();
    sub->add_option("--alpha", c.alpha, "Single index, e.g. 2,511");
    add_output(sub, c);
    runners["necessary"] = run_necessary;
  }
  {
    Config& c = configs["similarity-scan"];
    auto* sub = app.add_subcommand("similarity-scan", "Extrema of squared weight-ratio products along rays");
    add_weights(sub, c, 2);
    sub->add_option("--degree", c.degree, "Largest |alpha| for ray starts")->capture_default_str();
    sub->add_option("--ray-length", c.ray_length, "Largest ray length l")->capture_default_str();
    sub->add_option("--growth-factor", c.growth_factor, "Spread ratio (L vs L/2) that flags growth")
        ->check(CLI::Range(1.0 + 1e-12, 1e12))
        ->capture_default_str();
    add_output(sub, c);
    runners["similarity-scan"] = run_similarity_scan;
  }
  {
    Config& c = configs["curvature"];
    auto* sub = app.add_subcommand(
        "curvature", "Hessian of log h on a grid (one weight) or of psi = log(h1/h2) (two weights)");
    add_weights(sub, c, 2);
    add_numeric(sub, c);
    sub->add_option("--order", c.order, "Sign of the difference for two weights")
        ->check(CLI::IsMember({"first-minus-second", "second-minus-first"}))
        ->capture_default_str();
    add_output(sub, c);
    runners["curvature"] = run_curvature;
  }
  {
    Config& c = configs["truncate"];
    c.degree = 10;
    auto* sub = app.add_subcommand("truncate", "Finite matrix model of the backward shift tuple");
    add_weights(sub, c, 1);
    sub->add_option("--degree", c.degree, "Truncation degree D")->capture_default_str();
    sub->add_option("--n", c.n, "Largest defect order k")->check(CLI::Range(1u, 1000u))->capture_default_str();
    sub->add_option("--alpha", c.alpha, "Index for the decay curve (default D e_1)");
    add_output(sub, c);
    runners["truncate"] = run_truncate;
  }
  {
    Config& c = configs["example45"];
    auto* sub = app.add_subcommand("example45", "Reproduce the perturbed-kernel counterexample");
    sub->add_option("--n", c.n, "Kernel order n")->check(CLI::Range(2u, 64u))->capture_default_str();
    sub->add_option("--m", c.m, "Dimension m")->check(CLI::Range(2u, 16u))->capture_default_str();
    sub->add_option("--blocks,-L", c.blocks, "Number of perturbation blocks L")
        ->check(CLI::Range(2u, 64u))
        ->capture_default_str();
    add_numeric(sub, c);
    add_output(sub, c);
    runners["example45"] = run_example45_command;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kClean;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kClean;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kClean;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const Config& c = configs.at(name);
  try {
    Result result = runners.at(name)(c);
    std::string content;
    if (c.format == "csv")
      content = result.csv.empty() ? summary_csv(result.report) : result.csv;
    else
      content = result.report.dump(2) + "\n";
    if (c.out.empty())
      out << content;
    else
      write_atomically(c.out, content);
    return result.report.contains("witness") ? kWitness : kClean;
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error and out_of_range all describe bad input here
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace wshift::cli
