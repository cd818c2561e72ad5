// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "wshift/cli.hpp"
#include "wshift/curvature.hpp"
#include "wshift/hypercontraction.hpp"
#include "wshift/similarity.hpp"
#include "wshift/truncation.hpp"

using namespace wshift;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail << "first failure: " << what << "; ";
    passed = passed && ok;
  }
};

Outcome identity_suite() {
  Outcome o;
  IdentitySuiteBounds bounds;
  bounds.beta_degree_max = 8;
  bounds.dim_max = 4;
  bounds.convolution_n_max = 8;
  bounds.alternating_n_max = 10;
  const auto r = verify_identity_suite(bounds);
  o.require(!r.failure.has_value(),
            r.failure ? r.failure->identity + " at " + r.failure->arguments : std::string{});
  o.require(r.vandermonde_checks > 0 && r.convolution_checks > 0 && r.alternating_checks > 0, "empty suite");
  o.detail << "vandermonde=" << r.vandermonde_checks << " convolution=" << r.convolution_checks
           << " alternating=" << r.alternating_checks;
  return o;
}

Outcome power_kernel_positivity() {
  Outcome o;
  std::size_t checked = 0;
  for (unsigned n = 1; n <= 5; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto P = WeightFunction::power_kernel(n, m);
      for (const auto& alpha : enumerate_leq_degree(m, 20))
        for (unsigned k = 1; k <= n; ++k) {
          const Rational d = defect_diag(P, k, alpha);
          ++checked;
          o.require(d >= 0, "negative d_" + std::to_string(k) + alpha.str());
          if (k == n) o.require(d == (alpha.is_zero() ? 1 : 0), "d_n" + alpha.str() + " for n=" + std::to_string(n));
        }
    }
  o.detail << "entries=" << checked;
  return o;
}

Outcome necessary_sharpness() {
  Outcome o;
  std::size_t checked = 0;
  for (unsigned n = 1; n <= 5; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto P = WeightFunction::power_kernel(n, m);
      for (const auto& alpha : enumerate_leq_degree(m, 20)) {
        if (alpha.is_zero()) continue;
        const auto c = necessary_condition(P, n, alpha);
        ++checked;
        o.require(c.lhs == c.rhs, "lhs != rhs at " + alpha.str());
      }
    }
  o.detail << "indices=" << checked;
  return o;
}

Outcome necessary_contrapositive() {
  Outcome o;
  std::mt19937_64 rng(20240501);
  std::size_t violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto W = gen::random_table_weight(rng, 2, 8, 0.35);
    for (unsigned n = 1; n <= 4; ++n)
      for (const auto& alpha : enumerate_leq_degree(2, 8)) {
        if (alpha.is_zero() || necessary_condition(W, n, alpha).holds) continue;
        ++violations;
        bool negative = false;
        for (const auto& below : enumerate_below(alpha))
          if (defect_diag(W, n, below) < 0) {
            negative = true;
            break;
          }
        o.require(negative, "no negative defect below " + alpha.str() + " n=" + std::to_string(n));
      }
  }
  o.require(violations > 0, "no violations generated");
  o.detail << "weights=200 violations=" << violations;
  return o;
}

Outcome example45() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  cli::Example45Options options;
  const auto rep = cli::run_example45(options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& s = rep["stages"];
  o.require(rep["base_degrees"] == nlohmann::ordered_json::array({63, 511}), "base degrees");
  o.require(s["kernel_bound"]["passed"].get<bool>(), "kernel bound outside (7/8, 9/8)");
  o.require(s["necessary_condition"]["lhs"] == "513/257" && !s["necessary_condition"]["holds"].get<bool>(),
            "necessary condition witness");
  o.require(s["ray_ratio"]["rays"][1]["ratio_sq"] == "2", "ray ratio witness");
  o.require(s["hypercontraction"]["passed"].get<bool>(), "hypercontraction scan found no violation");
  o.require(seconds < 120, "runtime");
  o.detail << "margin=" << s["kernel_bound"]["margin"].get<double>()
           << " lhs=" << s["necessary_condition"]["lhs"].get<std::string>()
           << " ray=" << s["ray_ratio"]["rays"][1]["ratio_sq"].get<std::string>()
           << " verdict=" << s["hypercontraction"]["verdict"].get<std::string>() << " seconds=" << seconds;
  return o;
}

Outcome curvature_numerics() {
  Outcome o;
  double origin_err = 0;
  for (unsigned n = 1; n <= 5; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto H = log_metric_hessian(WeightFunction::power_kernel(n, m), Eigen::VectorXcd::Zero(m), 40);
      origin_err = std::max(origin_err, (H.hessian - n * Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff());
    }
  o.require(origin_err <= 1e-9, "Hessian at origin");

  double disc_err = 0;
  Eigen::VectorXcd half(1);
  half << 0.5;
  for (unsigned n = 1; n <= 5; ++n) {
    const auto H = log_metric_hessian(WeightFunction::power_kernel(n, 1), half);
    disc_err = std::max(disc_err, std::abs(H.hessian(0, 0) - n * 16.0 / 9.0));
  }
  o.require(disc_err <= 1e-8, "closed form at |w| = 1/2");

  std::mt19937_64 rng(9001);
  double fd_err = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t m = 1 + k % 3;
    const auto W = WeightFunction::power_kernel(1 + k % 4, m);
    const auto w = gen::random_point(rng, m, 0.8);
    // the stencil runs in 80-bit arithmetic, so a small step costs no cancellation
    fd_err = std::max(fd_err, finite_diff_check(W, w, 1e-6));
  }
  o.require(fd_err < 1e-6, "finite-difference deviation");
  o.detail << "origin=" << origin_err << " disc=" << disc_err << " fd=" << fd_err;
  return o;
}

Outcome truncation_oracle() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::size_t entries = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + trial % 2;
    const unsigned D = 4 + trial % 7;
    const auto W = gen::random_weight(rng, m, D);
    const auto tt = build_truncated(W, D);
    for (const auto& c : commutator_checks(tt)) o.require(c.mismatched_columns == 0, "commutator");
    for (unsigned k = 1; k <= 4; ++k) {
      const auto d = defect_operator(tt, k);
      for (std::size_t p = 0; p < tt.size(); ++p, ++entries)
        o.require(d[p] == defect_diag(W, k, tt.basis[p]), "defect at " + tt.basis[p].str());
    }
    const MultiIndex alpha = tt.basis[tt.size() / 2];
    const unsigned a = degree(alpha);
    const auto curve = decay_curve(tt, alpha, a + 1);
    o.require(curve[a] != 0 && curve[a + 1] == 0, "decay curve at " + alpha.str());
  }
  o.detail << "weights=50 entries=" << entries;
  return o;
}

Outcome shields_regression() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w1 = gen::random_weight(rng, 1, 40), w2 = gen::random_weight(rng, 1, 40);
    for (unsigned a = 0; a <= 10; ++a)
      for (unsigned l = 0; l <= 20; ++l)
        o.require(ray_ratio_sq(w1, w2, MultiIndex{a}, 0, l) == ray_ratio_sq_product(w1, w2, MultiIndex{a}, 0, l),
                  "telescoped product");
  }

  const auto H = WeightFunction::power_kernel(1, 1), B = WeightFunction::power_kernel(2, 1);
  const unsigned L = 8;
  const auto r = similarity_scan(H, B, 20, L);
  o.require(r.max_ratio_sq == L + 2, "Hardy/Bergman max ratio");
  o.require(r.verdict == RatioScanReport::Verdict::growth_flagged, "growth flag");

  // rho2 = rho1 (1 + (-1)^|alpha| / 2)
  WeightFunction::OverrideMap entries;
  for (unsigned i = 0; i <= 40; ++i) entries.emplace(MultiIndex{i}, H.rho(MultiIndex{i}) * Rational(i % 2 ? 1 : 3, 2));
  const auto X = WeightFunction::table(1, std::move(entries), H);
  const auto b = similarity_scan(H, X, 20, 19);
  o.require(b.min_ratio_sq >= Rational(1, 3) && b.max_ratio_sq <= 3, "alternating perturbation bound");
  o.require(b.verdict == RatioScanReport::Verdict::bounded_in_scan, "alternating perturbation verdict");
  o.detail << "max=" << r.max_ratio_sq << " verdict=" << r.verdict_string() << " alternating=[" << b.min_ratio_sq
           << ", " << b.max_ratio_sq << "]";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"identity suite", identity_suite},
      {"power kernel defect positivity", power_kernel_positivity},
      {"necessary condition sharp on power kernels", necessary_sharpness},
      {"necessary condition contrapositive", necessary_contrapositive},
      {"perturbed kernel counterexample", example45},
      {"curvature numerics", curvature_numerics},
      {"truncation oracle equivalence", truncation_oracle},
      {"similarity ray-ratio regression", shields_regression},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[PRIMARY] criterion %zu %-45s %s (%.1fs) %s\n", i + 1, criteria[i].first.c_str(),
                o.passed ? "PASS" : "FAIL", seconds, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
