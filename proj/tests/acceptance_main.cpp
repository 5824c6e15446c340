// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and budgets are pinned in code.

#include "dcsplit/curves.hpp"
#include "dcsplit/decompose.hpp"
#include "dcsplit/io.hpp"
#include "dcsplit/oned.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace dcsplit;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<Vec2> unit_domain() { return {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion1_worked_decomposition() {
  auto mesh = oracle::unit_square_mesh(17);
  auto f = oracle::field_from(mesh, [](double x, double) { return -std::fabs(x); });
  auto [pair, trace] = dc_decompose(f, 1e-6, 50);
  if (trace.termination != Termination::converged) return {false, "did not converge"};
  if (pair.residual_sup > 1e-10)
    return {false, "residual " + std::to_string(pair.residual_sup)};
  for (int v = 0; v < f.values.size(); ++v) {
    if (std::fabs(pair.g.values[v] + 1.0) > 1e-10) return {false, "g is not the constant -1"};
    double h_expect = std::fabs(mesh->vertices[v].x()) - 1.0;
    if (std::fabs(pair.h.values[v] - h_expect) > 1e-10) return {false, "h is not |x| - 1"};
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "residual %.1e", pair.residual_sup);
  return {true, buf};
}

Outcome criterion2_convex_fixed_point() {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(90210);
  double worst = 0;
  for (int run = 0; run < 20; ++run) {
    auto f = oracle::random_convex_field(mesh, rng, 30 + static_cast<int>(rng() % 40));
    auto [pair, trace] = dc_decompose(f, 1e-6, 50);
    if (trace.depths_used != 1) return {false, "convex field expanded beyond depth 1"};
    worst = std::max(worst, pair.h.values.cwiseAbs().maxCoeff());
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |h| = %.2e over 20 fields", worst);
  return {worst <= 1e-8, buf};
}

int g_suite3_converged = 0;
double g_suite4_worst_margin = 1e300;
bool g_suite4_ok = true;

Outcome criterion3_reconstruction_convexity() {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(20240811);
  std::vector<Vec2> domain = unit_domain();
  int converged = 0;
  for (int run = 0; run < 50; ++run) {
    auto f = oracle::random_field(mesh, rng);
    auto [pair, trace] = dc_decompose(f, 1e-4, 2000);
    auto audit = lipschitz_audit(trace);
    g_suite4_ok = g_suite4_ok && audit.ok;
    g_suite4_worst_margin = std::min(g_suite4_worst_margin, audit.bound - audit.max_gradient);
    if (trace.termination != Termination::converged) continue;
    ++converged;
    double recon = (f.values - (pair.g.values - pair.h.values)).cwiseAbs().maxCoeff();
    if (recon > 1e-4) return {false, "converged run with residual above eps"};
    if (pair.residual_sup > 1e-4) return {false, "reported residual above eps"};
    if (!check_convexity(pair.g, domain).is_convex) return {false, "g failed check_convexity"};
    if (!check_convexity(pair.h, domain).is_convex) return {false, "h failed check_convexity"};
  }
  g_suite3_converged = converged;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/50 converged; all within eps and convex", converged);
  // a vacuously green criterion would be worthless: demand convergence too
  return {converged == 50, buf};
}

Outcome criterion4_gradient_audit() {
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst margin below 2L + 1e-6: %.3g", g_suite4_worst_margin);
  return {g_suite4_ok && g_suite3_converged > 0, buf};
}

Outcome criterion5_envelope_oracle() {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(5150);
  auto f = oracle::random_field(mesh, rng);
  int done = 0;
  double worst = 0;
  while (done < 100) {
    Vec2 center(oracle::uniform(rng, -0.6, 0.6), oracle::uniform(rng, -0.6, 0.6));
    double radius = oracle::uniform(rng, 0.08, 0.3);
    int k = 3 + static_cast<int>(rng() % 3);
    for (int shrink = 0; shrink < 8; ++shrink) {
      std::vector<Vec2> region;
      for (int i = 0; i < k; ++i) {
        double a = 2 * M_PI * i / k + 0.3;
        region.push_back(center + radius * Vec2(std::cos(a), std::sin(a)));
      }
      RegionSamples samples;
      try {
        samples = gather_region_samples(f, region);
      } catch (const Error&) {
        break;
      }
      if (static_cast<int>(samples.points.size()) > 12) {
        radius *= 0.6;
        continue;
      }
      if (samples.points.size() < 3) break;
      ConvexPLFunction m;
      try {
        m = convex_minorant(f, region);
      } catch (const Error&) {
        break;
      }
      std::vector<Vec3> lifted;
      for (size_t i = 0; i < samples.points.size(); ++i)
        lifted.emplace_back(samples.points[i].x(), samples.points[i].y(), samples.values[i]);
      for (int q = 0; q < 20; ++q) {
        double a = oracle::uniform(rng, 0, 2 * M_PI);
        double rr = radius * std::sqrt(oracle::uniform01(rng)) * 0.9;
        Vec2 query = center + rr * Vec2(std::cos(a), std::sin(a));
        if (point_in_convex_polygon(region, query) < 0) continue;
        double expect = oracle::lower_envelope(lifted, query);
        if (!std::isfinite(expect)) continue;
        worst = std::max(worst, std::fabs(m.value(query) - expect));
      }
      ++done;
      break;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d regions, worst |minorant - oracle| = %.2e", done, worst);
  return {done == 100 && worst <= 1e-9, buf};
}

Outcome criterion6_diagnostic_separation() {
  uint64_t seed = 1;
  for (const char* name : {"abs-x", "affine", "saddle"}) {
    PLField f = build_field(preset_document(name));
    auto series = dc_condition_estimate(f, 5, seed);
    double last = series[4], prev = series[3];
    if (std::fabs(last - prev) > 0.01 * std::max(std::fabs(last), 1e-30))
      return {false, std::string(name) + " did not plateau"};
  }
  FieldDocument osc = preset_document("osc");
  std::vector<double> series;
  for (int l = 1; l <= 5; ++l) {
    PLField f = build_field_for_level(osc, l);
    series.push_back(dc_condition_estimate(f, l, seed).back());
  }
  double ratio = series[4] / series[0];
  char buf[96];
  std::snprintf(buf, sizeof buf, "plateaus hold; osc growth x%.1f (need >= 10)", ratio);
  return {ratio >= 10.0, buf};
}

Outcome criterion7_homogeneous_bound() {
  std::mt19937_64 rng(314159);
  int checked = 0;
  double worst_slack = 1e300;
  while (checked < 100) {
    HomogeneousConvexPL psi;
    int m = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < m; ++i)
      psi.generators.emplace_back(oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3));
    // curves sized so arc length dominates the tangent turning (the bound's
    // smooth-curvature premise)
    std::vector<ClosedConvexCurve> curves;
    curves.push_back(make_square(oracle::uniform(rng, 0.8, 0.95)));
    curves.push_back(make_regular_polygon(8 << (rng() % 3), oracle::uniform(rng, 0.85, 0.95)));
    curves.push_back(make_rectangle(1.9, oracle::uniform(rng, 0.7, 1.2), 0.0));
    for (const auto& curve : curves) {
      auto rep = homogeneous_bound_check(psi, curve);
      worst_slack = std::min(worst_slack, rep.bound - rep.variation);
      if (!rep.ok) return {false, "bound violated"};
      ++checked;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d pairs, smallest slack %.3g", checked, worst_slack);
  return {true, buf};
}

Outcome criterion8_turn_identities() {
  auto mesh = oracle::unit_square_mesh(17);
  auto zero = oracle::field_from(mesh, [](double, double) { return 0.0; });
  double worst = 0;
  for (int k : {4, 8, 16, 32, 64}) {
    double turn = turn_of_lifted_curve(zero, make_regular_polygon(k, 0.9));
    worst = std::max(worst, std::fabs(turn - 2 * M_PI));
  }
  if (worst > 1e-9) return {false, "flat-field turn deviates from 2 pi"};

  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = oracle::random_field(mesh, rng);
    auto curve = (trial % 2) ? make_regular_polygon(4 + (trial % 9),
                                                    oracle::uniform(rng, 0.2, 0.9))
                             : make_rectangle(oracle::uniform(rng, 0.4, 1.8),
                                              oracle::uniform(rng, 0.05, 0.8),
                                              oracle::uniform(rng, 0, M_PI));
    auto rep = theta_bounds_check(f, curve);
    if (rep.lower > rep.turn + 1e-9) return {false, "theta lower bound exceeded the turn"};
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "2 pi within %.1e; lower <= turn on 100 pairs", worst);
  return {true, buf};
}

Outcome criterion9_one_dimensional() {
  std::mt19937_64 rng(909);
  double worst_recon = 0, worst_add = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(rng() % 25);
    std::vector<double> knots(n), values(n);
    double x = 0;
    for (int i = 0; i < n; ++i) {
      knots[i] = x;
      x += oracle::uniform(rng, 0.02, 0.4);
      values[i] = oracle::uniform(rng, -2, 2);
    }
    auto fn = PLFunction1D::from_samples(knots, values);
    auto [g, h] = dc_split_1d(fn);
    double scale = 1.0;
    for (double v : values) scale = std::max(scale, std::fabs(v));
    for (int i = 0; i < n; ++i)
      worst_recon = std::max(worst_recon,
                             std::fabs(g.values[i] - h.values[i] - values[i]) / (1 + scale));
    worst_add = std::max(worst_add,
                         std::fabs(derivative_variation(g) + derivative_variation(h) -
                                   derivative_variation(fn)) /
                             (1 + derivative_variation(fn)));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "recon %.1e, additivity %.1e (both <= 1e-12)", worst_recon,
                worst_add);
  return {worst_recon <= 1e-12 && worst_add <= 1e-12, buf};
}

Outcome criterion10_subadditivity() {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(1010);
  double worst = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    auto f = oracle::random_field(mesh, rng);
    auto g = oracle::random_field(mesh, rng);
    auto curve = (trial % 2) ? make_regular_polygon(4 + (trial % 11),
                                                    oracle::uniform(rng, 0.25, 0.9))
                             : make_rectangle(oracle::uniform(rng, 0.4, 1.8),
                                              oracle::uniform(rng, 0.02, 0.7),
                                              oracle::uniform(rng, 0, M_PI));
    double vf = variation_of_slope(restrict_to_curve(f, curve));
    double vg = variation_of_slope(restrict_to_curve(g, curve));
    double vs = variation_of_slope(restrict_to_curve(add(f, g), curve));
    worst = std::max(worst, vs - (vf + vg));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max (v(f+g) - v(f) - v(g)) = %.2e", worst);
  return {worst <= 1e-9, buf};
}

Outcome criterion11_determinism() {
  std::string cli = DCSPLIT_CLI_PATH;
  auto run = [&](const std::string& out) {
    std::string cmd = cli + " decompose preset:sine-bump --eps 1e-2 --max-iter 200 --out " + out +
                      " 2>/dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  if (run("acc_det_a.json") != 0) return {false, "cli run failed"};
  if (run("acc_det_b.json") != 0) return {false, "cli run failed"};
  std::string a = slurp("acc_det_a.json"), b = slurp("acc_det_b.json");
  if (a.empty() || a != b) return {false, "outputs differ"};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu bytes, byte-identical", a.size());
  return {true, buf};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = no budget
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "worked decomposition of -|x|", 1.0, criterion1_worked_decomposition},
      {2, "convex fixed point (20 random convex fields)", 10.0, criterion2_convex_fixed_point},
      {3, "reconstruction + convexity (50 random fields)", 60.0,
       criterion3_reconstruction_convexity},
      {4, "2L gradient audit across suite 3", 0.0, criterion4_gradient_audit},
      {5, "envelope oracle equivalence (100 small regions)", 30.0, criterion5_envelope_oracle},
      {6, "diagnostic separation (plateau vs growth)", 120.0, criterion6_diagnostic_separation},
      {7, "homogeneous variation bound (100 psi/curve pairs)", 10.0, criterion7_homogeneous_bound},
      {8, "turn identities", 0.0, criterion8_turn_identities},
      {9, "1d split tightness (100 random functions)", 0.0, criterion9_one_dimensional},
      {10, "variation subadditivity (100 triples)", 0.0, criterion10_subadditivity},
      {11, "cli determinism", 0.0, criterion11_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_budget = c.budget_seconds == 0.0 || dt < c.budget_seconds;
    bool pass = out.pass && in_budget;
    std::printf("[%s] %2d. %s — %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), dt,
                in_budget ? "" : (", over budget " + std::to_string(c.budget_seconds)).c_str());
    if (!pass) ++failures;
  }
  if (failures == 0)
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures;
}
