#include <doctest.h>

#include "dcsplit/decompose.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace dcsplit;

namespace {
std::vector<Vec2> unit_domain() { return {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}; }
}

TEST_CASE("extract_finite_functions on zero and single-component input") {
  auto mesh = oracle::unit_square_mesh(17);
  auto zero = oracle::field_from(mesh, [](double, double) { return 0.0; });
  CHECK(extract_finite_functions(zero, unit_domain(), 1, {}).empty());

  auto absm1 = oracle::field_from(mesh, [](double x, double) { return std::fabs(x) - 1; });
  auto parts = extract_finite_functions(absm1, unit_domain(), 1, {});
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].support_triangles.size() == mesh->triangles.size());
  CHECK(parts[0].depth == 1);
  CHECK((parts[0].field.values - absm1.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("extract_finite_functions separates disjoint pits and reconstructs the diff") {
  auto mesh = oracle::unit_square_mesh(17);
  auto pit = [](double cx, double cy, double x, double y) {
    double v = std::max(std::fabs(x - cx), std::fabs(y - cy));
    return v < 0.25 ? 4.0 * (v - 0.25) : 0.0;
  };
  auto two = oracle::field_from(mesh, [&](double x, double y) {
    return pit(-0.5, -0.5, x, y) + pit(0.5, 0.5, x, y);
  });
  auto parts = extract_finite_functions(two, unit_domain(), 2, {0});
  REQUIRE(parts.size() == 2);
  // disjoint supports
  std::set<int> s0(parts[0].support_triangles.begin(), parts[0].support_triangles.end());
  for (int t : parts[1].support_triangles) CHECK(s0.count(t) == 0);
  // sum reconstructs
  Eigen::VectorXd sum = parts[0].field.values + parts[1].field.values;
  CHECK((sum - two.values).cwiseAbs().maxCoeff() < 1e-9);
  // metadata
  CHECK(parts[0].depth == 2);
  REQUIRE(parts[0].index_path.size() == 2);
  CHECK(parts[0].index_path[0] == 0);
  // fields vanish off their own support
  for (const auto& p : parts) {
    std::set<int> mine(p.support_triangles.begin(), p.support_triangles.end());
    std::vector<char> touched(mesh->vertices.size(), 0);
    for (int t : p.support_triangles)
      for (int k = 0; k < 3; ++k) touched[mesh->triangles[t][k]] = 1;
    for (int v = 0; v < static_cast<int>(mesh->vertices.size()); ++v)
      if (!touched[v]) CHECK(p.field.values[v] == 0.0);
  }
}

TEST_CASE("dc_decompose leaves convex fields alone") {
  auto mesh = oracle::unit_square_mesh(17);
  auto absx = oracle::field_from(mesh, [](double x, double) { return std::fabs(x); });
  auto [pair, trace] = dc_decompose(absx, 1e-6, 50);
  CHECK(trace.termination == Termination::converged);
  CHECK(trace.depths_used == 1);
  CHECK((pair.g.values - absx.values).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(pair.h.values.cwiseAbs().maxCoeff() <= tol_num(absx.max_abs()));
  CHECK(pair.residual_sup < 1e-10);
}

TEST_CASE("dc_decompose hand trace for -|x|") {
  auto mesh = oracle::unit_square_mesh(17);
  auto f = oracle::field_from(mesh, [](double x, double) { return -std::fabs(x); });
  auto [pair, trace] = dc_decompose(f, 1e-6, 50);
  CHECK(trace.termination == Termination::converged);
  CHECK(trace.depths_used == 2);
  for (int v = 0; v < f.values.size(); ++v) {
    CHECK(pair.g.values[v] == doctest::Approx(-1.0).epsilon(1e-12));
    double expect_h = std::fabs(mesh->vertices[v].x()) - 1.0;
    CHECK(pair.h.values[v] == doctest::Approx(expect_h).epsilon(1e-12));
  }
  CHECK(pair.residual_sup == 0.0);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].h_k == doctest::Approx(1.0));
  CHECK(trace.records[0].count == 1);
}

TEST_CASE("dc_decompose contract checks on the sine bump") {
  auto mesh = oracle::unit_square_mesh(33);
  auto f = oracle::field_from(mesh,
                              [](double x, double y) { return std::sin(3 * x) * std::sin(3 * y); });
  auto [pair, trace] = dc_decompose(f, 1e-3, 500);
  CHECK(trace.termination == Termination::converged);
  CHECK(pair.residual_sup <= 1e-3);
  CHECK((f.values - (pair.g.values - pair.h.values)).cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(check_convexity(pair.g, unit_domain()).is_convex);
  CHECK(check_convexity(pair.h, unit_domain()).is_convex);
  auto audit = lipschitz_audit(trace);
  CHECK(audit.ok);
  CHECK(audit.max_gradient <= 2.0 * lipschitz_constant(f) + 1e-6);
}

TEST_CASE("h_k is non-increasing and the trace is recorded per depth") {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(101);
  auto f = oracle::random_field(mesh, rng);
  auto [pair, trace] = dc_decompose(f, 1e-2, 2000);
  CHECK(trace.termination == Termination::converged);
  REQUIRE(trace.records.size() >= 2);
  for (size_t i = 0; i + 1 < trace.records.size(); ++i) {
    CHECK(trace.records[i].depth == static_cast<int>(i) + 1);
    if (i >= 1) CHECK(trace.records[i + 1].h_k <= trace.records[i].h_k + 1e-12);
    CHECK(trace.records[i].count >= 1);
  }
  // cumulative budget is non-decreasing
  for (size_t i = 0; i + 1 < trace.records.size(); ++i)
    CHECK(trace.records[i + 1].cumulative_budget >= trace.records[i].cumulative_budget);
}

TEST_CASE("sign_assembly algebra") {
  auto mesh = oracle::unit_square_mesh(17);

  SUBCASE("no finite functions: g = f1 = f, h = 0") {
    auto f = oracle::field_from(mesh, [](double x, double y) { return x + 0.5 * y; });
    auto [pair, trace] = dc_decompose(f, 1e-8, 10);
    CHECK(trace.terms.empty());
    CHECK((pair.g.values - f.values).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(pair.h.values.cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("single depth-1 convex term: g = f1 + f_bar, h = f_tilde") {
    auto f = oracle::field_from(mesh, [](double x, double) { return -std::fabs(x); });
    auto [pair, trace] = dc_decompose(f, 1e-8, 10);
    REQUIRE(trace.terms.size() == 1);
    const TermRecord& t = trace.terms[0];
    CHECK(t.sign == -1);
    Eigen::VectorXd g = trace.root_minorant + t.bar_values;
    Eigen::VectorXd h = t.tilde_values;
    CHECK((pair.g.values - g).cwiseAbs().maxCoeff() == 0.0);
    CHECK((pair.h.values - h).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("assembly reproduces dc_decompose output on a nested run") {
    std::mt19937_64 rng(7);
    auto f = oracle::random_field(mesh, rng);
    auto [pair, trace] = dc_decompose(f, 5e-2, 2000);
    DCPair re = sign_assembly(f, trace);
    CHECK((re.g.values - pair.g.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((re.h.values - pair.h.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(re.residual_sup == pair.residual_sup);
  }
}

TEST_CASE("partial-sum identity at every depth") {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(404);
  auto f = oracle::random_field(mesh, rng);
  auto [pair, trace] = dc_decompose(f, 2e-2, 2000);
  REQUIRE(trace.termination == Termination::converged);
  int max_depth = 0;
  for (const auto& t : trace.terms) max_depth = std::max(max_depth, t.depth);

  for (int cut = 1; cut <= max_depth; ++cut) {
    // f = f1 + sum_{terms, depth <= cut} sign (tilde - bar)
    //       + sum_{finite functions at depth cut+1} sign * values
    //       + sum_{discards at depth <= cut} sign * values
    Eigen::VectorXd acc = trace.root_minorant;
    for (const auto& t : trace.terms) {
      if (t.depth <= cut)
        acc += static_cast<double>(t.sign) * (t.tilde_values - t.bar_values);
      else if (t.depth == cut + 1)
        acc += static_cast<double>(t.sign) * t.finite_values;
    }
    for (const auto& d : trace.discarded) {
      if (d.depth <= cut + 1) acc += static_cast<double>(d.sign) * d.values;
    }
    CHECK((acc - f.values).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("lipschitz audit") {
  auto mesh = oracle::unit_square_mesh(17);

  // convex input: no finite functions, vacuous pass
  auto convex = oracle::field_from(mesh, [](double x, double y) { return x * x + y * y; });
  auto [p1, t1] = dc_decompose(convex, 1e-6, 10);
  auto a1 = lipschitz_audit(t1);
  CHECK(a1.ok);
  CHECK(a1.max_gradient == 0.0);

  // -|x|: single finite function |x| - 1 with gradient norm 1 <= 2L = 2
  auto negabs = oracle::field_from(mesh, [](double x, double) { return -std::fabs(x); });
  auto [p2, t2] = dc_decompose(negabs, 1e-6, 10);
  auto a2 = lipschitz_audit(t2);
  CHECK(a2.ok);
  CHECK(a2.max_gradient == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a2.bound == doctest::Approx(2.0 + 1e-6));

  // random field: bound 2 L + 1e-6 holds across the whole trace
  std::mt19937_64 rng(1234);
  auto f = oracle::random_field(mesh, rng);
  auto [p3, t3] = dc_decompose(f, 1e-2, 2000);
  auto a3 = lipschitz_audit(t3);
  CHECK(a3.ok);
}

TEST_CASE("sub-eps finite functions are absorbed into the residual") {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(31);
  auto f = oracle::random_field(mesh, rng);
  double eps = 0.05;
  auto [pair, trace] = dc_decompose(f, eps, 2000);
  REQUIRE(trace.termination == Termination::converged);
  CHECK(pair.residual_sup <= eps);
  CHECK(!trace.discarded.empty());
  for (const auto& d : trace.discarded) CHECK(d.values.cwiseAbs().maxCoeff() <= eps);
}

TEST_CASE("max_iter is reported honestly") {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(55);
  auto f = oracle::random_field(mesh, rng);
  auto [pair, trace] = dc_decompose(f, 1e-6, 3);
  CHECK(trace.termination == Termination::max_iter);
  CHECK(pair.residual_sup > 1e-6);  // honest residual, not forced to eps
  // the pair still reconstructs to within the reported residual
  CHECK((f.values - (pair.g.values - pair.h.values)).cwiseAbs().maxCoeff() ==
        doctest::Approx(pair.residual_sup));
}

TEST_CASE("convexity of outputs on random converged runs") {
  auto mesh = oracle::unit_square_mesh(17);
  std::mt19937_64 rng(777);
  std::vector<Vec2> domain = unit_domain();
  for (int trial = 0; trial < 3; ++trial) {
    auto f = oracle::random_field(mesh, rng);
    auto [pair, trace] = dc_decompose(f, 1e-2, 2000);
    REQUIRE(trace.termination == Termination::converged);
    CHECK((f.values - (pair.g.values - pair.h.values)).cwiseAbs().maxCoeff() <= 1e-2);
    CHECK(check_convexity(pair.g, domain).is_convex);
    CHECK(check_convexity(pair.h, domain).is_convex);
  }
}
