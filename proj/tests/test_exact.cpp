#include <doctest.h>

#include "dcsplit/exact.hpp"

#include <cmath>
#include <random>

using namespace dcsplit;

TEST_CASE("error-free transforms recover the rounding error") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    double a = std::ldexp(static_cast<double>(rng()) - 9.2e18, -40);
    double b = std::ldexp(static_cast<double>(rng()) - 9.2e18, -60);
    double x, y;
    exact::two_sum(a, b, x, y);
    CHECK(x == a + b);
    CHECK(x + y == x);  // y is strictly below the rounding granularity of x
    long double exact_sum = static_cast<long double>(a) + static_cast<long double>(b);
    CHECK(static_cast<long double>(x) + static_cast<long double>(y) == exact_sum);

    exact::two_prod(a, b, x, y);
    CHECK(x == a * b);
    long double exact_prod = static_cast<long double>(a) * static_cast<long double>(b);
    CHECK(static_cast<long double>(x) + static_cast<long double>(y) == exact_prod);
  }
}

TEST_CASE("orient2d is exact on collinear and nearly collinear input") {
  CHECK(exact::orient2d(0, 0, 1, 1, 2, 2) == 0);
  double up = std::nextafter(2.0, 3.0);
  double down = std::nextafter(2.0, 1.0);
  // c one ulp above the line y = x lies left of a -> b: counterclockwise
  CHECK(exact::orient2d(0, 0, 1, 1, 2, up) > 0);
  CHECK(exact::orient2d(0, 0, 1, 1, 2, down) < 0);

  // classic adversarial configuration: a one-ulp offset from a long line;
  // cross(b - a, c - a) = 12 eps for a = (0.5, 0.5 + eps)
  double eps = std::ldexp(1.0, -52);
  CHECK(exact::orient2d(0.5, 0.5, 12.0, 12.0, 24.0, 24.0) == 0);
  CHECK(exact::orient2d(0.5, 0.5 + eps, 12.0, 12.0, 24.0, 24.0) > 0);
  CHECK(exact::orient2d(0.5, 0.5 - eps, 12.0, 12.0, 24.0, 24.0) < 0);
}

TEST_CASE("orient2d antisymmetry and cyclic invariance") {
  std::mt19937_64 rng(7);
  auto coord = [&] { return std::ldexp(static_cast<double>(rng() % (1 << 20)), -18) - 2.0; };
  for (int i = 0; i < 2000; ++i) {
    double ax = coord(), ay = coord(), bx = coord(), by = coord(), cx = coord(), cy = coord();
    int s = exact::orient2d(ax, ay, bx, by, cx, cy);
    CHECK(exact::orient2d(bx, by, ax, ay, cx, cy) == -s);
    CHECK(exact::orient2d(bx, by, cx, cy, ax, ay) == s);
    CHECK(exact::orient2d(cx, cy, ax, ay, bx, by) == s);
  }
}

TEST_CASE("orient3d sign convention and coplanar exactness") {
  double a[3] = {0, 0, 0}, b[3] = {1, 0, 0}, c[3] = {0, 1, 0};
  double below[3] = {0.2, 0.2, -1}, above[3] = {0.2, 0.2, 1}, on[3] = {0.2, 0.2, 0};
  CHECK(exact::orient3d(a, b, c, below) < 0);
  CHECK(exact::orient3d(a, b, c, above) > 0);
  CHECK(exact::orient3d(a, b, c, on) == 0);

  // lifted affine data is exactly coplanar
  auto lift = [](double x, double y) { return 2.0 * x + 3.0 * y + 1.0; };
  double p[3] = {0.125, 0.25, lift(0.125, 0.25)};
  double q[3] = {0.5, -0.375, lift(0.5, -0.375)};
  double r[3] = {-0.75, 0.625, lift(-0.75, 0.625)};
  double s[3] = {0.0625, -0.125, lift(0.0625, -0.125)};
  CHECK(exact::orient3d(p, q, r, s) == 0);
  s[2] = std::nextafter(s[2], 1e30);
  CHECK(exact::orient3d(p, q, r, s) != 0);
}

TEST_CASE("orient3d row swaps flip the sign") {
  std::mt19937_64 rng(99);
  auto coord = [&] { return std::ldexp(static_cast<double>(rng() % (1 << 24)), -22) - 2.0; };
  for (int i = 0; i < 500; ++i) {
    double a[3] = {coord(), coord(), coord()};
    double b[3] = {coord(), coord(), coord()};
    double c[3] = {coord(), coord(), coord()};
    double d[3] = {coord(), coord(), coord()};
    int s = exact::orient3d(a, b, c, d);
    CHECK(exact::orient3d(a, c, b, d) == -s);
    CHECK(exact::orient3d(b, a, c, d) == -s);
  }
}
