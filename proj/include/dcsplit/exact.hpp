#pragma once

// Exact-sign orientation predicates backed by floating-point expansions
// (two-sum / two-product error-free transforms). The fast path evaluates the
// determinant in plain double with a permanent-based error filter; the slow
// path computes the determinant exactly and returns its sign.

namespace dcsplit::exact {

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bvirt = x - a;
  double avirt = x - bvirt;
  double bround = b - bvirt;
  double around = a - avirt;
  y = around + bround;
}

inline void two_diff(double a, double b, double& x, double& y) {
  x = a - b;
  double bvirt = a - x;
  double avirt = x + bvirt;
  double bround = bvirt - b;
  double around = a - avirt;
  y = around + bround;
}

inline void two_prod(double a, double b, double& x, double& y) {
  x = a * b;
  y = __builtin_fma(a, b, -x);
}

// Merges two nonoverlapping expansions (components in increasing magnitude)
// into one, dropping zero components. Returns the output length (>= 1).
int fast_expansion_sum_zeroelim(int elen, const double* e, int flen, const double* f, double* h);

// Multiplies a nonoverlapping expansion by a double. Returns output length.
int scale_expansion_zeroelim(int elen, const double* e, double b, double* h);

// Sign of a zero-eliminated expansion: the sign of its largest component.
inline int expansion_sign(int n, const double* e) {
  double top = e[n - 1];
  return (top > 0.0) - (top < 0.0);
}

// Sign of orient2d: positive if (a, b, c) makes a counterclockwise turn,
// negative if clockwise, zero if exactly collinear.
int orient2d(double ax, double ay, double bx, double by, double cx, double cy);

// Sign of the determinant det[b - a; c - a; d - a] for lifted points.
// For a face (a, b, c) whose projection is counterclockwise, a negative sign
// means d lies strictly below the plane through a, b, c.
int orient3d(const double* a, const double* b, const double* c, const double* d);

}  // namespace dcsplit::exact
