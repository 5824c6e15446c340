#include "dcsplit/exact.hpp"

#include <cmath>

namespace dcsplit::exact {

namespace {

inline void fast_two_sum(double a, double b, double& x, double& y) {
  // requires |a| >= |b|
  x = a + b;
  double bvirt = x - a;
  y = b - bvirt;
}

// Product of two 2-component expansions (lo, hi) x (lo, hi) -> up to 8 components.
int prod_2x2(const double a[2], const double b[2], double* h) {
  double t0[4], t1[4], merged[8];
  int n0 = scale_expansion_zeroelim(2, a, b[0], t0);
  int n1 = scale_expansion_zeroelim(2, a, b[1], t1);
  int n = fast_expansion_sum_zeroelim(n0, t0, n1, t1, merged);
  for (int i = 0; i < n; ++i) h[i] = merged[i];
  return n;
}

// e - f for expansions, via negation of f.
int expansion_diff(int elen, const double* e, int flen, const double* f, double* h) {
  double negf[64];
  for (int i = 0; i < flen; ++i) negf[i] = -f[i];
  return fast_expansion_sum_zeroelim(elen, e, flen, negf, h);
}

// Product of a 2-component expansion with an up-to-16 expansion -> up to 64.
int prod_2xn(const double a[2], int blen, const double* b, double* h) {
  double t0[32], t1[32];
  int n0 = scale_expansion_zeroelim(blen, b, a[0], t0);
  int n1 = scale_expansion_zeroelim(blen, b, a[1], t1);
  return fast_expansion_sum_zeroelim(n0, t0, n1, t1, h);
}

}  // namespace

int fast_expansion_sum_zeroelim(int elen, const double* e, int flen, const double* f, double* h) {
  double Q, Qnew, hh;
  double enow = e[0];
  double fnow = f[0];
  int eindex = 0, findex = 0;
  if ((fnow > enow) == (fnow > -enow)) {
    Q = enow;
    enow = e[++eindex];
  } else {
    Q = fnow;
    fnow = f[++findex];
  }
  int hindex = 0;
  if ((eindex < elen) && (findex < flen)) {
    if ((fnow > enow) == (fnow > -enow)) {
      fast_two_sum(enow, Q, Qnew, hh);
      enow = e[++eindex];
    } else {
      fast_two_sum(fnow, Q, Qnew, hh);
      fnow = f[++findex];
    }
    Q = Qnew;
    if (hh != 0.0) h[hindex++] = hh;
    while ((eindex < elen) && (findex < flen)) {
      if ((fnow > enow) == (fnow > -enow)) {
        two_sum(Q, enow, Qnew, hh);
        enow = e[++eindex];
      } else {
        two_sum(Q, fnow, Qnew, hh);
        fnow = f[++findex];
      }
      Q = Qnew;
      if (hh != 0.0) h[hindex++] = hh;
    }
  }
  while (eindex < elen) {
    two_sum(Q, enow, Qnew, hh);
    enow = e[++eindex];
    Q = Qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  while (findex < flen) {
    two_sum(Q, fnow, Qnew, hh);
    fnow = f[++findex];
    Q = Qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  if ((Q != 0.0) || (hindex == 0)) h[hindex++] = Q;
  return hindex;
}

int scale_expansion_zeroelim(int elen, const double* e, double b, double* h) {
  double Q, sum, hh, product1, product0;
  int hindex = 0;
  two_prod(e[0], b, Q, hh);
  if (hh != 0.0) h[hindex++] = hh;
  for (int eindex = 1; eindex < elen; ++eindex) {
    two_prod(e[eindex], b, product1, product0);
    two_sum(Q, product0, sum, hh);
    if (hh != 0.0) h[hindex++] = hh;
    fast_two_sum(product1, sum, Q, hh);
    if (hh != 0.0) h[hindex++] = hh;
  }
  if ((Q != 0.0) || (hindex == 0)) h[hindex++] = Q;
  return hindex;
}

int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  double detleft = (ax - cx) * (by - cy);
  double detright = (ay - cy) * (bx - cx);
  double det = detleft - detright;
  double detsum = std::fabs(detleft) + std::fabs(detright);
  if (std::fabs(det) > 1e-13 * detsum) return (det > 0.0) - (det < 0.0);

  // Exact path: differences as 2-expansions, products exactly, sign of the sum.
  double acx[2], bcy[2], acy[2], bcx[2];
  two_diff(ax, cx, acx[1], acx[0]);
  two_diff(by, cy, bcy[1], bcy[0]);
  two_diff(ay, cy, acy[1], acy[0]);
  two_diff(bx, cx, bcx[1], bcx[0]);
  double left[8], right[8], result[16];
  int nl = prod_2x2(acx, bcy, left);
  int nr = prod_2x2(acy, bcx, right);
  int n = expansion_diff(nl, left, nr, right, result);
  return expansion_sign(n, result);
}

int orient3d(const double* a, const double* b, const double* c, const double* d) {
  // rows u = b - a, v = c - a, w = d - a
  double fux = b[0] - a[0], fuy = b[1] - a[1], fuz = b[2] - a[2];
  double fvx = c[0] - a[0], fvy = c[1] - a[1], fvz = c[2] - a[2];
  double fwx = d[0] - a[0], fwy = d[1] - a[1], fwz = d[2] - a[2];

  double vywz = fvy * fwz, vzwy = fvz * fwy;
  double vxwz = fvx * fwz, vzwx = fvz * fwx;
  double vxwy = fvx * fwy, vywx = fvy * fwx;

  double det = fux * (vywz - vzwy) - fuy * (vxwz - vzwx) + fuz * (vxwy - vywx);
  double permanent = (std::fabs(vywz) + std::fabs(vzwy)) * std::fabs(fux) +
                     (std::fabs(vxwz) + std::fabs(vzwx)) * std::fabs(fuy) +
                     (std::fabs(vxwy) + std::fabs(vywx)) * std::fabs(fuz);
  if (std::fabs(det) > 1e-12 * permanent) return (det > 0.0) - (det < 0.0);

  // Exact path with the same row convention.
  double ux[2], uy[2], uz[2], vx[2], vy[2], vz[2], wx[2], wy[2], wz[2];
  two_diff(b[0], a[0], ux[1], ux[0]);
  two_diff(b[1], a[1], uy[1], uy[0]);
  two_diff(b[2], a[2], uz[1], uz[0]);
  two_diff(c[0], a[0], vx[1], vx[0]);
  two_diff(c[1], a[1], vy[1], vy[0]);
  two_diff(c[2], a[2], vz[1], vz[0]);
  two_diff(d[0], a[0], wx[1], wx[0]);
  two_diff(d[1], a[1], wy[1], wy[0]);
  two_diff(d[2], a[2], wz[1], wz[0]);

  // minor_x = vy*wz - vz*wy, minor_y = vx*wz - vz*wx, minor_z = vx*wy - vy*wx
  double p0[8], p1[8], minor_x[16], minor_y[16], minor_z[16];
  int n0 = prod_2x2(vy, wz, p0);
  int n1 = prod_2x2(vz, wy, p1);
  int nmx = expansion_diff(n0, p0, n1, p1, minor_x);
  n0 = prod_2x2(vx, wz, p0);
  n1 = prod_2x2(vz, wx, p1);
  int nmy = expansion_diff(n0, p0, n1, p1, minor_y);
  n0 = prod_2x2(vx, wy, p0);
  n1 = prod_2x2(vy, wx, p1);
  int nmz = expansion_diff(n0, p0, n1, p1, minor_z);

  double tx[64], ty[64], tz[64];
  int ntx = prod_2xn(ux, nmx, minor_x, tx);
  int nty = prod_2xn(uy, nmy, minor_y, ty);
  int ntz = prod_2xn(uz, nmz, minor_z, tz);

  double txy[128], result[192];
  for (int i = 0; i < nty; ++i) ty[i] = -ty[i];
  int ntxy = fast_expansion_sum_zeroelim(ntx, tx, nty, ty, txy);
  int n = fast_expansion_sum_zeroelim(ntxy, txy, ntz, tz, result);
  return expansion_sign(n, result);
}

}  // namespace dcsplit::exact
