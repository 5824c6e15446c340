#include "dcsplit/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace dcsplit {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iter: return "max_iter";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

namespace {
int sign_of_depth(int depth) { return depth % 2 == 0 ? 1 : -1; }
}  // namespace

std::vector<FiniteFunction> extract_finite_functions(const PLField& diff,
                                                     const std::vector<Vec2>& parent_region,
                                                     int depth,
                                                     const std::vector<int>& parent_path) {
  (void)parent_region;  // diffs vanish outside the parent region by construction
  const Triangulation& mesh = *diff.mesh;
  double zero_tol = 1e-10 * (1.0 + diff.max_abs());

  int nv = static_cast<int>(mesh.vertices.size());
  int nt = static_cast<int>(mesh.triangles.size());
  std::vector<char> nonzero_vertex(nv, 0);
  for (int v = 0; v < nv; ++v) nonzero_vertex[v] = std::fabs(diff.values[v]) > zero_tol;

  std::vector<char> nonzero_tri(nt, 0);
  for (int t = 0; t < nt; ++t) {
    const auto& tr = mesh.triangles[t];
    nonzero_tri[t] = nonzero_vertex[tr[0]] || nonzero_vertex[tr[1]] || nonzero_vertex[tr[2]];
  }

  // components over triangle edge-adjacency
  std::vector<int> comp(nt, -1);
  int ncomp = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (!nonzero_tri[seed] || comp[seed] >= 0) continue;
    std::queue<int> q;
    q.push(seed);
    comp[seed] = ncomp;
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (int k = 0; k < 3; ++k) {
        int nb = mesh.neighbors[t][k];
        if (nb >= 0 && nonzero_tri[nb] && comp[nb] < 0) {
          comp[nb] = ncomp;
          q.push(nb);
        }
      }
    }
    ++ncomp;
  }
  if (ncomp == 0) return {};

  // every nonzero vertex belongs to exactly one component: the one holding
  // its lowest-index nonzero incident triangle
  std::vector<int> owner(nv, -1);
  for (int t = 0; t < nt; ++t) {
    if (!nonzero_tri[t]) continue;
    for (int k = 0; k < 3; ++k) {
      int v = mesh.triangles[t][k];
      if (nonzero_vertex[v] && owner[v] < 0) owner[v] = comp[t];
    }
  }

  std::vector<std::vector<int>> tris_of(ncomp);
  for (int t = 0; t < nt; ++t)
    if (comp[t] >= 0) tris_of[comp[t]].push_back(t);

  std::vector<int> order(ncomp);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (tris_of[a].size() != tris_of[b].size()) return tris_of[a].size() > tris_of[b].size();
    return tris_of[a].front() < tris_of[b].front();
  });

  std::vector<FiniteFunction> out;
  out.reserve(ncomp);
  for (int rank = 0; rank < ncomp; ++rank) {
    int c = order[rank];
    FiniteFunction fn;
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(nv);
    for (int v = 0; v < nv; ++v)
      if (owner[v] == c) vals[v] = diff.values[v];
    fn.field = PLField(diff.mesh, std::move(vals));
    fn.support_triangles = tris_of[c];
    std::vector<Vec2> pts;
    for (int t : tris_of[c])
      for (int k = 0; k < 3; ++k) pts.push_back(mesh.vertices[mesh.triangles[t][k]]);
    fn.support_hull = convex_hull_2d(pts);
    fn.depth = depth;
    fn.index_path = parent_path;
    fn.index_path.push_back(rank);
    out.push_back(std::move(fn));
  }
  return out;
}

std::pair<DCPair, DecompositionTrace> dc_decompose(const PLField& f, double eps, int max_iter) {
  if (!(eps > 0)) throw Error("eps must be positive");
  if (max_iter < 1) throw Error("max_iter must be at least 1");
  std::vector<Vec2> domain = normalize_convex_polygon(f.mesh->domain);

  DecompositionTrace trace;
  trace.lipschitz_input = lipschitz_constant(f);

  ConvexPLFunction m0 = convex_minorant(f, domain);
  trace.root_minorant = m0.as_field.values;

  PLField diff0(f.mesh, m0.as_field.values - f.values);
  std::vector<FiniteFunction> current = extract_finite_functions(diff0, domain, 1, {});

  Eigen::VectorXd discard_budget = Eigen::VectorXd::Zero(f.values.size());
  std::vector<double> h_series;
  double cumulative_budget = 0;
  Termination term = Termination::converged;
  int depth = 1;

  while (!current.empty()) {
    std::sort(current.begin(), current.end(), [](const FiniteFunction& a, const FiniteFunction& b) {
      if (a.support_triangles.size() != b.support_triangles.size())
        return a.support_triangles.size() > b.support_triangles.size();
      return a.support_triangles.front() < b.support_triangles.front();
    });

    DepthRecord rec;
    rec.depth = depth;
    rec.count = static_cast<int>(current.size());
    rec.h_k = 0;
    for (const auto& F : current) rec.h_k = std::max(rec.h_k, F.sup_norm());
    for (const auto& F : current) cumulative_budget += lipschitz_constant(F.field);
    rec.cumulative_budget = cumulative_budget;
    trace.records.push_back(rec);
    h_series.push_back(rec.h_k);

    int n = static_cast<int>(h_series.size());
    if (rec.h_k > eps && n >= 4) {
      bool improving = false;
      for (int k = n - 3; k < n; ++k)
        if (h_series[k] < h_series[k - 1] * (1.0 - 1e-12)) improving = true;
      if (!improving) {
        term = Termination::stalled;
        break;
      }
    }
    if (depth > max_iter) {
      term = Termination::max_iter;
      break;
    }

    std::vector<FiniteFunction> next;
    for (auto& F : current) {
      double sup = F.sup_norm();
      if (sup <= eps) {
        Eigen::VectorXd cand = discard_budget + F.field.values.cwiseAbs();
        if (cand.maxCoeff() <= eps) {
          discard_budget = std::move(cand);
          DiscardRecord dr;
          dr.depth = F.depth;
          dr.sign = sign_of_depth(F.depth);
          dr.max_gradient = lipschitz_constant(F.field);
          dr.values = F.field.values;
          trace.discarded.push_back(std::move(dr));
          continue;
        }
      }

      ConvexPLFunction minorant = convex_minorant(F.field, F.support_hull);
      Eigen::VectorXd tilde = minorant.as_field.values;
      Eigen::VectorXd bar = (tilde - F.field.values).cwiseMax(0.0);
      Eigen::VectorXd mz = tilde - bar;

      PLField child_diff(f.mesh, mz - F.field.values);
      auto children = extract_finite_functions(child_diff, F.support_hull, F.depth + 1,
                                               F.index_path);

      TermRecord tr;
      tr.depth = F.depth;
      tr.sign = sign_of_depth(F.depth);
      tr.index_path = F.index_path;
      tr.finite_values = F.field.values;
      tr.tilde_values = std::move(tilde);
      tr.bar_values = std::move(bar);
      tr.sup_norm = sup;
      tr.max_gradient = lipschitz_constant(F.field);
      trace.terms.push_back(std::move(tr));

      for (auto& c : children) next.push_back(std::move(c));
    }
    current = std::move(next);
    ++depth;
  }

  trace.termination = term;
  trace.depths_used = depth;
  DCPair pair = sign_assembly(f, trace);
  return {std::move(pair), std::move(trace)};
}

DCPair sign_assembly(const PLField& f, const DecompositionTrace& trace) {
  if (trace.root_minorant.size() != f.values.size())
    throw Error("trace does not match the field");
  Eigen::VectorXd g = trace.root_minorant;
  Eigen::VectorXd h = Eigen::VectorXd::Zero(g.size());
  for (const TermRecord& t : trace.terms) {
    if (t.sign > 0) {
      g += t.tilde_values;
      h += t.bar_values;
    } else {
      h += t.tilde_values;
      g += t.bar_values;
    }
  }
  DCPair out;
  out.g = PLField(f.mesh, std::move(g));
  out.h = PLField(f.mesh, std::move(h));
  out.residual_sup = (f.values - (out.g.values - out.h.values)).cwiseAbs().maxCoeff();
  return out;
}

LipschitzAudit lipschitz_audit(const DecompositionTrace& trace) {
  LipschitzAudit audit;
  for (const TermRecord& t : trace.terms)
    audit.max_gradient = std::max(audit.max_gradient, t.max_gradient);
  for (const DiscardRecord& d : trace.discarded)
    audit.max_gradient = std::max(audit.max_gradient, d.max_gradient);
  audit.bound = 2.0 * trace.lipschitz_input + 1e-6;
  audit.ok = audit.max_gradient <= audit.bound;
  return audit;
}

}  // namespace dcsplit
