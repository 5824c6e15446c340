#pragma once

#include "dcsplit/envelope.hpp"

namespace dcsplit {

// Continuous PL function vanishing outside a bounded connected support.
struct FiniteFunction {
  PLField field;                      // zero outside the support
  std::vector<int> support_triangles; // edge-connected, sorted
  std::vector<Vec2> support_hull;     // ccw convex polygon
  int depth = 1;
  std::vector<int> index_path;

  double sup_norm() const { return field.max_abs(); }
};

struct DCPair {
  PLField g, h;
  double residual_sup = 0;  // max over nodes of |f - (g - h)|
};

enum class Termination { converged, max_iter, stalled };

const char* termination_name(Termination t);

struct DepthRecord {
  int depth = 0;
  int count = 0;       // finite functions entering this depth
  double h_k = 0;      // largest sup norm among them
  double cumulative_budget = 0;  // running sum of their max gradient norms
};

// One processed finite function: the split of its convex minorant.
struct TermRecord {
  int depth = 0;
  int sign = 0;  // (-1)^depth
  std::vector<int> index_path;
  Eigen::VectorXd finite_values;
  Eigen::VectorXd tilde_values;  // extension of the minorant
  Eigen::VectorXd bar_values;    // tilde clipped against the zero extension
  double sup_norm = 0;
  double max_gradient = 0;
};

struct DiscardRecord {
  int depth = 0;
  Eigen::VectorXd values;
  int sign = 0;
  double max_gradient = 0;
};

struct DecompositionTrace {
  Eigen::VectorXd root_minorant;  // f_1 at the mesh nodes
  std::vector<DepthRecord> records;
  std::vector<TermRecord> terms;
  std::vector<DiscardRecord> discarded;
  Termination termination = Termination::converged;
  double lipschitz_input = 0;
  int depths_used = 0;
};

// Connected components (over triangle edge-adjacency) of the nonzero set of
// diff, returned as finite functions that sum to diff at every node.
std::vector<FiniteFunction> extract_finite_functions(const PLField& diff,
                                                     const std::vector<Vec2>& parent_region,
                                                     int depth,
                                                     const std::vector<int>& parent_path);

// The iterative convex-minorant expansion: subtract the maximal convex
// minorant, split off finite functions, recurse with alternating signs, stop
// once every remaining finite function fits in the eps budget.
std::pair<DCPair, DecompositionTrace> dc_decompose(const PLField& f, double eps, int max_iter);

// Assembles (g, h) from the recorded terms by depth parity.
DCPair sign_assembly(const PLField& f, const DecompositionTrace& trace);

struct LipschitzAudit {
  double max_gradient = 0;  // over all recorded finite functions
  double bound = 0;         // 2 L(f) + tolerance
  bool ok = false;
};

LipschitzAudit lipschitz_audit(const DecompositionTrace& trace);

}  // namespace dcsplit
