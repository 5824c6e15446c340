#include "dcsplit/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dcsplit {

using nlohmann::json;

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Field documents

namespace {

std::vector<Vec2> parse_point_list(const json& arr, const char* what) {
  if (!arr.is_array() || arr.empty()) throw Error(std::string("field '") + what + "' must be a nonempty array");
  std::vector<Vec2> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw Error(std::string("field '") + what + "' must hold [x, y] pairs");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

}  // namespace

FieldDocument parse_field_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed document: ") + e.what());
  }
  if (!j.is_object()) throw Error("document root must be an object");
  if (!j.contains("schema") || j["schema"] != kSchemaVersion)
    throw Error("missing or unsupported schema (expected \"dc-split/1\")");
  FieldDocument doc;
  if (j.contains("name")) doc.name = j["name"].get<std::string>();
  if (j.contains("units")) doc.units = j["units"].get<std::string>();
  if (!j.contains("domain")) throw Error("missing field: domain");
  doc.domain = parse_point_list(j["domain"], "domain");

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object() || !g.contains("nx") || !g.contains("ny"))
      throw Error("field 'grid' must hold nx and ny");
    doc.has_grid = true;
    doc.nx = g["nx"].get<int>();
    doc.ny = g["ny"].get<int>();
  }
  if (j.contains("mesh")) {
    const auto& m = j["mesh"];
    if (!m.is_object() || !m.contains("vertices") || !m.contains("triangles"))
      throw Error("field 'mesh' must hold vertices and triangles");
    doc.has_mesh = true;
    doc.mesh_vertices = parse_point_list(m["vertices"], "mesh.vertices");
    for (const auto& t : m["triangles"]) {
      if (!t.is_array() || t.size() != 3) throw Error("field 'mesh.triangles' must hold index triples");
      doc.mesh_triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
  }
  if (doc.has_grid == doc.has_mesh) throw Error("document needs exactly one of 'grid' or 'mesh'");

  if (!j.contains("values")) throw Error("missing field: values");
  if (j["values"].is_string()) {
    doc.preset = j["values"].get<std::string>();
    if (!preset_exists(doc.preset)) throw Error("unknown preset: " + doc.preset);
  } else if (j["values"].is_array()) {
    for (const auto& v : j["values"]) {
      if (!v.is_number()) throw Error("field 'values' must hold numbers");
      doc.values.push_back(v.get<double>());
    }
  } else {
    throw Error("field 'values' must be an array or a preset name");
  }
  return doc;
}

FieldDocument load_field_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_field_document(ss.str());
}

std::string write_field_document(const FieldDocument& doc) {
  std::string s = "{\n";
  s += "  \"schema\": \"dc-split/1\",\n";
  s += "  \"name\": \"" + doc.name + "\",\n";
  s += "  \"units\": \"" + doc.units + "\",\n";
  s += "  \"domain\": [";
  for (size_t i = 0; i < doc.domain.size(); ++i) {
    if (i) s += ", ";
    s += "[" + format_number(doc.domain[i].x()) + ", " + format_number(doc.domain[i].y()) + "]";
  }
  s += "],\n";
  if (doc.has_grid) {
    s += "  \"grid\": {\"nx\": " + std::to_string(doc.nx) + ", \"ny\": " + std::to_string(doc.ny) +
         "},\n";
  } else {
    s += "  \"mesh\": {\"vertices\": [";
    for (size_t i = 0; i < doc.mesh_vertices.size(); ++i) {
      if (i) s += ", ";
      s += "[" + format_number(doc.mesh_vertices[i].x()) + ", " +
           format_number(doc.mesh_vertices[i].y()) + "]";
    }
    s += "], \"triangles\": [";
    for (size_t i = 0; i < doc.mesh_triangles.size(); ++i) {
      if (i) s += ", ";
      s += "[" + std::to_string(doc.mesh_triangles[i][0]) + ", " +
           std::to_string(doc.mesh_triangles[i][1]) + ", " +
           std::to_string(doc.mesh_triangles[i][2]) + "]";
    }
    s += "]},\n";
  }
  if (!doc.preset.empty()) {
    s += "  \"values\": \"" + doc.preset + "\"\n";
  } else {
    s += "  \"values\": [";
    for (size_t i = 0; i < doc.values.size(); ++i) {
      if (i) s += ", ";
      s += format_number(doc.values[i]);
    }
    s += "]\n";
  }
  s += "}\n";
  return s;
}

// ---------------------------------------------------------------------------
// Presets (mesh-aligned formulas on [-1, 1]^2)

bool preset_exists(const std::string& name) {
  return name == "neg-abs-x" || name == "abs-x" || name == "affine" || name == "saddle" ||
         name == "osc" || name == "sine-bump";
}

double preset_value(const std::string& name, double x, double y) {
  if (name == "neg-abs-x") return -std::fabs(x);
  if (name == "abs-x") return std::fabs(x);
  if (name == "affine") return 0.75 * x - 0.5 * y + 0.25;
  if (name == "saddle") return x * y;
  if (name == "osc") return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / x);
  if (name == "sine-bump") return std::sin(3.0 * x) * std::sin(3.0 * y);
  throw Error("unknown preset: " + name);
}

FieldDocument preset_document(const std::string& name) {
  if (!preset_exists(name)) throw Error("unknown preset: " + name);
  FieldDocument doc;
  doc.name = name;
  doc.domain = {Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)};
  doc.has_grid = true;
  doc.preset = name;
  if (name == "sine-bump") {
    doc.nx = doc.ny = 33;
  } else if (name == "osc") {
    doc.nx = 27;
    doc.ny = 9;
  } else {
    doc.nx = doc.ny = 17;
  }
  return doc;
}

std::pair<int, int> preset_grid_for_level(const std::string& name, int level) {
  if (name == "osc") {
    static const int schedule[] = {9, 27, 81, 401, 3201};
    int l = std::clamp(level, 1, 5);
    return {schedule[l - 1], 9};
  }
  FieldDocument doc = preset_document(name);
  return {doc.nx, doc.ny};
}

// ---------------------------------------------------------------------------
// Field construction

namespace {

std::shared_ptr<const Triangulation> build_mesh(const FieldDocument& doc, int nx, int ny) {
  if (doc.has_grid) {
    return std::make_shared<const Triangulation>(triangulate_grid(doc.domain, nx, ny));
  }
  Triangulation tri;
  tri.vertices = doc.mesh_vertices;
  tri.triangles = doc.mesh_triangles;
  tri.domain = doc.domain;
  for (const auto& t : tri.triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= static_cast<int>(tri.vertices.size()))
        throw Error("mesh triangle index out of range");
    }
    if (orient(tri.vertices[t[0]], tri.vertices[t[1]], tri.vertices[t[2]]) <= 0)
      throw Error("mesh triangles must be positively oriented");
  }
  return std::make_shared<const Triangulation>(finalize_triangulation(std::move(tri)));
}

}  // namespace

PLField build_field(const FieldDocument& doc) { return build_field_for_level(doc, 0); }

PLField build_field_for_level(const FieldDocument& doc, int level) {
  int nx = doc.nx, ny = doc.ny;
  if (level >= 1 && !doc.preset.empty()) {
    auto [lx, ly] = preset_grid_for_level(doc.preset, level);
    nx = lx;
    ny = ly;
  }
  std::shared_ptr<const Triangulation> mesh = build_mesh(doc, nx, ny);
  Eigen::VectorXd values(mesh->vertices.size());
  if (!doc.preset.empty()) {
    for (int v = 0; v < static_cast<int>(mesh->vertices.size()); ++v)
      values[v] = preset_value(doc.preset, mesh->vertices[v].x(), mesh->vertices[v].y());
  } else {
    if (doc.values.size() != mesh->vertices.size())
      throw Error("values length " + std::to_string(doc.values.size()) +
                  " does not match vertex count " + std::to_string(mesh->vertices.size()));
    for (size_t v = 0; v < doc.values.size(); ++v) values[v] = doc.values[v];
  }
  return PLField(mesh, std::move(values));
}

// ---------------------------------------------------------------------------
// Result documents

std::string classify_series(const std::vector<double>& series) {
  if (series.size() < 2) return "plateau";
  double last = series.back();
  double prev = series[series.size() - 2];
  double scale = std::max(std::fabs(last), 1e-30);
  return std::fabs(last - prev) <= 0.01 * scale ? "plateau" : "growth";
}

namespace {

std::string values_array(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  s += "]";
  return s;
}

std::string faces_array(const std::vector<LowerHullFace>& faces) {
  std::string s = "[";
  for (size_t i = 0; i < faces.size(); ++i) {
    if (i) s += ", ";
    s += "[" + format_number(faces[i].gradient.x()) + ", " + format_number(faces[i].gradient.y()) +
         ", " + format_number(faces[i].offset) + "]";
  }
  s += "]";
  return s;
}

std::vector<LowerHullFace> nodal_hull_faces(const PLField& field) {
  std::vector<Vec3> lifted;
  lifted.reserve(field.mesh->vertices.size());
  for (int v = 0; v < static_cast<int>(field.mesh->vertices.size()); ++v)
    lifted.emplace_back(field.mesh->vertices[v].x(), field.mesh->vertices[v].y(), field.values[v]);
  return lower_hull_3d(lifted);
}

const char* verdict_name(Termination t) {
  switch (t) {
    case Termination::converged: return "decomposed";
    case Termination::max_iter: return "max_iter";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

}  // namespace

std::string write_decompose_document(const FieldDocument& doc, double eps, int max_iter,
                                     const DCPair& pair, const DecompositionTrace& trace,
                                     const std::vector<double>& condition_estimate) {
  LipschitzAudit audit = lipschitz_audit(trace);
  std::string s = "{\n";
  s += "  \"schema\": \"dc-split/1\",\n";
  s += "  \"command\": \"decompose\",\n";
  s += "  \"input\": \"" + (doc.name.empty() ? std::string("field") : doc.name) + "\",\n";
  s += "  \"eps\": " + format_number(eps) + ",\n";
  s += "  \"max_iter\": " + std::to_string(max_iter) + ",\n";
  s += "  \"report\": {\n";
  s += "    \"verdict\": \"" + std::string(verdict_name(trace.termination)) + "\",\n";
  s += "    \"residual_sup\": " + format_number(pair.residual_sup) + ",\n";
  s += "    \"depths_used\": " + std::to_string(trace.depths_used) + ",\n";
  s += "    \"h_k\": [";
  for (size_t i = 0; i < trace.records.size(); ++i) {
    if (i) s += ", ";
    s += format_number(trace.records[i].h_k);
  }
  s += "],\n";
  s += "    \"lipschitz\": {\"L\": " + format_number(trace.lipschitz_input) +
       ", \"max_finite_gradient\": " + format_number(audit.max_gradient) +
       ", \"two_L_bound\": " + format_number(audit.bound) +
       ", \"ok\": " + (audit.ok ? "true" : "false") + "},\n";
  s += "    \"condition_estimate\": [";
  for (size_t i = 0; i < condition_estimate.size(); ++i) {
    if (i) s += ", ";
    s += format_number(condition_estimate[i]);
  }
  s += "]\n  },\n";
  s += "  \"g\": {\"values\": " + values_array(pair.g.values) +
       ", \"faces\": " + faces_array(nodal_hull_faces(pair.g)) + "},\n";
  s += "  \"h\": {\"values\": " + values_array(pair.h.values) +
       ", \"faces\": " + faces_array(nodal_hull_faces(pair.h)) + "},\n";
  s += "  \"trace\": {\"termination\": \"" + std::string(termination_name(trace.termination)) +
       "\", \"records\": [";
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const DepthRecord& r = trace.records[i];
    if (i) s += ", ";
    s += "{\"depth\": " + std::to_string(r.depth) + ", \"count\": " + std::to_string(r.count) +
         ", \"h_k\": " + format_number(r.h_k) +
         ", \"cumulative_budget\": " + format_number(r.cumulative_budget) + "}";
  }
  s += "]}\n}\n";
  return s;
}

std::string write_check_document(const FieldDocument& doc, const CheckReport& report) {
  std::string s = "{\n";
  s += "  \"schema\": \"dc-split/1\",\n";
  s += "  \"command\": \"check\",\n";
  s += "  \"input\": \"" + (doc.name.empty() ? std::string("field") : doc.name) + "\",\n";
  s += "  \"seed\": " + std::to_string(report.seed) + ",\n";
  s += "  \"levels\": [";
  for (size_t i = 0; i < report.levels.size(); ++i) {
    const CheckLevel& l = report.levels[i];
    if (i) s += ", ";
    s += "{\"level\": " + std::to_string(l.level) +
         ", \"variation_sup\": " + format_number(l.variation_sup) +
         ", \"turn_sup\": " + format_number(l.turn_sup) + "}";
  }
  s += "],\n";
  s += "  \"variation_classification\": \"" + report.variation_classification + "\",\n";
  s += "  \"turn_classification\": \"" + report.turn_classification + "\"\n";
  s += "}\n";
  return s;
}

std::string write_restrict_summary(const FieldDocument& doc, const CurveRestriction& restriction,
                                   double variation, double turn) {
  std::string s = "{\n";
  s += "  \"schema\": \"dc-split/1\",\n";
  s += "  \"command\": \"restrict\",\n";
  s += "  \"input\": \"" + (doc.name.empty() ? std::string("field") : doc.name) + "\",\n";
  s += "  \"T_r\": " + format_number(restriction.breakpoints.back()) + ",\n";
  s += "  \"breakpoints\": " + std::to_string(restriction.breakpoints.size()) + ",\n";
  s += "  \"variation\": " + format_number(variation) + ",\n";
  s += "  \"turn\": " + format_number(turn) + "\n";
  s += "}\n";
  return s;
}

std::string write_plot_data(const CurveRestriction& r) {
  std::string s = "# dc-split restriction plot\n# t phi dphi\n";
  for (size_t i = 0; i < r.breakpoints.size(); ++i) {
    double slope = i < r.slopes.size() ? r.slopes[i] : r.slopes.back();
    s += format_number(r.breakpoints[i]) + " " + format_number(r.values[i]) + " " +
         format_number(slope) + "\n";
  }
  return s;
}

int thread_cap() {
  const char* env = std::getenv("DC_SPLIT_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v < 1) throw Error("invalid DC_SPLIT_THREADS (need an integer >= 1)");
  return static_cast<int>(v);
}

}  // namespace dcsplit
