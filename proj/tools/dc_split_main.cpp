#include <CLI11.hpp>

#include "dcsplit/io.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace dcsplit;

FieldDocument load_input(const std::string& input) {
  if (input.rfind("preset:", 0) == 0) {
    std::string rest = input.substr(7);
    // preset:NAME[:nx[:ny]]
    std::string name = rest;
    int nx = 0, ny = 0;
    auto p1 = rest.find(':');
    if (p1 != std::string::npos) {
      name = rest.substr(0, p1);
      auto p2 = rest.find(':', p1 + 1);
      if (p2 == std::string::npos) {
        nx = ny = std::stoi(rest.substr(p1 + 1));
      } else {
        nx = std::stoi(rest.substr(p1 + 1, p2 - p1 - 1));
        ny = std::stoi(rest.substr(p2 + 1));
      }
    }
    FieldDocument doc = preset_document(name);
    if (nx >= 2) doc.nx = nx;
    if (ny >= 2) doc.ny = ny;
    return doc;
  }
  return load_field_document(input);
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path);
  out << data;
}

ClosedConvexCurve parse_curve_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto num = [&](size_t i) { return std::stod(parts.at(i)); };
  if (parts[0] == "square" && parts.size() == 2) return make_square(num(1));
  if (parts[0] == "kgon" && parts.size() == 5)
    return make_regular_polygon(std::stoi(parts[1]), num(2), Vec2(num(3), num(4)));
  if (parts[0] == "rect" && parts.size() == 6)
    return make_rectangle(num(1), num(2), num(3) * M_PI / 180.0, Vec2(num(4), num(5)));
  throw Error("bad curve spec (use square:s, kgon:k:r:cx:cy or rect:w:h:angle:cx:cy)");
}

int run_decompose(const std::string& input, double eps, int max_iter, const std::string& out_path) {
  FieldDocument doc = load_input(input);
  PLField field = build_field(doc);
  auto t0 = std::chrono::steady_clock::now();
  auto [pair, trace] = dc_decompose(field, eps, max_iter);
  std::vector<double> estimate = dc_condition_estimate(field, 2, 1);
  auto t1 = std::chrono::steady_clock::now();
  write_output(out_path, write_decompose_document(doc, eps, max_iter, pair, trace, estimate));
  std::cerr << "decompose: " << termination_name(trace.termination)
            << ", residual_sup=" << pair.residual_sup << ", depths=" << trace.depths_used << ", "
            << std::chrono::duration<double>(t1 - t0).count() << " s\n";
  switch (trace.termination) {
    case Termination::converged: return 0;
    case Termination::stalled: return 2;
    case Termination::max_iter: return 3;
  }
  return 0;
}

int run_check(const std::string& input, int levels, uint64_t seed, const std::string& out_path) {
  FieldDocument doc = load_input(input);
  CheckReport report;
  report.seed = seed;
  std::vector<double> variation_series, turn_series;
  bool refines = !doc.preset.empty() &&
                 preset_grid_for_level(doc.preset, 1) != preset_grid_for_level(doc.preset, 2);
  if (refines) {
    for (int l = 1; l <= levels; ++l) {
      PLField field = build_field_for_level(doc, l);
      variation_series.push_back(dc_condition_estimate(field, l, seed).back());
      turn_series.push_back(turn_estimate(field, l, seed).back());
    }
  } else {
    PLField field = build_field(doc);
    variation_series = dc_condition_estimate(field, levels, seed);
    turn_series = turn_estimate(field, levels, seed);
  }
  for (int l = 1; l <= levels; ++l)
    report.levels.push_back({l, variation_series[l - 1], turn_series[l - 1]});
  report.variation_classification = classify_series(variation_series);
  report.turn_classification = classify_series(turn_series);
  write_output(out_path, write_check_document(doc, report));
  return 0;
}

int run_restrict(const std::string& input, const std::string& curve_spec,
                 const std::string& plot_path, const std::string& out_path) {
  FieldDocument doc = load_input(input);
  PLField field = build_field(doc);
  ClosedConvexCurve curve = parse_curve_spec(curve_spec);
  CurveRestriction r = restrict_to_curve(field, curve);
  double variation = variation_of_slope(r);
  double turn = turn_from_restriction(r);
  if (!plot_path.empty()) write_output(plot_path, write_plot_data(r));
  write_output(out_path, write_restrict_summary(doc, r, variation, turn));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difference-of-convex decomposition and curve diagnostics"};
  app.require_subcommand(1);

  std::string input, out_path, plot_path, curve_spec;
  double eps = 1e-6;
  int max_iter = 50;
  int levels = 5;
  uint64_t seed = 1;

  auto* dec = app.add_subcommand("decompose", "split a field into a difference of convex parts");
  dec->add_option("input", input, "field document path or preset:NAME[:nx[:ny]]")->required();
  dec->add_option("--eps", eps, "target sup-norm for the residual");
  dec->add_option("--max-iter", max_iter, "maximum expansion depth");
  dec->add_option("--out", out_path, "output document path (stdout when omitted)");

  auto* chk = app.add_subcommand("check", "per-level variation and turn diagnostics");
  chk->add_option("input", input, "field document path or preset:NAME[:nx[:ny]]")->required();
  chk->add_option("--levels", levels, "number of curve-family levels");
  chk->add_option("--seed", seed, "family seed");
  chk->add_option("--out", out_path, "output document path (stdout when omitted)");

  auto* res = app.add_subcommand("restrict", "restrict the field to a closed convex curve");
  res->add_option("input", input, "field document path or preset:NAME[:nx[:ny]]")->required();
  res->add_option("--curve", curve_spec, "square:s | kgon:k:r:cx:cy | rect:w:h:angle_deg:cx:cy")
      ->required();
  res->add_option("--plot", plot_path, "columnar plot output (t, phi, dphi)");
  res->add_option("--out", out_path, "summary document path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad usage is an input error
  }

  try {
    dcsplit::thread_cap();  // validate DC_SPLIT_THREADS up front
    if (*dec) return run_decompose(input, eps, max_iter, out_path);
    if (*chk) return run_check(input, levels, seed, out_path);
    if (*res) return run_restrict(input, curve_spec, plot_path, out_path);
  } catch (const dcsplit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
