#include "hydroelastic/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "hydroelastic/branch_io.hpp"
#include "hydroelastic/continuation.hpp"
#include "hydroelastic/errors.hpp"
#include "hydroelastic/flowfield.hpp"
#include "hydroelastic/residual.hpp"

namespace hydroelastic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError("unknown key '" + where + key + "'");
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  return j;
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError("'" + where + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + where + "' must be finite");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError("'" + where + "' must be an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError("'" + where + "' must be a string");
  return j.get<std::string>();
}

/// Array of numbers, or {"from", "to", "count"} for evenly spaced values.
std::vector<double> get_number_grid(const json& j, const std::string& where) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (j.is_object()) {
    reject_unknown(j, {"from", "to", "count"}, where + ".");
    if (!j.contains("from") || !j.contains("to") || !j.contains("count"))
      throw ConfigError("'" + where + "' range needs from, to and count");
    const double from = get_number(j["from"], where + ".from");
    const double to = get_number(j["to"], where + ".to");
    const int count = get_int(j["count"], where + ".count");
    if (count < 0) throw ConfigError("'" + where + ".count' must be non-negative");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    return out;
  }
  if (j.is_number()) return {get_number(j, where)};
  throw ConfigError("'" + where + "' must be a number, an array or a range object");
}

/// Array of integers, or {"from", "to"} inclusive.
std::vector<int> get_int_grid(const json& j, const std::string& where) {
  std::vector<int> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (j.is_object()) {
    reject_unknown(j, {"from", "to"}, where + ".");
    if (!j.contains("from") || !j.contains("to")) throw ConfigError("'" + where + "' range needs from and to");
    const int from = get_int(j["from"], where + ".from");
    const int to = get_int(j["to"], where + ".to");
    for (int k = from; k <= to; ++k) out.push_back(k);
    return out;
  }
  if (j.is_number_integer()) return {get_int(j, where)};
  throw ConfigError("'" + where + "' must be an integer, an array or a range object");
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

StripGeometry RunConfig::geometry() const { return StripGeometry::make(h, g, N, M); }

EnergyModel RunConfig::model() const { return quadratic_model(alpha, beta); }

json RunConfig::to_json() const {
  json j;
  j["geometry"] = {{"h", h}, {"g", g}, {"N", N}, {"M", M}};
  j["model"] = {{"name", model_name}, {"alpha", alpha}, {"beta", beta}};
  j["output"] = output.string();
  j["n"] = n;
  j["sign"] = std::string(to_string(sign));
  if (gamma) j["gamma"] = *gamma;
  if (delta) j["delta"] = *delta;
  if (lambda) j["lambda"] = *lambda;
  j["ds"] = ds;
  j["steps"] = steps;
  j["secondary_steps"] = secondary_steps;
  j["tol"] = tol;
  j["n_y"] = n_y;
  if (!branch.empty()) j["branch"] = branch;
  j["point"] = point;
  j["dispersion"] = {{"n", dispersion_n}, {"lambda", dispersion_lambda}, {"gamma", dispersion_gamma}};
  j["bifpoints"] = {{"n_max", bifpoints_n_max}, {"gamma", bifpoints_gamma}};
  j["resonance"] = {{"n_max", resonance_n_max}};
  return j;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "<root>");
  reject_unknown(doc, {"geometry", "model", "output", "n", "sign", "gamma", "delta", "lambda", "ds", "steps",
                       "secondary_steps", "tol", "n_y", "branch", "point", "dispersion", "bifpoints",
                       "resonance"},
                 "");
  RunConfig c;
  if (doc.contains("geometry")) {
    const auto& g = require_object(doc["geometry"], "geometry");
    reject_unknown(g, {"h", "g", "N", "M"}, "geometry.");
    if (g.contains("h")) c.h = get_number(g["h"], "geometry.h");
    if (g.contains("g")) c.g = get_number(g["g"], "geometry.g");
    if (g.contains("N")) c.N = get_int(g["N"], "geometry.N");
    if (g.contains("M")) c.M = get_int(g["M"], "geometry.M");
  }
  if (doc.contains("model")) {
    const auto& m = require_object(doc["model"], "model");
    reject_unknown(m, {"name", "alpha", "beta"}, "model.");
    if (m.contains("name")) c.model_name = get_string(m["name"], "model.name");
    if (m.contains("alpha")) c.alpha = get_number(m["alpha"], "model.alpha");
    if (m.contains("beta")) c.beta = get_number(m["beta"], "model.beta");
  }
  if (doc.contains("output")) c.output = get_string(doc["output"], "output");
  if (doc.contains("n")) c.n = get_int(doc["n"], "n");
  if (doc.contains("sign")) {
    try {
      c.sign = parse_sign(get_string(doc["sign"], "sign"));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (doc.contains("gamma")) c.gamma = get_number(doc["gamma"], "gamma");
  if (doc.contains("delta")) c.delta = get_number(doc["delta"], "delta");
  if (doc.contains("lambda")) c.lambda = get_number(doc["lambda"], "lambda");
  if (doc.contains("ds")) c.ds = get_number(doc["ds"], "ds");
  if (doc.contains("steps")) c.steps = get_int(doc["steps"], "steps");
  if (doc.contains("secondary_steps")) c.secondary_steps = get_int(doc["secondary_steps"], "secondary_steps");
  if (doc.contains("tol")) c.tol = get_number(doc["tol"], "tol");
  if (doc.contains("n_y")) c.n_y = get_int(doc["n_y"], "n_y");
  if (doc.contains("branch")) c.branch = get_string(doc["branch"], "branch");
  if (doc.contains("point")) c.point = get_int(doc["point"], "point");
  if (doc.contains("dispersion")) {
    const auto& d = require_object(doc["dispersion"], "dispersion");
    reject_unknown(d, {"n", "lambda", "gamma"}, "dispersion.");
    if (d.contains("n")) c.dispersion_n = get_int_grid(d["n"], "dispersion.n");
    if (d.contains("lambda")) c.dispersion_lambda = get_number_grid(d["lambda"], "dispersion.lambda");
    if (d.contains("gamma")) c.dispersion_gamma = get_number_grid(d["gamma"], "dispersion.gamma");
  }
  if (doc.contains("bifpoints")) {
    const auto& b = require_object(doc["bifpoints"], "bifpoints");
    reject_unknown(b, {"n_max", "gamma"}, "bifpoints.");
    if (b.contains("n_max")) c.bifpoints_n_max = get_int(b["n_max"], "bifpoints.n_max");
    if (b.contains("gamma")) c.bifpoints_gamma = get_number_grid(b["gamma"], "bifpoints.gamma");
  }
  if (doc.contains("resonance")) {
    const auto& r = require_object(doc["resonance"], "resonance");
    reject_unknown(r, {"n_max"}, "resonance.");
    if (r.contains("n_max")) c.resonance_n_max = get_int(r["n_max"], "resonance.n_max");
  }

  check(c.h > 0.0, "geometry.h must be positive");
  check(c.g > 0.0, "geometry.g must be positive");
  check(c.N >= 2, "geometry.N must be at least 2");
  check(c.M == 0 || (c.M % 2 == 0 && c.M >= 3 * c.N), "geometry.M must be 0 or an even number >= 3N");
  check(c.model_name == "quadratic", "model.name must be \"quadratic\"");
  check(c.alpha > 0.0 && c.beta > 0.0, "model.alpha and model.beta must be positive");
  check(c.n >= 1, "n must be >= 1");
  check(c.ds >= 0.0, "ds must be non-negative");
  check(c.steps >= 0, "steps must be non-negative");
  check(c.secondary_steps >= 0, "secondary_steps must be non-negative");
  check(c.tol >= 0.0, "tol must be non-negative");
  check(c.n_y >= 2, "n_y must be at least 2");
  check(c.point >= -1, "point must be -1 (last) or a point index");
  for (int k : c.dispersion_n) check(k >= 1, "dispersion.n entries must be >= 1");
  check(c.bifpoints_n_max >= 1, "bifpoints.n_max must be >= 1");
  check(c.resonance_n_max >= 2, "resonance.n_max must be >= 2");
  return c;
}

RunConfig load_config(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(doc);
}

namespace {

void write_json(const fs::path& path, const json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    first = false;
    if (c.find_first_of(",\"") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    out += '"';
  }
  return out + '\n';
}

ContinuationOptions continuation_options(const RunConfig& cfg) {
  ContinuationOptions o;
  o.ds = cfg.ds;
  o.n_steps = cfg.steps;
  o.secondary_steps = cfg.secondary_steps;
  o.newton.tol = cfg.tol;
  return o;
}

json invariants_json(const std::vector<InvariantCheck>& checks, bool& failed) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"warning_only", c.warning_only}, {"detail", c.detail}});
    if (!c.passed && !c.warning_only) failed = true;
  }
  return arr;
}

json point_json(const BranchPoint& p) {
  json modes = json::array();
  for (const auto& [k, a] : p.dominant_modes) modes.push_back({k, a});
  std::vector<double> a;
  for (int k = 1; k <= p.state.w.order(); ++k) a.push_back(p.state.w.a(k));
  return {{"s", p.arclength},       {"lambda", p.state.lambda},  {"gamma", p.state.gamma},
          {"theta", p.state.theta}, {"amplitude", p.amplitude},  {"residual_norm", p.residual_norm},
          {"dominant_modes", modes}, {"coefficients", a}};
}

/// Writes <stem>.csv and <stem>.json; returns the exit code the branch implies.
int write_branch(const RunConfig& cfg, const Branch& b, const std::string& stem, const StripGeometry& geom,
                 const EnergyModel& model, json* summary = nullptr) {
  export_branch(b, geom.N, cfg.output / (stem + ".csv"));
  auto meta = branch_metadata(b, geom, model, cfg.to_json());
  bool failed = false;
  meta["invariants"] = invariants_json(check_branch_invariants(b, model, geom, cfg.tol), failed);
  int code = kExitOk;
  if (b.aborted) {
    code = kExitNumerical;
  } else if (failed) {
    code = kExitInvariant;
    meta["status"] = "FAILED";
  }
  write_json(cfg.output / (stem + ".json"), meta);
  if (summary) *summary = meta;
  return code;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

int cmd_dispersion(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  const auto model = cfg.model();
  std::string out = "n,lambda,gamma,D\n";
  for (int n : cfg.dispersion_n)
    for (double lam : cfg.dispersion_lambda)
      for (double gam : cfg.dispersion_gamma)
        out += csv_row({std::to_string(n), fmt(lam), fmt(gam), fmt(dispersion(n, lam, gam, model, geom))});
  write_text_atomic(cfg.output / "dispersion.csv", out);
  return kExitOk;
}

int cmd_bifpoints(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  const auto model = cfg.model();
  std::string out = "n,sign,gamma,lambda_star,D,transversality,kernel\n";
  for (double gam : cfg.bifpoints_gamma) {
    for (int n = 1; n <= cfg.bifpoints_n_max; ++n) {
      for (Sign s : {Sign::plus, Sign::minus}) {
        const double lam = lambda_star(n, s, gam, model, geom);
        const auto kc = classify_kernel(lam, gam, model, geom, std::max(cfg.bifpoints_n_max, 2 * n));
        out += csv_row({std::to_string(n), std::string(to_string(s)), fmt(gam), fmt(lam),
                        fmt(dispersion(n, lam, gam, model, geom)), fmt(transversality(n, s, gam, model, geom)),
                        describe(kc)});
      }
    }
  }
  write_text_atomic(cfg.output / "bifpoints.csv", out);
  return kExitOk;
}

int cmd_resonance(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  const auto model = cfg.model();
  std::string out = "n,m,gamma_star_squared,gamma_star,sign,lambda_star_n,lambda_star_m\n";
  for (int n = 1; n <= cfg.resonance_n_max; ++n) {
    for (int m = n + 1; m <= cfg.resonance_n_max; ++m) {
      const double g2 = gamma_star_squared(n, m, model, geom);
      const double gs = std::sqrt(g2);
      const Sign s = resonant_sign(n, m, gs, model, geom);
      out += csv_row({std::to_string(n), std::to_string(m), fmt(g2), fmt(gs), std::string(to_string(s)),
                      fmt(lambda_star(n, s, gs, model, geom)), fmt(lambda_star(m, s, gs, model, geom))});
    }
  }
  write_text_atomic(cfg.output / "resonance.csv", out);
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  const auto model = cfg.model();
  if (cfg.n > geom.N) throw ConfigError("n exceeds the truncation N");
  const auto b = trace_primary(cfg.n, cfg.sign, cfg.gamma.value_or(0.0), model, geom, continuation_options(cfg));
  const int code = write_branch(cfg, b, "branch", geom, model);
  std::printf("trace: %zu points%s\n", b.points.size(), b.aborted ? (" (aborted: " + b.message + ")").c_str() : "");
  return code;
}

int cmd_wilton(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  const auto model = cfg.model();
  if (2 * cfg.n > geom.N) throw ConfigError("wilton needs 2n <= N");
  const double gstar = resonant_gamma(cfg.n, cfg.sign, model, geom);
  const double delta_max = 0.1 * std::abs(gstar);
  const double delta = cfg.delta.value_or(0.02 * std::abs(gstar));
  if (!(std::abs(delta) > 0.0)) throw ConfigError("delta must be nonzero");

  json report;
  report["tool_version"] = std::string(kToolVersion);
  report["gamma_star"] = gstar;
  report["gamma"] = gstar + delta;
  report["delta"] = delta;
  report["delta_max"] = delta_max;
  int code = kExitOk;

  if (std::abs(delta) > delta_max) {
    // Outside the perturbative window nothing is searched; the report says so.
    Branch empty;
    empty.kind = BranchKind::secondary;
    empty.n = cfg.n;
    empty.sign = cfg.sign;
    empty.gamma = gstar + delta;
    for (const char* stem : {"secondary_plus", "secondary_minus"}) {
      export_branch(empty, geom.N, cfg.output / (std::string(stem) + ".csv"));
      write_json(cfg.output / (std::string(stem) + ".json"), branch_metadata(empty, geom, model, cfg.to_json()));
    }
    report["found"] = false;
    report["message"] = "|delta| exceeds " + fmt(delta_max) + "; no secondary branch searched";
  } else {
    const auto r = trace_secondary(cfg.n, cfg.sign, delta, model, geom, continuation_options(cfg));
    // Search traces may stop early (for instance at a self-intersecting
    // profile) without affecting the result; only their invariants count.
    auto search = [&](const Branch& b, const std::string& stem) {
      const int c = write_branch(cfg, b, stem, geom, model);
      return c == kExitNumerical ? kExitOk : c;
    };
    code = search(r.primary, "primary");
    for (const auto& c : r.companions)
      code = std::max(code, search(c, c.direction > 0 ? "companion_plus" : "companion_minus"));
    code = std::max(code, write_branch(cfg, r.secondary_plus, "secondary_plus", geom, model));
    code = std::max(code, write_branch(cfg, r.secondary_minus, "secondary_minus", geom, model));

    report["found"] = r.found;
    report["message"] = r.message;
    report["host_branch_id"] = r.host_id;
    report["determinant_signs"] = r.determinant_signs;
    if (r.bifurcation_point) {
      report["bifurcation_point"] = point_json(*r.bifurcation_point);
      std::vector<double> phi(r.null_direction.data(), r.null_direction.data() + r.null_direction.size());
      report["null_direction"] = phi;
    }
  }
  report["config"] = cfg.to_json();
  report["non_canonical"] = {{"written_at", utc_timestamp()}};
  write_json(cfg.output / "wilton.json", report);
  std::printf("wilton: %s\n", report["message"].get<std::string>().c_str());
  return code;
}

int cmd_flow(const RunConfig& cfg) {
  const auto geom = cfg.geometry();
  const auto model = cfg.model();
  SurfaceState state;
  json source;
  if (!cfg.branch.empty()) {
    const auto b = import_branch(cfg.branch, geom);
    if (b.points.empty()) throw ConfigError("branch file " + cfg.branch + " has no points");
    const int idx = cfg.point < 0 ? static_cast<int>(b.points.size()) - 1 : cfg.point;
    if (idx >= static_cast<int>(b.points.size())) throw ConfigError("point index beyond the branch");
    state = b.points[static_cast<std::size_t>(idx)].state;
    source = {{"branch", cfg.branch}, {"point", idx}};
  } else {
    if (!cfg.lambda) throw ConfigError("flow needs either 'branch' or 'lambda' (laminar state)");
    state = SurfaceState::trivial(geom.N, *cfg.lambda, cfg.gamma.value_or(0.0));
    source = {{"laminar", true}};
  }
  const auto field = reconstruct(state, model, geom, cfg.n_y);
  const auto layers = critical_layers(field, state);

  auto write_field = [&](const std::string& name, const std::vector<double>& values) {
    std::string out = "x,y,value\n";
    for (int j = 0; j < field.n_y; ++j)
      for (int i = 0; i < field.n_x; ++i)
        out += csv_row({fmt(field.x[static_cast<std::size_t>(i)]), fmt(field.y[static_cast<std::size_t>(j)]),
                        fmt(values[field.index(j, i)])});
    write_text_atomic(cfg.output / (name + ".csv"), out);
  };
  write_field("U", field.U);
  write_field("V", field.V);
  write_field("psi", field.psi);
  write_field("psi_X", field.psi_X);
  write_field("psi_Y", field.psi_Y);
  write_field("jacobian_det", field.jacobian_det);

  const auto& d = field.diagnostics;
  const bool solved = d.state_residual <= 1e-9 * (1.0 + state.lambda * state.lambda);
  json checks = json::array();
  bool failed = false;
  auto add = [&](const std::string& name, double value, double limit, bool applies) {
    const bool ok = !applies || value <= limit;
    checks.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"applies", applies}, {"passed", ok}});
    failed = failed || !ok;
  };
  add("surface_streamline", d.surface_streamline, 1e-8, true);
  add("bed_streamline", d.bed_streamline, 1e-10 * std::max(1.0, std::abs(field.mass_flux)), true);
  add("bernoulli", d.bernoulli, 1e-6, solved);
  add("cauchy_riemann", d.cauchy_riemann, 1e-8, true);
  add("jacobian_positive", -d.min_jacobian, 0.0, true);

  auto points_json = [](const std::vector<CriticalPoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({{"column", p.column}, {"x", p.x}, {"y", p.y}, {"X", p.X}, {"Y", p.Y}});
    return arr;
  };
  json meta;
  meta["tool_version"] = std::string(kToolVersion);
  meta["geometry"] = geometry_json(geom);
  meta["model"] = model_json(model);
  meta["source"] = source;
  meta["grid"] = {{"n_x", field.n_x}, {"n_y", field.n_y}, {"ordering", "row-major, y outer"}};
  meta["state"] = {{"lambda", state.lambda}, {"gamma", state.gamma}, {"theta", state.theta},
                   {"mass_flux", field.mass_flux}, {"bernoulli", field.bernoulli}};
  meta["diagnostics"] = {{"surface_streamline", d.surface_streamline}, {"bed_streamline", d.bed_streamline},
                         {"bernoulli", d.bernoulli}, {"cauchy_riemann", d.cauchy_riemann},
                         {"boundary_V", d.boundary_V}, {"state_residual", d.state_residual},
                         {"min_jacobian", d.min_jacobian}};
  meta["checks"] = checks;
  meta["warnings"] = field.warnings;
  meta["critical_points"] = points_json(layers.critical_points);
  meta["stagnation_points"] = points_json(layers.stagnation_points);
  meta["laminar_critical_depth"] =
      layers.laminar_critical_depth ? json(*layers.laminar_critical_depth) : json(nullptr);
  meta["status"] = failed ? "FAILED" : "complete";
  meta["config"] = cfg.to_json();
  meta["non_canonical"] = {{"written_at", utc_timestamp()}};
  write_json(cfg.output / "flow.json", meta);
  for (const auto& w : field.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("flow: %zu critical points, %zu stagnation points\n", layers.critical_points.size(),
              layers.stagnation_points.size());
  return failed ? kExitInvariant : kExitOk;
}

int cmd_check_energy(const RunConfig& cfg) {
  const auto model = cfg.model();
  const auto rest = check_rest_state(model.functions());
  const auto partials = check_partials_consistency(model.functions());
  json checks = json::array();
  for (const auto* rep : {&rest, &partials})
    for (const auto& c : rep->checks)
      checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  const bool ok = rest.passed() && partials.passed();
  json report;
  report["tool_version"] = std::string(kToolVersion);
  report["model"] = model_json(model);
  report["checks"] = checks;
  report["passed"] = ok;
  report["config"] = cfg.to_json();
  report["non_canonical"] = {{"written_at", utc_timestamp()}};
  write_json(cfg.output / "energy_check.json", report);
  std::printf("check-energy: %s\n", ok ? "all checks passed" : "FAILED");
  return ok ? kExitOk : kExitInvariant;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Steady periodic hydroelastic waves with constant vorticity"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, sign, branch;
  std::optional<int> n, steps, point, n_y;
  std::optional<double> gamma, delta, ds, tol, lambda;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--n", n, "mode number");
  app.add_option("--sign", sign, "root sign (+ or -)");
  app.add_option("--gamma", gamma, "vorticity");
  app.add_option("--delta", delta, "vorticity offset from resonance");
  app.add_option("--ds", ds, "arclength step");
  app.add_option("--steps", steps, "number of continuation steps");
  app.add_option("--tol", tol, "Newton residual tolerance");
  app.add_option("--lambda", lambda, "wave-speed parameter for a laminar flow state");
  app.add_option("--branch", branch, "branch CSV for flow reconstruction");
  app.add_option("--point", point, "point index in the branch file (-1: last)");
  app.add_option("--n-y", n_y, "vertical grid rows for flow output");

  using Cmd = int (*)(const RunConfig&);
  const std::vector<std::tuple<std::string, std::string, Cmd>> commands = {
      {"dispersion", "tabulate D_n(lambda, gamma)", cmd_dispersion},
      {"bifpoints", "tabulate bifurcation speeds lambda*_{n,+-}", cmd_bifpoints},
      {"resonance", "tabulate resonant vorticities", cmd_resonance},
      {"trace", "follow a primary branch", cmd_trace},
      {"wilton", "search for a secondary (ripple) branch near resonance", cmd_wilton},
      {"flow", "reconstruct the flow under a surface state", cmd_flow},
      {"check-energy", "validate the stored-energy model", cmd_check_energy},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    (void)fn;
    subs.push_back(app.add_subcommand(name, help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    json doc = json::object();
    if (!config_path.empty()) {
      try {
        doc = json::parse(read_text(config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      } catch (const IoError& e) {
        throw ConfigError(e.what());
      }
      if (!doc.is_object()) throw ConfigError(config_path + ": top level must be an object");
    }
    if (!out_dir.empty()) doc["output"] = out_dir;
    if (n) doc["n"] = *n;
    if (!sign.empty()) doc["sign"] = sign;
    if (gamma) doc["gamma"] = *gamma;
    if (delta) doc["delta"] = *delta;
    if (ds) doc["ds"] = *ds;
    if (steps) doc["steps"] = *steps;
    if (tol) doc["tol"] = *tol;
    if (lambda) doc["lambda"] = *lambda;
    if (!branch.empty()) doc["branch"] = branch;
    if (point) doc["point"] = *point;
    if (n_y) doc["n_y"] = *n_y;
    const RunConfig cfg = parse_config(doc);

    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return std::get<2>(commands[i])(cfg);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const InconsistencyError& e) {
    std::fprintf(stderr, "invariant violated: %s\n", e.what());
    return kExitInvariant;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "model rejected: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace hydroelastic
