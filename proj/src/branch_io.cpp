#include "hydroelastic/branch_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string branch_csv(const Branch& branch, int order) {
  std::string out = "s,lambda,gamma,theta,residual_norm,amplitude";
  for (int k = 1; k <= order; ++k) out += ",a_" + std::to_string(k);
  out += '\n';
  for (const auto& p : branch.points) {
    if (p.state.w.order() != order) throw DomainError("branch point order differs from header order");
    out += format_double(p.arclength);
    for (double v : {p.state.lambda, p.state.gamma, p.state.theta, p.residual_norm, p.amplitude}) {
      out += ',';
      out += format_double(v);
    }
    for (int k = 1; k <= order; ++k) {
      out += ',';
      out += format_double(p.state.w.a(k));
    }
    out += '\n';
  }
  return out;
}

void export_branch(const Branch& branch, int order, const fs::path& path) {
  write_text_atomic(path, branch_csv(branch, order));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, const fs::path& path, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
  return v;
}

}  // namespace

Branch import_branch(const fs::path& path, const StripGeometry& geom) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": missing header");
  const auto header = split(line);
  const int order = static_cast<int>(header.size()) - 6;
  if (order < 0 || header[0] != "s" || header[1] != "lambda" || header[5] != "amplitude")
    throw IoError(path.string() + ": unexpected header");
  if (order != geom.N)
    throw DomainError(path.string() + ": file has " + std::to_string(order) +
                      " coefficients, geometry expects " + std::to_string(geom.N));
  Branch b;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": wrong number of columns");
    std::vector<double> v(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) v[i] = parse_number(cells[i], path, line_no);
    std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 1; k <= order; ++k) a[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(5 + k)];
    SurfaceState st{v[3], PeriodicField(std::move(a), std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0),
                                        Parity::even),
                    v[1], v[2]};
    auto p = make_branch_point(st, v[0], v[4], geom);
    p.amplitude = v[5];
    b.points.push_back(std::move(p));
  }
  if (!b.points.empty()) b.gamma = b.points.front().state.gamma;
  return b;
}

nlohmann::json geometry_json(const StripGeometry& geom) {
  return {{"h", geom.h}, {"g", geom.g}, {"N", geom.N}, {"M", geom.M}};
}

nlohmann::json model_json(const EnergyModel& model) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : model.parameters()) params[k] = v;
  return {{"name", model.label()}, {"parameters", params}};
}

nlohmann::json branch_metadata(const Branch& branch, const StripGeometry& geom,
                               const EnergyModel& model, const nlohmann::json& config_echo) {
  nlohmann::json j;
  j["tool_version"] = std::string(kToolVersion);
  j["geometry"] = geometry_json(geom);
  j["model"] = model_json(model);
  j["branch"] = {{"id", branch.id},
                 {"kind", std::string(to_string(branch.kind))},
                 {"n", branch.n},
                 {"sign", std::string(to_string(branch.sign))},
                 {"gamma", branch.gamma},
                 {"ds", branch.ds},
                 {"direction", branch.direction},
                 {"points", branch.points.size()}};
  j["parent"] = branch.parent ? nlohmann::json{{"branch_id", branch.parent->branch_id},
                                               {"point_index", branch.parent->point_index}}
                              : nlohmann::json(nullptr);
  j["status"] = branch.aborted ? "FAILED" : "complete";
  if (!branch.message.empty()) j["message"] = branch.message;
  j["config"] = config_echo;
  j["non_canonical"] = {{"written_at", utc_timestamp()}};
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hydroelastic
