#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "hydroelastic/branch_io.hpp"
#include "hydroelastic/errors.hpp"

using namespace hydroelastic;
namespace fs = std::filesystem;

namespace {

const auto kModel = quadratic_model(1, 1);
const auto kGeom = StripGeometry::make(1.0, 1.0, 8);

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hydroelastic_branch_io";
  fs::create_directories(dir);
  return dir / name;
}

Branch sample_branch(int points) {
  ContinuationOptions o;
  o.ds = 2e-3;
  o.n_steps = points;
  return trace_primary(1, Sign::plus, 0.5, kModel, kGeom, o);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1e-17}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("CSV layout") {
  Branch empty;
  const auto header_only = branch_csv(empty, 3);
  CHECK(header_only == "s,lambda,gamma,theta,residual_norm,amplitude,a_1,a_2,a_3\n");
  const auto b = sample_branch(4);
  const auto csv = branch_csv(b, 8);
  CHECK(count_lines(csv) == 5);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv == branch_csv(b, 8));
  CHECK_THROWS_AS(branch_csv(b, 6), DomainError);
}

TEST_CASE("export and import preserve every value") {
  const auto b = sample_branch(5);
  const auto path = scratch("roundtrip.csv");
  export_branch(b, 8, path);
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
  const auto back = import_branch(path, kGeom);
  REQUIRE(back.points.size() == b.points.size());
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& p = b.points[i];
    const auto& q = back.points[i];
    CHECK(q.arclength == p.arclength);
    CHECK(q.state.lambda == p.state.lambda);
    CHECK(q.state.theta == p.state.theta);
    CHECK(q.state.gamma == p.state.gamma);
    CHECK(q.residual_norm == p.residual_norm);
    for (int k = 1; k <= 8; ++k) CHECK(q.state.w.a(k) == p.state.w.a(k));
  }
  CHECK(branch_csv(back, 8) == branch_csv(b, 8));
}

TEST_CASE("import rejects malformed files") {
  const auto bad_header = scratch("bad_header.csv");
  write_text_atomic(bad_header, "x,y\n1,2\n");
  CHECK_THROWS_AS(import_branch(bad_header, kGeom), IoError);
  const auto bad_cell = scratch("bad_cell.csv");
  write_text_atomic(bad_cell, "s,lambda,gamma,theta,residual_norm,amplitude,a_1,a_2,a_3,a_4,a_5,a_6,a_7,a_8\n"
                              "0,1,0,0,0,0,0,0,0,0,0,0,0,abc\n");
  CHECK_THROWS_AS(import_branch(bad_cell, kGeom), IoError);
  const auto short_row = scratch("short_row.csv");
  write_text_atomic(short_row, "s,lambda,gamma,theta,residual_norm,amplitude,a_1,a_2,a_3,a_4,a_5,a_6,a_7,a_8\n0,1\n");
  CHECK_THROWS_AS(import_branch(short_row, kGeom), IoError);
  const auto other_order = scratch("other_order.csv");
  export_branch(Branch{}, 4, other_order);
  CHECK_THROWS_AS(import_branch(other_order, kGeom), DomainError);
  CHECK_THROWS_AS(import_branch(scratch("missing.csv"), kGeom), IoError);
}

TEST_CASE("metadata sidecar") {
  auto b = sample_branch(2);
  b.id = 3;
  b.parent = BranchParent{1, 7};
  const nlohmann::json echo = {{"n", 1}};
  const auto j = branch_metadata(b, kGeom, kModel, echo);
  CHECK(j["tool_version"] == std::string(kToolVersion));
  CHECK(j["geometry"]["N"] == 8);
  CHECK(j["model"]["name"] == "quadratic");
  CHECK(j["model"]["parameters"]["beta"] == 1.0);
  CHECK(j["branch"]["kind"] == "primary");
  CHECK(j["branch"]["points"] == 2);
  CHECK(j["parent"]["branch_id"] == 1);
  CHECK(j["parent"]["point_index"] == 7);
  CHECK(j["status"] == "complete");
  CHECK(j["config"] == echo);
  CHECK(j["non_canonical"].contains("written_at"));
  b.aborted = true;
  CHECK(branch_metadata(b, kGeom, kModel, echo)["status"] == "FAILED");
  CHECK(branch_metadata(Branch{}, kGeom, kModel, echo)["parent"].is_null());
}

TEST_CASE("atomic writes create parent directories") {
  const auto path = scratch("nested/deeper/file.txt");
  fs::remove_all(path.parent_path());
  write_text_atomic(path, "hello\n");
  CHECK(read_text(path) == "hello\n");
  write_text_atomic(path, "again\n");
  CHECK(read_text(path) == "again\n");
}
