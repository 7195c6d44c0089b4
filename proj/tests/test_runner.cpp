#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "parablock/errors.hpp"
#include "parablock/experiments.hpp"

using namespace parablock;
using namespace parablock::experiment;

namespace {

ExperimentConfig small_sweep() {
  return parse_config(R"(
model: generic
truncation: [3, 3]
generic:
  F2: 0.05
sweep:
  - {name: alpha, start: 0.0, stop: 2.0, count: 7}
)");
}

std::string csv_of(const RunResult& r) {
  std::ostringstream out;
  for (const auto& f : r.files) out << to_csv(f.table, r.experiment, echo(r.config));
  return out.str();
}

}  // namespace

TEST_CASE("config: unknown and malformed keys are rejected") {
  CHECK_THROWS_AS(parse_config("model: generic\ngeneric:\n  alpah: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("modle: generic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: quantum\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("generic:\n  alpha: one\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("truncation: [1, 4]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("sweep:\n  - {name: alpha, start: 0, stop: 1, count: 0}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("outputs: [N4]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("drive: {type: sawtooth}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[unclosed\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/parablock.yaml"), ConfigError);
}

TEST_CASE("config: parsed values and echo round trip") {
  const ExperimentConfig c = parse_config(R"(
model: dipolariton
truncation: [4, 5]
dipolariton:
  psi1: [1.5, 0.5]
  F2: 0.002
drive: {type: pulsed, shape: square, fwhm_ps: 80}
)");
  REQUIRE(c.model);
  CHECK(*c.model == ModelKind::Dipolariton);
  CHECK(c.truncation->n2 == 4);
  CHECK(c.truncation->dim3() == 6);
  CHECK(c.dipolariton.params.psi1 == Complex{1.5, 0.5});
  CHECK(c.drive.kind == DriveKind::Pulsed);
  CHECK(c.drive.shape == PulseShape::Square);
  CHECK(c.drive.fwhm_ps == 80.0);

  const std::string e = echo(c);
  CHECK(echo(parse_config(e)) == e);
}

TEST_CASE("axis values") {
  const Axis lin{"alpha", 0.0, 1.0, 5, AxisScale::Linear};
  const auto v = lin.values();
  REQUIRE(v.size() == 5);
  CHECK(v[2] == doctest::Approx(0.5));
  CHECK(v.back() == 1.0);
  const Axis lg{"F2", 1e-4, 1e-2, 3, AxisScale::Log};
  const auto w = lg.values();
  CHECK(w[1] == doctest::Approx(1e-3));
  CHECK(w.back() == doctest::Approx(1e-2));
}

TEST_CASE("csv: header, number format, empty cells, LF only") {
  Table t;
  t.columns = {{"x"}, {"g2"}, {"converged", true}};
  t.add_row({0.5, std::nullopt, 1.0});
  t.add_row({-0.0, 1.25e-7, 0.0});
  t.notes.push_back("note line");
  const std::string csv = to_csv(t, "steady", "model: generic\n");
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.rfind("# parablock ", 0) == 0);
  CHECK(csv.find("# experiment: steady\n") != std::string::npos);
  CHECK(csv.find("#   model: generic\n") != std::string::npos);
  CHECK(csv.find("# note line\n") != std::string::npos);
  CHECK(csv.find("\nx,g2,converged\n5.00000000e-01,,1\n0.00000000e+00,1.25000000e-07,0\n") != std::string::npos);
  CHECK(format_number(-1.0 / 3.0) == "-3.33333333e-01");
}

TEST_CASE("runner: reruns are byte identical and threads do not change output") {
  const ExperimentConfig c = small_sweep();
  const std::string serial = csv_of(run("steady", c));
  CHECK(serial == csv_of(run("steady", c)));
  RunOptions opt;
  opt.threads = 3;
  CHECK(serial == csv_of(run("steady", c, opt)));
}

TEST_CASE("runner: steady sweep schema") {
  const RunResult r = run("steady", small_sweep());
  REQUIRE(r.files.size() == 1);
  const Table& t = r.files[0].table;
  CHECK(r.files[0].name == "steady.csv");
  CHECK(t.rows.size() == 7);
  CHECK(t.index("alpha") == 0);
  const auto g2 = t.column("g2");
  const auto conv = t.column("converged");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(g2[i].has_value());
    CHECK(*conv[i] == 1.0);
  }
}

TEST_CASE("runner: wrong model or axis is a config error") {
  ExperimentConfig c = small_sweep();
  c.model = ModelKind::Generic;
  CHECK_THROWS_AS(run("fig3a", c), ConfigError);
  c.sweep = {{"nonsense", 0.0, 1.0, 2, AxisScale::Linear}};
  CHECK_THROWS_AS(run("steady", c), ConfigError);
  CHECK_THROWS_AS(run("fig9", small_sweep()), ConfigError);
  RunOptions bad;
  bad.threads = 0;
  CHECK_THROWS_AS(run("steady", small_sweep(), bad), ConfigError);
}

TEST_CASE("validate: weak pump converges, strong pump at low truncation does not") {
  ExperimentConfig weak = parse_config("model: generic\ntruncation: [5, 5]\ngeneric: {alpha: 1.0, F2: 0.01}\n");
  const RunResult rw = validate_convergence(weak);
  CHECK_FALSE(rw.convergence_failure);
  const Table& t = rw.files[0].table;
  CHECK(t.rows.back()[0] == 7.0);
  bool status = false;
  for (const auto& n : t.notes) status |= n == "status: converged";
  CHECK(status);

  ExperimentConfig strong = parse_config("model: generic\ntruncation: [2, 2]\ngeneric: {alpha: 0.3, F2: 1.0}\n");
  const RunResult rs = validate_convergence(strong);
  CHECK(rs.convergence_failure);
}

TEST_CASE("write_outputs creates the directory and files") {
  const auto dir = std::filesystem::temp_directory_path() / "parablock_runner_test";
  std::filesystem::remove_all(dir);
  write_outputs(run("steady", small_sweep()), dir / "nested");
  std::ifstream in(dir / "nested" / "steady.csv");
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# parablock", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("validate: dipolariton N2 near 0.45 reports its minimum truncation") {
  const ExperimentConfig c = parse_config("model: dipolariton\ntruncation: [6, 6]\ndipolariton: {F2: 0.0077}\n");
  const RunResult r = validate_convergence(c);
  CHECK_FALSE(r.convergence_failure);
  const auto& notes = r.files[0].table.notes;
  CHECK(std::find(notes.begin(), notes.end(), "minimum converged truncation: (5,5)") != notes.end());
  const auto n2 = solve_point(c, {6, 6}).N2;
  CHECK(std::abs(n2 - 0.4529) < 1e-3);
}

TEST_CASE("example configs parse") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(PARABLOCK_CONFIG_DIR)) {
    if (e.path().extension() != ".yaml") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path()).validate());
    ++n;
  }
  CHECK(n >= 5);
}
