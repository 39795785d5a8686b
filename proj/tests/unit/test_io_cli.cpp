#include "doctest.h"

#include "hcol/cli.hpp"
#include "hcol/errors.hpp"
#include "hcol/exact_count.hpp"
#include "hcol/generators.hpp"
#include "hcol/io.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hcol;
using json = nlohmann::json;

namespace {

const std::filesystem::path kFixtures = HCOL_FIXTURE_DIR;

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hcol_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_hypergraph(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("save and load round trip") {
  const auto path = scratch("roundtrip.hg");
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto p = ModelParams::from_edges(5 + s % 40, s % 30, 3 + s % 3);
    const Hypergraph h = gen_hnm(p, s);
    save_hypergraph(h, path);
    CHECK(load_hypergraph(path) == h);
    CHECK(hypergraph_from_json(hypergraph_to_json(h)) == h);
  }
}

TEST_CASE("fixture triangle") {
  const Hypergraph h = load_hypergraph(kFixtures / "triangle.hg");
  CHECK(h.n() == 6);
  CHECK(h.m() == 3);
  CHECK(count_colourings(h).z == 26);
}

TEST_CASE("text format ignores comments and blank lines") {
  std::istringstream in("# comment\n\n3 1 3\n  # indented comment\n1 2 3\n\n");
  const Hypergraph h = read_hypergraph(in);
  CHECK(h.m() == 1);
  CHECK(h.edge(0)[2] == 2);
}

TEST_CASE("parse errors carry the line number") {
  CHECK(parse_error_line("6 3 3\n1 2 3\n3 4\n5 6 1\n") == 3);
  CHECK(parse_error_line("6 1 3\n1 2 7\n") == 2);
  CHECK(parse_error_line("6 1 3\n1 2 0\n") == 2);
  CHECK(parse_error_line("6 1 3\n1 x 3\n") == 2);
  CHECK(parse_error_line("6 1 3\n1 1 3\n") == 2);
  CHECK(parse_error_line("6 3\n") == 1);
  CHECK(parse_error_line("# only\n6 2 3\n1 2 3\n") == 3);
  CHECK(parse_error_line("6 1 3\n1 2 3\n4 5 6\n") == 3);
  CHECK(parse_error_line("") == 0);
  CHECK_THROWS_AS(load_hypergraph(kFixtures / "missing.hg"), Error);
}

TEST_CASE("cli formulas") {
  const Run r = run({"formulas", "--k", "3", "--dprime", "2", "--n", "300", "--l", "2"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["lambda"].get<double>() == doctest::Approx(4.0));
  CHECK(j["delta"].get<double>() == doctest::Approx(1.0 / 9));
  CHECK(r.err.find("formulas") != std::string::npos);
}

TEST_CASE("cli count on the fixture") {
  const Run r = run({"count", "--in", (kFixtures / "triangle.hg").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["Z"] == "26");
  const Run strata = run({"count", "--in", (kFixtures / "triangle.hg").string(), "--omega", "1", "--nu", "2", "--serial"});
  CHECK(json::parse(strata.out)["by_stratum"].size() == 2);
}

TEST_CASE("cli generate") {
  const Run r = run({"generate", "--k", "3", "--n", "4", "--m", "0", "--seed", "7"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["edges"].empty());
  CHECK(j["n"] == 4);

  const auto path = scratch("generated.hg");
  CHECK(run({"generate", "--k", "3", "--n", "30", "--dprime", "2", "--seed", "7", "--out", path.string()}).code == kExitOk);
  CHECK(load_hypergraph(path) == gen_hnm(ModelParams::from_density(30, 2.0, 3), 7));

  const Run a = run({"generate", "--n", "50", "--m", "30", "--seed", "3", "--flavour", "simple"});
  const Run b = run({"generate", "--n", "50", "--m", "30", "--seed", "3", "--flavour", "simple"});
  const Run c = run({"generate", "--n", "50", "--m", "30", "--seed", "4", "--flavour", "simple"});
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("cli cycles and wsample") {
  const Run cyc = run({"cycles", "--in", (kFixtures / "triangle.hg").string(), "--L", "4"});
  REQUIRE(cyc.code == kExitOk);
  const json j = json::parse(cyc.out);
  CHECK(j["C_3"] == 1);
  CHECK(j["C_2"] == 0);

  const Run w = run({"wsample", "--n", "300", "--m", "200", "--L", "30", "--seed", "5", "--samples", "20000"});
  REQUIRE(w.code == kExitOk);
  const json wj = json::parse(w.out);
  CHECK(wj["analytic"]["mean_exp_2W"].get<double>() == doctest::Approx(1.0743).epsilon(1e-4));
  CHECK(wj["mean_exp_W"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("cli exit codes") {
  CHECK(run({"count", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"nosuch"}).code == kExitUsage);
  CHECK(run({"generate", "--n", "5", "--m", "1", "--dprime", "2"}).code == kExitUsage);
  CHECK(run({"experiment", "nosuch"}).code == kExitUsage);
  CHECK(run({"count", "--in", "/nonexistent/file.hg"}).code == kExitFailure);
  CHECK(run({"generate", "--k", "2", "--n", "5", "--m", "1"}).code == kExitFailure);
  CHECK(run({"generate", "--n", "4", "--m", "5", "--flavour", "simple"}).code == kExitFailure);
  CHECK(run({"formulas", "--n", "10"}).code == kExitFailure);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("cli experiment merges config file and flags") {
  const auto cfg = scratch("oracle.json");
  std::ofstream(cfg) << R"({"n": 5, "m": 2, "seed": 4})";
  const auto out = scratch("oracle_out");
  std::filesystem::remove_all(out);
  const Run r = run({"experiment", "small_n_oracle", "--config", cfg.string(), "--n", "4", "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["config"]["n"] == 4);
  CHECK(j["config"]["m"] == 2);
  CHECK(j["config"]["seed"] == 4);
  CHECK(j["passed"] == true);
  CHECK(std::filesystem::exists(out / "report.json"));
  CHECK(std::filesystem::exists(out / "rows.csv"));
  CHECK(r.err.find("\"n\":4") != std::string::npos);

  std::ofstream(cfg) << "{not json";
  CHECK(run({"experiment", "small_n_oracle", "--config", cfg.string()}).code == kExitFailure);
}
