#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wentzell/runner.hpp"

using namespace wentzell;

namespace {

Json canonical_config(const std::string& command) {
  Json doc;
  doc["problem"] = {{"type", "interval"}, {"beta", -1.0}, {"gamma", 0.0}};
  doc["grid"] = {{"N", 41}};
  doc["command"] = {{"name", command}};
  return doc;
}

}  // namespace

TEST_CASE("parse_config validation") {
  SUBCASE("empty config names the missing field") {
    try {
      parse_config(Json::object(), "dtn");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("problem") != std::string::npos);
    }
  }

  SUBCASE("missing command name") {
    Json doc;
    doc["problem"] = {{"beta", -1.0}};
    CHECK_THROWS_AS(parse_config(doc, ""), ConfigError);
  }

  SUBCASE("command mismatch between config and subcommand") {
    Json doc = canonical_config("dtn");
    CHECK_THROWS_AS(parse_config(doc, "sector"), ConfigError);
  }

  SUBCASE("unknown command") {
    Json doc = canonical_config("frobnicate");
    CHECK_THROWS_AS(parse_config(doc, ""), ConfigError);
  }

  SUBCASE("grid with both N and N_list") {
    Json doc = canonical_config("dtn");
    doc["grid"] = {{"N", 41}, {"N_list", {51, 101}}};
    CHECK_THROWS_AS(parse_config(doc, "dtn"), ConfigError);
  }

  SUBCASE("beta/gamma shorthand conflicts with explicit matrices") {
    Json doc = canonical_config("dtn");
    doc["problem"]["M0"] = {{0.0}, {0.0}};
    CHECK_THROWS_AS(parse_config(doc, "dtn"), ConfigError);
  }

  SUBCASE("ill-typed field is named") {
    Json doc = canonical_config("dtn");
    doc["problem"]["a"] = "one";
    try {
      parse_config(doc, "dtn");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("problem.a") != std::string::npos);
    }
  }
}

TEST_CASE("execute dtn produces the canonical matrix with N/A verdict") {
  const ExperimentConfig config = parse_config(canonical_config("dtn"));
  const ReportEnvelope envelope = execute(config);
  CHECK(envelope.verdict == "N/A");
  CHECK(envelope.command == "dtn");
  const Json& m = envelope.payload.at("matrix");
  CHECK(m[0][0][0].get<double>() == doctest::Approx(-1.0));
  CHECK(m[0][1][0].get<double>() == doctest::Approx(1.0));
  CHECK(m[1][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(m[1][1][0].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("execute similarity-check on the exact tier passes") {
  Json doc = canonical_config("similarity-check");
  doc["grid"] = {{"N", 101}};
  const ReportEnvelope envelope = execute(parse_config(doc));
  CHECK(envelope.verdict == "PASS");
  CHECK(envelope.payload.at("max_residual").get<double>() <= 1e-9);
}

TEST_CASE("execute is deterministic up to the wall-time field") {
  Json doc = canonical_config("similarity-check");
  doc["seed"] = 3;
  const ExperimentConfig config = parse_config(doc);
  Json a = execute(config).to_json();
  Json b = execute(config).to_json();
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("emit_report writes JSON and CSV files") {
  Json doc = canonical_config("sector");
  doc["grid"] = {{"N", 21}};
  doc["command"]["operator"] = "N";
  const ReportEnvelope envelope = execute(parse_config(doc));

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "wentzell_lab_test_out";
  std::filesystem::remove_all(dir);
  OutputSpec out;
  out.directory = dir.string();
  out.formats = {"json", "csv"};
  const std::vector<std::string> files = emit_report(envelope, out);
  REQUIRE(files.size() == 2);
  CHECK(std::filesystem::exists(dir / "sector.json"));
  CHECK(std::filesystem::exists(dir / "ray_table.csv"));

  std::ifstream csv(dir / "ray_table.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "theta_rad,sup_norm,bounded_flag");
  std::filesystem::remove_all(dir);
}

TEST_CASE("disk command round trip") {
  Json doc;
  doc["problem"] = {{"type", "disk"}, {"K", 32}, {"beta", -1.0}, {"gamma", 0.0}, {"q", 1.0}};
  doc["command"] = {{"name", "disk"}, {"check", "identity"}};
  const ReportEnvelope envelope = execute(parse_config(doc));
  CHECK(envelope.verdict == "PASS");
  CHECK(envelope.payload.at("residual").get<double>() == 0.0);
}

TEST_CASE("disk relbound failure is a FAIL verdict with explanation") {
  Json doc;
  doc["problem"] = {{"type", "disk"}, {"K", 32}, {"beta", -1.0}, {"gamma", -1.0}, {"q", 0.0}};
  doc["command"] = {{"name", "disk"}, {"check", "relbound"}};
  const ReportEnvelope envelope = execute(parse_config(doc));
  CHECK(envelope.verdict == "FAIL");
  CHECK(envelope.payload.contains("bound_fails"));
}

TEST_CASE("interval command rejects a disk problem") {
  Json doc;
  doc["problem"] = {{"type", "disk"}, {"K", 8}, {"beta", -1.0}};
  doc["command"] = {{"name", "dtn"}};
  CHECK_THROWS_AS(execute(parse_config(doc)), ConfigError);
}

TEST_CASE("resolvent-check surfaces SpectrumHit for lambda on the spectrum of N") {
  Json doc = canonical_config("resolvent-check");
  doc["command"]["lambdas"] = {0.0};
  CHECK_THROWS_AS(execute(parse_config(doc)), SpectrumHit);
}

TEST_CASE("every subcommand executes end to end") {
  auto base = [](const std::string& command) {
    Json doc;
    doc["problem"] = {{"type", "interval"}, {"beta", -1.0}, {"gamma", 0.0}};
    doc["grid"] = {{"N", 41}};
    doc["command"] = {{"name", command}};
    return doc;
  };

  SUBCASE("dirichlet") {
    Json doc = base("dirichlet");
    doc["command"]["lambda"] = 1.0;
    doc["command"]["x"] = {1.0, 0.0};
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "N/A");
    CHECK(env.payload.at("trace_residual").get<double>() <= 1e-12);
    CHECK(env.payload.contains("lifted"));
  }

  SUBCASE("relbound") {
    Json doc = base("relbound");
    doc["command"]["lambdas"] = {1e2, 1e3, 1e4, 1e5, 1e6};
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "PASS");
    CHECK(env.payload.at("slope").get<double>() < -0.3);
  }

  SUBCASE("evolve") {
    Json doc = base("evolve");
    doc["command"]["t_list"] = {0.1, 1.0};
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "PASS");
    CHECK(env.payload.at("conservation_applicable").get<bool>());
  }

  SUBCASE("perturb-check") {
    Json doc = base("perturb-check");
    doc["problem"]["p0"] = {{{0.0, 1.0}}};  // p0(s) = s (coefficients, low degree first)
    doc["command"]["lambdas"] = {5.0};
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "PASS");
  }

  SUBCASE("split-check") {
    Json doc = base("split-check");
    doc["problem"]["gamma"] = -0.5;
    doc["command"]["C"] = -0.5;
    doc["command"]["scenario"] = "C_bounded";
    doc["command"]["theta_step_deg"] = 3.0;
    doc["command"]["r_per_decade"] = 3;
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "PASS");
  }

  SUBCASE("theorem31") {
    Json doc = base("theorem31");
    doc["command"]["theta_step_deg"] = 3.0;
    doc["command"]["r_per_decade"] = 3;
    doc["command"]["angle_floor"] = 1.4;
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "PASS");
    CHECK(env.payload.at("angle_wentzell").get<double>() >= 1.4);
  }

  SUBCASE("converge compactness quantity") {
    Json doc = base("converge");
    doc.erase("grid");
    doc["grid"] = {{"N_list", {101, 201}}};
    doc["command"]["quantity"] = "compactness";
    doc["command"]["count"] = 8;
    const ReportEnvelope env = execute(parse_config(doc));
    CHECK(env.verdict == "PASS");
  }

  SUBCASE("disk generation and split") {
    Json doc;
    doc["problem"] = {{"type", "disk"}, {"K", 32}, {"beta", -1.0}, {"gamma", 0.0}, {"q", 1.0}};
    doc["command"] = {{"name", "disk"}, {"check", "generation"}, {"t_list", {0.0, 1.0}}};
    const ReportEnvelope gen = execute(parse_config(doc));
    CHECK(gen.verdict == "N/A");
    CHECK(gen.payload.at("spectral_abscissa").get<double>() == 0.0);

    doc["command"] = {{"name", "disk"}, {"check", "split"}};
    const ReportEnvelope split = execute(parse_config(doc));
    CHECK(split.verdict == "PASS");
  }
}

TEST_CASE("converge command on the canonical problem") {
  Json doc = canonical_config("converge");
  doc.erase("grid");
  doc["grid"] = {{"N_list", {51, 101, 201}}};
  doc["command"]["lambda"] = 1.0;
  const ReportEnvelope envelope = execute(parse_config(doc));
  CHECK(envelope.verdict == "PASS");
  const double order = envelope.payload.at("fitted_order").get<double>();
  CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}
