#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "riskgate/io.hpp"
#include "test_util.hpp"

using namespace riskgate;

namespace {

std::string write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  return path;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RISKGATE_CLI_PATH) + " " + args +
                          " >cli_stdout.txt 2>cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("experiment config parsing") {
  write_file("tmp_config.json", R"({
    "budgets": [0.23, 0.23],
    "domains": [[0, 4.6], [0, 90]],
    "bounds": {"v_min": [0, 0], "v_max": [4.6, 90]},
    "ltt": {"delta": 0.2, "grid_sizes": [5, 5]}
  })");
  const ExperimentConfig config = load_experiment_config("tmp_config.json");
  CHECK(config.spec.budgets == std::vector<double>{0.23, 0.23});
  CHECK(config.spec.domains[1].hi == 90.0);
  CHECK(config.bounds.has_value());
  CHECK(config.ltt.delta == 0.2);
  CHECK(!config.shift_costs);
  std::remove("tmp_config.json");

  write_file("tmp_bad.json", R"({"domains": [[0, 1]]})");
  CHECK_THROWS_WITH_AS(load_experiment_config("tmp_bad.json"),
                       doctest::Contains("budgets"), ValidationError);
  std::remove("tmp_bad.json");
}

TEST_CASE("threshold files round-trip") {
  ThresholdSet ts;
  ts.algorithm = Algorithm::multirisk;
  ts.thresholds = {0.1, 1.0 / 3.0};
  ts.aux[{1, 2}] = 0.1;
  ts.aux[{1, 4}] = 0.25;
  ts.aux[{2, 2}] = 1.0 / 3.0;
  ts.infeasible = {0, 1};
  ts.n_calibration = 17;
  save_thresholds(ts, "tmp_thresholds.json");
  const ThresholdSet back = load_thresholds("tmp_thresholds.json");
  CHECK(back.algorithm == ts.algorithm);
  CHECK(back.thresholds == ts.thresholds);
  CHECK(back.aux == ts.aux);
  CHECK(back.infeasible == ts.infeasible);
  CHECK(back.n_calibration == 17);
  std::remove("tmp_thresholds.json");
}

TEST_CASE("malformed aux keys are a validation error") {
  write_file("tmp_badaux.json",
             R"({"algorithm": "base", "lambda": [0.5], "aux": {"oops": 1.0}})");
  CHECK_THROWS_WITH_AS(load_thresholds("tmp_badaux.json"),
                       doctest::Contains("aux keys"), ValidationError);
  std::remove("tmp_badaux.json");
}

TEST_CASE("cli calibrate/evaluate round") {
  write_file("tmp_data.csv",
             "s1,v1,v_obj\n"
             "0.1,1,0.5\n"
             "0.5,1,0.5\n"
             "0.9,1,0.5\n");
  write_file("tmp_c.json", R"({
    "budgets": [0.4],
    "domains": [[0, 1]],
    "bounds": {"v_min": [0], "v_max": [1]}
  })");

  CHECK(run_cli("calibrate --algo multirisk --data tmp_data.csv "
                "--config tmp_c.json --out tmp_t.json") == 0);
  const ThresholdSet ts = load_thresholds("tmp_t.json");
  CHECK(ts.thresholds == std::vector<double>{0.9});

  CHECK(run_cli("evaluate --thresholds tmp_t.json --data tmp_data.csv "
                "--config tmp_c.json --out tmp_r.json") == 0);
  std::ifstream in("tmp_r.json");
  nlohmann::json report;
  in >> report;
  CHECK(report["n_test"] == 3);
  CHECK(report["behavior_counts"].size() == 2);

  SUBCASE("missing required flag exits 1") {
    CHECK(run_cli("calibrate --config tmp_c.json --out tmp_t.json") == 1);
  }
  SUBCASE("unknown data file exits 2") {
    CHECK(run_cli("calibrate --algo base --data nope.csv --config tmp_c.json "
                  "--out tmp_t.json") == 2);
  }
  SUBCASE("invalid config exits 1") {
    write_file("tmp_c_bad.json", R"({"budgets": [-1], "domains": [[0, 1]]})");
    CHECK(run_cli("calibrate --algo base --data tmp_data.csv "
                  "--config tmp_c_bad.json --out tmp_t.json") == 1);
    std::remove("tmp_c_bad.json");
  }

  std::remove("tmp_data.csv");
  std::remove("tmp_c.json");
  std::remove("tmp_t.json");
  std::remove("tmp_r.json");
}

TEST_CASE("cli simulate writes the report schema") {
  write_file("tmp_mix.json", R"({
    "m": 2, "v_max": [4.6, 90], "p": [0.055, 0.01], "n_cal": 20,
    "budgets": [0.23, 0.23], "seed": 7
  })");
  CHECK(run_cli("simulate --config tmp_mix.json --batches 50 "
                "--algos multirisk,base --out tmp_mc.json") == 0);
  std::ifstream in("tmp_mc.json");
  nlohmann::json doc;
  in >> doc;
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["algorithm"] == "multirisk");
  CHECK(doc[0]["n_batches"] == 50);
  CHECK(doc[0]["constraints"][0]["j"] == 1);
  CHECK(doc[0]["constraints"][0].contains("mean"));
  CHECK(doc[0]["constraints"][0].contains("se"));
  std::remove("tmp_mix.json");
  std::remove("tmp_mc.json");
}

TEST_CASE("cli oracle emits the population minimizer") {
  write_file("tmp_uni.json", R"({"model": "uniform", "m": 1, "budgets": [0.3]})");
  CHECK(run_cli("oracle --config tmp_uni.json --out tmp_star.json") == 0);
  std::ifstream in("tmp_star.json");
  nlohmann::json doc;
  in >> doc;
  CHECK(doc["lambda_star"][0].get<double>() == doctest::Approx(0.7).epsilon(1e-8));
  std::remove("tmp_uni.json");
  std::remove("tmp_star.json");
}

TEST_CASE("sweep csv and json encode identical numbers") {
  std::mt19937_64 gen(31);
  const CalibrationSet calib = testutil::random_set(gen, 30, 2, 1.0);
  const CalibrationSet test = testutil::random_set(gen, 30, 2, 1.0);
  save_dataset(calib, "tmp_sw_cal.csv", DataFormat::csv);
  save_dataset(test, "tmp_sw_test.csv", DataFormat::csv);
  write_file("tmp_sw_c.json", R"({
    "budgets": [0.1, 0.1],
    "domains": [[0, 1], [0, 1]],
    "ltt": {"delta": 0.1, "grid_sizes": [5, 5]}
  })");

  CHECK(run_cli("sweep --data tmp_sw_cal.csv --test tmp_sw_test.csv "
                "--config tmp_sw_c.json --constraint 1 --budgets 3 --splits 2 "
                "--algos multirisk,base --seed 9 "
                "--out-csv tmp_sw.csv --out-json tmp_sw.json") == 0);

  std::ifstream jf("tmp_sw.json");
  nlohmann::json doc;
  jf >> doc;

  std::ifstream cf("tmp_sw.csv");
  std::string header;
  std::getline(cf, header);
  CHECK(header == "budget,algorithm,objective_risk,objective_se,"
                  "risk_1,se_1,risk_2,se_2");
  std::size_t row = 0;
  std::string line;
  while (std::getline(cf, line)) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 8);
    const auto& cell = doc["cells"][row];
    CHECK(std::stod(fields[0]) == cell["budget"].get<double>());
    CHECK(fields[1] == cell["algorithm"].get<std::string>());
    CHECK(std::stod(fields[2]) == cell["objective_risk"].get<double>());
    CHECK(std::stod(fields[3]) == cell["objective_se"].get<double>());
    CHECK(std::stod(fields[4]) == cell["risks"][0].get<double>());
    CHECK(std::stod(fields[6]) == cell["risks"][1].get<double>());
    ++row;
  }
  CHECK(row == 6);  // 3 budgets x 2 algorithms

  std::remove("tmp_sw_cal.csv");
  std::remove("tmp_sw_test.csv");
  std::remove("tmp_sw_c.json");
  std::remove("tmp_sw.csv");
  std::remove("tmp_sw.json");
  std::remove("cli_stdout.txt");
  std::remove("cli_stderr.txt");
}
