#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "bai_cli_test_output.txt";
  const std::string cmd = std::string("\"") + BAI_CLI_PATH + "\" " + args +
                          " > " + out.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

const char* kRunConfig = R"({
  "family": {"type": "bernoulli"},
  "means": [0.8, 0.4],
  "algorithms": ["dkl_ucb"],
  "deltas": [0.1],
  "trials": 3,
  "seed": 7,
  "horizon_cap": 1000000,
  "parallelism": 1
})";

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("oracle subcommand prints the analytic report") {
  const auto config = write_config("bai_oracle.json", R"({
    "family": {"type": "bernoulli"},
    "means": [0.6, 0.4]
  })");
  const CommandResult r =
      run_cli("oracle --config " + config.string() + " --delta 0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("I*: 2.466303") != std::string::npos);
  CHECK(r.output.find("best arm: 1") != std::string::npos);
  CHECK(r.output.find("Gamma*: 49.66") != std::string::npos);
  CHECK(r.output.find("regret lower bound at delta=0.1") != std::string::npos);
  CHECK(r.output.find("two-armed regret ratio") != std::string::npos);
}

TEST_CASE("oracle subcommand: Gaussian closed form") {
  const auto config = write_config("bai_oracle_gauss.json", R"({
    "family": {"type": "gaussian", "params": {"variance": 1.0}},
    "means": [1.0, 0.0]
  })");
  const CommandResult r = run_cli("oracle --config " + config.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Gamma*: 8") != std::string::npos);
  CHECK(r.output.find("optimal weights: 0.5") != std::string::npos);
}

TEST_CASE("oracle subcommand rejects tied instances with exit 2") {
  const auto config = write_config("bai_oracle_tie.json", R"({
    "family": {"type": "bernoulli"},
    "means": [0.5, 0.5]
  })");
  const CommandResult r = run_cli("oracle --config " + config.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("unique") != std::string::npos);
}

TEST_CASE("config validation: unknown keys and bad values exit 2") {
  const auto unknown = write_config("bai_unknown.json", R"({
    "family": {"type": "bernoulli"},
    "means": [0.6, 0.4],
    "bogus_key": 1
  })");
  CHECK(run_cli("oracle --config " + unknown.string()).exit_code == 2);

  const auto bad_json = write_config("bai_bad.json", "{nope");
  CHECK(run_cli("oracle --config " + bad_json.string()).exit_code == 2);

  CHECK(run_cli("oracle --config /nonexistent/bai.json").exit_code == 3);

  const auto bad_family = write_config("bai_bad_family.json", R"({
    "family": {"type": "cauchy"},
    "means": [0.6, 0.4]
  })");
  CHECK(run_cli("oracle --config " + bad_family.string()).exit_code == 2);
}

TEST_CASE("run subcommand writes the CSV artifact") {
  const auto config = write_config("bai_run.json", kRunConfig);
  const fs::path out = fs::temp_directory_path() / "bai_run_out.csv";
  const CommandResult r = run_cli("run --config " + config.string() +
                                  " --out " + out.string());
  REQUIRE(r.exit_code == 0);

  std::ifstream in(out);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto lines = split_lines(buffer.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("# bai ", 0) == 0);
  CHECK(lines[0].find("config_hash=") != std::string::npos);
  CHECK(lines[1] ==
        "algorithm,delta,trials,error_rate,error_ub99,mean_pseudo_regret,"
        "mean_realized_regret,mean_tau,regret_ratio,regret_lb_ratio,"
        "tau_ratio,censored");
  const auto fields = split_csv(lines[2]);
  REQUIRE(fields.size() == 12);
  CHECK(fields[0] == "dkl_ucb");
  CHECK(std::stod(fields[1]) == 0.1);
  CHECK(std::stoi(fields[2]) == 3);
  CHECK(std::stoi(fields[11]) == 0);
  // Full round-trip precision on the mean fields.
  CHECK(fields[7].size() >= 15);
}

TEST_CASE("run subcommand: json format round-trips the CSV content") {
  const auto config = write_config("bai_run_json.json", kRunConfig);
  const fs::path csv_path = fs::temp_directory_path() / "bai_rt.csv";
  const fs::path json_path = fs::temp_directory_path() / "bai_rt.json";
  REQUIRE(run_cli("run --config " + config.string() + " --out " +
                  csv_path.string())
              .exit_code == 0);
  REQUIRE(run_cli("run --config " + config.string() + " --format json --out " +
                  json_path.string())
              .exit_code == 0);

  std::ifstream jin(json_path);
  const json doc = json::parse(jin);
  CHECK(doc.contains("generator"));
  CHECK(doc.contains("config_hash"));
  REQUIRE(doc["rows"].size() == 1);
  const json& row = doc["rows"][0];

  std::ifstream cin(csv_path);
  std::ostringstream buffer;
  buffer << cin.rdbuf();
  const auto lines = split_lines(buffer.str());
  const auto fields = split_csv(lines[2]);
  CHECK(row["algorithm"].get<std::string>() == fields[0]);
  CHECK(row["delta"].get<double>() == std::stod(fields[1]));
  CHECK(row["trials"].get<int>() == std::stoi(fields[2]));
  CHECK(row["error_rate"].get<double>() == std::stod(fields[3]));
  CHECK(row["mean_pseudo_regret"].get<double>() == std::stod(fields[5]));
  CHECK(row["mean_tau"].get<double>() == std::stod(fields[7]));
  CHECK(row["censored"].get<int>() == std::stoi(fields[11]));
}

TEST_CASE("run subcommand: delta 0.5 emits the inf sentinel") {
  const auto config = write_config("bai_run_half.json", R"({
    "family": {"type": "bernoulli"},
    "means": [0.8, 0.4],
    "algorithms": ["dkl_ucb"],
    "deltas": [0.5],
    "trials": 2,
    "seed": 3,
    "horizon_cap": 1000000,
    "parallelism": 1
  })");
  const CommandResult r = run_cli("run --config " + config.string());
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.output);
  REQUIRE(lines.size() == 3);
  const auto fields = split_csv(lines[2]);
  CHECK(fields[9] == "inf");
}

TEST_CASE("run subcommand: trace file holds per-step records") {
  const auto config = write_config("bai_run_trace.json", kRunConfig);
  const fs::path trace = fs::temp_directory_path() / "bai_trace.ndjson";
  REQUIRE(run_cli("run --config " + config.string() + " --out /dev/null" +
                  " --trace " + trace.string())
              .exit_code == 0);
  std::ifstream in(trace);
  std::string line;
  int records = 0, stops = 0, with_indices = 0;
  while (std::getline(in, line)) {
    const json rec = json::parse(line);
    CHECK(rec.contains("t"));
    CHECK(rec.contains("arm"));
    CHECK(rec.contains("stopped"));
    CHECK(rec["algorithm"] == "dkl_ucb");
    if (!rec["arm_f"].is_null()) {
      ++with_indices;
      CHECK(rec["ucb_f"].size() == 2);
      CHECK(rec["ucb_g"].size() == 2);
      CHECK(rec["lcb_g"].size() == 2);
    }
    if (rec["stopped"].get<bool>()) ++stops;
    ++records;
  }
  CHECK(records > 3);
  CHECK(stops == 1);  // first trial of the single cell
  CHECK(with_indices > 0);
}

TEST_CASE("run subcommand: io failures exit 3") {
  const auto config = write_config("bai_run_io.json", kRunConfig);
  CHECK(run_cli("run --config " + config.string() +
                " --out /nonexistent_dir/x.csv")
            .exit_code == 3);
}

TEST_CASE("validate subcommand") {
  const CommandResult all = run_cli("validate --suite pinsker");
  CHECK(all.exit_code == 0);
  CHECK(all.output.find("[PASS] pinsker") != std::string::npos);
  CHECK(all.output.find("ms") != std::string::npos);

  const CommandResult corrupt =
      run_cli("validate --suite pinsker --corrupt-kl");
  CHECK(corrupt.exit_code == 1);
  CHECK(corrupt.output.find("[FAIL] pinsker") != std::string::npos);

  const CommandResult unknown = run_cli("validate --suite bogus");
  CHECK(unknown.exit_code == 1);
}

TEST_CASE("BAI_THREADS must be a positive integer") {
  const auto config = write_config("bai_run_threads.json", kRunConfig);
  const fs::path out = fs::temp_directory_path() / "bai_threads_out.csv";
  const std::string cmd = std::string("BAI_THREADS=abc \"") + BAI_CLI_PATH +
                          "\" run --config " + config.string() + " --out " +
                          out.string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 2);
}
