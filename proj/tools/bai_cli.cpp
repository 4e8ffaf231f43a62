// Command-line front end over the C API: oracle reports, Monte Carlo
// campaigns with CSV/JSON artifacts, and the property-check suites.
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 I/O error.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bai.h"
#include "json.hpp"

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, value);
  return buf;
}

// Full round-trip precision for every numeric field.
std::string fmt17(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// Shortest representation that still round-trips; for human-facing report
// lines.
std::string fmt_shortest(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

void check(bai_status status) {
  if (status == BAI_OK) return;
  if (status == BAI_ERR_RUNTIME) throw std::runtime_error(bai_last_error());
  throw ConfigError(bai_last_error());
}

// ---- config file ------------------------------------------------------

struct FamilySpec {
  bai_family_kind kind = BAI_FAMILY_BERNOULLI;
  double variance = 0.0;
  std::string type_name = "bernoulli";
};

struct Config {
  FamilySpec family;
  std::vector<double> means;
  std::vector<std::string> algorithms;
  std::vector<double> deltas;
  int trials = 1;
  std::uint64_t seed = 1;
  std::int64_t horizon_cap = 10000000;
  int parallelism = 0;  // 0: use hardware concurrency
  std::string output_format = "csv";
  std::string output_path;
  std::string raw_bytes;
};

void reject_unknown_keys(const json& object,
                         const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const auto& key : allowed) known = known || key == it.key();
    if (!known) {
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

bai_algorithm parse_algorithm(const std::string& name) {
  if (name == "dkl_ucb") return BAI_ALG_DKL_UCB;
  if (name == "klucb_stop") return BAI_ALG_KLUCB_STOP;
  if (name == "uniform_stop") return BAI_ALG_UNIFORM_STOP;
  throw ConfigError("unknown algorithm \"" + name +
                    "\" (expected dkl_ucb, klucb_stop or uniform_stop)");
}

Config load_config(const std::string& path) {
  Config config;
  config.raw_bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(config.raw_bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(doc,
                      {"family", "means", "algorithms", "deltas", "trials",
                       "seed", "horizon_cap", "parallelism", "output"},
                      "config");

  if (!doc.contains("family") || !doc["family"].is_object()) {
    throw ConfigError("config needs a \"family\" object");
  }
  const json& family = doc["family"];
  reject_unknown_keys(family, {"type", "params"}, "family");
  const std::string type = family.value("type", "");
  config.family.type_name = type;
  if (type == "bernoulli") {
    config.family.kind = BAI_FAMILY_BERNOULLI;
  } else if (type == "gaussian") {
    config.family.kind = BAI_FAMILY_GAUSSIAN;
    if (!family.contains("params") || !family["params"].contains("variance")) {
      throw ConfigError("gaussian family needs params.variance");
    }
    config.family.variance = family["params"]["variance"].get<double>();
  } else if (type == "poisson") {
    config.family.kind = BAI_FAMILY_POISSON;
  } else if (type == "exponential") {
    config.family.kind = BAI_FAMILY_EXPONENTIAL;
  } else {
    throw ConfigError("unknown family type \"" + type + "\"");
  }
  if (family.contains("params")) {
    reject_unknown_keys(family["params"], {"variance"}, "family.params");
    if (config.family.kind != BAI_FAMILY_GAUSSIAN) {
      throw ConfigError("family params are only valid for gaussian");
    }
  }

  if (!doc.contains("means") || !doc["means"].is_array() ||
      doc["means"].size() < 2) {
    throw ConfigError("config needs a \"means\" array with >= 2 entries");
  }
  for (const auto& m : doc["means"]) config.means.push_back(m.get<double>());

  if (doc.contains("algorithms")) {
    for (const auto& name : doc["algorithms"]) {
      config.algorithms.push_back(name.get<std::string>());
    }
  }
  if (doc.contains("deltas")) {
    for (const auto& d : doc["deltas"]) {
      config.deltas.push_back(d.get<double>());
    }
  }
  if (doc.contains("trials")) config.trials = doc["trials"].get<int>();
  if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("horizon_cap")) {
    config.horizon_cap = doc["horizon_cap"].get<std::int64_t>();
  }
  if (doc.contains("parallelism")) {
    config.parallelism = doc["parallelism"].get<int>();
  }
  if (doc.contains("output")) {
    const json& output = doc["output"];
    reject_unknown_keys(output, {"format", "path"}, "output");
    if (output.contains("format")) {
      config.output_format = output["format"].get<std::string>();
    }
    if (output.contains("path")) {
      config.output_path = output["path"].get<std::string>();
    }
  }
  if (config.output_format != "csv" && config.output_format != "json") {
    throw ConfigError("output format must be csv or json");
  }
  return config;
}

int effective_parallelism(int configured) {
  if (const char* env = std::getenv("BAI_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1) {
      throw ConfigError("BAI_THREADS must be a positive integer");
    }
    return static_cast<int>(value);
  }
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct InstanceHandle {
  bai_instance* ptr = nullptr;
  ~InstanceHandle() { bai_instance_free(ptr); }
};

struct CampaignHandle {
  bai_campaign* ptr = nullptr;
  ~CampaignHandle() { bai_campaign_free(ptr); }
};

struct ResultHandle {
  bai_result* ptr = nullptr;
  ~ResultHandle() { bai_result_free(ptr); }
};

void make_instance(const Config& config, InstanceHandle& handle) {
  check(bai_instance_create(config.family.kind, config.family.variance,
                            config.means.data(),
                            static_cast<int>(config.means.size()),
                            &handle.ptr));
}

// ---- oracle -----------------------------------------------------------

int cmd_oracle(const std::string& config_path,
               const std::vector<double>& delta_flags) {
  const Config config = load_config(config_path);
  InstanceHandle instance;
  make_instance(config, instance);
  const int num_arms = bai_instance_num_arms(instance.ptr);

  std::vector<double> gaps(num_arms);
  check(bai_instance_gaps(instance.ptr, gaps.data()));
  double i_star = 0.0;
  check(bai_hardness_i_star(instance.ptr, &i_star));
  double gamma_value = 0.0;
  std::vector<double> weights(num_arms);
  check(bai_gamma_star(instance.ptr, &gamma_value, weights.data()));

  std::cout << "instance: family=" << config.family.type_name
            << " K=" << num_arms << "\n";
  std::cout << "means:";
  for (const double m : config.means) std::cout << " " << fmt_shortest(m);
  std::cout << "\n";
  std::cout << "best arm: " << bai_instance_best_arm(instance.ptr) + 1 << "\n";
  std::cout << "gaps:";
  for (const double g : gaps) std::cout << " " << fmt_shortest(g);
  std::cout << "\n";
  std::cout << "I*: " << fmt_shortest(i_star) << "\n";

  const std::vector<double>& deltas =
      delta_flags.empty() ? config.deltas : delta_flags;
  for (const double delta : deltas) {
    double bound = 0.0;
    check(bai_regret_lower_bound(instance.ptr, delta, &bound));
    std::cout << "regret lower bound at delta=" << fmt_shortest(delta) << ": "
              << fmt_shortest(bound) << "\n";
  }

  std::cout << "Gamma*: " << fmt_shortest(gamma_value) << "\n";
  std::cout << "optimal weights:";
  for (const double w : weights) std::cout << " " << fmt_shortest(w);
  std::cout << "\n";

  if (num_arms == 2) {
    // Regret coefficient of the sample-optimal allocation relative to the
    // regret-optimal one: w_2 Gamma* kl(mu_2, mu_1) with arm 1 the best.
    const int best = bai_instance_best_arm(instance.ptr);
    const int other = 1 - best;
    double div = 0.0;
    check(bai_kl(config.family.kind, config.family.variance,
                 config.means[other], config.means[best], &div));
    const double ratio = weights[other] * gamma_value * div;
    std::cout << "two-armed regret ratio (min-samples vs min-regret): "
              << fmt_shortest(ratio) << "\n";
  }
  return kExitOk;
}

// ---- run --------------------------------------------------------------

struct Row {
  std::string algorithm;
  double delta;
  int trials;
  double error_rate;
  double error_ub99;
  double mean_pseudo_regret;
  double mean_realized_regret;
  double mean_tau;
  double regret_ratio;
  double regret_lb_ratio;
  double tau_ratio;
  int censored;
};

std::string csv_artifact(const std::vector<Row>& rows,
                         const std::string& config_hash) {
  std::ostringstream out;
  out << "# bai " << bai_version() << " config_hash=" << config_hash << "\n";
  out << "algorithm,delta,trials,error_rate,error_ub99,mean_pseudo_regret,"
         "mean_realized_regret,mean_tau,regret_ratio,regret_lb_ratio,"
         "tau_ratio,censored\n";
  for (const Row& r : rows) {
    out << r.algorithm << "," << fmt17(r.delta) << "," << r.trials << ","
        << fmt17(r.error_rate) << "," << fmt17(r.error_ub99) << ","
        << fmt17(r.mean_pseudo_regret) << "," << fmt17(r.mean_realized_regret)
        << "," << fmt17(r.mean_tau) << "," << fmt17(r.regret_ratio) << ","
        << fmt17(r.regret_lb_ratio) << "," << fmt17(r.tau_ratio) << ","
        << r.censored << "\n";
  }
  return out.str();
}

ordered_json json_number(double value) {
  if (std::isinf(value)) return ordered_json(value > 0 ? "inf" : "-inf");
  return ordered_json(value);
}

std::string json_artifact(const std::vector<Row>& rows,
                          const std::string& config_hash) {
  ordered_json doc;
  doc["generator"] = std::string("bai ") + bai_version();
  doc["config_hash"] = config_hash;
  ordered_json arr = ordered_json::array();
  for (const Row& r : rows) {
    ordered_json row;
    row["algorithm"] = r.algorithm;
    row["delta"] = json_number(r.delta);
    row["trials"] = r.trials;
    row["error_rate"] = json_number(r.error_rate);
    row["error_ub99"] = json_number(r.error_ub99);
    row["mean_pseudo_regret"] = json_number(r.mean_pseudo_regret);
    row["mean_realized_regret"] = json_number(r.mean_realized_regret);
    row["mean_tau"] = json_number(r.mean_tau);
    row["regret_ratio"] = json_number(r.regret_ratio);
    row["regret_lb_ratio"] = json_number(r.regret_lb_ratio);
    row["tau_ratio"] = json_number(r.tau_ratio);
    row["censored"] = r.censored;
    arr.push_back(std::move(row));
  }
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

struct TraceWriter {
  std::ofstream out;

  static void callback(bai_algorithm alg, double delta,
                       const bai_trace_step* step, void* user) {
    auto* self = static_cast<TraceWriter*>(user);
    ordered_json line;
    line["algorithm"] = bai_algorithm_name(alg);
    line["delta"] = delta;
    line["t"] = step->t;
    if (step->pulled_arm >= 0) {
      line["arm"] = step->pulled_arm + 1;
      line["reward"] = step->reward;
    } else {
      line["arm"] = nullptr;
      line["reward"] = nullptr;
    }
    if (step->ucb_f != nullptr) {
      line["arm_f"] = step->arm_f + 1;
      line["arm_g"] = step->arm_g + 1;
      line["ucb_f"] = std::vector<double>(step->ucb_f,
                                          step->ucb_f + step->num_arms);
      line["ucb_g"] = std::vector<double>(step->ucb_g,
                                          step->ucb_g + step->num_arms);
      line["lcb_g"] = std::vector<double>(step->lcb_g,
                                          step->lcb_g + step->num_arms);
    } else {
      line["arm_f"] = nullptr;
      line["arm_g"] = nullptr;
    }
    line["stopped"] = step->stopped != 0;
    self->out << line.dump() << "\n";
  }
};

int cmd_run(const std::string& config_path, std::string format,
            const std::string& out_path, const std::string& trace_path) {
  const Config config = load_config(config_path);
  if (config.algorithms.empty()) {
    throw ConfigError("run needs a non-empty \"algorithms\" array");
  }
  if (config.deltas.empty()) {
    throw ConfigError("run needs a non-empty \"deltas\" array");
  }
  if (format.empty()) format = config.output_format;
  if (format != "csv" && format != "json") {
    throw ConfigError("--format must be csv or json");
  }

  InstanceHandle instance;
  make_instance(config, instance);

  CampaignHandle campaign;
  check(bai_campaign_create(instance.ptr, &campaign.ptr));
  for (const auto& name : config.algorithms) {
    check(bai_campaign_add_algorithm(campaign.ptr, parse_algorithm(name)));
  }
  for (const double d : config.deltas) {
    check(bai_campaign_add_delta(campaign.ptr, d));
  }
  check(bai_campaign_set_trials(campaign.ptr, config.trials));
  check(bai_campaign_set_seed(campaign.ptr, config.seed));
  check(bai_campaign_set_horizon_cap(campaign.ptr, config.horizon_cap));
  check(bai_campaign_set_parallelism(
      campaign.ptr, effective_parallelism(config.parallelism)));

  ResultHandle result;
  if (!trace_path.empty()) {
    TraceWriter writer;
    writer.out.open(trace_path, std::ios::binary);
    if (!writer.out) throw IoError("cannot open trace path " + trace_path);
    check(bai_campaign_run_traced(campaign.ptr, &TraceWriter::callback,
                                  &writer, &result.ptr));
  } else {
    check(bai_campaign_run(campaign.ptr, &result.ptr));
  }

  std::vector<Row> rows;
  const int cells = bai_result_num_cells(result.ptr);
  for (int i = 0; i < cells; ++i) {
    bai_cell_stats cs;
    check(bai_result_cell(result.ptr, i, &cs));
    Row row;
    row.algorithm = bai_algorithm_name(cs.algorithm);
    row.delta = cs.delta;
    row.trials = cs.trials;
    row.error_rate = cs.error_rate;
    row.error_ub99 = cs.error_upper99;
    row.mean_pseudo_regret = cs.mean_pseudo_regret;
    row.mean_realized_regret = cs.mean_realized_regret;
    row.mean_tau = cs.mean_tau;
    row.regret_ratio = cs.regret_over_log;
    row.regret_lb_ratio = cs.regret_over_lower_bound;
    row.tau_ratio = cs.tau_over_log;
    row.censored = cs.censored;
    rows.push_back(std::move(row));
  }

  const std::string config_hash = hex64(fnv1a64(config.raw_bytes));
  const std::string artifact = format == "csv"
                                   ? csv_artifact(rows, config_hash)
                                   : json_artifact(rows, config_hash);

  const std::string target =
      !out_path.empty() ? out_path : config.output_path;
  if (target.empty()) {
    std::cout << artifact;
  } else {
    std::ofstream out(target, std::ios::binary);
    if (!out) throw IoError("cannot open output path " + target);
    out << artifact;
    if (!out) throw IoError("write failed for " + target);
  }
  return kExitOk;
}

// ---- validate -----------------------------------------------------------

struct ValidatePrinter {
  static void callback(const char* suite, int passed, double millis,
                       const char* detail, void*) {
    std::printf("[%s] %-12s (%8.1f ms)%s%s\n", passed ? "PASS" : "FAIL",
                suite, millis, detail && detail[0] ? " " : "",
                detail ? detail : "");
  }
};

int cmd_validate(const std::string& suite, bool corrupt_kl) {
  int all_passed = 0;
  const unsigned flags = corrupt_kl ? BAI_VALIDATE_CORRUPT_KL : 0u;
  check(bai_validate(suite.empty() ? nullptr : suite.c_str(), flags,
                     &ValidatePrinter::callback, nullptr, &all_passed));
  return all_passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"best-arm identification with minimal regret: oracles, "
               "simulation campaigns and property checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<double> oracle_deltas;
  auto* oracle = app.add_subcommand("oracle",
                                    "print analytic quantities of an instance");
  oracle->add_option("--config", config_path, "instance config (JSON)")
      ->required();
  oracle->add_option("--delta", oracle_deltas,
                     "confidence level(s) for the regret lower bound");

  std::string run_config, run_format, run_out, run_trace;
  auto* run = app.add_subcommand("run", "execute a Monte Carlo campaign");
  run->add_option("--config", run_config, "experiment config (JSON)")
      ->required();
  run->add_option("--format", run_format, "csv or json");
  run->add_option("--out", run_out, "output path (default: stdout)");
  run->add_option("--trace", run_trace,
                  "newline-delimited JSON trace of each cell's first trial");

  std::string validate_suite;
  bool corrupt_kl = false;
  auto* validate = app.add_subcommand("validate", "run property suites");
  validate->add_option("--suite", validate_suite, "run only the named suite");
  validate->add_flag("--corrupt-kl", corrupt_kl)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (oracle->parsed()) return cmd_oracle(config_path, oracle_deltas);
    if (run->parsed()) return cmd_run(run_config, run_format, run_out,
                                      run_trace);
    if (validate->parsed()) return cmd_validate(validate_suite, corrupt_kl);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
