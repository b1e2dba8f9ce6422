/**
 * Copyright 2026 The Blockguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// blockguard-sim: run preset or custom experiments, or a single simulation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockguard/experiment.hpp"
#include "blockguard/simulation.hpp"

namespace {

using blockguard::ConfigError;
using json = nlohmann::json;

struct Overrides {
  std::string mode;
  std::string engine;
  std::string sizing;
  std::string mining;
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::map<std::string, double> numbers;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> runs;
  std::optional<std::uint32_t> committee_size;
  std::optional<unsigned> threads;
};

// Numeric flags, kebab-case flag -> config key.
const std::vector<std::pair<std::string, std::string>> kNumericFlags = {
    {"n", "n"},
    {"rounds", "rounds"},
    {"max-delay", "maxDelay"},
    {"byz-fraction", "byzFraction"},
    {"gen-period", "genPeriod"},
    {"levels", "levels"},
    {"level-prob", "levelProb"},
    {"base-committee-size", "baseCommitteeSize"},
    {"sec-mult", "secMult"},
    {"gsize", "gsize"},
    {"win-size", "winSize"},
    {"view-change-timeout", "viewChangeTimeout"},
    {"recording-rounds", "recordingRounds"},
    {"shuffle-period", "shufflePeriod"},
};

void add_common(CLI::App* cmd, Overrides& o, std::map<std::string, double>& storage) {
  cmd->add_option("--mode", o.mode, "composite | dynamic | fixed | fixed-composite | fixed-dynamic");
  cmd->add_option("--engine", o.engine, "pbft | sbft | pow | all");
  cmd->add_option("--sizing", o.sizing, "exponential | linear");
  cmd->add_option("--mining", o.mining, "committee | per-member");
  cmd->add_option("--seed", o.seed, "Base seed (default: BLOCKGUARD_SEED or 1)");
  cmd->add_option("--committee-size", o.committee_size, "Committee size for fixed modes");
  for (const auto& [flag, key] : kNumericFlags) {
    cmd->add_option("--" + flag, storage[key], key);
  }
}

json overrides_json(const Overrides& o, const std::map<std::string, double>& storage, const CLI::App* cmd) {
  json j = json::object();
  if (!o.mode.empty()) j["modes"] = o.mode;
  if (!o.engine.empty()) j["engines"] = o.engine;
  if (!o.sizing.empty()) j["sizing"] = o.sizing;
  if (!o.mining.empty()) j["mining"] = o.mining;
  if (o.seed) j["seed"] = *o.seed;
  if (o.runs) j["runs"] = *o.runs;
  if (o.threads) j["threads"] = *o.threads;
  if (o.committee_size) j["committeeSize"] = *o.committee_size;
  if (!o.sweep_param.empty()) j["sweep"] = {{"parameter", o.sweep_param}, {"values", o.sweep_values}};
  for (const auto& [flag, key] : kNumericFlags) {
    if (cmd->count("--" + flag) > 0) j[key] = storage.at(key);
  }
  return j;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("BLOCKGUARD_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used, 0);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("BLOCKGUARD_SEED is not an integer: ") + s);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

blockguard::ExperimentConfig build_experiment(const std::string& preset, const std::string& config_path,
                                              const json& overrides) {
  blockguard::ExperimentConfig config = preset.empty() ? blockguard::ExperimentConfig{}
                                                       : blockguard::builtin_experiment(preset);
  if (auto s = env_seed()) config.seed = *s;
  if (!config_path.empty()) blockguard::apply_json(config, read_file(config_path));
  blockguard::apply_json(config, overrides.dump());
  return config;
}

json metrics_json(const blockguard::MetricsLog& log, std::uint32_t levels) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  const auto defeat = blockguard::defeated_ratio(log, levels);
  json per_level = json::array();
  for (const auto& v : defeat.per_level) per_level.push_back(opt(v));
  const auto counts = blockguard::status_counts(log);
  return {{"rounds", log.rounds},
          {"throughput", opt(blockguard::throughput(log))},
          {"avgWait", opt(blockguard::avg_waiting_time(log))},
          {"defeatedRatio", opt(defeat.ratio)},
          {"rawDefeatedRatio", opt(defeat.raw_ratio)},
          {"perLevelDefeatedRatio", per_level},
          {"generated", counts.generated},
          {"recorded", counts.recorded},
          {"backlog", counts.pending + counts.tentative},
          {"committees", log.committees.size()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-based simulator of adaptive-security committee scheduling"};
  app.require_subcommand(1);

  Overrides run_o;
  std::map<std::string, double> run_numbers;
  std::string preset;
  std::string config_path;
  std::string out_path;
  std::string timeline_path;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run a preset or a JSON-configured experiment and write CSV");
  run->add_option("--preset", preset, "Builtin experiment name (see `presets`)");
  run->add_option("--config", config_path, "JSON experiment config; flags override it");
  run->add_option("--out", out_path, "Results CSV (default: stdout)");
  run->add_option("--timeline-out", timeline_path, "Rolling timeline CSV");
  run->add_option("--runs", run_o.runs, "Runs per data point");
  run->add_option("--threads", run_o.threads, "Worker threads (default: all cores)");
  run->add_option("--sweep-param", run_o.sweep_param, "Parameter to sweep");
  run->add_option("--sweep-values", run_o.sweep_values, "Sweep values")->delimiter(',');
  run->add_flag("-q,--quiet", quiet, "No progress output");
  add_common(run, run_o, run_numbers);

  Overrides sim_o;
  std::map<std::string, double> sim_numbers;
  std::string event_log_path;
  std::string event_detail = "protocol";
  std::string ledger_path;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one simulation and print its metrics as JSON");
  simulate->add_option("--event-log", event_log_path, "Write the NDJSON event log here");
  simulate->add_option("--events", event_detail, "Event detail: protocol | messages")
      ->check(CLI::IsMember({"protocol", "messages"}));
  simulate->add_option("--ledger-out", ledger_path, "Write the ledger(s) as JSON here");
  add_common(simulate, sim_o, sim_numbers);

  CLI::App* presets = app.add_subcommand("presets", "List builtin experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      for (const auto& name : blockguard::preset_names()) std::cout << name << '\n';
      return 0;
    }

    if (run->parsed()) {
      if (preset.empty() && config_path.empty()) throw ConfigError("run needs --preset or --config");
      const auto config = build_experiment(preset, config_path, overrides_json(run_o, run_numbers, run));
      if (!timeline_path.empty() && !config.timeline) {
        throw ConfigError("--timeline-out needs a timeline experiment (\"timeline\": true)");
      }
      blockguard::ProgressFn progress;
      if (!quiet) {
        progress = [](std::size_t done, std::size_t total) {
          std::cerr << "\r" << done << "/" << total << " runs" << (done == total ? "\n" : "") << std::flush;
        };
      }
      const auto result = blockguard::run_experiment(config, progress);
      std::ostringstream csv;
      blockguard::write_csv(result, csv);
      if (out_path.empty()) {
        std::cout << csv.str();
      } else {
        write_file(out_path, csv.str());
      }
      if (!timeline_path.empty()) {
        std::ostringstream tl;
        blockguard::write_timeline_csv(result, tl);
        write_file(timeline_path, tl.str());
      }
      return 0;
    }

    // simulate: one run from the first mode and engine.
    json overrides = overrides_json(sim_o, sim_numbers, simulate);
    overrides["runs"] = 1;
    const auto config = build_experiment("", "", overrides);
    if (config.modes.size() != 1 || config.engines.size() != 1) {
      throw ConfigError("simulate needs exactly one --mode and one --engine");
    }
    auto runs = blockguard::plan_runs(config);
    blockguard::SimConfig sim = runs.front().sim;
    sim.seed = config.seed;
    sim.events = event_log_path.empty() ? blockguard::EventDetail::Off
                 : event_detail == "messages" ? blockguard::EventDetail::Messages
                                              : blockguard::EventDetail::Protocol;
    blockguard::Simulation simulation(sim);
    simulation.run();
    std::cout << metrics_json(simulation.metrics(), sim.workload.levels).dump(2) << '\n';
    if (!event_log_path.empty()) {
      std::ofstream out(event_log_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + event_log_path);
      simulation.world().log.write_ndjson(out);
    }
    if (!ledger_path.empty()) {
      std::string body = "[";
      const auto& ledgers = simulation.world().ledgers;
      for (std::size_t i = 0; i < ledgers.size(); ++i) {
        body += (i == 0 ? "" : ",") + blockguard::export_ledger_json(ledgers[i]);
      }
      body += "]\n";
      write_file(ledger_path, body);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
