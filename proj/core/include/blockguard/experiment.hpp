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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockguard/metrics.hpp"
#include "blockguard/world.hpp"

namespace blockguard {

inline constexpr int kCsvSchemaVersion = 1;

/// A scheduler, optionally in fixed-size baseline form.
struct ModeSpec {
  SchedulerKind scheduler = SchedulerKind::Composite;
  bool fixed = false;

  std::string name() const;
  friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

/// "composite" | "dynamic" | "fixed-composite" | "fixed-dynamic"; "fixed"
/// expands to both fixed forms.
std::vector<ModeSpec> parse_modes(std::string_view text);

struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

/// Parameters a sweep may vary.
const std::vector<std::string>& sweep_parameters();

struct ExperimentConfig {
  std::string name = "custom";
  std::vector<ModeSpec> modes = {{SchedulerKind::Composite, false}, {SchedulerKind::Dynamic, false}};
  std::vector<EngineKind> engines = {EngineKind::Pbft, EngineKind::Sbft, EngineKind::Pow};
  SimConfig base;  // scheduler, engine, fixed_size and seed are set per run
  std::uint32_t runs = 10;
  std::uint64_t seed = 1;
  std::optional<std::uint32_t> committee_size;  // fixed modes, unless swept
  std::optional<Sweep> sweep;
  bool timeline = false;
  std::uint32_t timeline_window = 200;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Per-run seed: a pure function of the base seed and the sweep and run
/// indices, shared by every mode and engine.
std::uint64_t derive_seed(std::uint64_t base, std::size_t sweep_index, std::size_t run_index);

/// Names accepted by builtin_experiment.
const std::vector<std::string>& preset_names();

/// Throws ConfigError listing the presets when `name` is unknown.
ExperimentConfig builtin_experiment(std::string_view name);

/// Applies flat JSON keys on top of `config`. Throws ConfigError on unknown
/// keys or bad values.
void apply_json(ExperimentConfig& config, std::string_view json_text);

/// One simulation to execute.
struct RunSpec {
  ModeSpec mode;
  EngineKind engine = EngineKind::Pbft;
  std::size_t sweep_index = 0;
  std::optional<double> sweep_value;
  std::uint32_t run_index = 0;
  SimConfig sim;
};

/// Expands the experiment into runs, in output order. Validates every run
/// and throws ConfigError before anything executes.
std::vector<RunSpec> plan_runs(const ExperimentConfig& config);

struct RunSummary {
  std::optional<double> throughput;
  std::optional<double> avg_wait;
  DefeatSummary defeat;
  std::size_t backlog = 0;
  std::size_t committees = 0;
  std::uint64_t view_changes = 0;
  std::uint64_t restarts = 0;
  std::vector<TimelinePoint> timeline;
};

RunSummary summarize(const MetricsLog& log, std::uint32_t levels, std::optional<std::uint32_t> timeline_window);

/// Runs one simulation to completion.
RunSummary execute(const RunSpec& run, std::optional<std::uint32_t> timeline_window);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunSpec> runs;
  std::vector<RunSummary> summaries;  // parallel to runs
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Executes every run, concurrently when threads allow. Output does not
/// depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Per-run rows followed by one aggregate row per (mode, engine, sweep value).
void write_csv(const ExperimentResult& result, std::ostream& out);

/// Rolling series averaged over runs, one row per (mode, engine, sweep value, round).
void write_timeline_csv(const ExperimentResult& result, std::ostream& out);

struct Aggregate {
  std::optional<double> mean;
  std::optional<double> sd;  // sample standard deviation; needs two values
  std::size_t count = 0;
};

Aggregate aggregate(const std::vector<std::optional<double>>& values);

}  // namespace blockguard
