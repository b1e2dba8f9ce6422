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

#include "blockguard/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "blockguard/simulation.hpp"

namespace blockguard {

namespace {

using json = nlohmann::json;

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : std::string(); }

std::uint32_t as_count(const std::string& key, double v) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 4294967295.0) {
    throw ConfigError(key + " must be a non-negative integer, got " + fmt_num(v));
  }
  return static_cast<std::uint32_t>(v);
}

void apply_parameter(SimConfig& sim, const std::string& key, double v) {
  if (key == "maxDelay") {
    sim.max_delay = as_count(key, v);
  } else if (key == "byzFraction") {
    sim.byz_fraction = v;
  } else if (key == "committeeSize") {
    sim.fixed_size = as_count(key, v);
  } else if (key == "n") {
    sim.n = as_count(key, v);
  } else if (key == "rounds") {
    sim.rounds = as_count(key, v);
  } else if (key == "genPeriod") {
    sim.workload.gen_period = as_count(key, v);
  } else if (key == "winSize") {
    sim.win_size = as_count(key, v);
  } else if (key == "gsize") {
    sim.gsize = as_count(key, v);
  } else if (key == "viewChangeTimeout") {
    sim.view_change_timeout = as_count(key, v);
  } else if (key == "recordingRounds") {
    sim.recording_rounds = as_count(key, v);
  } else if (key == "shufflePeriod") {
    sim.shuffle_period = as_count(key, v);
  } else {
    throw ConfigError("unknown sweep parameter '" + key + "'");
  }
}

std::vector<EngineKind> parse_engines(const json& j) {
  std::vector<EngineKind> out;
  auto add = [&out](const std::string& s) {
    if (s == "all") {
      out = {EngineKind::Pbft, EngineKind::Sbft, EngineKind::Pow};
      return;
    }
    out.push_back(parse_engine_kind(s));
  };
  if (j.is_string()) {
    add(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& e : j) add(e.get<std::string>());
  } else {
    throw ConfigError("engines must be a string or an array of strings");
  }
  return out;
}

std::vector<ModeSpec> parse_mode_list(const json& j) {
  std::vector<ModeSpec> out;
  auto add = [&out](const std::string& s) {
    for (const ModeSpec& m : parse_modes(s)) out.push_back(m);
  };
  if (j.is_string()) {
    add(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& e : j) add(e.get<std::string>());
  } else {
    throw ConfigError("modes must be a string or an array of strings");
  }
  return out;
}

std::string committee_column(const RunSpec& r) {
  return r.sim.fixed_size ? std::to_string(*r.sim.fixed_size) : std::string("adaptive");
}

}  // namespace

std::string ModeSpec::name() const {
  const std::string base(to_string(scheduler));
  return fixed ? "fixed-" + base : base;
}

std::vector<ModeSpec> parse_modes(std::string_view text) {
  if (text == "composite") return {{SchedulerKind::Composite, false}};
  if (text == "dynamic") return {{SchedulerKind::Dynamic, false}};
  if (text == "fixed-composite") return {{SchedulerKind::Composite, true}};
  if (text == "fixed-dynamic") return {{SchedulerKind::Dynamic, true}};
  if (text == "fixed") return {{SchedulerKind::Composite, true}, {SchedulerKind::Dynamic, true}};
  if (text == "adaptive") return {{SchedulerKind::Composite, false}, {SchedulerKind::Dynamic, false}};
  throw ConfigError("unknown mode '" + std::string(text) +
                    "' (expected composite, dynamic, fixed, fixed-composite, fixed-dynamic or adaptive)");
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> params = {"maxDelay",  "byzFraction", "committeeSize",     "n",
                                                  "rounds",    "genPeriod",   "winSize",           "gsize",
                                                  "viewChangeTimeout",        "recordingRounds",   "shufflePeriod"};
  return params;
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t sweep_index, std::size_t run_index) {
  return mix_seed(mix_seed(base, sweep_index), run_index);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fixed",       "throughput-delay", "throughput-fraction", "wait-delay",
                                                 "wait-fraction", "defeated",       "timeline"};
  return names;
}

ExperimentConfig builtin_experiment(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  if (name == "fixed") {
    c.modes = parse_modes("fixed");
    c.sweep = Sweep{"committeeSize", {64, 128, 256, 512, 1024}};
  } else if (name == "throughput-delay" || name == "wait-delay") {
    c.sweep = Sweep{"maxDelay", {1, 2, 4, 8}};
  } else if (name == "throughput-fraction" || name == "defeated") {
    c.sweep = Sweep{"byzFraction", {0.0, 0.1, 0.2, 0.3, 0.4}};
  } else if (name == "wait-fraction") {
    c.sweep = Sweep{"byzFraction", {0.0, 0.1, 0.2, 0.3, 0.4, 0.45}};
  } else if (name == "timeline") {
    c.timeline = true;
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "'; available: " + list);
  }
  return c;
}

void apply_json(ExperimentConfig& c, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SimConfig& s = c.base;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "name") {
        c.name = v.get<std::string>();
      } else if (key == "mode" || key == "modes") {
        c.modes = parse_mode_list(v);
      } else if (key == "engine" || key == "engines") {
        c.engines = parse_engines(v);
      } else if (key == "runs") {
        c.runs = v.get<std::uint32_t>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "committeeSize") {
        c.committee_size = v.get<std::uint32_t>();
      } else if (key == "levels") {
        s.workload.levels = s.sizing.levels = v.get<std::uint32_t>();
      } else if (key == "levelProb") {
        s.workload.level_prob = v.get<double>();
      } else if (key == "baseCommitteeSize") {
        s.sizing.base_size = v.get<std::uint32_t>();
      } else if (key == "secMult") {
        s.sizing.sec_mult = v.get<std::uint32_t>();
      } else if (key == "sizing") {
        const auto rule = v.get<std::string>();
        if (rule == "exponential") {
          s.sizing.rule = SizingRule::Exponential;
        } else if (rule == "linear") {
          s.sizing.rule = SizingRule::Linear;
        } else {
          throw ConfigError("sizing must be exponential or linear");
        }
      } else if (key == "mining") {
        const auto m = v.get<std::string>();
        if (m == "committee") {
          s.mining.granularity = MiningGranularity::Committee;
        } else if (m == "per-member") {
          s.mining.granularity = MiningGranularity::PerMember;
        } else {
          throw ConfigError("mining must be committee or per-member");
        }
      } else if (key == "timeline") {
        c.timeline = v.get<bool>();
      } else if (key == "timelineWindow") {
        c.timeline_window = v.get<std::uint32_t>();
      } else if (key == "threads") {
        c.threads = v.get<unsigned>();
      } else if (key == "sweep") {
        if (v.is_null()) {
          c.sweep.reset();
          continue;
        }
        Sweep sw;
        sw.parameter = v.at("parameter").get<std::string>();
        sw.values = v.at("values").get<std::vector<double>>();
        c.sweep = std::move(sw);
      } else if (std::find(sweep_parameters().begin(), sweep_parameters().end(), key) != sweep_parameters().end()) {
        apply_parameter(s, key, v.get<double>());
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

std::vector<RunSpec> plan_runs(const ExperimentConfig& c) {
  if (c.runs < 1) throw ConfigError("runs must be at least 1");
  if (c.modes.empty()) throw ConfigError("no modes selected");
  if (c.engines.empty()) throw ConfigError("no engines selected");
  if (c.timeline && c.timeline_window < 1) throw ConfigError("timelineWindow must be at least 1");
  const bool sweeping = c.sweep.has_value();
  if (sweeping) {
    const auto& params = sweep_parameters();
    if (std::find(params.begin(), params.end(), c.sweep->parameter) == params.end()) {
      throw ConfigError("unknown sweep parameter '" + c.sweep->parameter + "'");
    }
    if (c.sweep->values.empty()) throw ConfigError("sweep has no values");
  }
  const bool size_swept = sweeping && c.sweep->parameter == "committeeSize";
  const std::size_t points = sweeping ? c.sweep->values.size() : 1;

  std::vector<RunSpec> out;
  for (const ModeSpec& mode : c.modes) {
    if (size_swept && !mode.fixed) throw ConfigError("committeeSize sweeps need a fixed mode");
    if (mode.fixed && !size_swept && !c.committee_size) throw ConfigError("fixed mode needs committeeSize");
    for (EngineKind engine : c.engines) {
      for (std::size_t si = 0; si < points; ++si) {
        for (std::uint32_t run = 0; run < c.runs; ++run) {
          RunSpec r;
          r.mode = mode;
          r.engine = engine;
          r.sweep_index = si;
          r.run_index = run;
          r.sim = c.base;
          r.sim.scheduler = mode.scheduler;
          r.sim.engine = engine;
          r.sim.fixed_size = mode.fixed ? c.committee_size : std::nullopt;
          r.sim.events = EventDetail::Off;
          if (sweeping) {
            r.sweep_value = c.sweep->values[si];
            apply_parameter(r.sim, c.sweep->parameter, *r.sweep_value);
          }
          r.sim.seed = derive_seed(c.seed, si, run);
          validate(r.sim);
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

RunSummary summarize(const MetricsLog& log, std::uint32_t levels, std::optional<std::uint32_t> timeline_window) {
  RunSummary s;
  s.throughput = throughput(log);
  s.avg_wait = avg_waiting_time(log);
  s.defeat = defeated_ratio(log, levels);
  s.backlog = backlog(log);
  s.committees = log.committees.size();
  for (const CommitteeRecord& c : log.committees) {
    s.view_changes += c.view_changes;
    s.restarts += c.restarts;
  }
  if (timeline_window) s.timeline = rolling_timeline(log, *timeline_window);
  return s;
}

RunSummary execute(const RunSpec& run, std::optional<std::uint32_t> timeline_window) {
  Simulation sim(run.sim);
  sim.run();
  return summarize(sim.metrics(), run.sim.workload.levels, timeline_window);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  ExperimentResult result;
  result.config = config;
  result.runs = plan_runs(config);
  result.summaries.resize(result.runs.size());
  const std::optional<std::uint32_t> window =
      config.timeline ? std::optional<std::uint32_t>(config.timeline_window) : std::nullopt;

  unsigned threads = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.runs.size()));
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.runs.size()) return;
      try {
        result.summaries[i] = execute(result.runs[i], window);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = result.runs.size();
        return;
      }
      std::lock_guard<std::mutex> lock(mu);
      ++done;
      if (progress) progress(done, result.runs.size());
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

Aggregate aggregate(const std::vector<std::optional<double>>& values) {
  Aggregate a;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++a.count;
  }
  if (a.count == 0) return a;
  const double mean = sum / static_cast<double>(a.count);
  a.mean = mean;
  if (a.count >= 2) {
    double ss = 0.0;
    for (const auto& v : values) {
      if (v) ss += (*v - mean) * (*v - mean);
    }
    a.sd = std::sqrt(ss / static_cast<double>(a.count - 1));
  }
  return a;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  const std::uint32_t levels = result.config.base.workload.levels;
  out << "schema_version,row,mode,engine,sweepParameter,sweepValue,n,maxDelay,byzFraction,committeeSizeOrAdaptive,"
         "seed,runIndex,runs,throughput,throughputSd,avgWait,avgWaitSd,defeatedRatio,defeatedRatioSd,rawDefeatedRatio";
  for (std::uint32_t l = 1; l <= levels; ++l) out << ",defeatedL" << l;
  out << ",backlog,committees,viewChanges,restarts\n";

  const std::string sweep_param = result.config.sweep ? result.config.sweep->parameter : std::string();
  auto prefix = [&](const RunSpec& r, const char* kind) {
    out << kCsvSchemaVersion << ',' << kind << ',' << r.mode.name() << ',' << to_string(r.engine) << ','
        << sweep_param << ',' << fmt_opt(r.sweep_value) << ',' << r.sim.n << ',' << r.sim.max_delay << ','
        << fmt_num(r.sim.byz_fraction) << ',' << committee_column(r) << ',';
  };

  const auto& runs = result.runs;
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    while (j < runs.size() && runs[j].mode == runs[i].mode && runs[j].engine == runs[i].engine &&
           runs[j].sweep_index == runs[i].sweep_index) {
      ++j;
    }
    for (std::size_t k = i; k < j; ++k) {
      const RunSpec& r = runs[k];
      const RunSummary& s = result.summaries[k];
      prefix(r, "run");
      out << r.sim.seed << ',' << r.run_index << ",1," << fmt_opt(s.throughput) << ",," << fmt_opt(s.avg_wait)
          << ",," << fmt_opt(s.defeat.ratio) << ",," << fmt_opt(s.defeat.raw_ratio);
      for (std::uint32_t l = 0; l < levels; ++l) {
        out << ',' << (l < s.defeat.per_level.size() ? fmt_opt(s.defeat.per_level[l]) : std::string());
      }
      out << ',' << s.backlog << ',' << s.committees << ',' << s.view_changes << ',' << s.restarts << '\n';
    }
    auto column = [&](auto get) {
      std::vector<std::optional<double>> v;
      for (std::size_t k = i; k < j; ++k) v.push_back(get(result.summaries[k]));
      return aggregate(v);
    };
    const Aggregate tp = column([](const RunSummary& s) { return s.throughput; });
    const Aggregate wait = column([](const RunSummary& s) { return s.avg_wait; });
    const Aggregate def = column([](const RunSummary& s) { return s.defeat.ratio; });
    const Aggregate raw = column([](const RunSummary& s) { return s.defeat.raw_ratio; });
    prefix(runs[i], "aggregate");
    out << ",," << (j - i) << ',' << fmt_opt(tp.mean) << ',' << fmt_opt(tp.sd) << ',' << fmt_opt(wait.mean) << ','
        << fmt_opt(wait.sd) << ',' << fmt_opt(def.mean) << ',' << fmt_opt(def.sd) << ',' << fmt_opt(raw.mean);
    for (std::uint32_t l = 0; l < levels; ++l) {
      const Aggregate lv = column([l](const RunSummary& s) {
        return l < s.defeat.per_level.size() ? s.defeat.per_level[l] : std::nullopt;
      });
      out << ',' << fmt_opt(lv.mean);
    }
    const Aggregate bl = column([](const RunSummary& s) { return std::optional<double>(double(s.backlog)); });
    const Aggregate cm = column([](const RunSummary& s) { return std::optional<double>(double(s.committees)); });
    const Aggregate vc = column([](const RunSummary& s) { return std::optional<double>(double(s.view_changes)); });
    const Aggregate rs = column([](const RunSummary& s) { return std::optional<double>(double(s.restarts)); });
    out << ',' << fmt_opt(bl.mean) << ',' << fmt_opt(cm.mean) << ',' << fmt_opt(vc.mean) << ',' << fmt_opt(rs.mean)
        << '\n';
    i = j;
  }
}

void write_timeline_csv(const ExperimentResult& result, std::ostream& out) {
  out << "schema_version,mode,engine,sweepParameter,sweepValue,round,rollingThroughput,rollingWait\n";
  const std::string sweep_param = result.config.sweep ? result.config.sweep->parameter : std::string();
  const auto& runs = result.runs;
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    while (j < runs.size() && runs[j].mode == runs[i].mode && runs[j].engine == runs[i].engine &&
           runs[j].sweep_index == runs[i].sweep_index) {
      ++j;
    }
    std::size_t points = 0;
    for (std::size_t k = i; k < j; ++k) points = std::max(points, result.summaries[k].timeline.size());
    for (std::size_t p = 0; p < points; ++p) {
      std::vector<std::optional<double>> tp;
      std::vector<std::optional<double>> wait;
      Round round = 0;
      for (std::size_t k = i; k < j; ++k) {
        const auto& series = result.summaries[k].timeline;
        if (p >= series.size()) continue;
        round = series[p].round;
        tp.push_back(series[p].throughput);
        wait.push_back(series[p].wait);
      }
      out << kCsvSchemaVersion << ',' << runs[i].mode.name() << ',' << to_string(runs[i].engine) << ','
          << sweep_param << ',' << fmt_opt(runs[i].sweep_value) << ',' << round << ','
          << fmt_opt(aggregate(tp).mean) << ',' << fmt_opt(aggregate(wait).mean) << '\n';
    }
    i = j;
  }
}

}  // namespace blockguard
