// Copyright 2025 The linebal Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// linebal: load -> validate -> optimize -> simulate -> report.
//
// Exit codes: 0 success, 1 IO/parse/usage error, 2 invalid scenario or
// incompatible inputs, 3 simulated schedule disagrees with the plan.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "linebal/balancing.hpp"
#include "linebal/report.hpp"
#include "linebal/scenario.hpp"
#include "linebal/schedule.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCrossCheck = 3;

// Carries an exit code out of a command.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitIo, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

linebal::Scenario load_valid(const std::string& path) {
  linebal::Scenario s;
  try {
    s = linebal::load_scenario(read_file(path));
  } catch (const linebal::ParseError& e) {
    throw Failure{kExitIo, path + ": " + e.what()};
  } catch (const linebal::SchemaError& e) {
    throw Failure{kExitIo, path + ": schema error: " + e.what()};
  }
  const auto violations = linebal::validate(s);
  if (!violations.empty()) {
    std::string msg = path + ": invalid scenario";
    for (const auto& v : violations) {
      msg += std::string("\n  ") + linebal::to_string(v.code) + ": " + v.message;
    }
    throw Failure{kExitInvalid, msg};
  }
  return s;
}

struct Options {
  std::string mode = "continuous";
  bool json = false;
  bool cold_start = false;
  std::string gantt_path;
  bool gantt_text = false;
  std::vector<std::string> paths;
};

linebal::Mode parse_mode(const std::string& m) {
  return m == "integer" ? linebal::Mode::kInteger : linebal::Mode::kContinuous;
}

struct Pipeline {
  linebal::RunResult result;
  linebal::Timeline timeline;
};

Pipeline run_pipeline(const linebal::Scenario& s, const Options& opt) {
  Pipeline p;
  linebal::RunResult& r = p.result;
  r.scenario_name = s.name;
  r.mode = parse_mode(opt.mode);
  for (const auto& f : s.furnaces) r.furnace_ids.push_back(f.id);
  const linebal::OptimizeResult opt_result = linebal::optimize(s, r.mode);
  r.plan = opt_result.plan;
  r.breakdown = opt_result.breakdown;
  p.timeline = linebal::build_schedule(
      s, r.plan,
      opt.cold_start ? linebal::ScheduleMode::kColdStart : linebal::ScheduleMode::kSteadyState);
  r.schedule = linebal::simulate(s, p.timeline);
  return p;
}

void emit_json(const linebal::RunResult& r) {
  std::cout << linebal::to_json(r).dump(2) << "\n";
}

int cmd_solve(const Options& opt) {
  const linebal::Scenario s = load_valid(opt.paths.at(0));
  const Pipeline p = run_pipeline(s, opt);
  if (opt.json) {
    emit_json(p.result);
  } else {
    linebal::print_plan(std::cout, s, p.result);
  }
  return kExitOk;
}

int cmd_simulate(const Options& opt) {
  const linebal::Scenario s = load_valid(opt.paths.at(0));
  Pipeline p = run_pipeline(s, opt);
  p.result.verdict = linebal::cross_check(s, p.result.plan, p.result.schedule);

  if (!opt.gantt_path.empty()) {
    std::ofstream out(opt.gantt_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitIo, "cannot write '" + opt.gantt_path + "'"};
    out << linebal::render_gantt_svg(s, p.timeline);
    if (!out) throw Failure{kExitIo, "failed writing '" + opt.gantt_path + "'"};
  }
  if (opt.json) {
    emit_json(p.result);
  } else {
    linebal::print_plan(std::cout, s, p.result);
    linebal::print_schedule(std::cout, p.result);
  }
  if (opt.gantt_text) std::cout << linebal::render_gantt_text(s, p.timeline);

  if (!p.result.verdict->pass) {
    std::cerr << "cross-check failed\n";
    return kExitCrossCheck;
  }
  return kExitOk;
}

int cmd_report(const Options& opt) {
  const linebal::Scenario baseline = load_valid(opt.paths.at(0));
  const linebal::Scenario optimized = load_valid(opt.paths.at(1));
  const Pipeline base = run_pipeline(baseline, opt);
  Pipeline best = run_pipeline(optimized, opt);
  try {
    best.result.increment = linebal::incremental_report(baseline, base.result.plan, optimized,
                                                        best.result.plan);
  } catch (const linebal::RevenueMismatchError& e) {
    throw Failure{kExitInvalid, e.what()};
  }
  if (opt.json) {
    emit_json(best.result);
  } else {
    std::cout << "Baseline:  " << baseline.name << "\n";
    std::cout << "Optimized: " << optimized.name << " (" << opt.mode << ")\n";
    linebal::print_increment(std::cout, *best.result.increment);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Melting-line balancing optimizer and schedule simulator", "linebal"};
  app.set_version_flag("--version", std::string(linebal::kToolVersion));
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--mode", opt.mode, "continuous or integer cycle counts")
        ->check(CLI::IsMember({"continuous", "integer"}));
    cmd->add_flag("--json", opt.json, "machine-readable output");
    cmd->add_flag("--cold-start", opt.cold_start,
                  "schedule from an empty line instead of a steady-state day");
  };

  CLI::App* solve = app.add_subcommand("solve", "optimize daily cycles for a scenario");
  solve->add_option("scenario", opt.paths, "scenario JSON file")->required()->expected(1);
  add_common(solve);

  CLI::App* simulate = app.add_subcommand("simulate", "optimize, then simulate the day");
  simulate->add_option("scenario", opt.paths, "scenario JSON file")->required()->expected(1);
  simulate->add_option("--gantt", opt.gantt_path, "write an SVG Gantt chart to this path");
  simulate->add_flag("--gantt-text", opt.gantt_text, "print a text Gantt chart");
  add_common(simulate);

  CLI::App* report = app.add_subcommand("report", "baseline vs optimized daily profit");
  report->add_option("files", opt.paths, "baseline and optimized scenario files")
      ->required()
      ->expected(2);
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    return cmd_report(opt);
  } catch (const Failure& f) {
    std::cerr << "linebal: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "linebal: " << e.what() << "\n";
    return kExitIo;
  }
}
