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

// Rendering for the command-line tool: run results as JSON, plain-text
// tables, and Gantt charts (SVG 1.1 and fixed-width text). All output is
// byte-deterministic for identical inputs.

#ifndef LINEBAL_REPORT_HPP_
#define LINEBAL_REPORT_HPP_

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "linebal/balancing.hpp"
#include "linebal/scenario.hpp"
#include "linebal/schedule.hpp"

namespace linebal {

inline constexpr const char* kToolVersion = "linebal 0.1.0";

struct RunResult {
  std::string scenario_name;
  Mode mode = Mode::kContinuous;
  std::vector<std::string> furnace_ids;  // legend for plan.cycles
  CyclePlan plan;
  ProfitBreakdown breakdown;
  ScheduleReport schedule;
  std::optional<Verdict> verdict;
  std::optional<IncrementReport> increment;
  std::string tool_version = kToolVersion;

  bool operator==(const RunResult&) const = default;
};

class ResultFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace internal {

using ojson = nlohmann::ordered_json;

inline ojson map_to_json(const std::map<std::string, double>& m) {
  ojson j = ojson::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline std::map<std::string, double> map_from_json(const ojson& j) {
  std::map<std::string, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = it.value().get<double>();
  return m;
}

inline ConflictCode conflict_from_string(const std::string& s) {
  for (ConflictCode c :
       {ConflictCode::kUnknownKind, ConflictCode::kBadInterval, ConflictCode::kFurnaceOverlap,
        ConflictCode::kTankOverlap, ConflictCode::kPourBeforeMelt,
        ConflictCode::kCastWithoutPour, ConflictCode::kTopologyMismatch,
        ConflictCode::kRatioExceeded, ConflictCode::kCapacityExceeded}) {
    if (s == to_string(c)) return c;
  }
  throw ResultFormatError("unknown conflict code '" + s + "'");
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "continuous") return Mode::kContinuous;
  if (s == "integer") return Mode::kInteger;
  throw ResultFormatError("unknown mode '" + s + "'");
}

}  // namespace internal

inline nlohmann::ordered_json to_json(const RunResult& r) {
  using internal::ojson;
  ojson j;
  j["tool_version"] = r.tool_version;
  j["scenario"] = r.scenario_name;
  j["mode"] = to_string(r.mode);

  ojson plan = ojson::array();
  for (std::size_t i = 0; i < r.plan.cycles.size(); ++i) {
    ojson row;
    row["furnace"] = i < r.furnace_ids.size() ? r.furnace_ids[i] : std::string();
    row["cycles_per_day"] = r.plan.cycles[i];
    plan.push_back(std::move(row));
  }
  j["plan"] = std::move(plan);

  ojson b;
  b["gross_revenue_usd"] = r.breakdown.gross_revenue_usd;
  b["idle_cost_usd_per_furnace"] = internal::map_to_json(r.breakdown.idle_cost_usd_per_furnace);
  b["objective_usd"] = r.breakdown.objective_usd;
  b["effective_cycles_per_tank"] = internal::map_to_json(r.breakdown.effective_cycles_per_tank);
  b["binding_constraints"] = r.breakdown.binding_constraints;
  b["violated_constraints"] = r.breakdown.violated_constraints;
  j["breakdown"] = std::move(b);

  ojson s;
  s["achieved_cycles_per_tank"] = internal::map_to_json(r.schedule.achieved_cycles_per_tank);
  s["busy_minutes_per_resource"] = internal::map_to_json(r.schedule.busy_minutes_per_resource);
  s["utilization_per_resource"] = internal::map_to_json(r.schedule.utilization_per_resource);
  s["idle_minutes_per_furnace"] = internal::map_to_json(r.schedule.idle_minutes_per_furnace);
  ojson conflicts = ojson::array();
  for (const auto& c : r.schedule.conflicts) {
    conflicts.push_back({{"code", to_string(c.code)}, {"message", c.message}});
  }
  s["conflicts"] = std::move(conflicts);
  j["schedule"] = std::move(s);

  if (r.verdict) {
    ojson v;
    v["pass"] = r.verdict->pass;
    ojson checks = ojson::array();
    for (const auto& c : r.verdict->checks) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    v["checks"] = std::move(checks);
    j["cross_check"] = std::move(v);
  }

  if (r.increment) {
    const IncrementReport& inc = *r.increment;
    ojson i;
    i["baseline_daily_cycles"] = inc.baseline_daily_cycles;
    i["optimized_daily_cycles"] = inc.optimized_daily_cycles;
    i["revenue_per_cycle_usd"] = inc.revenue_per_cycle_usd;
    i["additional_labor_cost_usd_per_day"] = inc.additional_labor_cost_usd_per_day;
    i["increment_usd_per_day"] = inc.increment_usd_per_day;
    i["baseline_net_usd_per_day"] = inc.baseline_net_usd_per_day;
    i["optimized_net_usd_per_day"] = inc.optimized_net_usd_per_day;
    i["growth_percent"] = inc.growth_percent ? ojson(*inc.growth_percent) : ojson(nullptr);
    j["increment"] = std::move(i);
  }
  return j;
}

inline RunResult run_result_from_json(const nlohmann::ordered_json& j) {
  try {
    RunResult r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.scenario_name = j.at("scenario").get<std::string>();
    r.mode = internal::mode_from_string(j.at("mode").get<std::string>());
    r.plan.mode = r.mode;
    for (const auto& row : j.at("plan")) {
      r.furnace_ids.push_back(row.at("furnace").get<std::string>());
      r.plan.cycles.push_back(row.at("cycles_per_day").get<double>());
    }

    const auto& b = j.at("breakdown");
    r.breakdown.gross_revenue_usd = b.at("gross_revenue_usd").get<double>();
    r.breakdown.idle_cost_usd_per_furnace =
        internal::map_from_json(b.at("idle_cost_usd_per_furnace"));
    r.breakdown.objective_usd = b.at("objective_usd").get<double>();
    r.breakdown.effective_cycles_per_tank =
        internal::map_from_json(b.at("effective_cycles_per_tank"));
    r.breakdown.binding_constraints =
        b.at("binding_constraints").get<std::vector<std::string>>();
    r.breakdown.violated_constraints =
        b.at("violated_constraints").get<std::vector<std::string>>();

    const auto& s = j.at("schedule");
    r.schedule.achieved_cycles_per_tank = internal::map_from_json(s.at("achieved_cycles_per_tank"));
    r.schedule.busy_minutes_per_resource =
        internal::map_from_json(s.at("busy_minutes_per_resource"));
    r.schedule.utilization_per_resource =
        internal::map_from_json(s.at("utilization_per_resource"));
    r.schedule.idle_minutes_per_furnace =
        internal::map_from_json(s.at("idle_minutes_per_furnace"));
    for (const auto& c : s.at("conflicts")) {
      r.schedule.conflicts.push_back({internal::conflict_from_string(c.at("code").get<std::string>()),
                                      c.at("message").get<std::string>()});
    }

    if (j.contains("cross_check")) {
      Verdict v;
      v.pass = j.at("cross_check").at("pass").get<bool>();
      for (const auto& c : j.at("cross_check").at("checks")) {
        v.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                            c.at("detail").get<std::string>()});
      }
      r.verdict = std::move(v);
    }

    if (j.contains("increment")) {
      const auto& i = j.at("increment");
      IncrementReport inc;
      inc.baseline_daily_cycles = i.at("baseline_daily_cycles").get<double>();
      inc.optimized_daily_cycles = i.at("optimized_daily_cycles").get<double>();
      inc.revenue_per_cycle_usd = i.at("revenue_per_cycle_usd").get<double>();
      inc.additional_labor_cost_usd_per_day =
          i.at("additional_labor_cost_usd_per_day").get<double>();
      inc.increment_usd_per_day = i.at("increment_usd_per_day").get<double>();
      inc.baseline_net_usd_per_day = i.at("baseline_net_usd_per_day").get<double>();
      inc.optimized_net_usd_per_day = i.at("optimized_net_usd_per_day").get<double>();
      if (!i.at("growth_percent").is_null()) {
        inc.growth_percent = i.at("growth_percent").get<double>();
      }
      r.increment = inc;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ResultFormatError(std::string("malformed run result: ") + e.what());
  }
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string out = buf;
  // no "-0.00" for values that round to zero
  if (out[0] == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

namespace internal {

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Furnaces in scenario order, then tanks.
inline std::vector<std::string> gantt_rows(const Scenario& s) {
  std::vector<std::string> rows;
  for (const auto& f : s.furnaces) rows.push_back(f.id);
  for (const auto& t : s.tanks) rows.push_back(t.id);
  return rows;
}

}  // namespace internal

inline void print_plan(std::ostream& os, const Scenario& s, const RunResult& r) {
  os << "Scenario: " << r.scenario_name << " (" << to_string(r.mode) << ")\n";
  os << "Cycle plan (cycles/day):\n";
  for (std::size_t i = 0; i < r.plan.cycles.size(); ++i) {
    os << "  " << internal::pad(s.furnaces[i].id, 12) << fixed(r.plan.cycles[i], 4) << "\n";
  }
  os << "Effective tank cycles (cycles/day):\n";
  for (const auto& [id, c] : r.breakdown.effective_cycles_per_tank) {
    os << "  " << internal::pad(id, 12) << fixed(c, 4) << "\n";
  }
  os << "Total tank cycles: " << fixed(r.breakdown.total_effective_cycles(), 4) << "\n";
  os << "Gross revenue (USD/day): " << fixed(r.breakdown.gross_revenue_usd, 2) << "\n";
  for (const auto& [id, c] : r.breakdown.idle_cost_usd_per_furnace) {
    os << "Idle cost " << id << " (USD/day): " << fixed(c, 2) << "\n";
  }
  os << "Objective (USD/day): " << fixed(r.breakdown.objective_usd, 2) << "\n";
  os << "Binding constraints:";
  if (r.breakdown.binding_constraints.empty()) os << " none";
  for (const auto& b : r.breakdown.binding_constraints) os << " " << b;
  os << "\n";
}

inline void print_schedule(std::ostream& os, const RunResult& r) {
  os << "Simulated day:\n";
  for (const auto& [id, c] : r.schedule.achieved_cycles_per_tank) {
    os << "  achieved cycles " << internal::pad(id, 12) << fixed(c, 4) << "\n";
  }
  for (const auto& [id, u] : r.schedule.utilization_per_resource) {
    os << "  utilization     " << internal::pad(id, 12) << fixed(100.0 * u, 2) << "%\n";
  }
  for (const auto& [id, m] : r.schedule.idle_minutes_per_furnace) {
    os << "  idle minutes    " << internal::pad(id, 12) << fixed(m, 2) << "\n";
  }
  os << "Conflicts: " << r.schedule.conflicts.size() << "\n";
  for (const auto& c : r.schedule.conflicts) {
    os << "  " << to_string(c.code) << ": " << c.message << "\n";
  }
  if (r.verdict) {
    os << "Cross-check: " << (r.verdict->pass ? "PASS" : "FAIL") << "\n";
    for (const auto& c : r.verdict->checks) {
      os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
    }
  }
}

inline void print_increment(std::ostream& os, const IncrementReport& inc) {
  os << "Daily cycles before:           " << fixed(inc.baseline_daily_cycles, 4) << "\n";
  os << "Daily cycles after:            " << fixed(inc.optimized_daily_cycles, 4) << "\n";
  os << "Revenue per cycle (USD):       " << fixed(inc.revenue_per_cycle_usd, 2) << "\n";
  os << "Additional labor (USD/day):    " << fixed(inc.additional_labor_cost_usd_per_day, 2)
     << "\n";
  os << "Increment (USD/day):           " << fixed(inc.increment_usd_per_day, 2) << "\n";
  os << "Net before (USD/day):          " << fixed(inc.baseline_net_usd_per_day, 2) << "\n";
  os << "Net after (USD/day):           " << fixed(inc.optimized_net_usd_per_day, 2) << "\n";
  os << "Growth (%):                    "
     << (inc.growth_percent ? fixed(*inc.growth_percent, 2) : std::string("undefined"))
     << "\n";
}

// One row per resource, one rectangle per MELT or CAST, widths proportional
// to minutes. Pours are drawn as vertical ticks on the furnace row.
inline std::string render_gantt_svg(const Scenario& s, const Timeline& tl) {
  constexpr double kLabel = 120.0;
  constexpr double kPlot = 960.0;
  constexpr double kRow = 32.0;
  constexpr double kBar = 20.0;
  constexpr double kTop = 30.0;
  const std::vector<std::string> rows = internal::gantt_rows(s);
  const double scale = tl.horizon_min > 0.0 ? kPlot / tl.horizon_min : 0.0;
  const double width = kLabel + kPlot + 20.0;
  const double height = kTop + kRow * static_cast<double>(rows.size()) + 30.0;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width, 0)
     << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << " "
     << fixed(height, 0) << "\">\n";
  os << "<title>" << internal::xml_escape(s.name) << " (" << to_string(tl.mode) << ", "
     << fixed(tl.horizon_min, 1) << " min)</title>\n";
  os << "<style>.melt{fill:#d9534f}.cast{fill:#337ab7}.pour{stroke:#222;stroke-width:2}"
        "text{font-family:monospace;font-size:12px}</style>\n";

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double y = kTop + kRow * static_cast<double>(r);
    os << "<g class=\"row\" id=\"row-" << internal::xml_escape(rows[r]) << "\">\n";
    os << "<text x=\"4\" y=\"" << fixed(y + kBar - 5.0, 2) << "\">"
       << internal::xml_escape(rows[r]) << "</text>\n";
    for (const auto& e : tl.events) {
      if (e.resource != rows[r]) continue;
      const double x = kLabel + e.start_min * scale;
      if (e.kind == EventKind::kPour) {
        os << "<line class=\"pour\" x1=\"" << fixed(x, 3) << "\" y1=\"" << fixed(y, 2)
           << "\" x2=\"" << fixed(x, 3) << "\" y2=\"" << fixed(y + kBar, 2) << "\"/>\n";
        continue;
      }
      os << "<rect class=\"" << (e.kind == EventKind::kMelt ? "melt" : "cast") << "\" x=\""
         << fixed(x, 3) << "\" y=\"" << fixed(y, 2) << "\" width=\""
         << fixed((e.end_min - e.start_min) * scale, 3) << "\" height=\"" << fixed(kBar, 2)
         << "\"><title>" << to_string(e.kind) << " #" << e.cycle_index << " "
         << fixed(e.start_min, 2) << "-" << fixed(e.end_min, 2) << "</title></rect>\n";
    }
    os << "</g>\n";
  }
  const double axis_y = kTop + kRow * static_cast<double>(rows.size()) + 15.0;
  for (int tick = 0; tick <= 4; ++tick) {
    const double minute = tl.horizon_min * tick / 4.0;
    os << "<text x=\"" << fixed(kLabel + minute * scale, 3) << "\" y=\"" << fixed(axis_y, 2)
       << "\">" << fixed(minute, 0) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Fixed-width chart: M = melting, C = casting, | = pour, . = idle.
inline std::string render_gantt_text(const Scenario& s, const Timeline& tl, int columns = 96) {
  std::ostringstream os;
  const std::vector<std::string> rows = internal::gantt_rows(s);
  std::size_t label = 4;
  for (const auto& r : rows) label = std::max(label, r.size() + 1);
  const double per_col = tl.horizon_min > 0.0 ? tl.horizon_min / columns : 1.0;

  for (const auto& id : rows) {
    std::string line(static_cast<std::size_t>(columns), '.');
    for (const auto& e : tl.events) {
      if (e.resource != id || e.kind == EventKind::kPour) continue;
      const char mark = e.kind == EventKind::kMelt ? 'M' : 'C';
      for (int c = 0; c < columns; ++c) {
        const double mid = (c + 0.5) * per_col;
        if (mid >= e.start_min && mid < e.end_min) line[static_cast<std::size_t>(c)] = mark;
      }
    }
    for (const auto& e : tl.events) {
      if (e.resource != id || e.kind != EventKind::kPour) continue;
      int c = static_cast<int>(e.start_min / per_col);
      c = std::clamp(c, 0, columns - 1);
      line[static_cast<std::size_t>(c)] = '|';
    }
    os << internal::pad(id, label) << line << "\n";
  }
  os << internal::pad("", label) << "0" << std::string(static_cast<std::size_t>(columns - 1), ' ')
     << fixed(tl.horizon_min, 0) << " min\n";
  return os.str();
}

}  // namespace linebal

#endif  // LINEBAL_REPORT_HPP_
