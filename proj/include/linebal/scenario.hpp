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

// Plant description for a melting/casting line: furnaces, the tanks they pour
// into, and the labor plan. Scenarios are plain values; validation reports
// violations as data and never throws.

#ifndef LINEBAL_SCENARIO_HPP_
#define LINEBAL_SCENARIO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace linebal {

// At most this many furnaces may pour into one tank (pipe length and flow
// rate limit of the pouring switch).
inline constexpr int kMaxFurnacesPerTank = 2;

struct Furnace {
  std::string id;
  double cycle_time_min = 0.0;
  double daily_capacity_min = 0.0;
  double output_efficiency = 1.0;
  double idle_cost_rate_usd_per_min = 0.0;
  std::string tank_id;

  bool operator==(const Furnace&) const = default;
};

struct TankCastingLine {
  std::string id;
  double cycle_time_min = 0.0;
  double daily_capacity_min = 0.0;
  double casting_efficiency = 1.0;
  int rods_per_cycle = 0;
  double margin_per_rod_usd = 0.0;

  // Output value of one full-efficiency casting cycle.
  double revenue_per_cycle_usd() const {
    return rods_per_cycle * margin_per_rod_usd;
  }

  bool operator==(const TankCastingLine&) const = default;
};

struct LaborPlan {
  int workers_total = 0;
  int shifts_per_day = 1;
  double wage_usd_per_worker_per_day = 0.0;

  double daily_labor_cost() const {
    return workers_total * wage_usd_per_worker_per_day;
  }

  bool operator==(const LaborPlan&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<Furnace> furnaces;
  std::vector<TankCastingLine> tanks;
  LaborPlan labor;

  const TankCastingLine* find_tank(std::string_view id) const {
    for (const auto& t : tanks) {
      if (t.id == id) return &t;
    }
    return nullptr;
  }
  const Furnace* find_furnace(std::string_view id) const {
    for (const auto& f : furnaces) {
      if (f.id == id) return &f;
    }
    return nullptr;
  }
  // Longest daily capacity over all resources.
  double horizon_min() const {
    double h = 0.0;
    for (const auto& f : furnaces) h = std::max(h, f.daily_capacity_min);
    for (const auto& t : tanks) h = std::max(h, t.daily_capacity_min);
    return h;
  }

  bool operator==(const Scenario&) const = default;
};

enum class ViolationCode {
  kNoFurnaces,
  kNoTanks,
  kEmptyId,
  kDuplicateId,
  kNonFinite,
  kNonpositiveCycleTime,
  kNonpositiveCapacity,
  kCycleExceedsCapacity,
  kEfficiencyOutOfRange,
  kNegativeIdleRate,
  kNonpositiveRods,
  kNegativeMargin,
  kInvalidLabor,
  kOrphanFurnace,
  kRatioExceeded,
  kTankUnfed,
};

inline const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kNoFurnaces: return "NO_FURNACES";
    case ViolationCode::kNoTanks: return "NO_TANKS";
    case ViolationCode::kEmptyId: return "EMPTY_ID";
    case ViolationCode::kDuplicateId: return "DUPLICATE_ID";
    case ViolationCode::kNonFinite: return "NON_FINITE";
    case ViolationCode::kNonpositiveCycleTime: return "NONPOSITIVE_CYCLE_TIME";
    case ViolationCode::kNonpositiveCapacity: return "NONPOSITIVE_CAPACITY";
    case ViolationCode::kCycleExceedsCapacity: return "CYCLE_EXCEEDS_CAPACITY";
    case ViolationCode::kEfficiencyOutOfRange: return "EFFICIENCY_OUT_OF_RANGE";
    case ViolationCode::kNegativeIdleRate: return "NEGATIVE_IDLE_RATE";
    case ViolationCode::kNonpositiveRods: return "NONPOSITIVE_RODS";
    case ViolationCode::kNegativeMargin: return "NEGATIVE_MARGIN";
    case ViolationCode::kInvalidLabor: return "INVALID_LABOR";
    case ViolationCode::kOrphanFurnace: return "ORPHAN_FURNACE";
    case ViolationCode::kRatioExceeded: return "RATIO_EXCEEDED";
    case ViolationCode::kTankUnfed: return "TANK_UNFED";
  }
  return "UNKNOWN";
}

struct Violation {
  ViolationCode code;
  std::string message;
};

inline bool has_violation(const std::vector<Violation>& vs, ViolationCode code) {
  for (const auto& v : vs) {
    if (v.code == code) return true;
  }
  return false;
}

// Returns every violated invariant; empty iff the scenario is valid.
inline std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&out](ViolationCode c, std::string msg) {
    out.push_back({c, std::move(msg)});
  };

  if (s.furnaces.empty()) add(ViolationCode::kNoFurnaces, "scenario has no furnaces");
  if (s.tanks.empty()) add(ViolationCode::kNoTanks, "scenario has no tanks");

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id, const char* what) {
    if (id.empty()) add(ViolationCode::kEmptyId, std::string(what) + " with empty id");
    if (!ids.insert(id).second) {
      add(ViolationCode::kDuplicateId, "duplicate id '" + id + "'");
    }
  };

  for (const auto& f : s.furnaces) {
    check_id(f.id, "furnace");
    const std::string who = "furnace '" + f.id + "'";
    if (!std::isfinite(f.cycle_time_min) || !std::isfinite(f.daily_capacity_min) ||
        !std::isfinite(f.output_efficiency) ||
        !std::isfinite(f.idle_cost_rate_usd_per_min)) {
      add(ViolationCode::kNonFinite, who + " has a non-finite field");
      continue;
    }
    if (f.cycle_time_min <= 0.0) {
      add(ViolationCode::kNonpositiveCycleTime, who + ": cycle_time_min must be > 0");
    }
    if (f.daily_capacity_min <= 0.0) {
      add(ViolationCode::kNonpositiveCapacity, who + ": daily_capacity_min must be > 0");
    }
    if (f.cycle_time_min > f.daily_capacity_min) {
      add(ViolationCode::kCycleExceedsCapacity,
          who + ": cycle_time_min exceeds daily_capacity_min");
    }
    if (!(f.output_efficiency > 0.0 && f.output_efficiency <= 1.0)) {
      add(ViolationCode::kEfficiencyOutOfRange,
          who + ": output_efficiency must lie in (0, 1]");
    }
    if (f.idle_cost_rate_usd_per_min < 0.0) {
      add(ViolationCode::kNegativeIdleRate,
          who + ": idle_cost_rate_usd_per_min must be >= 0");
    }
  }

  for (const auto& t : s.tanks) {
    check_id(t.id, "tank");
    const std::string who = "tank '" + t.id + "'";
    if (!std::isfinite(t.cycle_time_min) || !std::isfinite(t.daily_capacity_min) ||
        !std::isfinite(t.casting_efficiency) || !std::isfinite(t.margin_per_rod_usd)) {
      add(ViolationCode::kNonFinite, who + " has a non-finite field");
      continue;
    }
    if (t.cycle_time_min <= 0.0) {
      add(ViolationCode::kNonpositiveCycleTime, who + ": cycle_time_min must be > 0");
    }
    if (t.daily_capacity_min <= 0.0) {
      add(ViolationCode::kNonpositiveCapacity, who + ": daily_capacity_min must be > 0");
    }
    if (!(t.casting_efficiency > 0.0 && t.casting_efficiency <= 1.0)) {
      add(ViolationCode::kEfficiencyOutOfRange,
          who + ": casting_efficiency must lie in (0, 1]");
    }
    if (t.rods_per_cycle <= 0) {
      add(ViolationCode::kNonpositiveRods, who + ": rods_per_cycle must be > 0");
    }
    if (t.margin_per_rod_usd < 0.0) {
      add(ViolationCode::kNegativeMargin, who + ": margin_per_rod_usd must be >= 0");
    }
  }

  const LaborPlan& l = s.labor;
  if (l.workers_total < 0 || l.shifts_per_day < 1 ||
      !std::isfinite(l.wage_usd_per_worker_per_day) ||
      l.wage_usd_per_worker_per_day < 0.0) {
    add(ViolationCode::kInvalidLabor,
        "labor: workers_total >= 0, shifts_per_day >= 1 and wage >= 0 required");
  }

  std::map<std::string, int> fed;
  for (const auto& t : s.tanks) fed[t.id] = 0;
  for (const auto& f : s.furnaces) {
    auto it = fed.find(f.tank_id);
    if (it == fed.end()) {
      add(ViolationCode::kOrphanFurnace,
          "furnace '" + f.id + "' pours into unknown tank '" + f.tank_id + "'");
    } else {
      ++it->second;
    }
  }
  for (const auto& t : s.tanks) {
    const int count = fed[t.id];
    if (count > kMaxFurnacesPerTank) {
      add(ViolationCode::kRatioExceeded,
          "tank '" + t.id + "' is fed by " + std::to_string(count) +
              " furnaces (max " + std::to_string(kMaxFurnacesPerTank) + ")");
    } else if (count == 0) {
      add(ViolationCode::kTankUnfed, "tank '" + t.id + "' is fed by no furnace");
    }
  }
  return out;
}

// Malformed document (not JSON). Message carries line/column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed JSON that does not match the scenario schema. Message names
// the offending field path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace internal {

using nlohmann::json;

inline void expect_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  for (const char* k : keys) {
    if (!obj.contains(k)) throw SchemaError(path + "." + k + ": missing field");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw SchemaError(path + "." + it.key() + ": unknown field");
  }
}

inline double get_number(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline int get_integer(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw SchemaError(path + "." + key + ": expected an integer");
  }
  const auto wide = v.get<long long>();
  if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
    throw SchemaError(path + "." + key + ": integer out of range");
  }
  return static_cast<int>(wide);
}

inline std::string get_string(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw SchemaError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace internal

// Parses a scenario document. Does not validate; run validate() separately.
inline Scenario load_scenario(std::string_view document) {
  using internal::json;
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario parse error: ") + e.what());
  }

  internal::expect_keys(root, "$", {"name", "furnaces", "tanks", "labor"});
  Scenario s;
  s.name = internal::get_string(root, "$", "name");

  const json& furnaces = root.at("furnaces");
  if (!furnaces.is_array()) throw SchemaError("$.furnaces: expected an array");
  for (std::size_t i = 0; i < furnaces.size(); ++i) {
    const std::string path = "$.furnaces[" + std::to_string(i) + "]";
    const json& f = furnaces[i];
    internal::expect_keys(f, path,
                          {"id", "cycle_time_min", "daily_capacity_min",
                           "output_efficiency", "idle_cost_rate_usd_per_min",
                           "tank_id"});
    Furnace out;
    out.id = internal::get_string(f, path, "id");
    out.cycle_time_min = internal::get_number(f, path, "cycle_time_min");
    out.daily_capacity_min = internal::get_number(f, path, "daily_capacity_min");
    out.output_efficiency = internal::get_number(f, path, "output_efficiency");
    out.idle_cost_rate_usd_per_min =
        internal::get_number(f, path, "idle_cost_rate_usd_per_min");
    out.tank_id = internal::get_string(f, path, "tank_id");
    s.furnaces.push_back(std::move(out));
  }

  const json& tanks = root.at("tanks");
  if (!tanks.is_array()) throw SchemaError("$.tanks: expected an array");
  for (std::size_t i = 0; i < tanks.size(); ++i) {
    const std::string path = "$.tanks[" + std::to_string(i) + "]";
    const json& t = tanks[i];
    internal::expect_keys(t, path,
                          {"id", "cycle_time_min", "daily_capacity_min",
                           "casting_efficiency", "rods_per_cycle",
                           "margin_per_rod_usd"});
    TankCastingLine out;
    out.id = internal::get_string(t, path, "id");
    out.cycle_time_min = internal::get_number(t, path, "cycle_time_min");
    out.daily_capacity_min = internal::get_number(t, path, "daily_capacity_min");
    out.casting_efficiency = internal::get_number(t, path, "casting_efficiency");
    out.rods_per_cycle = internal::get_integer(t, path, "rods_per_cycle");
    out.margin_per_rod_usd = internal::get_number(t, path, "margin_per_rod_usd");
    s.tanks.push_back(std::move(out));
  }

  const json& labor = root.at("labor");
  internal::expect_keys(labor, "$.labor",
                        {"workers_total", "shifts_per_day",
                         "wage_usd_per_worker_per_day"});
  s.labor.workers_total = internal::get_integer(labor, "$.labor", "workers_total");
  s.labor.shifts_per_day = internal::get_integer(labor, "$.labor", "shifts_per_day");
  s.labor.wage_usd_per_worker_per_day =
      internal::get_number(labor, "$.labor", "wage_usd_per_worker_per_day");
  return s;
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json root;
  root["name"] = s.name;
  root["furnaces"] = nlohmann::ordered_json::array();
  for (const auto& f : s.furnaces) {
    nlohmann::ordered_json j;
    j["id"] = f.id;
    j["cycle_time_min"] = f.cycle_time_min;
    j["daily_capacity_min"] = f.daily_capacity_min;
    j["output_efficiency"] = f.output_efficiency;
    j["idle_cost_rate_usd_per_min"] = f.idle_cost_rate_usd_per_min;
    j["tank_id"] = f.tank_id;
    root["furnaces"].push_back(std::move(j));
  }
  root["tanks"] = nlohmann::ordered_json::array();
  for (const auto& t : s.tanks) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["cycle_time_min"] = t.cycle_time_min;
    j["daily_capacity_min"] = t.daily_capacity_min;
    j["casting_efficiency"] = t.casting_efficiency;
    j["rods_per_cycle"] = t.rods_per_cycle;
    j["margin_per_rod_usd"] = t.margin_per_rod_usd;
    root["tanks"].push_back(std::move(j));
  }
  root["labor"]["workers_total"] = s.labor.workers_total;
  root["labor"]["shifts_per_day"] = s.labor.shifts_per_day;
  root["labor"]["wage_usd_per_worker_per_day"] = s.labor.wage_usd_per_worker_per_day;
  return root;
}

// Stable field order, two-space indent, trailing newline.
inline std::string save_scenario(const Scenario& s) {
  return scenario_to_json(s).dump(2) + "\n";
}

}  // namespace linebal

#endif  // LINEBAL_SCENARIO_HPP_
