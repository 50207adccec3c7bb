// Copyright 2026 The regevlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regevlab/costmodel.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace regevlab {

namespace {

// log_k((m+1)/x0) when it is a positive integer, else -1.
int integral_log(int m, int k, long long x0) {
  const long long total = static_cast<long long>(m) + 1;
  if (x0 < 1 || total % x0 != 0) return -1;
  long long value = total / x0;
  int depth = 0;
  while (value > 1) {
    if (value % k != 0) return -1;
    value /= k;
    ++depth;
  }
  return depth >= 1 ? depth : -1;
}

long long controlled_u_simple(int m, int k) {
  const long long q = (static_cast<long long>(m) + k) / k;
  return (2 * q - 1) * (2 * k - 1) + 2 * ((m + 1) - static_cast<long long>(k) * q);
}

}  // namespace

long long s_simple(int m, int k) {
  if (m < 1 || k < 1 || k > m + 1) throw InvalidKError("s_simple: k must be in [1, m+1]");
  return (static_cast<long long>(m) + k) / k + k - 1;
}

long long t_simple(int m, int k) {
  if (m < 1 || k < 1 || k > m + 1) throw InvalidKError("t_simple: k must be in [1, m+1]");
  const long long q = (static_cast<long long>(m) + k) / k;
  const long long level0_ops = (q >= 2 && k >= 2) ? 4 : 2;
  return controlled_u_simple(m, k) - level0_ops;
}

long long s_rec(int m, int k, const RecursionBase& base) {
  if (k < 2) throw InvalidKError("s_rec: k must be >= 2");
  const int depth = integral_log(m, k, base.x0);
  if (depth < 0) {
    throw NotApplicableError("s_rec: log_k((m+1)/x0) is not a positive integer");
  }
  return base.n0 + static_cast<long long>(k - 1) * depth;
}

long long t_rec_bound(int m, int k, const RecursionBase& base) {
  if (k < 2) throw InvalidKError("t_rec_bound: k must be >= 2");
  const int depth = integral_log(m, k, base.x0);
  if (depth < 0) {
    throw NotApplicableError("t_rec_bound: log_k((m+1)/x0) is not a positive integer");
  }
  long long bound = base.t0;
  for (int i = 0; i < depth; ++i) bound *= 2 * k - 1;
  return bound;
}

CostPoint direct_cost(int m) {
  if (m < 1) throw std::invalid_argument("direct_cost: m must be >= 1");
  return {m, "direct", std::nullopt, m + 1, 2ll * m - 1, false};
}

long long shor_reference(int n) {
  if (n < 2) throw std::invalid_argument("shor_reference: n must be >= 2");
  return 2ll * n;
}

int regev_m(int n, double C) {
  if (C <= 0) throw std::invalid_argument("regev_m: C must be positive");
  const long long m = std::llround(C * std::sqrt(static_cast<double>(n))) - 1;
  return static_cast<int>(std::max<long long>(m, 1));
}

PebbleSchedule make_schedule(int m, const StrategyChoice& choice) {
  if (choice.name == "direct") return schedule_direct(m);
  if (choice.name == "simple") {
    const int k = choice.k.value_or(static_cast<int>(std::sqrt(static_cast<double>(m + 1))));
    return schedule_simple(m, k);
  }
  if (choice.name == "binary") return schedule_binary(m);
  if (choice.name == "kary") return schedule_kary(m, choice.k.value_or(2));
  if (choice.name == "variable") return schedule_variable(m, choice.ell.value_or(2));
  throw std::invalid_argument("make_schedule: unknown strategy " + choice.name);
}

std::vector<CostPoint> scaling_table(const std::vector<int>& m_values,
                                     const std::vector<StrategyChoice>& strategies,
                                     bool include_bounds) {
  std::vector<CostPoint> rows;
  for (int m : m_values) {
    for (const StrategyChoice& choice : strategies) {
      CostPoint point;
      point.m = m;
      point.strategy = choice.name;
      if (choice.k) point.k_or_ell = choice.k;
      if (choice.ell) point.k_or_ell = choice.ell;
      const bool recursive =
          choice.name == "kary" || choice.name == "binary" || choice.name == "variable";
      // Recursive schedules grow superlinearly in m; past the generation
      // threshold fall back to the closed-form space cost and time bound.
      bool generated = true;
      if (recursive) {
        const int k = choice.name == "binary" ? 2 : choice.k.value_or(2);
        const double depth = std::ceil(std::log(m + 1.0) / std::log(static_cast<double>(k)));
        generated = std::pow(2.0 * k - 1.0, depth) < 5e6;
      }
      if (generated) {
        PebbleSchedule schedule = make_schedule(m, choice);
        ScheduleCost cost = validate(schedule);
        if (!choice.k && !choice.ell && choice.name == "simple") {
          point.k_or_ell = static_cast<int>(std::sqrt(static_cast<double>(m + 1)));
        }
        point.registers = cost.registers;
        point.mults = cost.squarings;
        point.bound = false;
        rows.push_back(point);
        if (include_bounds && recursive) {
          const int k = choice.name == "binary" ? 2 : choice.k.value_or(2);
          try {
            CostPoint bound_row = point;
            bound_row.mults = t_rec_bound(m, k);
            bound_row.bound = true;
            if (bound_row.mults != point.mults) rows.push_back(std::move(bound_row));
          } catch (const NotApplicableError&) {
            // no integral recursion depth at this (m, k): nothing to record
          }
        }
      } else {
        const int k = choice.name == "binary" ? 2 : choice.k.value_or(2);
        point.registers = static_cast<int>(s_rec(m, k));
        point.mults = t_rec_bound(m, k);
        point.bound = true;
        rows.push_back(std::move(point));
      }
    }
  }
  return rows;
}

std::string cost_table_to_csv(const std::vector<CostPoint>& rows) {
  std::ostringstream out;
  out << "m,strategy,param,registers,mults,is_bound\n";
  for (const CostPoint& row : rows) {
    out << row.m << ',' << row.strategy << ',';
    if (row.k_or_ell) out << *row.k_or_ell;
    out << ',' << row.registers << ',' << row.mults << ','
        << (row.bound ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string cost_table_to_json(const std::vector<CostPoint>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CostPoint& row : rows) {
    nlohmann::json j = {
        {"m", row.m},
        {"strategy", row.strategy},
        {"param", nullptr},
        {"registers", row.registers},
        {"mults", row.mults},
        {"is_bound", row.bound},
    };
    if (row.k_or_ell) j["param"] = *row.k_or_ell;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace regevlab
