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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regevlab/pebble.hpp"

namespace regevlab {

struct NotApplicableError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Base unit of the recursive strategy: x0 squarings done with n0 registers
/// in t0 operations.
struct RecursionBase {
  long long x0 = 1;
  int n0 = 1;
  long long t0 = 1;
};

struct CostPoint {
  int m = 0;
  std::string strategy;
  std::optional<int> k_or_ell;
  int registers = 0;
  long long mults = 0;
  bool bound = false;  ///< mults is an upper bound rather than a measured count
};

/// Registers of the simple strategy: ceil((m+1)/k) + k - 1.
long long s_simple(int m, int k);

/// Squaring operations of the simple strategy. Closed form
/// (2q-1)(2k-1) + 2((m+1)-kq) - 4 with q = ceil((m+1)/k); the constant term
/// is the number of level-0 ops, which drops to 2 in the degenerate single-
/// block (k = m+1) and unit-block (k = 1) schedules.
long long t_simple(int m, int k);

/// Registers of k-ary recursion: n0 + (k-1) * log_k((m+1)/x0). Requires the
/// log to be a positive integer (NotApplicableError otherwise).
long long s_rec(int m, int k, const RecursionBase& base = {});

/// Upper bound on k-ary recursion time: t0 * ((m+1)/x0)^(log_k(2k-1)),
/// exact integer (2k-1)^depth under the same applicability condition.
long long t_rec_bound(int m, int k, const RecursionBase& base = {});

/// m+1 registers, 2m-1 multiplications; the time-optimal reference point.
CostPoint direct_cost(int m);

/// Modular-multiplication count of the reference modular exponentiation for
/// an n-bit modulus: 2n.
long long shor_reference(int n);

/// Squaring-chain length for an n-bit instance at constant C:
/// round(C*sqrt(n)) - 1, floored at 1.
int regev_m(int n, double C);

struct StrategyChoice {
  std::string name;  ///< direct | simple | binary | kary | variable
  std::optional<int> k;
  std::optional<int> ell;
};

/// Builds the schedule a StrategyChoice names. Defaults: simple uses
/// k = floor(sqrt(m+1)), kary uses k = 2, variable uses ell = 2.
PebbleSchedule make_schedule(int m, const StrategyChoice& choice);

/// One CostPoint per (m, strategy), preferring measured validated-schedule
/// counts; falls back to the closed-form bound (flagged) when a schedule
/// would be unreasonably large to generate. With include_bounds set, an
/// applicable recursion bound that differs from the measured count is
/// emitted as an extra flagged row next to it.
std::vector<CostPoint> scaling_table(const std::vector<int>& m_values,
                                     const std::vector<StrategyChoice>& strategies,
                                     bool include_bounds = false);

/// CSV with header `m,strategy,param,registers,mults,is_bound`; the JSON
/// mirror carries the same rows as an array of objects.
std::string cost_table_to_csv(const std::vector<CostPoint>& rows);
std::string cost_table_to_json(const std::vector<CostPoint>& rows);

}  // namespace regevlab
