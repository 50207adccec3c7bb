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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace regevlab {

// Reversible pebble game over the squaring chain. Levels run 0..m; level 0 is
// the freshly prepared product register (no squaring), level l >= 1 holds the
// l-th squaring. Placing or removing a pebble at level l requires a pebble at
// l-1 (nothing for l = 0), because the out-of-place squaring and its inverse
// both consume the previous value. A schedule is complete when exactly one
// pebble remains, at level m.

enum class PebbleKind { Place, Remove };

struct PebbleOp {
  PebbleKind kind;
  int level = 0;
  int reg = 0;
};

struct PebbleSchedule {
  int m = 0;
  int num_registers = 0;
  std::vector<PebbleOp> ops;
  std::string strategy_tag;
};

/// Cost of a validated schedule. Every op counts as one controlled-U; ops at
/// level >= 1 additionally count as one squaring. Large-integer
/// multiplications equal the squaring count.
struct ScheduleCost {
  int registers = 0;          ///< peak simultaneous pebbles
  long long squarings = 0;
  long long controlled_u = 0;
  long long large_mults = 0;  ///< == squarings
};

struct IllegalOpError : std::runtime_error {
  int op_index;
  IllegalOpError(const std::string& what, int index)
      : std::runtime_error(what), op_index(index) {}
};

struct WrongTerminalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidKError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Replays the game and returns the measured cost. Throws IllegalOpError on a
/// rule violation (with the op index) and WrongTerminalError unless the final
/// configuration is a single pebble at level m.
ScheduleCost validate(const PebbleSchedule& schedule);

/// Place 0..m, then remove m-1..0. m+1 registers, 2m-1 squarings for m >= 1.
PebbleSchedule schedule_direct(int m);

/// Block strategy: compute k levels, immediately reverse all but the block
/// top, repeat; a final sweep recomputes each retained block interior to
/// uncompute its top. ceil((m+1)/k)+k-1 registers.
PebbleSchedule schedule_simple(int m, int k);

/// Divide-and-conquer pebbling meeting the register lower bound
/// ceil(log2(m+1))+1 for every m. Chains that are not a power-of-two length
/// split as m = m1 + m2 + 1 with m1 = 2^ceil(log2((m+1)/2)) - 1.
PebbleSchedule schedule_binary(int m);

/// k-ary generalization: k chunks per recursion level, uncomputing the first
/// k-1 chunk tops after the last chunk completes.
PebbleSchedule schedule_kary(int m, int k);

/// Fixed recursion depth ell with arity k = round((m+1)^(1/ell)), clamped to
/// at least 2.
PebbleSchedule schedule_variable(int m, int ell);

/// Exhaustive breadth-first search over game configurations with at most
/// `registers` pebbles. Returns a schedule reaching {m} if one exists, empty
/// optional if provably none. Guarded to registers <= 5 and m <= 16; throws
/// BudgetExceededError when the search would exceed op_budget expansions.
std::optional<PebbleSchedule> optimal_search(int m, int registers,
                                             long long op_budget = 1ll << 22);

/// Register lower bound ceil(log2(m+1)) + 1.
int min_registers(int m);

/// Line format: header `m=<m> regs=<r> strategy=<tag>`, then one op per line,
/// `P <level> <reg>` or `R <level> <reg>`. Round trips bit-exactly.
std::string schedule_to_text(const PebbleSchedule& schedule);
PebbleSchedule schedule_from_text(const std::string& text);

}  // namespace regevlab
