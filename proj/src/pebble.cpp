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

#include "regevlab/pebble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace regevlab {

namespace {

struct LevelOp {
  PebbleKind kind;
  int level;
};

// Lowest-free-index register assignment; returns peak usage via out-param.
std::vector<PebbleOp> assign_registers(const std::vector<LevelOp>& level_ops, int* peak) {
  std::set<int> free_regs;
  std::map<int, int> level_reg;
  int next_fresh = 0;
  std::vector<PebbleOp> ops;
  ops.reserve(level_ops.size());
  *peak = 0;
  for (const LevelOp& op : level_ops) {
    if (op.kind == PebbleKind::Place) {
      int reg;
      if (!free_regs.empty()) {
        reg = *free_regs.begin();
        free_regs.erase(free_regs.begin());
      } else {
        reg = next_fresh++;
      }
      level_reg[op.level] = reg;
      *peak = std::max<int>(*peak, static_cast<int>(level_reg.size()));
      ops.push_back({PebbleKind::Place, op.level, reg});
    } else {
      auto it = level_reg.find(op.level);
      if (it == level_reg.end()) {
        throw std::logic_error("assign_registers: remove of unpebbled level");
      }
      free_regs.insert(it->second);
      ops.push_back({PebbleKind::Remove, op.level, it->second});
      level_reg.erase(it);
    }
  }
  return ops;
}

PebbleSchedule finish(int m, std::vector<LevelOp> level_ops, std::string tag) {
  PebbleSchedule schedule;
  schedule.m = m;
  schedule.strategy_tag = std::move(tag);
  schedule.ops = assign_registers(level_ops, &schedule.num_registers);
  return schedule;
}

void append_shifted(std::vector<LevelOp>& out, const std::vector<LevelOp>& block, int shift) {
  for (const LevelOp& op : block) out.push_back({op.kind, op.level + shift});
}

void append_reversed(std::vector<LevelOp>& out, const std::vector<LevelOp>& block, int shift) {
  for (auto it = block.rbegin(); it != block.rend(); ++it) {
    out.push_back({it->kind == PebbleKind::Place ? PebbleKind::Remove : PebbleKind::Place,
                   it->level + shift});
  }
}

// k chunks per recursion level; chunk size is the largest power of k below
// m+1, so the last chunk may be short. Ends with a single pebble at the top
// level, everything else uncomputed.
std::vector<LevelOp> kary_level_ops(int m, int k) {
  if (m == 0) return {{PebbleKind::Place, 0}};
  std::int64_t chunk = 1;
  while (chunk * k < m + 1) chunk *= k;
  const int levels = m + 1;
  std::vector<std::vector<LevelOp>> chunks;
  std::vector<int> shifts;
  for (std::int64_t lo = 0; lo < levels; lo += chunk) {
    const std::int64_t hi = std::min<std::int64_t>(lo + chunk, levels) - 1;
    chunks.push_back(kary_level_ops(static_cast<int>(hi - lo), k));
    shifts.push_back(static_cast<int>(lo));
  }
  std::vector<LevelOp> out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    append_shifted(out, chunks[i], shifts[i]);
  }
  for (std::size_t i = chunks.size() - 1; i-- > 0;) {
    append_reversed(out, chunks[i], shifts[i]);
  }
  return out;
}

}  // namespace

ScheduleCost validate(const PebbleSchedule& schedule) {
  std::map<int, int> level_reg;  // level -> register
  std::set<int> busy_regs;
  ScheduleCost cost;
  for (int idx = 0; idx < static_cast<int>(schedule.ops.size()); ++idx) {
    const PebbleOp& op = schedule.ops[idx];
    if (op.level < 0 || op.level > schedule.m) {
      throw IllegalOpError("level out of range at op " + std::to_string(idx), idx);
    }
    if (op.reg < 0 || op.reg >= schedule.num_registers) {
      throw IllegalOpError("register out of range at op " + std::to_string(idx), idx);
    }
    const bool supported = op.level == 0 || level_reg.count(op.level - 1) > 0;
    if (op.kind == PebbleKind::Place) {
      if (level_reg.count(op.level)) {
        throw IllegalOpError("level already pebbled at op " + std::to_string(idx), idx);
      }
      if (busy_regs.count(op.reg)) {
        throw IllegalOpError("register busy at op " + std::to_string(idx), idx);
      }
      if (!supported) {
        throw IllegalOpError("place without level below at op " + std::to_string(idx), idx);
      }
      level_reg[op.level] = op.reg;
      busy_regs.insert(op.reg);
    } else {
      auto it = level_reg.find(op.level);
      if (it == level_reg.end() || it->second != op.reg) {
        throw IllegalOpError("remove of absent pebble at op " + std::to_string(idx), idx);
      }
      if (!supported) {
        throw IllegalOpError("remove without level below at op " + std::to_string(idx), idx);
      }
      busy_regs.erase(op.reg);
      level_reg.erase(it);
    }
    cost.registers = std::max<int>(cost.registers, static_cast<int>(level_reg.size()));
    cost.controlled_u += 1;
    if (op.level >= 1) cost.squarings += 1;
  }
  if (level_reg.size() != 1 || !level_reg.count(schedule.m)) {
    throw WrongTerminalError("schedule does not end with a single pebble at level m");
  }
  cost.large_mults = cost.squarings;
  return cost;
}

PebbleSchedule schedule_direct(int m) {
  if (m < 0) throw std::invalid_argument("schedule_direct: m must be >= 0");
  std::vector<LevelOp> ops;
  for (int l = 0; l <= m; ++l) ops.push_back({PebbleKind::Place, l});
  for (int l = m - 1; l >= 0; --l) ops.push_back({PebbleKind::Remove, l});
  return finish(m, std::move(ops), "direct");
}

PebbleSchedule schedule_simple(int m, int k) {
  if (m < 1) throw std::invalid_argument("schedule_simple: m must be >= 1");
  if (k < 1 || k > m + 1) throw InvalidKError("schedule_simple: k must be in [1, m+1]");
  const int q = (m + k) / k;  // ceil((m+1)/k)
  std::vector<LevelOp> ops;
  for (int t = 0; t < q; ++t) {
    const int lo = t * k;
    const int hi = std::min((t + 1) * k, m + 1) - 1;
    for (int l = lo; l <= hi; ++l) ops.push_back({PebbleKind::Place, l});
    for (int l = hi - 1; l >= lo; --l) ops.push_back({PebbleKind::Remove, l});
  }
  // Sweep: uncompute retained block tops, most recent first. Each needs its
  // block interior recomputed and reversed.
  for (int t = q - 2; t >= 0; --t) {
    const int lo = t * k;
    const int hi = (t + 1) * k - 1;
    for (int l = lo; l < hi; ++l) ops.push_back({PebbleKind::Place, l});
    ops.push_back({PebbleKind::Remove, hi});
    for (int l = hi - 1; l >= lo; --l) ops.push_back({PebbleKind::Remove, l});
  }
  return finish(m, std::move(ops), "simple(k=" + std::to_string(k) + ")");
}

PebbleSchedule schedule_kary(int m, int k) {
  if (m < 0) throw std::invalid_argument("schedule_kary: m must be >= 0");
  if (k < 2) throw InvalidKError("schedule_kary: k must be >= 2");
  return finish(m, kary_level_ops(m, k), "kary(k=" + std::to_string(k) + ")");
}

PebbleSchedule schedule_binary(int m) {
  if (m < 0) throw std::invalid_argument("schedule_binary: m must be >= 0");
  PebbleSchedule schedule = finish(m, kary_level_ops(m, 2), "binary");
  return schedule;
}

PebbleSchedule schedule_variable(int m, int ell) {
  if (m < 0) throw std::invalid_argument("schedule_variable: m must be >= 0");
  if (ell < 1) throw std::invalid_argument("schedule_variable: ell must be >= 1");
  int k = static_cast<int>(std::lround(std::pow(static_cast<double>(m + 1), 1.0 / ell)));
  k = std::max(k, 2);
  PebbleSchedule schedule = finish(m, kary_level_ops(m, k),
                                   "variable(ell=" + std::to_string(ell) +
                                       ",k=" + std::to_string(k) + ")");
  return schedule;
}

std::optional<PebbleSchedule> optimal_search(int m, int registers, long long op_budget) {
  if (m < 1 || m > 16 || registers < 1 || registers > 5) {
    throw std::invalid_argument("optimal_search: guarded to m <= 16, registers <= 5");
  }
  const std::uint32_t target = 1u << m;
  const std::uint32_t num_states = 1u << (m + 1);
  std::vector<std::int32_t> prev_state(num_states, -1);
  std::vector<std::int16_t> prev_level(num_states, -1);
  std::vector<bool> seen(num_states, false);

  std::deque<std::uint32_t> frontier{0};
  seen[0] = true;
  long long expansions = 0;
  while (!frontier.empty() && !seen[target]) {
    std::uint32_t s = frontier.front();
    frontier.pop_front();
    const int pebbles = std::popcount(s);
    for (int level = 0; level <= m; ++level) {
      const bool supported = level == 0 || ((s >> (level - 1)) & 1u);
      if (!supported) continue;
      std::uint32_t next;
      if ((s >> level) & 1u) {
        next = s & ~(1u << level);
      } else {
        if (pebbles >= registers) continue;
        next = s | (1u << level);
      }
      if (++expansions > op_budget) {
        throw BudgetExceededError("optimal_search: op budget exceeded");
      }
      if (!seen[next]) {
        seen[next] = true;
        prev_state[next] = static_cast<std::int32_t>(s);
        prev_level[next] = static_cast<std::int16_t>(level);
        frontier.push_back(next);
      }
    }
  }
  if (!seen[target]) return std::nullopt;

  std::vector<LevelOp> path;
  for (std::uint32_t s = target; s != 0;) {
    const std::uint32_t prev = static_cast<std::uint32_t>(prev_state[s]);
    const int level = prev_level[s];
    const bool placed = ((s >> level) & 1u) != 0;
    path.push_back({placed ? PebbleKind::Place : PebbleKind::Remove, level});
    s = prev;
  }
  std::reverse(path.begin(), path.end());
  return finish(m, std::move(path), "search(r=" + std::to_string(registers) + ")");
}

int min_registers(int m) {
  if (m < 1) throw std::invalid_argument("min_registers: m must be >= 1");
  int bits = 0;
  while ((std::int64_t{1} << bits) < m + 1) ++bits;
  return bits + 1;
}

std::string schedule_to_text(const PebbleSchedule& schedule) {
  std::ostringstream out;
  out << "m=" << schedule.m << " regs=" << schedule.num_registers
      << " strategy=" << schedule.strategy_tag << "\n";
  for (const PebbleOp& op : schedule.ops) {
    out << (op.kind == PebbleKind::Place ? 'P' : 'R') << ' ' << op.level << ' '
        << op.reg << "\n";
  }
  return out.str();
}

PebbleSchedule schedule_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::invalid_argument("schedule_from_text: empty input");
  }
  PebbleSchedule schedule;
  if (std::sscanf(header.c_str(), "m=%d regs=%d", &schedule.m, &schedule.num_registers) != 2) {
    throw std::invalid_argument("schedule_from_text: bad header: " + header);
  }
  auto tag_pos = header.find("strategy=");
  if (tag_pos == std::string::npos) {
    throw std::invalid_argument("schedule_from_text: header missing strategy");
  }
  schedule.strategy_tag = header.substr(tag_pos + 9);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    char kind = 0;
    int level = 0, reg = 0;
    if (std::sscanf(line.c_str(), "%c %d %d", &kind, &level, &reg) != 3 ||
        (kind != 'P' && kind != 'R')) {
      throw std::invalid_argument("schedule_from_text: bad op line: " + line);
    }
    schedule.ops.push_back(
        {kind == 'P' ? PebbleKind::Place : PebbleKind::Remove, level, reg});
  }
  return schedule;
}

}  // namespace regevlab
