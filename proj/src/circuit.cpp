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

#include "regevlab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "regevlab/costmodel.hpp"
#include "regevlab/numtheory.hpp"

namespace regevlab {

namespace {

void check_qubits_distinct(const std::vector<int>& targets, const std::vector<int>& controls) {
  std::set<int> seen;
  for (int q : targets) {
    if (q < 0 || !seen.insert(q).second) {
      throw std::invalid_argument("gate: duplicate or negative qubit index");
    }
  }
  for (int q : controls) {
    if (q < 0 || !seen.insert(q).second) {
      throw std::invalid_argument("gate: duplicate or negative qubit index");
    }
  }
}

}  // namespace

Gate Gate::h(int q) {
  Gate g;
  g.kind = GateKind::H;
  g.targets = {q};
  return g;
}

Gate Gate::x(int q) {
  Gate g;
  g.kind = GateKind::X;
  g.targets = {q};
  return g;
}

Gate Gate::controlled_phase(double angle, int qa, int qb) {
  Gate g;
  g.kind = GateKind::ControlledPhase;
  g.targets = {qa, qb};
  g.angle = angle;
  check_qubits_distinct(g.targets, {});
  return g;
}

Gate Gate::swap(int qa, int qb) {
  Gate g;
  g.kind = GateKind::Swap;
  g.targets = {qa, qb};
  check_qubits_distinct(g.targets, {});
  return g;
}

Gate Gate::perm(std::vector<int> targets, std::vector<int> controls,
                std::vector<std::uint32_t> table) {
  Gate g;
  g.kind = GateKind::Perm;
  g.targets = std::move(targets);
  g.controls = std::move(controls);
  g.table = std::move(table);
  check_qubits_distinct(g.targets, g.controls);
  const std::size_t dim = std::size_t{1} << g.targets.size();
  if (g.table.size() != dim) {
    throw std::invalid_argument("perm gate: table size must be 2^targets");
  }
  std::vector<bool> hit(dim, false);
  for (std::uint32_t v : g.table) {
    if (v >= dim || hit[v]) {
      throw std::invalid_argument("perm gate: table is not a bijection");
    }
    hit[v] = true;
  }
  return g;
}

Gate Gate::amp_init(std::vector<int> targets, std::vector<std::complex<double>> amplitudes) {
  Gate g;
  g.kind = GateKind::AmpInit;
  g.targets = std::move(targets);
  g.amplitudes = std::move(amplitudes);
  check_qubits_distinct(g.targets, {});
  if (g.amplitudes.size() != (std::size_t{1} << g.targets.size())) {
    throw std::invalid_argument("amp_init gate: amplitude count must be 2^targets");
  }
  double norm = 0.0;
  for (const auto& a : g.amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument("amp_init gate: amplitudes must have unit norm");
  }
  return g;
}

std::vector<int> Circuit::control_qubits() const {
  std::vector<int> qubits;
  for (const auto& block : control_blocks) {
    qubits.insert(qubits.end(), block.begin(), block.end());
  }
  return qubits;
}

std::uint32_t StateEncoding::encode(std::int64_t residue) const {
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (orbit[i] == residue) return codes[i];
  }
  throw std::invalid_argument("encode: residue " + std::to_string(residue) +
                              " is not in the orbit");
}

std::optional<std::int64_t> StateEncoding::decode(std::uint32_t pattern) const {
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] == pattern) return orbit[i];
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kMaxOrbit = 1u << 12;

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t N) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % N);
}

void grow_orbit(std::int64_t x, const FactoringParams& params,
                std::vector<std::int64_t>& orbit, std::set<std::int64_t>& seen) {
  for (std::int64_t a : params.squares) {
    const std::int64_t y = mul_mod(x, a, params.N);
    if (seen.insert(y).second) {
      if (seen.size() > kMaxOrbit) {
        throw TooLargeOrbitError("orbit_residues: orbit exceeds 2^12 states");
      }
      orbit.push_back(y);
      grow_orbit(y, params, orbit, seen);
    }
  }
}

}  // namespace

StateEncoding orbit_residues(const FactoringParams& params) {
  StateEncoding enc;
  enc.modulus = params.N;
  enc.orbit = {1};
  std::set<std::int64_t> seen{1};
  grow_orbit(1, params, enc.orbit, seen);

  int width = 1;
  while ((std::size_t{1} << width) < enc.orbit.size()) ++width;
  enc.width = width;

  const std::vector<std::int64_t> compiled_orbit = {1, 4, 16, 29, 11, 9};
  if (params.N == 35 && enc.orbit == compiled_orbit) {
    enc.codes = {0b001, 0b111, 0b010, 0b101, 0b011, 0b110};
  } else if (enc.orbit.size() < (std::size_t{1} << width)) {
    // Keep |0...0> unused so freed registers rest outside the code space.
    for (std::size_t i = 0; i < enc.orbit.size(); ++i) {
      enc.codes.push_back(static_cast<std::uint32_t>(i + 1));
    }
  } else {
    for (std::size_t i = 0; i < enc.orbit.size(); ++i) {
      enc.codes.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return enc;
}

namespace {

int control_qubit(const FactoringParams& params, int dim, int pos) {
  return dim * params.log_D + pos;
}

std::vector<int> register_qubits(const FactoringParams& params, int width, int reg) {
  std::vector<int> qubits(width);
  const int base = params.d * params.log_D + reg * width;
  for (int i = 0; i < width; ++i) qubits[i] = base + i;
  return qubits;
}

// In-place multiplication by c restricted to the orbit code space; identity
// elsewhere.
std::vector<std::uint32_t> multiplier_table(const StateEncoding& enc, std::int64_t c) {
  const std::size_t dim = std::size_t{1} << enc.width;
  std::vector<std::uint32_t> table(dim);
  for (std::uint32_t p = 0; p < dim; ++p) {
    auto r = enc.decode(p);
    table[p] = r ? enc.encode(mul_mod(*r, ((c % enc.modulus) + enc.modulus) % enc.modulus,
                                      enc.modulus))
                 : p;
  }
  return table;
}

// Out-of-place squaring as an XOR of enc(x^2) onto the low half, keyed by the
// high half; an involution, so it serves as its own inverse.
std::vector<std::uint32_t> squaring_table(const StateEncoding& enc) {
  const std::size_t half = std::size_t{1} << enc.width;
  std::vector<std::uint32_t> table(half * half);
  for (std::uint32_t p = 0; p < half; ++p) {
    auto r = enc.decode(p);
    const std::uint32_t code = r ? enc.encode(mul_mod(*r, *r, enc.modulus)) : 0;
    for (std::uint32_t q = 0; q < half; ++q) {
      table[(p << enc.width) | q] = (p << enc.width) | (q ^ code);
    }
  }
  return table;
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void emit_prep(Circuit& circuit, const FactoringParams& params, const StateEncoding& enc,
               int reg, int op_index) {
  const std::uint32_t pattern = enc.encode(1);
  const std::vector<int> qubits = register_qubits(params, enc.width, reg);
  for (int pos = 0; pos < enc.width; ++pos) {
    if ((pattern >> (enc.width - 1 - pos)) & 1u) {
      Gate g = Gate::x(qubits[pos]);
      g.role = GateRole::Prep;
      g.op_index = op_index;
      circuit.gates.push_back(std::move(g));
    }
  }
}

void emit_products(Circuit& circuit, const FactoringParams& params, const StateEncoding& enc,
                   int reg, int level, bool inverse, int op_index) {
  const std::vector<int> qubits = register_qubits(params, enc.width, reg);
  for (int step = 0; step < params.d; ++step) {
    const int dim = inverse ? params.d - 1 - step : step;
    std::int64_t c = params.squares[dim];
    if (inverse) c = mod_inverse(c, params.N);
    Gate g = Gate::perm(qubits, {control_qubit(params, dim, level)},
                        multiplier_table(enc, c));
    g.role = GateRole::Product;
    g.op_index = op_index;
    circuit.gates.push_back(std::move(g));
  }
}

}  // namespace

Circuit build_modexp_square_multiply(const FactoringParams& params,
                                     const PebbleSchedule& schedule,
                                     const StateEncoding& encoding) {
  try {
    validate(schedule);
  } catch (const std::exception& e) {
    throw ScheduleInvalidError(std::string("build_modexp_square_multiply: ") + e.what());
  }
  if (schedule.m != params.log_D - 1) {
    throw ScheduleInvalidError("build_modexp_square_multiply: schedule length " +
                               std::to_string(schedule.m) + " does not match log D - 1");
  }

  Circuit circuit;
  const int width = encoding.width;
  circuit.num_qubits = params.d * params.log_D + schedule.num_registers * width;
  for (int dim = 0; dim < params.d; ++dim) {
    std::vector<int> block(params.log_D);
    for (int pos = 0; pos < params.log_D; ++pos) block[pos] = control_qubit(params, dim, pos);
    circuit.control_blocks.push_back(std::move(block));
  }

  const std::vector<std::uint32_t> sq_table = squaring_table(encoding);
  std::map<int, int> level_reg;
  for (int idx = 0; idx < static_cast<int>(schedule.ops.size()); ++idx) {
    const PebbleOp& op = schedule.ops[idx];
    if (op.kind == PebbleKind::Place) {
      if (op.level == 0) {
        emit_prep(circuit, params, encoding, op.reg, idx);
      } else {
        Gate g = Gate::perm(concat(register_qubits(params, width, level_reg.at(op.level - 1)),
                                   register_qubits(params, width, op.reg)),
                            {}, sq_table);
        g.role = GateRole::Squaring;
        g.op_index = idx;
        circuit.gates.push_back(std::move(g));
        circuit.squaring_gate_count += 1;
      }
      emit_products(circuit, params, encoding, op.reg, op.level, false, idx);
      level_reg[op.level] = op.reg;
    } else {
      emit_products(circuit, params, encoding, op.reg, op.level, true, idx);
      if (op.level == 0) {
        emit_prep(circuit, params, encoding, op.reg, idx);
      } else {
        Gate g = Gate::perm(concat(register_qubits(params, width, level_reg.at(op.level - 1)),
                                   register_qubits(params, width, op.reg)),
                            {}, sq_table);
        g.role = GateRole::Squaring;
        g.op_index = idx;
        circuit.gates.push_back(std::move(g));
        circuit.squaring_gate_count += 1;
      }
      level_reg.erase(op.level);
    }
    circuit.controlled_u_group_count += 1;
  }

  const int result_reg = level_reg.at(schedule.m);
  circuit.result_register = register_qubits(params, width, result_reg);
  for (int reg = 0; reg < schedule.num_registers; ++reg) {
    if (reg != result_reg) {
      circuit.ancilla_registers.push_back(register_qubits(params, width, reg));
    }
  }
  return circuit;
}

Circuit build_modexp_precompute(const FactoringParams& params, const StateEncoding& encoding) {
  Circuit circuit;
  const int width = encoding.width;
  circuit.num_qubits = params.d * params.log_D + width;
  for (int dim = 0; dim < params.d; ++dim) {
    std::vector<int> block(params.log_D);
    for (int pos = 0; pos < params.log_D; ++pos) block[pos] = control_qubit(params, dim, pos);
    circuit.control_blocks.push_back(std::move(block));
  }
  emit_prep(circuit, params, encoding, 0, -1);
  const std::vector<int> qubits = register_qubits(params, width, 0);
  for (int pos = 0; pos < params.log_D; ++pos) {
    const std::int64_t weight = std::int64_t{1} << (params.log_D - 1 - pos);
    for (int dim = 0; dim < params.d; ++dim) {
      const std::int64_t c = mod_pow(params.squares[dim], weight, params.N).value();
      Gate g = Gate::perm(qubits, {control_qubit(params, dim, pos)},
                          multiplier_table(encoding, c));
      g.role = GateRole::Product;
      g.op_index = pos * params.d + dim;
      circuit.gates.push_back(std::move(g));
      circuit.controlled_u_group_count += 1;
    }
  }
  circuit.result_register = qubits;
  return circuit;
}

std::vector<Gate> build_init(const FactoringParams& params, const InitMode& mode) {
  std::vector<Gate> gates;
  const int log_d = params.log_D;
  const bool uniform = mode.kind == InitMode::Kind::Uniform || mode.top_qubits == 0;
  GaussianProfile profile;
  if (!uniform) {
    if (mode.top_qubits > log_d) {
      throw std::invalid_argument("build_init: top_qubits exceeds log D");
    }
    profile = gaussian_profile(params.R, params.D, mode.top_qubits);
  }
  for (int dim = 0; dim < params.d; ++dim) {
    if (uniform) {
      for (int pos = 0; pos < log_d; ++pos) {
        gates.push_back(Gate::h(control_qubit(params, dim, pos)));
      }
      continue;
    }
    const int t = mode.top_qubits;
    const std::int64_t block = params.D >> t;
    std::vector<std::complex<double>> amps(std::size_t{1} << t);
    for (std::int64_t b = 0; b < (std::int64_t{1} << t); ++b) {
      amps[static_cast<std::size_t>(b)] =
          profile.amplitudes[static_cast<std::size_t>(b * block)] *
          std::sqrt(static_cast<double>(block));
    }
    std::vector<int> top(t);
    for (int pos = 0; pos < t; ++pos) top[pos] = control_qubit(params, dim, pos);
    gates.push_back(Gate::amp_init(std::move(top), std::move(amps)));
    for (int pos = t; pos < log_d; ++pos) {
      gates.push_back(Gate::h(control_qubit(params, dim, pos)));
    }
  }
  return gates;
}

std::vector<Gate> build_qft(std::int64_t D, int d,
                            const std::vector<std::vector<int>>& control_blocks) {
  if (D < 2 || (D & (D - 1)) != 0) {
    throw std::invalid_argument("build_qft: D must be a power of two");
  }
  if (static_cast<int>(control_blocks.size()) != d) {
    throw std::invalid_argument("build_qft: need one qubit block per dimension");
  }
  std::vector<Gate> gates;
  for (const auto& block : control_blocks) {
    const int L = static_cast<int>(block.size());
    for (int p = 0; p < L; ++p) {
      gates.push_back(Gate::h(block[p]));
      for (int j = p + 1; j < L; ++j) {
        const double angle = 2.0 * M_PI / std::pow(2.0, j - p + 1);
        gates.push_back(Gate::controlled_phase(angle, block[j], block[p]));
      }
    }
    for (int p = 0; p < L / 2; ++p) {
      gates.push_back(Gate::swap(block[p], block[L - 1 - p]));
    }
  }
  return gates;
}

Circuit build_full(const FactoringParams& params, const FullMethod& method,
                   const InitMode& init_mode) {
  const StateEncoding encoding = orbit_residues(params);
  Circuit circuit;
  if (method.kind == FullMethod::Kind::SquareMultiply) {
    StrategyChoice choice{method.strategy_name, method.k, method.ell};
    PebbleSchedule schedule = make_schedule(params.log_D - 1, choice);
    circuit = build_modexp_square_multiply(params, schedule, encoding);
  } else {
    circuit = build_modexp_precompute(params, encoding);
  }
  std::vector<Gate> gates = build_init(params, init_mode);
  gates.insert(gates.end(), circuit.gates.begin(), circuit.gates.end());
  std::vector<Gate> qft = build_qft(params.D, params.d, circuit.control_blocks);
  gates.insert(gates.end(), qft.begin(), qft.end());
  circuit.gates = std::move(gates);
  return circuit;
}

namespace {

std::string kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::ControlledPhase: return "cphase";
    case GateKind::Swap: return "swap";
    case GateKind::Perm: return "perm";
    case GateKind::AmpInit: return "amp_init";
  }
  throw std::logic_error("kind_name: bad kind");
}

GateKind kind_from_name(const std::string& name) {
  if (name == "h") return GateKind::H;
  if (name == "x") return GateKind::X;
  if (name == "cphase") return GateKind::ControlledPhase;
  if (name == "swap") return GateKind::Swap;
  if (name == "perm") return GateKind::Perm;
  if (name == "amp_init") return GateKind::AmpInit;
  throw std::invalid_argument("circuit_from_json: unknown gate kind " + name);
}

}  // namespace

std::string circuit_to_json(const Circuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : circuit.gates) {
    nlohmann::json jg = {{"kind", kind_name(g.kind)}, {"targets", g.targets}};
    if (!g.controls.empty()) jg["controls"] = g.controls;
    if (g.kind == GateKind::ControlledPhase) jg["angle"] = g.angle;
    if (g.kind == GateKind::Perm) jg["table"] = g.table;
    if (g.kind == GateKind::AmpInit) {
      nlohmann::json amps = nlohmann::json::array();
      for (const auto& a : g.amplitudes) amps.push_back({a.real(), a.imag()});
      jg["amplitudes"] = std::move(amps);
    }
    gates.push_back(std::move(jg));
  }
  nlohmann::json j = {
      {"num_qubits", circuit.num_qubits},
      {"gates", std::move(gates)},
      {"control_blocks", circuit.control_blocks},
      {"result_register", circuit.result_register},
      {"ancilla_registers", circuit.ancilla_registers},
      {"squaring_gate_count", circuit.squaring_gate_count},
      {"controlled_u_group_count", circuit.controlled_u_group_count},
  };
  return j.dump();
}

Circuit circuit_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Circuit circuit;
  circuit.num_qubits = j.at("num_qubits").get<int>();
  circuit.control_blocks = j.at("control_blocks").get<std::vector<std::vector<int>>>();
  circuit.result_register = j.at("result_register").get<std::vector<int>>();
  circuit.ancilla_registers = j.at("ancilla_registers").get<std::vector<std::vector<int>>>();
  circuit.squaring_gate_count = j.value("squaring_gate_count", 0ll);
  circuit.controlled_u_group_count = j.value("controlled_u_group_count", 0ll);
  for (const auto& jg : j.at("gates")) {
    const GateKind kind = kind_from_name(jg.at("kind").get<std::string>());
    const auto targets = jg.at("targets").get<std::vector<int>>();
    switch (kind) {
      case GateKind::H:
        circuit.gates.push_back(Gate::h(targets.at(0)));
        break;
      case GateKind::X:
        circuit.gates.push_back(Gate::x(targets.at(0)));
        break;
      case GateKind::ControlledPhase:
        circuit.gates.push_back(
            Gate::controlled_phase(jg.at("angle").get<double>(), targets.at(0), targets.at(1)));
        break;
      case GateKind::Swap:
        circuit.gates.push_back(Gate::swap(targets.at(0), targets.at(1)));
        break;
      case GateKind::Perm: {
        std::vector<int> controls;
        if (jg.contains("controls")) controls = jg.at("controls").get<std::vector<int>>();
        circuit.gates.push_back(Gate::perm(
            targets, controls, jg.at("table").get<std::vector<std::uint32_t>>()));
        break;
      }
      case GateKind::AmpInit: {
        std::vector<std::complex<double>> amps;
        for (const auto& pair : jg.at("amplitudes")) {
          amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        circuit.gates.push_back(Gate::amp_init(targets, std::move(amps)));
        break;
      }
    }
  }
  return circuit;
}

}  // namespace regevlab
