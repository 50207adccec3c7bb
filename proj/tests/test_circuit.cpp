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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "regevlab/circuit.hpp"
#include "regevlab/numtheory.hpp"
#include "regevlab/simulator.hpp"

using namespace regevlab;

namespace {

// Basis index for control state z with all computation registers cleared.
std::uint64_t control_index(const FactoringParams& p, const std::vector<std::int64_t>& z) {
  std::uint64_t index = 0;
  for (int dim = 0; dim < p.d; ++dim) {
    for (int pos = 0; pos < p.log_D; ++pos) {
      if ((z[dim] >> (p.log_D - 1 - pos)) & 1) {
        index |= std::uint64_t{1} << (dim * p.log_D + pos);
      }
    }
  }
  return index;
}

std::int64_t f_of_z(const FactoringParams& p, const std::vector<std::int64_t>& z) {
  Residue prod(1, p.N);
  for (int i = 0; i < p.d; ++i) prod = prod * mod_pow(p.squares[i], z[i], p.N);
  return prod.value();
}

std::uint64_t read_bits(std::uint64_t index, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    out |= ((index >> qubits[i]) & 1u) << (qubits.size() - 1 - i);
  }
  return out;
}

void check_modexp_exhaustive(const FactoringParams& p, const Circuit& circuit,
                             const StateEncoding& enc) {
  for (std::int64_t z1 = 0; z1 < p.D; ++z1) {
    for (std::int64_t z2 = 0; z2 < p.D; ++z2) {
      const std::vector<std::int64_t> z = {z1, z2};
      const std::uint64_t in = control_index(p, z);
      const std::uint64_t out = run_basis(circuit, in);
      // Control register unchanged.
      for (int dim = 0; dim < p.d; ++dim) {
        CHECK(read_bits(out, circuit.control_blocks[dim]) ==
              read_bits(in, circuit.control_blocks[dim]));
      }
      CHECK(read_bits(out, circuit.result_register) == enc.encode(f_of_z(p, z)));
      for (const auto& ancilla : circuit.ancilla_registers) {
        CHECK(read_bits(out, ancilla) == 0);
      }
    }
  }
}

}  // namespace

TEST_CASE("orbit encoding for N = 35 matches the compiled table") {
  const auto p = derive_params(35);
  const auto enc = orbit_residues(p);
  CHECK(enc.orbit == std::vector<std::int64_t>{1, 4, 16, 29, 11, 9});
  CHECK(enc.width == 3);
  CHECK(enc.codes == std::vector<std::uint32_t>{0b001, 0b111, 0b010, 0b101, 0b011, 0b110});
  CHECK(enc.encode(1) == 0b001);
  CHECK(enc.encode(29) == 0b101);
  CHECK(enc.decode(0b110) == 9);
  CHECK_FALSE(enc.decode(0b100).has_value());
  CHECK_FALSE(enc.decode(0b000).has_value());
}

TEST_CASE("orbit encoding for other instances comes from closure") {
  const auto p15 = derive_params(15);
  const auto enc15 = orbit_residues(p15);
  CHECK(p15.bases == std::vector<std::int64_t>{2, 7});
  CHECK(p15.squares == std::vector<std::int64_t>{4, 4});
  CHECK(enc15.orbit == std::vector<std::int64_t>{1, 4});
  CHECK(enc15.width == 1);

  FactoringParams trivial = derive_params(35);
  trivial.d = 1;
  trivial.bases = {6};
  trivial.squares = {1};
  const auto enc1 = orbit_residues(trivial);
  CHECK(enc1.orbit == std::vector<std::int64_t>{1});
  CHECK(enc1.width == 1);
}

TEST_CASE("perm gates require a bijection") {
  CHECK_THROWS_AS(Gate::perm({0, 1}, {}, {0, 0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Gate::perm({0, 1}, {}, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Gate::perm({0, 0}, {}, {0, 1, 2, 3}), std::invalid_argument);
  CHECK_NOTHROW(Gate::perm({0, 1}, {2}, {3, 1, 0, 2}));
}

TEST_CASE("multiplier permutation tables agree with modular arithmetic") {
  for (std::int64_t N : {35, 15}) {
    const auto p = derive_params(N);
    const auto enc = orbit_residues(p);
    const auto circuit = build_modexp_precompute(p, enc);
    for (const Gate& gate : circuit.gates) {
      if (gate.kind != GateKind::Perm) continue;
      // Recover the multiplier from the gate's action on enc(1).
      const std::int64_t mapped = *enc.decode(gate.table[enc.encode(1)]);
      for (std::size_t i = 0; i < enc.orbit.size(); ++i) {
        const std::int64_t r = enc.orbit[i];
        const std::int64_t expect = static_cast<std::int64_t>(
            static_cast<__int128>(r) * mapped % N);
        CHECK(*enc.decode(gate.table[enc.codes[i]]) == expect);
      }
    }
  }
}

TEST_CASE("square-and-multiply circuits track schedule costs and widths") {
  ParamOverrides d16;
  d16.D = 16;
  const auto p = derive_params(35, d16);
  const auto enc = orbit_residues(p);

  const auto direct = build_modexp_square_multiply(p, schedule_direct(3), enc);
  CHECK(direct.num_qubits == 20);
  const auto simple = build_modexp_square_multiply(p, schedule_simple(3, 2), enc);
  CHECK(simple.num_qubits == 17);
  const auto binary = build_modexp_square_multiply(p, schedule_binary(3), enc);
  CHECK(binary.num_qubits == 17);

  const struct {
    const Circuit* circuit;
    PebbleSchedule schedule;
  } cases[] = {
      {&direct, schedule_direct(3)},
      {&simple, schedule_simple(3, 2)},
      {&binary, schedule_binary(3)},
  };
  for (const auto& c : cases) {
    const auto cost = validate(c.schedule);
    CHECK(c.circuit->squaring_gate_count == cost.squarings);
    CHECK(c.circuit->controlled_u_group_count == cost.controlled_u);
    // d product gates per schedule op.
    long long products = 0;
    for (const Gate& g : c.circuit->gates) {
      if (g.role == GateRole::Product) ++products;
    }
    CHECK(products == cost.controlled_u * p.d);
  }
}

TEST_CASE("schedule and grid must agree") {
  const auto p = derive_params(35);  // D = 8, m = 2
  const auto enc = orbit_residues(p);
  CHECK_THROWS_AS(build_modexp_square_multiply(p, schedule_direct(3), enc),
                  ScheduleInvalidError);
  PebbleSchedule broken = schedule_direct(2);
  broken.ops.pop_back();
  CHECK_THROWS_AS(build_modexp_square_multiply(p, broken, enc), ScheduleInvalidError);
}

TEST_CASE("precompute circuit shape for N = 35, D = 8") {
  const auto p = derive_params(35);
  const auto enc = orbit_residues(p);
  const auto circuit = build_modexp_precompute(p, enc);
  CHECK(circuit.num_qubits == 9);
  long long perms = 0;
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::Perm) {
      CHECK(g.controls.size() == 1);
      ++perms;
    }
  }
  CHECK(perms == 6);
  CHECK(circuit.controlled_u_group_count == 6);
  CHECK(circuit.squaring_gate_count == 0);
  CHECK(circuit.result_register.size() == 3);
  CHECK(circuit.ancilla_registers.empty());
}

TEST_CASE("modexp circuits compute the exponent product and clear ancillas") {
  // D = 8 instances are cheap enough to sweep exhaustively here; the full
  // grid including D = 16 runs in the acceptance suite.
  const auto p = derive_params(35);
  const auto enc = orbit_residues(p);
  check_modexp_exhaustive(p, build_modexp_precompute(p, enc), enc);
  check_modexp_exhaustive(p, build_modexp_square_multiply(p, schedule_direct(2), enc), enc);
  check_modexp_exhaustive(p, build_modexp_square_multiply(p, schedule_binary(2), enc), enc);
  check_modexp_exhaustive(p, build_modexp_square_multiply(p, schedule_simple(2, 1), enc), enc);

  const auto p15 = derive_params(15);
  const auto enc15 = orbit_residues(p15);
  check_modexp_exhaustive(p15, build_modexp_precompute(p15, enc15), enc15);
  check_modexp_exhaustive(p15, build_modexp_square_multiply(p15, schedule_direct(2), enc15),
                          enc15);
}

TEST_CASE("degenerate single-level chain multiplies without squaring") {
  ParamOverrides d2;
  d2.D = 2;
  const auto p = derive_params(35, d2);
  const auto enc = orbit_residues(p);
  const auto circuit = build_modexp_square_multiply(p, schedule_direct(0), enc);
  CHECK(circuit.squaring_gate_count == 0);
  for (std::int64_t z1 = 0; z1 < 2; ++z1) {
    for (std::int64_t z2 = 0; z2 < 2; ++z2) {
      const std::uint64_t out = run_basis(circuit, control_index(p, {z1, z2}));
      CHECK(read_bits(out, circuit.result_register) == enc.encode(f_of_z(p, {z1, z2})));
    }
  }
}

TEST_CASE("precompute at the smallest grid uses one controlled gate per dimension") {
  ParamOverrides d2;
  d2.D = 2;
  const auto p = derive_params(35, d2);
  const auto circuit = build_modexp_precompute(p, orbit_residues(p));
  long long perms = 0;
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::Perm) ++perms;
  }
  CHECK(perms == 2);
}

TEST_CASE("Fourier block maps the all-zeros state to a uniform superposition") {
  StateVector state(3);
  for (const Gate& g : build_qft(8, 1, {{0, 1, 2}})) state.apply(g);
  for (const auto& amp : state.amplitudes()) {
    CHECK(std::abs(amp - 1.0 / std::sqrt(8.0)) < 1e-12);
  }
}

TEST_CASE("per-dimension Fourier blocks match the DFT matrix") {
  const std::vector<std::vector<int>> blocks = {{0, 1, 2}};
  const auto gates = build_qft(8, 1, blocks);
  for (int v = 0; v < 8; ++v) {
    StateVector state(3);
    // Prepare |v> with v read MSB-first on qubits 0,1,2.
    for (int pos = 0; pos < 3; ++pos) {
      if ((v >> (2 - pos)) & 1) state.apply(Gate::x(pos));
    }
    for (const Gate& g : gates) state.apply(g);
    for (int w = 0; w < 8; ++w) {
      std::uint64_t index = 0;
      for (int pos = 0; pos < 3; ++pos) {
        if ((w >> (2 - pos)) & 1) index |= std::uint64_t{1} << pos;
      }
      const std::complex<double> expected =
          std::polar(1.0 / std::sqrt(8.0), 2.0 * M_PI * v * w / 8.0);
      CHECK(std::abs(state.amplitudes()[index] - expected) < 1e-12);
    }
  }

  const auto single = build_qft(2, 1, {{0}});
  REQUIRE(single.size() == 1);
  CHECK(single[0].kind == GateKind::H);
}

TEST_CASE("initialization gates") {
  const auto p = derive_params(35);
  const auto uniform = build_init(p, InitMode::uniform());
  CHECK(uniform.size() == 6);
  for (const Gate& g : uniform) CHECK(g.kind == GateKind::H);

  const auto top0 = build_init(p, InitMode::gaussian_top(0));
  CHECK(top0.size() == uniform.size());

  // Fully shaped: one dimension simulated alone reproduces the profile.
  const auto shaped = build_init(p, InitMode::gaussian_top(3));
  StateVector state(p.log_D);
  for (const Gate& g : shaped) {
    if (*std::max_element(g.targets.begin(), g.targets.end()) < p.log_D) {
      state.apply(g);
    }
  }
  const auto profile = gaussian_profile(p.R, p.D, 3);
  for (int v = 0; v < 8; ++v) {
    std::uint64_t index = 0;
    for (int pos = 0; pos < 3; ++pos) {
      if ((v >> (2 - pos)) & 1) index |= std::uint64_t{1} << pos;
    }
    CHECK(std::abs(state.amplitudes()[index] - profile.amplitudes[v]) < 1e-12);
  }
}

TEST_CASE("full circuits carry measurement metadata") {
  const auto p = derive_params(35);
  FullMethod pre;
  pre.kind = FullMethod::Kind::Precompute;
  const auto circuit = build_full(p, pre, InitMode::uniform());
  CHECK(circuit.num_qubits == 9);
  REQUIRE(circuit.control_blocks.size() == 2);
  CHECK(circuit.control_blocks[0] == std::vector<int>{0, 1, 2});
  CHECK(circuit.control_blocks[1] == std::vector<int>{3, 4, 5});
  CHECK(circuit.control_qubits() == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(circuit.result_register == std::vector<int>{6, 7, 8});
}

TEST_CASE("circuit JSON round trip preserves behavior") {
  const auto p = derive_params(35);
  FullMethod pre;
  pre.kind = FullMethod::Kind::Precompute;
  const auto circuit = build_full(p, pre, InitMode::uniform());
  const auto restored = circuit_from_json(circuit_to_json(circuit));
  CHECK(restored.num_qubits == circuit.num_qubits);
  REQUIRE(restored.gates.size() == circuit.gates.size());
  const auto a = distribution(run(circuit), circuit.control_qubits());
  const auto b = distribution(run(restored), restored.control_qubits());
  CHECK(total_variation(a, b) == 0.0);
}
