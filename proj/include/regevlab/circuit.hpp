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

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regevlab/params.hpp"
#include "regevlab/pebble.hpp"

namespace regevlab {

enum class GateKind { H, X, ControlledPhase, Swap, Perm, AmpInit };

/// Bookkeeping for resource accounting; Product gates belonging to one
/// schedule op share an op_index.
enum class GateRole { Generic, Prep, Squaring, Product };

/// One gate. Perm gates relabel the computational basis of their target
/// qubits (targets[0] is the most significant bit of the table index) for
/// every basis state in which all control qubits are 1; the table must be a
/// bijection on [0, 2^|targets|).
struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::vector<int> controls;                     // Perm only
  double angle = 0.0;                            // ControlledPhase only
  std::vector<std::uint32_t> table;              // Perm only
  std::vector<std::complex<double>> amplitudes;  // AmpInit only
  GateRole role = GateRole::Generic;
  int op_index = -1;

  static Gate h(int q);
  static Gate x(int q);
  static Gate controlled_phase(double angle, int qa, int qb);
  static Gate swap(int qa, int qb);
  /// Throws std::invalid_argument unless table is a bijection.
  static Gate perm(std::vector<int> targets, std::vector<int> controls,
                   std::vector<std::uint32_t> table);
  /// Throws std::invalid_argument unless amplitudes has unit L2 norm.
  static Gate amp_init(std::vector<int> targets,
                       std::vector<std::complex<double>> amplitudes);
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::vector<int>> control_blocks;  ///< per dimension, MSB first
  std::vector<int> result_register;              ///< MSB first
  std::vector<std::vector<int>> ancilla_registers;
  long long squaring_gate_count = 0;
  long long controlled_u_group_count = 0;

  /// All control qubits, dimension-major, MSB first; measured bit strings are
  /// read in this order.
  std::vector<int> control_qubits() const;
};

struct TooLargeOrbitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScheduleInvalidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compiled register encoding: the residues reachable from 1 under
/// multiplication by the a_i, packed into ceil(log2(|orbit|)) qubits.
struct StateEncoding {
  std::int64_t modulus = 0;
  std::vector<std::int64_t> orbit;    ///< discovery order, orbit[0] == 1
  int width = 0;
  std::vector<std::uint32_t> codes;   ///< codes[i] encodes orbit[i]

  std::uint32_t encode(std::int64_t residue) const;
  std::optional<std::int64_t> decode(std::uint32_t pattern) const;
};

/// Closure of {1} under multiplication by each a_i mod N. Keeps |0...0> free
/// for ancilla reuse whenever the orbit does not fill the register; the
/// six-state instance N = 35 gets its conventional code table.
StateEncoding orbit_residues(const FactoringParams& params);

struct InitMode {
  enum class Kind { Uniform, GaussianTop };
  Kind kind = Kind::Uniform;
  int top_qubits = 0;

  static InitMode uniform() { return {}; }
  static InitMode gaussian_top(int t) { return {Kind::GaussianTop, t}; }
};

/// Initialization gates over all control blocks: Hadamards for Uniform, an
/// amplitude load on the top qubits of each block plus Hadamards on the rest
/// for GaussianTop(t). GaussianTop(0) coincides with Uniform.
std::vector<Gate> build_init(const FactoringParams& params, const InitMode& mode);

/// Square-and-multiply modular exponentiation realized from a pebble
/// schedule. Place(l) emits the out-of-place squaring from the level-(l-1)
/// register (an X preparation of enc(1) at level 0) followed by the d
/// singly-controlled multipliers of level l; Remove(l) emits the exact
/// inverses in reverse order. Level l consumes per-dimension control bit
/// m - l counting weights (the most significant bit feeds level 0).
Circuit build_modexp_square_multiply(const FactoringParams& params,
                                     const PebbleSchedule& schedule,
                                     const StateEncoding& encoding);

/// Precomputation architecture: a single computation register and the
/// controlled multiplier sequence a_i^(2^j), most significant bit first.
Circuit build_modexp_precompute(const FactoringParams& params,
                                const StateEncoding& encoding);

/// Per-dimension Fourier transform over Z_D: the H / controlled-phase ladder
/// with terminal swaps so measured bit strings read MSB first.
std::vector<Gate> build_qft(std::int64_t D, int d,
                            const std::vector<std::vector<int>>& control_blocks);

struct FullMethod {
  enum class Kind { SquareMultiply, Precompute };
  Kind kind = Kind::Precompute;
  std::string strategy_name = "simple";  // square-and-multiply only
  std::optional<int> k;
  std::optional<int> ell;
};

/// init -> modular exponentiation -> QFT, with measurement metadata.
Circuit build_full(const FactoringParams& params, const FullMethod& method,
                   const InitMode& init_mode);

std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

}  // namespace regevlab
