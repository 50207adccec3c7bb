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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "regevlab/circuit.hpp"
#include "regevlab/rng.hpp"

namespace regevlab {

struct TooManyQubitsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense state vector over up to 24 qubits. Qubit q is bit q of the
/// amplitude index. A StateVector is mutated by one operation at a time;
/// independent instances can evolve concurrently.
class StateVector {
 public:
  explicit StateVector(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }

  void apply(const Gate& gate);
  double norm() const;

 private:
  int num_qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Stochastic-Pauli noise: after each gate, each touched qubit independently
/// suffers a uniformly random non-identity Pauli with probability p. p = 0
/// reproduces the noiseless evolution bit-exactly.
struct NoiseSpec {
  double p = 0.0;
  std::uint64_t seed = 0;
};

/// Outcome probabilities keyed by bit string; character i of each string is
/// the measured value of the i-th qubit in the marginal's qubit order.
using OutcomeDistribution = std::map<std::string, double>;
using Counts = std::map<std::string, long long>;

/// Applies the circuit to |0...0>, checking unit norm after every gate.
StateVector run(const Circuit& circuit);

/// Single noisy trajectory; Pauli insertions are drawn from rng.
StateVector run_trajectory(const Circuit& circuit, const NoiseSpec& noise, Rng& rng);

/// Fast path for permutation-only circuits (X and Perm gates): tracks one
/// basis state. Throws std::invalid_argument on any amplitude-mixing gate.
std::uint64_t run_basis(const Circuit& circuit, std::uint64_t input);

/// Exact marginal of |state|^2 over the given qubits.
OutcomeDistribution distribution(const StateVector& state, const std::vector<int>& qubits);

/// Seeded multinomial sampling from the exact marginal, in draw order.
std::vector<std::string> sample_outcomes(const StateVector& state,
                                         const std::vector<int>& qubits,
                                         long long shots, std::uint64_t seed);

/// Noisy sampling in draw order: one fresh trajectory per shot, one draw per
/// trajectory.
std::vector<std::string> sample_outcomes(const Circuit& circuit, const NoiseSpec& noise,
                                         const std::vector<int>& qubits, long long shots);

/// Seeded multinomial sampling from the exact marginal.
Counts sample(const StateVector& state, const std::vector<int>& qubits,
              long long shots, std::uint64_t seed);

/// Noisy sampling: one fresh trajectory per shot, one draw per trajectory.
Counts sample(const Circuit& circuit, const NoiseSpec& noise,
              const std::vector<int>& qubits, long long shots);

/// Gate-free distribution oracle: sums amp(z) * omega_D^<w,z> over all
/// z in [0,D)^d bucketed by f(z) = prod a_i^{z_i} mod N, with amp taken from
/// the init profile. Independent of the circuit path; used to cross-check it.
OutcomeDistribution analytic_oracle(const FactoringParams& params,
                                    const InitMode& init_mode);

/// Total variation distance between two distributions on bit strings.
double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b);

std::string counts_to_json(const Counts& counts);
std::string counts_to_csv(const Counts& counts);
std::string distribution_to_json(const OutcomeDistribution& dist);
std::string distribution_to_csv(const OutcomeDistribution& dist);

}  // namespace regevlab
