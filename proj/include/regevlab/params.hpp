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

/// Instance parameters for the multidimensional factoring pipeline.
///
/// Derived quantities follow the standard rules: d ~ round(sqrt(n)),
/// R slightly above sqrt(2d), D the smallest power of two with
/// 2*sqrt(d)*R <= D < 4*sqrt(d)*R, S = D so the embedding basis is an
/// integer matrix, and num_samples = d + 4. The measurement error scale
/// delta ~ sqrt(d) / (sqrt(2) R) is not stored: it only motivates S, and
/// choosing S as a multiple of D keeps the post-processing exact.
struct FactoringParams {
  std::int64_t N = 0;   ///< odd composite to factor
  int n = 0;            ///< bit length of N
  int d = 0;            ///< lattice dimension
  std::vector<std::int64_t> bases;    ///< b_i, small primes coprime to N
  std::vector<std::int64_t> squares;  ///< a_i = b_i^2 mod N
  double R = 0.0;       ///< Gaussian width
  std::int64_t D = 0;   ///< per-dimension grid size, power of two
  int log_D = 0;
  std::int64_t S = 0;   ///< embedding scale, multiple of D by default
  int num_samples = 0;  ///< samples consumed per post-processing attempt
  bool relaxed = false; ///< overrides stepped outside the derived D window
};

struct ParamOverrides {
  std::optional<int> d;
  std::optional<std::vector<std::int64_t>> bases;
  std::optional<double> R;
  std::optional<std::int64_t> D;
  std::optional<std::int64_t> S;
  std::optional<int> num_samples;
};

struct InvalidOverrideError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

FactoringParams derive_params(std::int64_t N, const ParamOverrides& overrides = {});

/// Discrete Gaussian amplitude profile over one dimension of the control
/// register. amplitudes[i] is the amplitude of z = i - D/2 when centered.
struct GaussianProfile {
  std::vector<double> amplitudes;
  double R = 0.0;
  bool centered = true;
};

/// Profile exp(-pi z^2 / R^2) for z in [-D/2, D/2), normalized to unit L2
/// norm. When top_qubits < log2(D) the profile is piecewise constant on
/// blocks of size 2^(log2(D)-top_qubits), each block weighted by the
/// Gaussian at its block center; top_qubits = 0 yields the uniform profile.
GaussianProfile gaussian_profile(double R, std::int64_t D, int top_qubits);

/// Hard-invariant check (power-of-two D, coprime bases, consistent squares,
/// R above its floor, positive sample count). Throws InvalidOverrideError.
void validate_params(const FactoringParams& p);

std::string params_to_json(const FactoringParams& p);
FactoringParams params_from_json(const std::string& text);

}  // namespace regevlab
