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

#include "regevlab/params.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "regevlab/numtheory.hpp"

namespace regevlab {

namespace {

bool is_power_of_two(std::int64_t x) { return x > 0 && (x & (x - 1)) == 0; }

int bit_length(std::int64_t x) {
  int n = 0;
  while (x > 0) { ++n; x >>= 1; }
  return n;
}

// Cheap instance screen: odd, composite, not a prime power. Trial division is
// plenty at desk scale.
void check_instance(std::int64_t N) {
  if (N < 9 || N % 2 == 0) {
    throw std::invalid_argument("derive_params: N must be an odd composite >= 9");
  }
  std::int64_t p = 0;
  for (std::int64_t q = 3; q * q <= N && q < 2'000'000; q += 2) {
    if (N % q == 0) { p = q; break; }
  }
  if (p == 0) throw std::invalid_argument("derive_params: N looks prime");
  std::int64_t rest = N;
  while (rest % p == 0) rest /= p;
  if (rest == 1) {
    throw std::invalid_argument("derive_params: N is a prime power (" +
                                std::to_string(p) + "^k)");
  }
}

}  // namespace

FactoringParams derive_params(std::int64_t N, const ParamOverrides& overrides) {
  check_instance(N);

  FactoringParams p;
  p.N = N;
  p.n = bit_length(N);

  if (overrides.d) {
    p.d = *overrides.d;
  } else if (overrides.bases) {
    p.d = static_cast<int>(overrides.bases->size());
  } else {
    p.d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(p.n))));
  }
  if (p.d < 1) throw InvalidOverrideError("derive_params: d must be >= 1");

  if (overrides.bases) {
    p.bases = *overrides.bases;
    if (static_cast<int>(p.bases.size()) != p.d) {
      throw InvalidOverrideError("derive_params: bases length does not match d");
    }
    for (std::int64_t b : p.bases) {
      if (b < 2 || gcd64(b, N) != 1) {
        throw InvalidOverrideError("derive_params: base " + std::to_string(b) +
                                   " is not coprime to N");
      }
    }
  } else {
    p.bases = choose_bases(N, p.d);
  }
  p.squares.reserve(p.bases.size());
  for (std::int64_t b : p.bases) {
    p.squares.push_back(mod_pow(b, 2, N).value());
  }

  const double r_floor = std::sqrt(2.0 * p.d);
  p.R = overrides.R ? *overrides.R : r_floor + 0.01;
  if (!(p.R > r_floor)) {
    throw InvalidOverrideError("derive_params: R must exceed sqrt(2d)");
  }

  const double d_lo = 2.0 * std::sqrt(static_cast<double>(p.d)) * p.R;
  const double d_hi = 4.0 * std::sqrt(static_cast<double>(p.d)) * p.R;
  if (overrides.D) {
    p.D = *overrides.D;
    if (!is_power_of_two(p.D)) {
      throw InvalidOverrideError("derive_params: D must be a power of two");
    }
    if (static_cast<double>(p.D) < d_lo || static_cast<double>(p.D) >= d_hi) {
      p.relaxed = true;
    }
  } else {
    std::int64_t D = 2;
    while (static_cast<double>(D) < d_lo) D <<= 1;
    p.D = D;
  }
  p.log_D = bit_length(p.D) - 1;

  p.S = overrides.S ? *overrides.S : p.D;
  if (p.S < 1) throw InvalidOverrideError("derive_params: S must be >= 1");

  p.num_samples = overrides.num_samples ? *overrides.num_samples : p.d + 4;
  if (p.num_samples < 1) {
    throw InvalidOverrideError("derive_params: num_samples must be >= 1");
  }
  return p;
}

GaussianProfile gaussian_profile(double R, std::int64_t D, int top_qubits) {
  if (!is_power_of_two(D)) {
    throw std::invalid_argument("gaussian_profile: D must be a power of two");
  }
  const int log_d = bit_length(D) - 1;
  if (top_qubits < 0 || top_qubits > log_d) {
    throw std::invalid_argument("gaussian_profile: top_qubits out of range");
  }
  GaussianProfile profile;
  profile.R = R;
  profile.centered = true;
  profile.amplitudes.assign(static_cast<std::size_t>(D), 0.0);

  const std::int64_t block = D >> top_qubits;
  for (std::int64_t b = 0; b < (std::int64_t{1} << top_qubits); ++b) {
    const double center = static_cast<double>(b * block) +
                          (static_cast<double>(block) - 1.0) / 2.0 -
                          static_cast<double>(D) / 2.0;
    const double w = std::exp(-M_PI * center * center / (R * R));
    for (std::int64_t i = b * block; i < (b + 1) * block; ++i) {
      profile.amplitudes[static_cast<std::size_t>(i)] = w;
    }
  }
  double norm2 = 0.0;
  for (double a : profile.amplitudes) norm2 += a * a;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& a : profile.amplitudes) a *= inv;
  return profile;
}

void validate_params(const FactoringParams& p) {
  if (p.N < 9 || p.N % 2 == 0) throw InvalidOverrideError("params: N must be odd and >= 9");
  if (p.d < 1 || static_cast<int>(p.bases.size()) != p.d ||
      p.bases.size() != p.squares.size()) {
    throw InvalidOverrideError("params: base lists do not match d");
  }
  for (std::size_t i = 0; i < p.bases.size(); ++i) {
    if (p.bases[i] < 2 || gcd64(p.bases[i], p.N) != 1) {
      throw InvalidOverrideError("params: base not coprime to N");
    }
    if (p.squares[i] != mod_pow(p.bases[i], 2, p.N).value()) {
      throw InvalidOverrideError("params: squares inconsistent with bases");
    }
  }
  if (!is_power_of_two(p.D) || p.log_D != bit_length(p.D) - 1) {
    throw InvalidOverrideError("params: D must be a power of two with matching log_D");
  }
  if (!(p.R > std::sqrt(2.0 * p.d))) {
    throw InvalidOverrideError("params: R must exceed sqrt(2d)");
  }
  if (p.S < 1 || p.num_samples < 1) {
    throw InvalidOverrideError("params: S and num_samples must be positive");
  }
}

std::string params_to_json(const FactoringParams& p) {
  nlohmann::json j = {
      {"N", p.N},
      {"n", p.n},
      {"d", p.d},
      {"bases", p.bases},
      {"squares", p.squares},
      {"R", p.R},
      {"D", p.D},
      {"log_D", p.log_D},
      {"S", p.S},
      {"num_samples", p.num_samples},
      {"relaxed", p.relaxed},
  };
  return j.dump(2);
}

FactoringParams params_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FactoringParams p;
  p.N = j.at("N").get<std::int64_t>();
  p.n = j.at("n").get<int>();
  p.d = j.at("d").get<int>();
  p.bases = j.at("bases").get<std::vector<std::int64_t>>();
  p.squares = j.at("squares").get<std::vector<std::int64_t>>();
  p.R = j.at("R").get<double>();
  p.D = j.at("D").get<std::int64_t>();
  p.log_D = j.at("log_D").get<int>();
  p.S = j.at("S").get<std::int64_t>();
  p.num_samples = j.at("num_samples").get<int>();
  p.relaxed = j.value("relaxed", false);
  validate_params(p);
  return p;
}

}  // namespace regevlab
