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

#include "regevlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "regevlab/numtheory.hpp"

namespace regevlab {

namespace {

constexpr int kMaxQubits = 24;
constexpr double kNormTolerance = 1e-9;

std::uint64_t scatter_bits(std::uint32_t pattern, const std::vector<int>& targets) {
  std::uint64_t out = 0;
  const int w = static_cast<int>(targets.size());
  for (int p = 0; p < w; ++p) {
    if ((pattern >> (w - 1 - p)) & 1u) out |= std::uint64_t{1} << targets[p];
  }
  return out;
}

std::uint32_t gather_bits(std::uint64_t index, const std::vector<int>& targets) {
  std::uint32_t out = 0;
  const int w = static_cast<int>(targets.size());
  for (int p = 0; p < w; ++p) {
    out |= static_cast<std::uint32_t>((index >> targets[p]) & 1u) << (w - 1 - p);
  }
  return out;
}

std::uint64_t mask_of(const std::vector<int>& qubits) {
  std::uint64_t mask = 0;
  for (int q : qubits) mask |= std::uint64_t{1} << q;
  return mask;
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) {
    throw TooManyQubitsError("state vector limited to " + std::to_string(kMaxQubits) +
                             " qubits");
  }
  amps_.assign(std::size_t{1} << num_qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

double StateVector::norm() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return std::sqrt(total);
}

void StateVector::apply(const Gate& gate) {
  const std::size_t size = amps_.size();
  for (int q : gate.targets) {
    if (q < 0 || q >= num_qubits_) throw std::invalid_argument("gate qubit out of range");
  }
  for (int q : gate.controls) {
    if (q < 0 || q >= num_qubits_) throw std::invalid_argument("gate qubit out of range");
  }
  switch (gate.kind) {
    case GateKind::H: {
      const std::uint64_t mask = std::uint64_t{1} << gate.targets[0];
      const double s = 1.0 / std::sqrt(2.0);
      for (std::size_t i = 0; i < size; ++i) {
        if (i & mask) continue;
        const auto a = amps_[i];
        const auto b = amps_[i | mask];
        amps_[i] = (a + b) * s;
        amps_[i | mask] = (a - b) * s;
      }
      break;
    }
    case GateKind::X: {
      const std::uint64_t mask = std::uint64_t{1} << gate.targets[0];
      for (std::size_t i = 0; i < size; ++i) {
        if (!(i & mask)) std::swap(amps_[i], amps_[i | mask]);
      }
      break;
    }
    case GateKind::ControlledPhase: {
      const std::uint64_t ma = std::uint64_t{1} << gate.targets[0];
      const std::uint64_t mb = std::uint64_t{1} << gate.targets[1];
      const std::complex<double> phase = std::polar(1.0, gate.angle);
      for (std::size_t i = 0; i < size; ++i) {
        if ((i & ma) && (i & mb)) amps_[i] *= phase;
      }
      break;
    }
    case GateKind::Swap: {
      const std::uint64_t ma = std::uint64_t{1} << gate.targets[0];
      const std::uint64_t mb = std::uint64_t{1} << gate.targets[1];
      for (std::size_t i = 0; i < size; ++i) {
        if ((i & ma) && !(i & mb)) std::swap(amps_[i], amps_[i ^ ma ^ mb]);
      }
      break;
    }
    case GateKind::Perm: {
      const std::uint64_t tmask = mask_of(gate.targets);
      const std::uint64_t cmask = mask_of(gate.controls);
      const std::size_t w = gate.targets.size();
      std::vector<std::uint64_t> offsets(std::size_t{1} << w);
      for (std::uint32_t u = 0; u < offsets.size(); ++u) {
        offsets[u] = scatter_bits(u, gate.targets);
      }
      std::vector<std::complex<double>> scratch(offsets.size());
      for (std::size_t i = 0; i < size; ++i) {
        if ((i & tmask) != 0 || (i & cmask) != cmask) continue;
        for (std::uint32_t u = 0; u < offsets.size(); ++u) {
          scratch[u] = amps_[i | offsets[u]];
        }
        for (std::uint32_t u = 0; u < offsets.size(); ++u) {
          amps_[i | offsets[gate.table[u]]] = scratch[u];
        }
      }
      break;
    }
    case GateKind::AmpInit: {
      const std::uint64_t tmask = mask_of(gate.targets);
      double stray = 0.0;
      for (std::size_t i = 0; i < size; ++i) {
        if (i & tmask) stray += std::norm(amps_[i]);
      }
      if (stray > kNormTolerance) {
        throw std::logic_error("amp_init applied to targets not in |0...0>");
      }
      std::vector<std::uint64_t> offsets(gate.amplitudes.size());
      for (std::uint32_t u = 0; u < offsets.size(); ++u) {
        offsets[u] = scatter_bits(u, gate.targets);
      }
      for (std::size_t i = 0; i < size; ++i) {
        if (i & tmask) continue;
        const auto base = amps_[i];
        for (std::uint32_t u = 0; u < offsets.size(); ++u) {
          amps_[i | offsets[u]] = base * gate.amplitudes[u];
        }
      }
      break;
    }
  }
}

StateVector run(const Circuit& circuit) {
  if (circuit.num_qubits > kMaxQubits) {
    throw TooManyQubitsError("run: circuit has " + std::to_string(circuit.num_qubits) +
                             " qubits");
  }
  StateVector state(circuit.num_qubits);
  for (const Gate& gate : circuit.gates) {
    state.apply(gate);
    if (std::abs(state.norm() - 1.0) > kNormTolerance) {
      throw std::logic_error("run: state norm drifted past tolerance");
    }
  }
  return state;
}

namespace {

void apply_pauli(StateVector& state, int pauli, int qubit) {
  auto& amps = state.amplitudes();
  const std::uint64_t mask = std::uint64_t{1} << qubit;
  const std::complex<double> im{0.0, 1.0};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    auto& a = amps[i];
    auto& b = amps[i | mask];
    switch (pauli) {
      case 0:  // X
        std::swap(a, b);
        break;
      case 1: {  // Y
        const auto a0 = a;
        a = -im * b;
        b = im * a0;
        break;
      }
      default:  // Z
        b = -b;
        break;
    }
  }
}

}  // namespace

StateVector run_trajectory(const Circuit& circuit, const NoiseSpec& noise, Rng& rng) {
  if (circuit.num_qubits > kMaxQubits) {
    throw TooManyQubitsError("run_trajectory: circuit has " +
                             std::to_string(circuit.num_qubits) + " qubits");
  }
  StateVector state(circuit.num_qubits);
  for (const Gate& gate : circuit.gates) {
    state.apply(gate);
    if (noise.p > 0.0) {
      for (int q : gate.targets) {
        if (rng.next_double() < noise.p) {
          apply_pauli(state, static_cast<int>(rng.next_below(3)), q);
        }
      }
      for (int q : gate.controls) {
        if (rng.next_double() < noise.p) {
          apply_pauli(state, static_cast<int>(rng.next_below(3)), q);
        }
      }
    }
  }
  return state;
}

std::uint64_t run_basis(const Circuit& circuit, std::uint64_t input) {
  std::uint64_t index = input;
  for (const Gate& gate : circuit.gates) {
    switch (gate.kind) {
      case GateKind::X:
        index ^= std::uint64_t{1} << gate.targets[0];
        break;
      case GateKind::Perm: {
        const std::uint64_t cmask = mask_of(gate.controls);
        if ((index & cmask) != cmask) break;
        const std::uint32_t u = gather_bits(index, gate.targets);
        index = (index & ~mask_of(gate.targets)) | scatter_bits(gate.table[u], gate.targets);
        break;
      }
      default:
        throw std::invalid_argument("run_basis: circuit mixes amplitudes");
    }
  }
  return index;
}

namespace {

std::string format_outcome(std::uint64_t value, int bits) {
  std::string s(bits, '0');
  for (int i = 0; i < bits; ++i) {
    if ((value >> (bits - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

std::vector<double> marginal_vector(const StateVector& state, const std::vector<int>& qubits) {
  if (qubits.size() > 20) {
    throw std::invalid_argument("distribution: marginal over too many qubits");
  }
  const int K = static_cast<int>(qubits.size());
  std::vector<double> probs(std::size_t{1} << K, 0.0);
  const auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p == 0.0) continue;
    std::uint64_t out = 0;
    for (int k = 0; k < K; ++k) {
      out |= ((i >> qubits[k]) & 1u) << (K - 1 - k);
    }
    probs[out] += p;
  }
  return probs;
}

}  // namespace

OutcomeDistribution distribution(const StateVector& state, const std::vector<int>& qubits) {
  const auto probs = marginal_vector(state, qubits);
  OutcomeDistribution dist;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    dist[format_outcome(v, static_cast<int>(qubits.size()))] = probs[v];
  }
  return dist;
}

std::vector<std::string> sample_outcomes(const StateVector& state,
                                         const std::vector<int>& qubits, long long shots,
                                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  const auto probs = marginal_vector(state, qubits);
  std::vector<double> cum(probs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    total += probs[i];
    cum[i] = total;
  }
  Rng rng(seed);
  std::vector<std::string> outcomes;
  outcomes.reserve(static_cast<std::size_t>(shots));
  for (long long shot = 0; shot < shots; ++shot) {
    const double u = rng.next_double() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const std::size_t idx = std::min<std::size_t>(it - cum.begin(), probs.size() - 1);
    outcomes.push_back(format_outcome(idx, static_cast<int>(qubits.size())));
  }
  return outcomes;
}

std::vector<std::string> sample_outcomes(const Circuit& circuit, const NoiseSpec& noise,
                                         const std::vector<int>& qubits, long long shots) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  Rng rng(noise.seed);
  std::vector<std::string> outcomes;
  outcomes.reserve(static_cast<std::size_t>(shots));
  for (long long shot = 0; shot < shots; ++shot) {
    StateVector state = run_trajectory(circuit, noise, rng);
    const auto probs = marginal_vector(state, qubits);
    double total = 0.0;
    for (double p : probs) total += p;
    double u = rng.next_double() * total;
    std::size_t idx = 0;
    for (; idx + 1 < probs.size(); ++idx) {
      u -= probs[idx];
      if (u <= 0.0) break;
    }
    outcomes.push_back(format_outcome(idx, static_cast<int>(qubits.size())));
  }
  return outcomes;
}

Counts sample(const StateVector& state, const std::vector<int>& qubits, long long shots,
              std::uint64_t seed) {
  Counts counts;
  for (const std::string& s : sample_outcomes(state, qubits, shots, seed)) counts[s] += 1;
  return counts;
}

Counts sample(const Circuit& circuit, const NoiseSpec& noise, const std::vector<int>& qubits,
              long long shots) {
  Counts counts;
  for (const std::string& s : sample_outcomes(circuit, noise, qubits, shots)) counts[s] += 1;
  return counts;
}

OutcomeDistribution analytic_oracle(const FactoringParams& params, const InitMode& init_mode) {
  const int d = params.d;
  const std::int64_t D = params.D;
  double grid = 1.0;
  for (int i = 0; i < d; ++i) grid *= static_cast<double>(D);
  if (grid > 65536.0) throw TooLargeError("analytic_oracle: D^d exceeds 65536");
  const auto total_points = static_cast<std::size_t>(grid);

  std::vector<double> amp(static_cast<std::size_t>(D));
  if (init_mode.kind == InitMode::Kind::Uniform || init_mode.top_qubits == 0) {
    std::fill(amp.begin(), amp.end(), 1.0 / std::sqrt(static_cast<double>(D)));
  } else {
    amp = gaussian_profile(params.R, D, init_mode.top_qubits).amplitudes;
  }

  // f(z) = prod a_i^{z_i} mod N for every grid point, plus its init amplitude.
  std::vector<std::int64_t> f(total_points);
  std::vector<double> weight(total_points);
  for (std::size_t flat = 0; flat < total_points; ++flat) {
    std::size_t rest = flat;
    std::int64_t value = 1;
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto zi = static_cast<std::int64_t>(rest % static_cast<std::size_t>(D));
      rest /= static_cast<std::size_t>(D);
      value = value * mod_pow(params.squares[i], zi, params.N).value() % params.N;
      w *= amp[static_cast<std::size_t>(zi)];
    }
    f[flat] = value;
    weight[flat] = w;
  }

  std::vector<std::complex<double>> roots(static_cast<std::size_t>(D));
  for (std::int64_t r = 0; r < D; ++r) {
    roots[static_cast<std::size_t>(r)] =
        std::polar(1.0, 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(D));
  }

  OutcomeDistribution dist;
  std::vector<std::complex<double>> bucket(static_cast<std::size_t>(params.N));
  double total_mass = 0.0;
  std::vector<std::pair<std::string, double>> rows;
  for (std::size_t wflat = 0; wflat < total_points; ++wflat) {
    std::vector<std::int64_t> wv(d);
    std::size_t rest = wflat;
    for (int i = 0; i < d; ++i) {
      wv[i] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(D));
      rest /= static_cast<std::size_t>(D);
    }
    std::fill(bucket.begin(), bucket.end(), std::complex<double>{});
    for (std::size_t zflat = 0; zflat < total_points; ++zflat) {
      std::size_t zrest = zflat;
      std::int64_t phase = 0;
      for (int i = 0; i < d; ++i) {
        const auto zi = static_cast<std::int64_t>(zrest % static_cast<std::size_t>(D));
        zrest /= static_cast<std::size_t>(D);
        phase += wv[i] * zi;
      }
      bucket[static_cast<std::size_t>(f[zflat])] +=
          weight[zflat] * roots[static_cast<std::size_t>(phase % D)];
    }
    double p = 0.0;
    for (const auto& b : bucket) p += std::norm(b);
    total_mass += p;
    std::string key;
    for (int i = 0; i < d; ++i) {
      key += format_outcome(static_cast<std::uint64_t>(wv[i]), params.log_D);
    }
    rows.emplace_back(std::move(key), p);
  }
  for (auto& [key, p] : rows) dist[key] = p / total_mass;
  return dist;
}

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double sum = 0.0;
  for (const auto& [key, pa] : a) {
    const auto it = b.find(key);
    sum += std::abs(pa - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, pb] : b) {
    if (!a.count(key)) sum += pb;
  }
  return 0.5 * sum;
}

std::string counts_to_json(const Counts& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : counts) j[key] = value;
  return j.dump(2);
}

std::string counts_to_csv(const Counts& counts) {
  std::ostringstream out;
  out << "bitstring,count\n";
  for (const auto& [key, value] : counts) out << key << ',' << value << "\n";
  return out.str();
}

std::string distribution_to_json(const OutcomeDistribution& dist) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : dist) j[key] = value;
  return j.dump(2);
}

std::string distribution_to_csv(const OutcomeDistribution& dist) {
  std::ostringstream out;
  out << "bitstring,probability\n";
  char buf[64];
  for (const auto& [key, value] : dist) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << key << ',' << buf << "\n";
  }
  return out.str();
}

}  // namespace regevlab
