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

// Integration gate for the whole workbench: every check below pins a
// criterion of the build contract, runs it at full strength, and prints one
// pass/fail line. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "regevlab/costmodel.hpp"
#include "regevlab/lattice.hpp"
#include "regevlab/simulator.hpp"

using namespace regevlab;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

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

std::uint64_t read_bits(std::uint64_t index, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    out |= ((index >> qubits[i]) & 1u) << (qubits.size() - 1 - i);
  }
  return out;
}

std::int64_t f_of_z(const FactoringParams& p, const std::vector<std::int64_t>& z) {
  Residue prod(1, p.N);
  for (int i = 0; i < p.d; ++i) prod = prod * mod_pow(p.squares[i], z[i], p.N);
  return prod.value();
}

std::vector<std::string> top_keys(const OutcomeDistribution& dist, std::size_t count) {
  std::vector<std::pair<std::string, double>> rows(dist.begin(), dist.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < count && i < rows.size(); ++i) keys.push_back(rows[i].first);
  std::sort(keys.begin(), keys.end());
  return keys;
}

const std::vector<std::string> kPeaks8 = {"000000", "100100", "001111",
                                          "111001", "101011", "011101"};

double peak_mass(const OutcomeDistribution& dist) {
  double mass = 0.0;
  for (const auto& key : kPeaks8) mass += dist.at(key);
  return mass;
}

// ---- criterion 1: six-row strategy table, exact ----
void criterion_table2(std::ostringstream& detail) {
  const long long expected[6][6] = {
      // m, direct regs, direct mults, simple regs, simple mults as below
      {3, 4, 5, 3, 5, 5},      {7, 8, 13, 5, 17, 19},     {15, 16, 29, 7, 45, 65},
      {31, 32, 61, 11, 107, 211}, {63, 64, 125, 15, 221, 665}, {127, 128, 253, 22, 471, 2059},
  };
  const int simple_regs[6] = {3, 5, 7, 11, 15, 22};
  const int binary_regs[6] = {3, 4, 5, 6, 7, 8};
  int checked = 0;
  for (int i = 0; i < 6; ++i) {
    const int m = static_cast<int>(expected[i][0]);
    const auto direct = validate(schedule_direct(m));
    require(direct.registers == expected[i][1] && direct.squarings == expected[i][2],
            "direct row mismatch at m=" + std::to_string(m));
    const int k = static_cast<int>(std::sqrt(static_cast<double>(m + 1)));
    const auto simple = validate(schedule_simple(m, k));
    require(simple.registers == simple_regs[i] && simple.squarings == expected[i][4],
            "simple row mismatch at m=" + std::to_string(m));
    const auto binary = validate(schedule_binary(m));
    require(binary.registers == binary_regs[i] && binary.squarings == expected[i][5],
            "binary row mismatch at m=" + std::to_string(m));
    checked += 3;
  }
  detail << checked << "/18 (registers, mults) pairs exact";
}

// ---- criterion 2: squaring/controlled-U triples for m in {3,5,7} ----
void criterion_table4(std::ostringstream& detail) {
  const struct {
    int m, k, regs;
    long long sq, cu;
  } simple_rows[] = {
      {3, 2, 3, 5, 9}, {5, 2, 4, 11, 15}, {5, 3, 4, 11, 15}, {7, 2, 5, 17, 21}, {7, 4, 5, 17, 21},
  };
  for (const auto& row : simple_rows) {
    const auto cost = validate(schedule_simple(row.m, row.k));
    require(cost.registers == row.regs && cost.squarings == row.sq &&
                cost.controlled_u == row.cu && cost.large_mults == row.sq,
            "simple triple mismatch at m=" + std::to_string(row.m) +
                " k=" + std::to_string(row.k));
  }
  const auto binary7 = validate(schedule_binary(7));
  require(binary7.registers == 4 && binary7.squarings == 19 && binary7.controlled_u == 27,
          "binary m=7 triple mismatch");
  const struct {
    int m, regs;
    long long sq, cu;
  } direct_rows[] = {{3, 4, 5, 7}, {5, 6, 9, 11}, {7, 8, 13, 15}};
  for (const auto& row : direct_rows) {
    const auto cost = validate(schedule_direct(row.m));
    require(cost.registers == row.regs && cost.squarings == row.sq &&
                cost.controlled_u == row.cu,
            "direct triple mismatch at m=" + std::to_string(row.m));
  }
  detail << "9 triples exact (simple x5, binary m=7, direct x3)";
}

// ---- criterion 3: closed forms vs schedules over the full range ----
void criterion_closed_forms(std::ostringstream& detail) {
  long long pairs = 0;
  for (int m = 1; m <= 200; ++m) {
    for (int k = 2; k <= m + 1; ++k) {
      const auto cost = validate(schedule_simple(m, k));
      require(cost.registers == s_simple(m, k),
              "space form mismatch at m=" + std::to_string(m) + " k=" + std::to_string(k));
      require(cost.squarings == t_simple(m, k),
              "time form mismatch at m=" + std::to_string(m) + " k=" + std::to_string(k));
      require(t_simple(m, k) <= 4ll * m - 2,
              "4m-2 bound violated at m=" + std::to_string(m) + " k=" + std::to_string(k));
      ++pairs;
    }
  }
  long long recursive_points = 0;
  for (int k = 2; k <= 200; ++k) {
    for (long long total = k; total - 1 <= 200; total *= k) {
      const int m = static_cast<int>(total - 1);
      if (m < 1) continue;
      const auto cost = validate(schedule_kary(m, k));
      require(cost.squarings <= t_rec_bound(m, k),
              "recursion bound violated at m=" + std::to_string(m) +
                  " k=" + std::to_string(k));
      require(cost.registers == s_rec(m, k),
              "recursion space mismatch at m=" + std::to_string(m) +
                  " k=" + std::to_string(k));
      ++recursive_points;
    }
  }
  detail << pairs << " simple (m,k) pairs equal, " << recursive_points
         << " recursion points bounded";
}

// ---- criterion 4: exhaustive search certifies the space threshold ----
void criterion_search(std::ostringstream& detail) {
  for (int r = 2; r <= 4; ++r) {
    const int feasible = (1 << (r - 1)) - 1;
    const auto found = optimal_search(feasible, r);
    require(found.has_value(),
            "search failed at m=" + std::to_string(feasible) + " r=" + std::to_string(r));
    require(validate(*found).registers <= r, "search schedule exceeds register cap");
    require(min_registers(feasible) == r, "closed-form bound mismatch");
    const auto blocked = optimal_search(feasible + 1, r);
    require(!blocked.has_value(),
            "search should fail at m=" + std::to_string(feasible + 1) +
                " r=" + std::to_string(r));
  }
  detail << "thresholds 1|2, 3|4, 7|8 certified for 2, 3, 4 registers";
}

// ---- criterion 5: every modexp circuit computes f and clears ancillas ----
void criterion_uncomputation(std::ostringstream& detail) {
  long long states = 0;
  for (std::int64_t D : {8, 16}) {
    ParamOverrides o;
    o.D = D;
    const auto p = derive_params(35, o);
    const auto enc = orbit_residues(p);
    const int m = p.log_D - 1;
    std::vector<Circuit> circuits;
    circuits.push_back(build_modexp_precompute(p, enc));
    circuits.push_back(build_modexp_square_multiply(p, schedule_direct(m), enc));
    const int k = static_cast<int>(std::sqrt(static_cast<double>(m + 1)));
    circuits.push_back(build_modexp_square_multiply(p, schedule_simple(m, k), enc));
    circuits.push_back(build_modexp_square_multiply(p, schedule_binary(m), enc));
    for (const auto& circuit : circuits) {
      for (std::int64_t z1 = 0; z1 < D; ++z1) {
        for (std::int64_t z2 = 0; z2 < D; ++z2) {
          const std::vector<std::int64_t> z = {z1, z2};
          const std::uint64_t in = control_index(p, z);
          const std::uint64_t out = run_basis(circuit, in);
          for (int dim = 0; dim < p.d; ++dim) {
            require(read_bits(out, circuit.control_blocks[dim]) ==
                        read_bits(in, circuit.control_blocks[dim]),
                    "control register disturbed");
          }
          require(read_bits(out, circuit.result_register) == enc.encode(f_of_z(p, z)),
                  "result register wrong at z=(" + std::to_string(z1) + "," +
                      std::to_string(z2) + ")");
          for (const auto& ancilla : circuit.ancilla_registers) {
            require(read_bits(out, ancilla) == 0, "ancilla register not cleared");
          }
          ++states;
        }
      }
      // Dense-simulator spot check on two basis states per circuit.
      for (std::uint64_t probe : {1ull, 2ull}) {
        const std::int64_t z1 = static_cast<std::int64_t>(probe) % D;
        const std::int64_t z2 = static_cast<std::int64_t>(probe * 5) % D;
        const std::uint64_t in = control_index(p, {z1, z2});
        StateVector sv(circuit.num_qubits);
        for (int q = 0; q < circuit.num_qubits; ++q) {
          if ((in >> q) & 1) sv.apply(Gate::x(q));
        }
        for (const Gate& g : circuit.gates) sv.apply(g);
        const std::uint64_t expect = run_basis(circuit, in);
        require(std::abs(sv.amplitudes()[expect] - 1.0) < 1e-9,
                "dense simulation disagrees with basis path");
      }
    }
  }
  detail << states << " basis states across 8 circuits verified";
}

// ---- criterion 6: noiseless peaks and architecture equivalence ----
void criterion_peaks(std::ostringstream& detail) {
  const auto p8 = derive_params(35);
  FullMethod pre;
  pre.kind = FullMethod::Kind::Precompute;
  const auto nine = build_full(p8, pre, InitMode::uniform());
  require(nine.num_qubits == 9, "precompute circuit should use 9 qubits");
  const auto dist9 = distribution(run(nine), nine.control_qubits());

  auto expected = kPeaks8;
  std::sort(expected.begin(), expected.end());
  require(top_keys(dist9, 6) == expected, "peak set mismatch on the 8-point grid");
  std::vector<std::pair<std::string, double>> rows(dist9.begin(), dist9.end());
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  require(rows[5].second > rows[6].second * 1.5, "peaks are not separated");

  const auto oracle9 = analytic_oracle(p8, InitMode::uniform());
  const double tv9 = total_variation(dist9, oracle9);
  require(tv9 <= 1e-9, "gate-level vs oracle TV too large");

  ParamOverrides o16;
  o16.D = 16;
  const auto p16 = derive_params(35, o16);
  FullMethod sq17;
  sq17.kind = FullMethod::Kind::SquareMultiply;
  sq17.strategy_name = "simple";
  sq17.k = 2;
  FullMethod sq20;
  sq20.kind = FullMethod::Kind::SquareMultiply;
  sq20.strategy_name = "direct";
  const auto c17 = build_full(p16, sq17, InitMode::uniform());
  const auto c20 = build_full(p16, sq20, InitMode::uniform());
  require(c17.num_qubits == 17 && c20.num_qubits == 20, "register-reuse widths wrong");
  const auto d17 = distribution(run(c17), c17.control_qubits());
  const auto d20 = distribution(run(c20), c20.control_qubits());
  const double tv_pair = total_variation(d17, d20);
  require(tv_pair <= 1e-9, "17- vs 20-qubit distributions differ");
  const double tv16 = total_variation(d17, analytic_oracle(p16, InitMode::uniform()));
  require(tv16 <= 1e-9, "16-point grid vs oracle TV too large");
  detail << "peaks exact; TV(gate,oracle)=" << tv9 << ", TV(17q,20q)=" << tv_pair;
}

// ---- criterion 7: worked post-processing example ----
void criterion_postprocess(std::ostringstream& detail) {
  const auto p = derive_params(35);
  const std::vector<Sample> samples = {{{4, 4}, 8}, {{1, 7}, 8}, {{3, 5}, 8}, {{0, 0}, 8}};
  const auto embedding = build_embedding(samples, p);
  const auto reduced = lll_reduce(embedding);

  // Reference reduced basis for these four samples; compared via lattice
  // equality (HNF) since LLL row order is tie-dependent.
  const std::vector<std::vector<int>> reference_reduced = {
      {-1, -1, 0, 0, 0, 0}, {1, -1, 0, 2, -2, 0}, {1, 0, 4, 1, 3, 0},
      {-1, 0, 4, -1, -3, 0}, {-3, 3, 0, 2, -2, 0}, {0, 0, 0, 0, 0, 8},
  };
  LatticeBasis reference_basis;
  for (const auto& row : reference_reduced) {
    reference_basis.rows.emplace_back(row.begin(), row.end());
  }
  require(hermite_normal_form(reduced) == hermite_normal_form(embedding),
          "LLL changed the lattice");
  require(hermite_normal_form(reduced) == hermite_normal_form(reference_basis),
          "reduced basis disagrees with the reference lattice");

  const auto result = postprocess(samples, p);
  require(result.factors.has_value(), "worked example did not factor");
  require(result.factors->first == 5 && result.factors->second == 7, "wrong factors");
  detail << "factors (5, 7), HNF matches the reference reduced basis";
}

// ---- criterion 8: end-to-end Monte Carlo success rate ----
void criterion_monte_carlo(std::ostringstream& detail) {
  const auto p = derive_params(35);
  FullMethod pre;
  pre.kind = FullMethod::Kind::Precompute;
  const auto circuit = build_full(p, pre, InitMode::uniform());
  const auto state = run(circuit);
  const auto ctrl = circuit.control_qubits();
  int successes = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const auto outcomes = sample_outcomes(state, ctrl, p.num_samples, 1 + trial);
    std::vector<Sample> samples;
    for (const std::string& bits : outcomes) {
      Sample s;
      s.denominator = p.D;
      for (int dim = 0; dim < p.d; ++dim) {
        std::int64_t value = 0;
        for (int pos = 0; pos < p.log_D; ++pos) {
          value = value * 2 + (bits[dim * p.log_D + pos] == '1' ? 1 : 0);
        }
        s.numerators.push_back(value);
      }
      samples.push_back(std::move(s));
    }
    const auto result = postprocess(samples, p);
    if (result.factors && result.factors->first == 5 && result.factors->second == 7) {
      ++successes;
    }
    if (result.factors) {
      require(result.factors->first * result.factors->second == 35,
              "postprocess returned a non-factorization");
    }
  }
  require(successes >= 25, "success rate below 25%: " + std::to_string(successes) + "/100");
  detail << "measured success rate " << successes << "/100 (bound: 25)";
}

// ---- criterion 9: noise degrades peak mass monotonically ----
void criterion_noise(std::ostringstream& detail) {
  const auto p = derive_params(35);
  FullMethod pre;
  pre.kind = FullMethod::Kind::Precompute;
  const auto circuit = build_full(p, pre, InitMode::uniform());
  const auto ctrl = circuit.control_qubits();
  const double noiseless = peak_mass(distribution(run(circuit), ctrl));

  const int trajectories = 3000;
  auto mean_sem = [&](double pauli_p, std::uint64_t seed) {
    Rng rng(seed);
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < trajectories; ++t) {
      const auto state = run_trajectory(circuit, NoiseSpec{pauli_p, 0}, rng);
      const double mass = peak_mass(distribution(state, ctrl));
      sum += mass;
      sum2 += mass * mass;
    }
    const double mean = sum / trajectories;
    const double var = std::max(sum2 / trajectories - mean * mean, 0.0);
    return std::make_pair(mean, std::sqrt(var / trajectories));
  };
  const auto [m_low, s_low] = mean_sem(0.001, 101);
  const auto [m_high, s_high] = mean_sem(0.01, 202);
  require(noiseless - m_low > 3.0 * s_low,
          "p=0.001 peak mass not below noiseless at 3 sigma");
  require(m_low - m_high > 3.0 * std::sqrt(s_low * s_low + s_high * s_high),
          "peak mass not decreasing in p at 3 sigma");
  detail << "mass " << noiseless << " -> " << m_low << " (p=0.001) -> " << m_high
         << " (p=0.01), 3-sigma separated";

  // Register-reuse comparison under noise: reported, not asserted.
  ParamOverrides o16;
  o16.D = 16;
  const auto p16 = derive_params(35, o16);
  FullMethod sq17;
  sq17.kind = FullMethod::Kind::SquareMultiply;
  sq17.strategy_name = "simple";
  sq17.k = 2;
  FullMethod sq20;
  sq20.kind = FullMethod::Kind::SquareMultiply;
  sq20.strategy_name = "direct";
  const auto c17 = build_full(p16, sq17, InitMode::uniform());
  const auto c20 = build_full(p16, sq20, InitMode::uniform());
  const auto peaks16 = top_keys(distribution(run(c17), c17.control_qubits()), 6);
  auto mass16 = [&](const Circuit& circuit16, std::uint64_t seed) {
    Rng rng(seed);
    const int runs = 40;
    double sum = 0.0;
    for (int t = 0; t < runs; ++t) {
      const auto state = run_trajectory(circuit16, NoiseSpec{0.005, 0}, rng);
      const auto dist = distribution(state, circuit16.control_qubits());
      for (const auto& key : peaks16) sum += dist.at(key);
    }
    return sum / runs;
  };
  std::cout << "  [REPORT] noisy register-reuse comparison at p=0.005, 40 trajectories:\n"
            << "           17-qubit target mass " << mass16(c17, 9)
            << " vs 20-qubit target mass " << mass16(c20, 9) << " (not asserted)\n";
}

// ---- criterion 10: large-instance sizing sanity ----
void criterion_sizing(std::ostringstream& detail) {
  require(regev_m(2048, 2.0) == 90, "m(2048, C=2) should be 90");
  long long best = 1 << 30;
  int best_k = 0;
  for (int k = 1; k <= 91; ++k) {
    const long long s = s_simple(90, k);
    if (s < best) {
      best = s;
      best_k = k;
    }
  }
  require(best == 19, "optimal simple register count should be 19");
  require(direct_cost(90).registers == 91, "direct register count should be 91 (m+1)");
  require(min_registers(90) == 8, "recursion floor should be 8 registers");
  detail << "n=2048, C=2: simple 19 regs (k=" << best_k << "), direct 91, floor 8";
}

struct Criterion {
  int id;
  std::string name;
  std::function<void(std::ostringstream&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "strategy table exactness", criterion_table2},
      {2, "squaring/controlled-U triples", criterion_table4},
      {3, "closed-form agreement", criterion_closed_forms},
      {4, "space lower-bound search", criterion_search},
      {5, "uncomputation correctness", criterion_uncomputation},
      {6, "noiseless peak reproduction", criterion_peaks},
      {7, "post-processing worked example", criterion_postprocess},
      {8, "end-to-end Monte Carlo", criterion_monte_carlo},
      {9, "noise monotonicity substitute", criterion_noise},
      {10, "large-instance sizing sanity", criterion_sizing},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    try {
      criterion.run(detail);
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      std::cout << "[PASS] criterion " << criterion.id << ": " << criterion.name << " — "
                << detail.str() << " (" << ms << " ms)\n";
    } catch (const std::exception& e) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      std::cout << "[FAIL] criterion " << criterion.id << ": " << criterion.name << " — "
                << e.what() << " (" << ms << " ms)\n";
      ++failures;
    }
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
