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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "regevlab/costmodel.hpp"
#include "regevlab/lattice.hpp"
#include "regevlab/params.hpp"
#include "regevlab/simulator.hpp"

namespace {

using namespace regevlab;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitNoFactor = 3;

// Flat JSON config: top-level scalars are global options, nested objects hold
// per-subcommand options.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j = nlohmann::json::parse(input);
    std::vector<CLI::ConfigItem> items;
    append(j, {}, items);
    return items;
  }

 private:
  static void append(const nlohmann::json& j, std::vector<std::string> parents,
                     std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto deeper = parents;
        deeper.push_back(key);
        append(value, deeper, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_string()) {
        item.inputs = {value.get<std::string>()};
      } else if (value.is_boolean()) {
        item.inputs = {value.get<bool>() ? "true" : "false"};
      } else {
        item.inputs = {value.dump()};
      }
      items.push_back(std::move(item));
    }
  }
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot move " + tmp + " to " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("REGEVLAB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

struct CommonSim {
  std::int64_t N = 0;
  std::int64_t D = 0;  // 0 = derived
  std::string params_file;
  std::string method = "precompute";
  std::string strategy = "simple";
  int k = 0;
  int ell = 0;
  std::string init = "uniform";
  int gauss_top = 1;
};

FactoringParams make_params(const CommonSim& cfg) {
  if (!cfg.params_file.empty()) {
    FactoringParams p = params_from_json(read_file(cfg.params_file));
    if (cfg.N != 0 && cfg.N != p.N) {
      throw std::invalid_argument("--N disagrees with the params file");
    }
    if (cfg.D != 0 && cfg.D != p.D) {
      throw std::invalid_argument("--D disagrees with the params file");
    }
    return p;
  }
  if (cfg.N == 0) throw std::invalid_argument("need --N or --params");
  ParamOverrides overrides;
  if (cfg.D > 0) overrides.D = cfg.D;
  return derive_params(cfg.N, overrides);
}

FullMethod make_method(const CommonSim& cfg) {
  FullMethod method;
  method.kind = cfg.method == "sqmul" ? FullMethod::Kind::SquareMultiply
                                      : FullMethod::Kind::Precompute;
  method.strategy_name = cfg.strategy;
  if (cfg.k > 0) method.k = cfg.k;
  if (cfg.ell > 0) method.ell = cfg.ell;
  return method;
}

InitMode make_init(const CommonSim& cfg) {
  if (cfg.init == "gaussian") return InitMode::gaussian_top(cfg.gauss_top);
  return InitMode::uniform();
}

std::vector<Sample> outcomes_to_samples(const std::vector<std::string>& outcomes,
                                        const FactoringParams& params) {
  std::vector<Sample> samples;
  samples.reserve(outcomes.size());
  for (const std::string& bits : outcomes) {
    Sample s;
    s.denominator = params.D;
    for (int dim = 0; dim < params.d; ++dim) {
      std::int64_t value = 0;
      for (int pos = 0; pos < params.log_D; ++pos) {
        value = value * 2 + (bits[dim * params.log_D + pos] == '1' ? 1 : 0);
      }
      s.numerators.push_back(value);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

int cmd_estimate(bool table2, bool tradeoff, bool shor_compare, int m, double C,
                 const std::string& strategy, int k, int ell, const std::string& format,
                 const std::string& out) {
  std::vector<CostPoint> rows;
  std::string content;
  if (table2) {
    std::vector<StrategyChoice> strategies = {{"direct", {}, {}}, {"simple", {}, {}},
                                              {"binary", {}, {}}};
    rows = scaling_table({3, 7, 15, 31, 63, 127}, strategies);
  } else if (tradeoff) {
    std::vector<StrategyChoice> strategies = {{"direct", {}, {}}};
    for (int kk : {2, 3, 4, 6, 8, 11, 16, 23, 32}) {
      if (kk <= m + 1) strategies.push_back({"simple", kk, {}});
    }
    for (int kk : {2, 3, 4, 6, 8, 16}) strategies.push_back({"kary", kk, {}});
    for (int ll : {2, 3}) strategies.push_back({"variable", {}, ll});
    rows = scaling_table({m}, strategies, /*include_bounds=*/true);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const CostPoint& a, const CostPoint& b) {
                       return a.registers < b.registers;
                     });
  } else if (shor_compare) {
    std::ostringstream csv;
    nlohmann::json arr = nlohmann::json::array();
    csv << "n,m,strategy,param,registers,mults,is_bound\n";
    for (int n : {128, 256, 512, 1024, 2048, 3072, 4096}) {
      const int mm = regev_m(n, C);
      std::vector<CostPoint> pts = scaling_table(
          {mm}, {{"direct", {}, {}}, {"simple", {}, {}}, {"binary", {}, {}}});
      pts.push_back({mm, "shor", std::nullopt, 0, shor_reference(n), false});
      for (const CostPoint& p : pts) {
        csv << n << ',' << p.m << ',' << p.strategy << ',';
        if (p.k_or_ell) csv << *p.k_or_ell;
        csv << ',' << p.registers << ',' << p.mults << ','
            << (p.bound ? "true" : "false") << "\n";
        arr.push_back({{"n", n},
                       {"m", p.m},
                       {"strategy", p.strategy},
                       {"param", p.k_or_ell ? nlohmann::json(*p.k_or_ell) : nlohmann::json()},
                       {"registers", p.registers},
                       {"mults", p.mults},
                       {"is_bound", p.bound}});
      }
    }
    content = format == "json" ? arr.dump(2) : csv.str();
    write_output(out, content);
    return 0;
  } else {
    StrategyChoice choice{strategy, k > 0 ? std::optional<int>(k) : std::nullopt,
                          ell > 0 ? std::optional<int>(ell) : std::nullopt};
    rows = scaling_table({m}, {choice});
  }
  content = format == "json" ? cost_table_to_json(rows) : cost_table_to_csv(rows);
  write_output(out, content);
  return 0;
}

int cmd_schedule(int m, const std::string& strategy, int k, int ell, bool verify,
                 const std::string& out) {
  StrategyChoice choice{strategy, k > 0 ? std::optional<int>(k) : std::nullopt,
                        ell > 0 ? std::optional<int>(ell) : std::nullopt};
  PebbleSchedule schedule = make_schedule(m, choice);
  write_output(out, schedule_to_text(schedule));
  if (verify) {
    ScheduleCost cost = validate(schedule);
    std::cout << "regs=" << cost.registers << " sq=" << cost.squarings
              << " cu=" << cost.controlled_u << "\n";
  }
  return 0;
}

int cmd_simulate(const CommonSim& cfg, long long shots, double noise_p, std::uint64_t seed,
                 const std::string& emit_samples, const std::string& format,
                 const std::string& out) {
  const FactoringParams params = make_params(cfg);
  const Circuit circuit = build_full(params, make_method(cfg), make_init(cfg));
  const std::vector<int> ctrl = circuit.control_qubits();

  if (shots == 0) {
    if (noise_p > 0) throw std::invalid_argument("exact distribution needs --noise-p 0");
    if (!emit_samples.empty()) {
      throw std::invalid_argument("--emit-samples needs --shots >= 1");
    }
    const StateVector state = run(circuit);
    const OutcomeDistribution dist = distribution(state, ctrl);
    write_output(out, format == "json" ? distribution_to_json(dist)
                                       : distribution_to_csv(dist));
    return 0;
  }

  std::vector<std::string> outcomes;
  if (noise_p > 0) {
    outcomes = sample_outcomes(circuit, NoiseSpec{noise_p, seed}, ctrl, shots);
  } else {
    const StateVector state = run(circuit);
    outcomes = sample_outcomes(state, ctrl, shots, seed);
  }
  Counts counts;
  for (const std::string& s : outcomes) counts[s] += 1;
  write_output(out, format == "json" ? counts_to_json(counts) : counts_to_csv(counts));
  if (!emit_samples.empty()) {
    const auto samples = outcomes_to_samples(outcomes, params);
    write_output(emit_samples, samples_to_text(samples, params.d, params.D));
  }
  return 0;
}

int cmd_factor(const CommonSim& cfg, int trials, std::uint64_t seed, double noise_p) {
  const FactoringParams params = make_params(cfg);
  const Circuit circuit = build_full(params, make_method(cfg), make_init(cfg));
  const std::vector<int> ctrl = circuit.control_qubits();
  std::optional<StateVector> state;
  if (noise_p == 0) state = run(circuit);

  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(trial);
    std::vector<std::string> outcomes;
    if (noise_p > 0) {
      outcomes = sample_outcomes(circuit, NoiseSpec{noise_p, trial_seed}, ctrl,
                                 params.num_samples);
    } else {
      outcomes = sample_outcomes(*state, ctrl, params.num_samples, trial_seed);
    }
    const PostprocessResult result = postprocess(outcomes_to_samples(outcomes, params), params);
    if (result.factors) {
      std::cout << params.N << " = " << result.factors->first << " × "
                << result.factors->second << "\n";
      std::cout << "trials: " << trial + 1 << "\n";
      return 0;
    }
  }
  std::cerr << "no factor found for " << params.N << " after " << trials << " trials\n";
  return kExitNoFactor;
}

int cmd_oracle(const CommonSim& cfg, const std::string& format, const std::string& out) {
  const FactoringParams params = make_params(cfg);
  const OutcomeDistribution dist = analytic_oracle(params, make_init(cfg));
  write_output(out, format == "json" ? distribution_to_json(dist)
                                     : distribution_to_csv(dist));
  return 0;
}

int cmd_postprocess(const std::string& samples_path, std::int64_t N, std::int64_t S_override) {
  const std::vector<Sample> samples = samples_from_text(read_file(samples_path));
  if (samples.empty()) throw std::invalid_argument("samples file holds no samples");
  ParamOverrides overrides;
  overrides.D = samples.front().denominator;
  if (S_override > 0) overrides.S = S_override;
  const FactoringParams params = derive_params(N, overrides);
  const PostprocessResult result = postprocess(samples, params);
  if (result.factors) {
    std::cout << params.N << " = " << result.factors->first << " × "
              << result.factors->second << "\n";
    return 0;
  }
  std::cerr << "no factor found (" << result.diagnostics.candidates_tested
            << " candidates tested, " << result.diagnostics.lattice_members
            << " lattice members)\n";
  return kExitNoFactor;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regevlab: pebble-game scheduling, circuit simulation, and lattice "
               "post-processing for small-instance quantum factoring"};
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "regevlab.json", "JSON config mirroring the flags");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = default_seed();
  std::string format = "csv";
  std::string out;
  app.add_option("--seed", seed, "global random seed (default $REGEVLAB_SEED or 0)");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out, "output file (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "emit resource tables");
  bool table2 = false, tradeoff = false, shor_compare = false;
  int est_m = 1, est_k = 0, est_ell = 0;
  double est_C = 2.2;
  std::string est_strategy = "direct";
  est->add_flag("--table2", table2, "preset: the six-row strategy comparison");
  est->add_flag("--tradeoff", tradeoff, "preset: space-time frontier at fixed m");
  est->add_flag("--shor-compare", shor_compare, "preset: scaling against the 2n reference");
  est->add_option("--m", est_m, "squaring count");
  est->add_option("--C", est_C, "grid-size constant");
  est->add_option("--strategy", est_strategy, "strategy name")
      ->check(CLI::IsMember({"direct", "simple", "binary", "kary", "variable"}));
  est->add_option("--k", est_k, "block size / arity");
  est->add_option("--ell", est_ell, "recursion depth");

  // schedule
  auto* sch = app.add_subcommand("schedule", "emit a pebble schedule");
  int sch_m = 1, sch_k = 0, sch_ell = 0;
  bool sch_verify = false;
  std::string sch_strategy = "simple";
  sch->add_option("--m", sch_m, "squaring count")->required();
  sch->add_option("--strategy", sch_strategy, "strategy name")
      ->check(CLI::IsMember({"direct", "simple", "binary", "kary", "variable"}));
  sch->add_option("--k", sch_k, "block size / arity");
  sch->add_option("--ell", sch_ell, "recursion depth");
  sch->add_flag("--verify", sch_verify, "re-validate and print the cost line");

  // simulate
  auto* sim = app.add_subcommand("simulate", "build and run a full circuit");
  CommonSim sim_cfg;
  long long sim_shots = 4096;
  double sim_noise = 0.0;
  std::string sim_emit;
  sim->add_option("--N", sim_cfg.N, "integer to factor");
  sim->add_option("--D", sim_cfg.D, "grid size override (power of two)");
  sim->add_option("--params", sim_cfg.params_file, "load instance parameters from JSON");
  sim->add_option("--method", sim_cfg.method, "modexp architecture")
      ->check(CLI::IsMember({"precompute", "sqmul"}));
  sim->add_option("--strategy", sim_cfg.strategy, "pebble strategy for sqmul")
      ->check(CLI::IsMember({"direct", "simple", "binary", "kary", "variable"}));
  sim->add_option("--k", sim_cfg.k, "block size / arity");
  sim->add_option("--ell", sim_cfg.ell, "recursion depth");
  sim->add_option("--init", sim_cfg.init, "initialization profile")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  sim->add_option("--gauss-top", sim_cfg.gauss_top, "shaped qubits per dimension");
  sim->add_option("--shots", sim_shots, "samples to draw; 0 dumps the exact distribution");
  sim->add_option("--noise-p", sim_noise, "per-gate Pauli probability");
  sim->add_option("--emit-samples", sim_emit, "also write a samples file for postprocess");

  // factor
  auto* fac = app.add_subcommand("factor", "run the full pipeline until factors appear");
  CommonSim fac_cfg;
  int fac_trials = 32;
  double fac_noise = 0.0;
  fac->add_option("--N", fac_cfg.N, "integer to factor");
  fac->add_option("--D", fac_cfg.D, "grid size override (power of two)");
  fac->add_option("--params", fac_cfg.params_file, "load instance parameters from JSON");
  fac->add_option("--method", fac_cfg.method, "modexp architecture")
      ->check(CLI::IsMember({"precompute", "sqmul"}));
  fac->add_option("--strategy", fac_cfg.strategy, "pebble strategy for sqmul")
      ->check(CLI::IsMember({"direct", "simple", "binary", "kary", "variable"}));
  fac->add_option("--k", fac_cfg.k, "block size / arity");
  fac->add_option("--ell", fac_cfg.ell, "recursion depth");
  fac->add_option("--trials", fac_trials, "trial budget");
  fac->add_option("--noise-p", fac_noise, "per-gate Pauli probability");

  // oracle
  auto* ora = app.add_subcommand("oracle", "emit the gate-free exact distribution");
  CommonSim ora_cfg;
  ora->add_option("--N", ora_cfg.N, "integer to factor");
  ora->add_option("--D", ora_cfg.D, "grid size override (power of two)");
  ora->add_option("--params", ora_cfg.params_file, "load instance parameters from JSON");
  ora->add_option("--method", ora_cfg.method, "accepted for symmetry; the oracle is "
                                              "architecture independent")
      ->check(CLI::IsMember({"precompute", "sqmul"}));
  ora->add_option("--init", ora_cfg.init, "initialization profile")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  ora->add_option("--gauss-top", ora_cfg.gauss_top, "shaped qubits per dimension");

  // postprocess
  auto* post = app.add_subcommand("postprocess", "recover factors from a samples file");
  std::string post_samples;
  std::int64_t post_N = 0, post_S = 0;
  post->add_option("--samples", post_samples, "samples file")->required();
  post->add_option("--N", post_N, "integer to factor")->required();
  post->add_option("--S", post_S, "embedding scale override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (est->parsed()) {
      return cmd_estimate(table2, tradeoff, shor_compare, est_m, est_C, est_strategy,
                          est_k, est_ell, format, out);
    }
    if (sch->parsed()) return cmd_schedule(sch_m, sch_strategy, sch_k, sch_ell, sch_verify, out);
    if (sim->parsed()) return cmd_simulate(sim_cfg, sim_shots, sim_noise, seed, sim_emit,
                                           format, out);
    if (fac->parsed()) return cmd_factor(fac_cfg, fac_trials, seed, fac_noise);
    if (ora->parsed()) return cmd_oracle(ora_cfg, format, out);
    if (post->parsed()) return cmd_postprocess(post_samples, post_N, post_S);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
