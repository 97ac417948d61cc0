/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 *
 * Batch front end: evaluates coherence diagnostics, battery sweeps, gate
 * bounds, and i.i.d. sum entropies from JSON input files and renders the
 * results as CSV or JSON tables.  Every run is fully determined by the
 * resolved configuration and the seed; the configuration is echoed into the
 * output.  Exit codes: 0 success, 2 schema violation, 3 numeric-cap abort,
 * 4 optimizer non-convergence (results are still written).
 */

#include <CLI11.hpp>

#include <gatecoh/battery.hpp>
#include <gatecoh/bounds.hpp>
#include <gatecoh/coherence.hpp>
#include <gatecoh/discrete_rv.hpp>
#include <gatecoh/io.hpp>
#include <gatecoh/observables.hpp>

#include <algorithm>
#include <clocale>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace gatecoh;
using Json = nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::string format;  // resolved to the per-command default when empty
  std::string out_path;
  std::uint64_t seed = 7;
};

struct CommonOpts {
  CLI::Option* config = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* out = nullptr;
};

CommonOpts add_common(CLI::App* sub, CommonArgs& c) {
  CommonOpts o;
  o.config = sub->add_option("--config", c.config_path,
                             "JSON config file mirroring the flags");
  o.seed = sub->add_option("--seed", c.seed, "random seed (default 7)");
  o.format = sub->add_option("--format", c.format, "output format: json|csv");
  o.out = sub->add_option("--out", c.out_path, "output file (default: stdout)");
  return o;
}

/** Fills flag variables from the config file, but never overrides a flag the
 *  user gave on the command line.  Unknown keys are schema errors. */
class ConfigMerge {
public:
  void load(const std::string& path) {
    cfg_ = load_json_file(path);
    if (!cfg_.is_object())
      throw schema_error("config file must hold a JSON object");
    active_ = true;
    used_.insert("config");
  }

  template <typename T>
  void take(const char* key, const CLI::Option* opt, T& var) {
    used_.insert(key);
    if (!active_ || opt->count() > 0 || !cfg_.contains(key)) return;
    try {
      var = cfg_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw schema_error(std::string("config key '") + key +
                         "' has the wrong type");
    }
  }

  void finish() const {
    if (!active_) return;
    for (const auto& [key, value] : cfg_.items())
      if (!used_.count(key))
        throw schema_error("unknown config key '" + key + "'");
  }

private:
  Json cfg_;
  bool active_ = false;
  std::set<std::string> used_;
};

std::string resolve_format(const std::string& given, const char* fallback) {
  const std::string format = given.empty() ? fallback : given;
  if (format != "json" && format != "csv")
    throw schema_error("format must be 'json' or 'csv'");
  return format;
}

void require_path(const std::string& path, const char* flag) {
  if (path.empty())
    throw schema_error(std::string("missing required option ") + flag);
}

void emit(const Table& table, const Json& meta, const std::string& format,
          const std::string& out_path) {
  const std::string payload = format == "csv"
                                  ? table_to_csv(table, meta)
                                  : table_to_json(table, meta).dump(2) + "\n";
  if (out_path.empty())
    std::cout << payload;
  else
    write_text_file(out_path, payload);
}

//=============================================================================
// coherence
//=============================================================================

struct CoherenceArgs {
  std::string state_path;
  std::string hamiltonian_path;
  CLI::Option* opt_state = nullptr;
  CLI::Option* opt_hamiltonian = nullptr;
};

int cmd_coherence(const CoherenceArgs& a, const CommonArgs& common,
                  const std::string& format) {
  const DensityOperator rho = state_from_json(load_json_file(a.state_path));
  const Hamiltonian h = hamiltonian_from_json(load_json_file(a.hamiltonian_path));

  const double coherence = entropic_coherence(rho, h);
  const double entropy = von_neumann_entropy(rho.matrix());
  const double twirled = von_neumann_entropy(twirl(rho, h).matrix());
  const bool incoherent = is_incoherent(rho, h);
  const Moments moments = energy_moments(rho, h);
  const double qfi = quantum_fisher_information(rho, h);

  Table table;
  table.columns = {"coherence_bits", "entropy",     "twirled_entropy",
                   "is_incoherent",  "mean_energy", "variance",
                   "qfi"};
  table.cells.push_back({coherence, entropy, twirled, incoherent, moments.mean,
                         moments.variance, qfi});

  // The output destination is deliberately not echoed: the same computation
  // must produce byte-identical output wherever it is written.
  const Json config{{"command", "coherence"},
                    {"state", a.state_path},
                    {"hamiltonian", a.hamiltonian_path},
                    {"seed", common.seed},
                    {"format", format}};
  emit(table, Json{{"config", config}}, format, common.out_path);
  return 0;
}

//=============================================================================
// battery-sweep
//=============================================================================

struct SweepArgs {
  std::string gate_path;
  std::vector<int> l_values;
  double omega = 1.0;
  int d_b = 0;
  int starts = 8;
  int max_iters = 500;
  std::string profile = "sine";
  CLI::Option* opt_gate = nullptr;
  CLI::Option* opt_l_values = nullptr;
  CLI::Option* opt_omega = nullptr;
  CLI::Option* opt_d_b = nullptr;
  CLI::Option* opt_starts = nullptr;
  CLI::Option* opt_max_iters = nullptr;
  CLI::Option* opt_profile = nullptr;
};

int cmd_battery_sweep(const SweepArgs& a, const CommonArgs& common,
                      const std::string& format) {
  require_path(a.gate_path, "--gate");
  const Matrix target = matrix_from_json(load_json_file(a.gate_path));
  if (target.rows() != 2)
    throw schema_error("battery-sweep: the target gate must be 2x2");
  if (a.l_values.empty())
    throw schema_error("missing required option --l-values");

  LadderSweepOptions opts;
  opts.target = target;
  opts.l_values = a.l_values;
  opts.d_b = a.d_b;
  opts.omega = a.omega;
  if (a.profile == "uniform")
    opts.profile = LadderProfile::uniform;
  else if (a.profile == "sine")
    opts.profile = LadderProfile::sine;
  else
    throw schema_error("profile must be 'uniform' or 'sine'");
  opts.wc.starts = a.starts;
  opts.wc.max_iters = a.max_iters;
  opts.wc.seed = common.seed;

  const GateInstance gate(
      Hamiltonian::from_energies((RealVector(2) << 0.0, a.omega).finished()),
      target);
  opts.bound_fn = [gate](double eps) {
    eps = std::clamp(eps, 1e-15, 1.0 - 1e-15);
    return coherence_lower_bound(gate, eps, BoundVariant::qubit).value_bits;
  };

  const std::vector<LadderSweepRow> rows = run_ladder_sweep(opts);

  Table table;
  table.columns = {"L",        "eps_choi",       "eps_wc_estimate",
                   "eps_wc_upper", "coherence_bits", "mean_energy",
                   "variance", "qfi",            "bound_value"};
  bool all_converged = true;
  for (const LadderSweepRow& row : rows) {
    table.cells.push_back({row.big_l, row.eps_choi, row.eps_wc_estimate,
                           row.eps_wc_upper, row.coherence_bits,
                           row.mean_energy, row.variance, row.qfi,
                           row.bound_value});
    all_converged = all_converged && row.converged;
  }

  const Json config{{"command", "battery-sweep"}, {"gate", a.gate_path},
                    {"l-values", a.l_values},     {"omega", a.omega},
                    {"d-b", a.d_b},               {"starts", a.starts},
                    {"max-iters", a.max_iters},   {"profile", a.profile},
                    {"seed", common.seed},        {"format", format}};
  emit(table, Json{{"config", config}, {"converged", all_converged}}, format,
       common.out_path);
  return all_converged ? 0 : 4;
}

//=============================================================================
// bounds
//=============================================================================

struct BoundsArgs {
  std::string gate_path;
  std::vector<double> eps;
  std::string variant = "general";
  double alpha = std::numeric_limits<double>::quiet_NaN();
  CLI::Option* opt_gate = nullptr;
  CLI::Option* opt_eps = nullptr;
  CLI::Option* opt_variant = nullptr;
  CLI::Option* opt_alpha = nullptr;
};

int cmd_bounds(const BoundsArgs& a, const CommonArgs& common,
               const std::string& format) {
  require_path(a.gate_path, "--gate");
  if (a.eps.empty()) throw schema_error("missing required option --eps");

  BoundVariant variant;
  if (a.variant == "general")
    variant = BoundVariant::general;
  else if (a.variant == "proportionate")
    variant = BoundVariant::proportionate;
  else if (a.variant == "qubit")
    variant = BoundVariant::qubit;
  else
    throw schema_error("variant must be 'general', 'proportionate', or 'qubit'");

  const bool alpha_defaulted = std::isnan(a.alpha);
  const double alpha = alpha_defaulted ? 1.0 : a.alpha;
  if (alpha_defaulted)
    std::cerr << "warning: --alpha not specified; defaulting to 1 "
                 "(polynomial degree of the battery spectral count)\n";

  const GateFile gf = gate_file_from_json(load_json_file(a.gate_path));
  R2SearchOptions opts;
  opts.seed = common.seed;

  Table table;
  table.columns = {"eps",
                   "r2_lower",
                   "lambda2_lower",
                   "sigma",
                   "sigma_prime",
                   "alpha",
                   "m_opt",
                   "coherence_bound_general",
                   "coherence_bound_proportionate",
                   "coherence_bound_qubit",
                   "dim_bound",
                   "variant",
                   "o1_omitted"};
  std::vector<Json> witnesses;
  for (const double eps : a.eps) {
    const BoundReport rep =
        evaluate_bounds(gf.gate, eps, alpha, variant, opts, gf.levels);
    const Json qubit_bound = rep.coherence_bound_qubit.has_value()
                                 ? Json(*rep.coherence_bound_qubit)
                                 : Json();
    table.cells.push_back({eps, rep.r2_lower, rep.lambda2_lower, rep.sigma,
                           rep.sigma_prime, rep.alpha, rep.m_opt,
                           rep.coherence_bound_general,
                           rep.coherence_bound_proportionate, qubit_bound,
                           rep.dim_bound, a.variant, rep.o1_omitted});
    witnesses.push_back(rep.witness.has_value()
                            ? Json{{"kind", rep.witness->kind},
                                   {"state", vector_to_json(rep.witness->state)}}
                            : Json());
  }

  const Json config{{"command", "bounds"},
                    {"gate", a.gate_path},
                    {"eps", a.eps},
                    {"variant", a.variant},
                    {"alpha", alpha},
                    {"alpha_defaulted", alpha_defaulted},
                    {"seed", common.seed},
                    {"format", format}};
  const Json meta{{"config", config}};
  if (format == "csv") {
    // The nested witness state is a JSON-only field.
    emit(table, meta, format, common.out_path);
  } else {
    Json j = table_to_json(table, meta);
    for (std::size_t r = 0; r < witnesses.size(); ++r)
      j["rows"][r]["witness"] = witnesses[r];
    const std::string payload = j.dump(2) + "\n";
    if (common.out_path.empty())
      std::cout << payload;
    else
      write_text_file(common.out_path, payload);
  }
  return 0;
}

//=============================================================================
// iid
//=============================================================================

struct IidArgs {
  std::string rv_path;
  std::vector<long long> n_values;
  std::string prepartition_path;
  CLI::Option* opt_rv = nullptr;
  CLI::Option* opt_n_values = nullptr;
  CLI::Option* opt_prepartition = nullptr;
};

int cmd_iid(const IidArgs& a, const CommonArgs& common,
            const std::string& format) {
  require_path(a.rv_path, "--rv");
  if (a.n_values.empty()) throw schema_error("missing required option --n-values");
  for (const long long n : a.n_values)
    if (n < 1) throw schema_error("summand counts must be positive");

  const DiscreteRV rv = rv_from_json(load_json_file(a.rv_path));

  std::optional<Prepartition> prep;
  if (!a.prepartition_path.empty()) {
    prep = prepartition_from_json(load_json_file(a.prepartition_path));
    validate_prepartition(*prep, rv.size());
  } else if (rv.size() >= 2) {
    const ScoredPrepartition best = best_certified_prepartition(rv);
    if (best.found) prep = best.prepartition;
  }

  Table table;
  table.columns = {"N", "exact_entropy", "bound", "gap"};
  for (const long long n : a.n_values) {
    if (!prep.has_value()) {
      table.cells.push_back({n, "error", "error", "error"});
      continue;
    }
    try {
      const SumStatistics stats = sum_statistics(rv, n);
      const EntropyBound bound = entropy_lower_bound(rv, n, *prep);
      table.cells.push_back({n, stats.entropy_bits, bound.value_bits,
                             stats.entropy_bits - bound.value_bits});
    } catch (const cap_error&) {
      table.cells.push_back({n, "skipped", "skipped", "skipped"});
    } catch (const error&) {
      table.cells.push_back({n, "error", "error", "error"});
    }
  }

  const Json config{{"command", "iid"},
                    {"rv", a.rv_path},
                    {"n-values", a.n_values},
                    {"prepartition-file", a.prepartition_path},
                    {"seed", common.seed},
                    {"format", format}};
  const Json prep_echo = prep.has_value() ? Json(prep->subsets) : Json();
  emit(table, Json{{"config", config}, {"prepartition", prep_echo}}, format,
       common.out_path);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"gatecoh: coherence budgets of energy non-preserving gates"};
  app.require_subcommand(1);

  CommonArgs common;
  CoherenceArgs coh;
  SweepArgs sweep;
  BoundsArgs bounds;
  IidArgs iid;

  CLI::App* sub_coherence = app.add_subcommand(
      "coherence", "coherence, entropy, and energy diagnostics of a state");
  coh.opt_state = sub_coherence->add_option("--state", coh.state_path,
                                            "state file (density or vector)");
  coh.opt_hamiltonian = sub_coherence->add_option(
      "--hamiltonian", coh.hamiltonian_path, "Hamiltonian file");
  const CommonOpts common_coherence = add_common(sub_coherence, common);

  CLI::App* sub_sweep = app.add_subcommand(
      "battery-sweep", "error vs. support-size sweep over ladder batteries");
  sweep.opt_gate =
      sub_sweep->add_option("--gate", sweep.gate_path, "2x2 target gate file");
  sweep.opt_l_values = sub_sweep
                           ->add_option("--l-values", sweep.l_values,
                                        "battery support sizes, comma separated")
                           ->delimiter(',');
  sweep.opt_omega =
      sub_sweep->add_option("--omega", sweep.omega, "ladder spacing (default 1)");
  sweep.opt_d_b = sub_sweep->add_option(
      "--d-b", sweep.d_b, "battery dimension (default: smallest that fits)");
  sweep.opt_starts = sub_sweep->add_option(
      "--starts", sweep.starts, "optimizer restarts per point (default 8)");
  sweep.opt_max_iters = sub_sweep->add_option(
      "--max-iters", sweep.max_iters, "optimizer iteration cap (default 500)");
  sweep.opt_profile = sub_sweep->add_option(
      "--profile", sweep.profile, "battery state profile: sine|uniform");
  const CommonOpts common_sweep = add_common(sub_sweep, common);

  CLI::App* sub_bounds = app.add_subcommand(
      "bounds", "asymmetry search and resource lower bounds for a gate");
  bounds.opt_gate =
      sub_bounds->add_option("--gate", bounds.gate_path, "gate instance file");
  bounds.opt_eps = sub_bounds
                       ->add_option("--eps", bounds.eps,
                                    "target infidelities, comma separated")
                       ->delimiter(',');
  bounds.opt_variant = sub_bounds->add_option(
      "--variant", bounds.variant, "bound variant: general|proportionate|qubit");
  bounds.opt_alpha = sub_bounds->add_option(
      "--alpha", bounds.alpha,
      "polynomial degree of the battery spectral count (default 1, warned)");
  const CommonOpts common_bounds = add_common(sub_bounds, common);

  CLI::App* sub_iid = app.add_subcommand(
      "iid", "exact i.i.d. sum entropies against the certified lower bound");
  iid.opt_rv = sub_iid->add_option("--rv", iid.rv_path, "random variable file");
  iid.opt_n_values = sub_iid
                         ->add_option("--n-values", iid.n_values,
                                      "summand counts, comma separated")
                         ->delimiter(',');
  iid.opt_prepartition = sub_iid->add_option(
      "--prepartition", iid.prepartition_path,
      "prepartition file (default: best certified prepartition)");
  const CommonOpts common_iid = add_common(sub_iid, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // flag misuse is a schema violation
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    ConfigMerge merge;
    if (!common.config_path.empty()) merge.load(common.config_path);

    if (sub == sub_coherence) {
      merge.take("state", coh.opt_state, coh.state_path);
      merge.take("hamiltonian", coh.opt_hamiltonian, coh.hamiltonian_path);
      merge.take("seed", common_coherence.seed, common.seed);
      merge.take("format", common_coherence.format, common.format);
      merge.take("out", common_coherence.out, common.out_path);
      merge.finish();
      require_path(coh.state_path, "--state");
      require_path(coh.hamiltonian_path, "--hamiltonian");
      return cmd_coherence(coh, common, resolve_format(common.format, "json"));
    }
    if (sub == sub_sweep) {
      merge.take("gate", sweep.opt_gate, sweep.gate_path);
      merge.take("l-values", sweep.opt_l_values, sweep.l_values);
      merge.take("omega", sweep.opt_omega, sweep.omega);
      merge.take("d-b", sweep.opt_d_b, sweep.d_b);
      merge.take("starts", sweep.opt_starts, sweep.starts);
      merge.take("max-iters", sweep.opt_max_iters, sweep.max_iters);
      merge.take("profile", sweep.opt_profile, sweep.profile);
      merge.take("seed", common_sweep.seed, common.seed);
      merge.take("format", common_sweep.format, common.format);
      merge.take("out", common_sweep.out, common.out_path);
      merge.finish();
      return cmd_battery_sweep(sweep, common,
                               resolve_format(common.format, "csv"));
    }
    if (sub == sub_bounds) {
      merge.take("gate", bounds.opt_gate, bounds.gate_path);
      merge.take("eps", bounds.opt_eps, bounds.eps);
      merge.take("variant", bounds.opt_variant, bounds.variant);
      merge.take("alpha", bounds.opt_alpha, bounds.alpha);
      merge.take("seed", common_bounds.seed, common.seed);
      merge.take("format", common_bounds.format, common.format);
      merge.take("out", common_bounds.out, common.out_path);
      merge.finish();
      return cmd_bounds(bounds, common, resolve_format(common.format, "json"));
    }
    merge.take("rv", iid.opt_rv, iid.rv_path);
    merge.take("n-values", iid.opt_n_values, iid.n_values);
    merge.take("prepartition", iid.opt_prepartition, iid.prepartition_path);
    merge.take("seed", common_iid.seed, common.seed);
    merge.take("format", common_iid.format, common.format);
    merge.take("out", common_iid.out, common.out_path);
    merge.finish();
    return cmd_iid(iid, common, resolve_format(common.format, "csv"));
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
