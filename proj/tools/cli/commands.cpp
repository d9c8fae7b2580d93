// Copyright 2026 The scorekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "scorekit/compatibility.hpp"
#include "scorekit/errors.hpp"

namespace scorekit::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Distribution& d) { return Json(d.vector()); }

// A rule spec, or a family spec resolved at `baseline`.
struct ResolvedRule {
  ScoringRule rule;
  Json spec;
};

ResolvedRule resolve_rule(const std::string& text, const std::string& baseline, std::size_t m) {
  const Json spec = load_json(text);
  if (!is_family_spec(spec)) {
    if (!baseline.empty()) throw InputError("--baseline applies only to weighted families");
    return {parse_rule(spec), spec};
  }
  if (baseline.empty()) throw InputError("a weighted family needs --baseline");
  const Vector q = parse_vector(baseline);
  if (q.size() != m) throw InputError("--baseline has " + std::to_string(q.size()) + " entries, expected " + std::to_string(m));
  return {parse_family(spec).member(make_distribution(q)), spec};
}

std::vector<long long> read_counts(const std::string& path, bool counts, std::size_t m) {
  const std::string content = read_file(path);
  if (counts) return parse_counts_csv(content, m);
  std::vector<long long> c(m, 0);
  for (int y : parse_outcomes_csv(content, m)) ++c[static_cast<std::size_t>(y - 1)];
  return c;
}

struct ScoreArgs {
  std::string rule, pred, baseline, input, out;
  bool counts = false;
};

int cmd_score(const ScoreArgs& a, std::ostream& err) {
  const Vector pv = parse_vector(a.pred);
  const std::size_t m = pv.size();
  if (m < 2) throw InputError("--pred needs at least two entries");
  const ResolvedRule rr = resolve_rule(a.rule, a.baseline, m);
  const Distribution p = make_distribution(pv);
  const std::vector<long long> counts = read_counts(a.input, a.counts, m);

  long long n = 0;
  for (long long c : counts) n += c;
  const std::vector<ScoreValue> per = rr.rule.outcome_scores(p.weights());

  Json per_json = Json::array();
  bool infinite = false;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    per_json.push_back(per[i].is_finite() ? Json(per[i].value()) : Json(nullptr));
    if (counts[i] == 0) continue;
    if (!per[i].is_finite()) {
      infinite = true;
    } else {
      total += static_cast<double>(counts[i]) * per[i].value();
    }
  }

  Json report = {{"rule", rr.spec},
                 {"prediction", p.vector()},
                 {"n", n},
                 {"per_outcome_scores", per_json},
                 {"total_score", infinite ? Json(nullptr) : Json(total)},
                 {"mean_score", infinite ? Json(nullptr) : Json(total / static_cast<double>(n))}};
  if (!a.baseline.empty()) report["baseline"] = parse_vector(a.baseline);
  validate_score_report(report);
  write_atomic(a.out, dump(report));
  if (infinite) {
    err << "error: score is minus infinity (zero forecast probability on an observed outcome)\n";
    return kExitDomain;
  }
  return kExitOk;
}

struct EstimateArgs {
  std::string rule, baseline, model, input, out;
  bool counts = false;
  int starts = OptimizerSettings{}.n_starts;
  int max_iters = OptimizerSettings{}.max_iters;
  double grad_tol = OptimizerSettings{}.grad_tol;
  std::uint64_t seed = OptimizerSettings{}.seed;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& err) {
  const ParametricModel model = parse_model_name(a.model);
  const std::size_t m = model.outcomes();
  const ResolvedRule rr = resolve_rule(a.rule, a.baseline, m);
  const Distribution r = from_counts(read_counts(a.input, a.counts, m));

  OptimizerSettings opts;
  opts.n_starts = a.starts;
  opts.max_iters = a.max_iters;
  opts.grad_tol = a.grad_tol;
  opts.seed = seed_override(a.seed);
  if (opts.n_starts <= 0 || opts.max_iters <= 0 || !(opts.grad_tol > 0.0)) throw InputError("invalid optimizer settings");

  const EstimationResult est = optimize_score(rr.rule, model, r, opts);
  const Json report = {{"rule", rr.spec},
                       {"model", model.name()},
                       {"r", r.vector()},
                       {"theta_hat", est.theta_hat},
                       {"p_hat", to_json(est.p_hat)},
                       {"score_at_opt", est.score_at_opt},
                       {"grad_norm", est.grad_norm},
                       {"well_behaved", std::string(to_string(est.well_behaved))},
                       {"restarts_agree", est.restarts_agree},
                       {"at_boundary", est.at_boundary},
                       {"iterations", est.iterations},
                       {"converged_starts", est.converged_starts},
                       {"seed", opts.seed}};
  validate_estimate_report(report);
  write_atomic(a.out, dump(report));
  if (est.well_behaved != WellBehaved::yes) {
    err << "warning: estimate is not known to be well behaved (" << to_string(est.well_behaved) << ")\n";
  }
  return kExitOk;
}

struct CompatArgs {
  std::string family, rule, out;
  int m = 3;
  int probes = 5;
  double tol = kCompatTolerance;
  std::uint64_t seed = 7;
};

int cmd_compat(const CompatArgs& a, std::ostream&) {
  if (a.m < 2) throw InputError("--m must be at least 2");
  if (a.probes <= 0) throw InputError("--probes must be positive");
  if (!(a.tol > 0.0)) throw InputError("--tol must be positive");
  const Json fspec = load_json(a.family);
  const Json rspec = load_json(a.rule);
  const WeightedFamily family = parse_family(fspec);
  const ScoringRule rule = parse_rule(rspec);
  const auto m = static_cast<std::size_t>(a.m);

  const std::uint64_t seed = seed_override(a.seed);
  std::mt19937_64 rng(seed);
  std::vector<Distribution> qs, rs;
  for (int k = 0; k < a.probes; ++k) qs.push_back(sample_interior(m, rng));
  for (int k = 0; k < a.probes; ++k) rs.push_back(sample_interior(m, rng));

  const CompatReport rep = check_compatibility(family, rule, qs, rs, a.tol);
  Json probes = Json::array();
  for (const CompatProbe& p : rep.probes) {
    probes.push_back({{"q_index", p.q_index}, {"r_index", p.r_index}, {"factor", p.factor}, {"deviation", p.deviation}});
  }
  Json qj = Json::array(), rj = Json::array();
  for (const auto& q : rep.qs) qj.push_back(to_json(q));
  for (const auto& r : rep.rs) rj.push_back(to_json(r));

  const Json report = {{"family", fspec},
                       {"rule", rspec},
                       {"m", a.m},
                       {"seed", seed},
                       {"parallel_deviation", rep.parallel_deviation},
                       {"factor_estimates", probes},
                       {"factor_spread", rep.factor_spread},
                       {"a_of_q", rep.a_of_q},
                       {"spread_of_q", rep.spread_of_q},
                       {"degenerate_dimension", rep.degenerate_dimension},
                       {"verdict", std::string(to_string(rep.verdict))},
                       {"tolerance", rep.tolerance},
                       {"qs", qj},
                       {"rs", rj}};
  validate_compat_report(report);
  write_atomic(a.out, dump(report));
  switch (rep.verdict) {
    case Verdict::compatible: return kExitOk;
    case Verdict::incompatible: return kExitIncompatible;
    case Verdict::degenerate: return kExitDegenerate;
  }
  return kExitIncompatible;
}

Json investor_json(const InvestorRecord& rec) {
  return {{"prices", rec.prices},   {"allocation", rec.allocation}, {"units", rec.units},
          {"payoff", rec.payoff},   {"risk", rec.risk},             {"allocation_matches_prices", rec.allocation_matches_prices}};
}

struct PortfolioArgs {
  std::string config, out;
};

int cmd_portfolio(const PortfolioArgs& a, std::ostream& out) {
  const SimulationConfig cfg = parse_simulation(load_json(a.config));
  const SimulationReport rep = simulate(cfg);

  Json rounds = Json::array();
  for (const RoundRecord& r : rep.rounds) {
    Json rj = {{"round", r.round}, {"outcome", r.outcome}, {"investor", investor_json(r.investor)}};
    if (r.control) rj["control"] = investor_json(*r.control);
    rounds.push_back(std::move(rj));
  }
  Json report = {{"seed", rep.seed},
                 {"rounds", rounds},
                 {"cumulative_payoff", rep.cumulative_payoff},
                 {"initial_history", rep.initial_history}};
  if (rep.control_cumulative_payoff) report["control_cumulative_payoff"] = *rep.control_cumulative_payoff;
  validate_portfolio_report(report);
  write_atomic(a.out, dump(report));

  out << "cumulative_payoff " << Json(rep.cumulative_payoff).dump();
  if (rep.control_cumulative_payoff) out << " control_cumulative_payoff " << Json(*rep.control_cumulative_payoff).dump();
  out << "\n";
  return kExitOk;
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw InputError("cannot write '" + tmp.string() + "'");
    o << content;
    o.flush();
    if (!o) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot replace '" + path + "'");
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proper scoring rules, weighted families and compatibility checks", "scorekit"};
  app.require_subcommand(1);

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Score an outcome dataset against a forecast");
  score->add_option("--rule", sa.rule, "Rule or family spec (JSON literal or file)")->required();
  score->add_option("--pred", sa.pred, "Forecast, comma-separated")->required();
  score->add_option("--baseline", sa.baseline, "Baseline for weighted families, comma-separated");
  score->add_option("--input", sa.input, "Outcome CSV (one 1-based outcome per line)")->required();
  score->add_flag("--counts", sa.counts, "Input is a single row of counts");
  score->add_option("--out", sa.out, "Output JSON path")->required();

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "Optimal score estimate of a parametric model");
  estimate->add_option("--rule", ea.rule, "Rule or family spec (JSON literal or file)")->required();
  estimate->add_option("--baseline", ea.baseline, "Baseline for weighted families, comma-separated");
  estimate->add_option("--model", ea.model, "softmax:<m> or binomial_squares")->required();
  estimate->add_option("--input", ea.input, "Outcome CSV")->required();
  estimate->add_flag("--counts", ea.counts, "Input is a single row of counts");
  estimate->add_option("--starts", ea.starts, "Number of optimizer starts");
  estimate->add_option("--max-iters", ea.max_iters, "Iteration cap per start");
  estimate->add_option("--grad-tol", ea.grad_tol, "Gradient-norm stopping tolerance");
  estimate->add_option("--seed", ea.seed, "Seed for optimizer starts");
  estimate->add_option("--out", ea.out, "Output JSON path")->required();

  CompatArgs ca;
  auto* compat = app.add_subcommand("compat", "Check family/rule compatibility on random probes");
  compat->add_option("--family", ca.family, "Family spec (JSON literal or file)")->required();
  compat->add_option("--rule", ca.rule, "Rule spec (JSON literal or file)")->required();
  compat->add_option("--m", ca.m, "Number of outcomes")->required();
  compat->add_option("--probes", ca.probes, "Number of baselines and of outcome distributions");
  compat->add_option("--tol", ca.tol, "Parallelism and factor-spread tolerance");
  compat->add_option("--seed", ca.seed, "Probe seed");
  compat->add_option("--out", ca.out, "Output JSON path")->required();

  PortfolioArgs pa;
  auto* portfolio = app.add_subcommand("portfolio", "Run the market-maker / investor simulation");
  portfolio->add_option("--config", pa.config, "Simulation config (JSON literal or file)")->required();
  portfolio->add_option("--out", pa.out, "Output JSON path")->required();

  std::vector<std::string> argv_store{"scorekit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*score) return cmd_score(sa, err);
    if (*estimate) return cmd_estimate(ea, err);
    if (*compat) return cmd_compat(ca, err);
    if (*portfolio) return cmd_portfolio(pa, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace scorekit::cli
