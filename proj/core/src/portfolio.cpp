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

#include "scorekit/portfolio.hpp"

#include <random>

#include "scorekit/errors.hpp"

namespace scorekit {

Market price_assets(const ScoringRule& rule, const ParametricModel& model, std::span<const int> history,
                    const OptimizerSettings& opts) {
  if (history.empty()) throw DomainError("cannot price assets from an empty history");
  Market market;
  market.history.assign(history.begin(), history.end());
  market.empirical = empirical(history, model.outcomes());
  market.model_name = model.name();
  market.pricing = optimize_score(rule, model, market.empirical, opts);
  if (market.pricing.well_behaved != WellBehaved::yes) {
    throw NumericError("pricing estimate is not well behaved (well_behaved=" +
                       std::string(to_string(market.pricing.well_behaved)) +
                       ", restarts_agree=" + (market.pricing.restarts_agree ? "true" : "false") +
                       ", at_boundary=" + (market.pricing.at_boundary ? "true" : "false") + ")");
  }
  market.prices = market.pricing.p_hat;
  if (!market.prices.interior()) throw NumericError("estimated prices are not interior");
  return market;
}

PortfolioOutcome best_portfolio(const WeightedFamily& family, const Market& market, const ParametricModel& model,
                                const OptimizerSettings& opts) {
  if (!market.prices.interior()) throw DomainError("market prices must be interior");
  PortfolioOutcome out;
  if (model.name() != market.model_name) {
    out.warnings.push_back("investor model '" + model.name() + "' differs from pricing model '" +
                           market.model_name + "'");
  }
  const ScoringRule member = family.member(market.prices);
  const EstimationResult est = optimize_score(member, model, market.empirical, opts);
  out.theta = est.theta_hat;
  out.allocation = est.p_hat;
  out.units.resize(out.allocation.size());
  for (std::size_t i = 0; i < out.units.size(); ++i) out.units[i] = out.allocation[i] / market.prices[i];
  out.risk = -est.score_at_opt;
  out.well_behaved = est.well_behaved;
  if (est.well_behaved != WellBehaved::yes) {
    out.warnings.push_back("investor estimate is not well behaved (well_behaved=" +
                           std::string(to_string(est.well_behaved)) + ")");
  }
  return out;
}

double payoff_units(const Distribution& allocation, const Distribution& prices, int y) {
  if (allocation.size() != prices.size()) throw DomainError("allocation and prices differ in size");
  if (!prices.interior()) throw DomainError("prices must be interior");
  if (y < 1 || static_cast<std::size_t>(y) > prices.size()) {
    throw DomainError("outcome " + std::to_string(y) + " out of range");
  }
  const auto i = static_cast<std::size_t>(y - 1);
  return allocation[i] / prices[i];
}

namespace {

InvestorRecord invest(const ScoringRule& pricing_rule, const SimulationConfig& cfg, const std::vector<int>& history) {
  const Market market = price_assets(pricing_rule, cfg.model, history, cfg.optimizer);
  const PortfolioOutcome pf = best_portfolio(cfg.family, market, cfg.model, cfg.optimizer);
  InvestorRecord rec;
  rec.prices = market.prices.vector();
  rec.allocation = pf.allocation.vector();
  rec.units = pf.units;
  rec.risk = pf.risk;
  rec.allocation_matches_prices = max_abs_diff(rec.allocation, rec.prices) <= kAllocationTolerance;
  return rec;
}

}  // namespace

SimulationReport simulate(const SimulationConfig& cfg) {
  if (cfg.rounds < 0) throw ConfigError("rounds must be nonnegative");
  const std::size_t m = cfg.model.outcomes();

  SimulationReport report;
  std::vector<int> history;
  Vector draw_weights;
  std::uint64_t seed = cfg.seed;

  if (const auto* fixed = std::get_if<FixedCounts>(&cfg.history)) {
    if (fixed->counts.size() != m) throw ConfigError("history counts do not match the model's outcome count");
    for (std::size_t i = 0; i < m; ++i) {
      if (fixed->counts[i] < 0) throw ConfigError("negative history count");
      history.insert(history.end(), static_cast<std::size_t>(fixed->counts[i]), static_cast<int>(i + 1));
    }
    if (history.empty()) throw ConfigError("history counts are all zero");
    draw_weights = empirical(history, m).vector();
  } else {
    const auto& sampled = std::get<SampledHistory>(cfg.history);
    if (sampled.truth.size() != m) throw ConfigError("truth distribution does not match the model");
    if (sampled.n <= 0) throw ConfigError("sampled history needs n > 0");
    draw_weights = make_distribution(sampled.truth).vector();
    seed = sampled.seed;
  }
  report.seed = seed;

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> draw(draw_weights.begin(), draw_weights.end());
  if (const auto* sampled = std::get_if<SampledHistory>(&cfg.history)) {
    for (int k = 0; k < sampled->n; ++k) history.push_back(draw(rng) + 1);
  }
  report.initial_history = history;

  double cumulative = 0.0;
  double control_cumulative = 0.0;
  for (int round = 0; round < cfg.rounds; ++round) {
    RoundRecord rec;
    rec.round = round + 1;
    rec.investor = invest(cfg.rule, cfg, history);
    if (cfg.control_rule) rec.control = invest(*cfg.control_rule, cfg, history);

    rec.outcome = draw(rng) + 1;
    const auto y = static_cast<std::size_t>(rec.outcome - 1);
    rec.investor.payoff = rec.investor.units[y];
    cumulative += rec.investor.payoff;
    if (rec.control) {
      rec.control->payoff = rec.control->units[y];
      control_cumulative += rec.control->payoff;
    }
    history.push_back(rec.outcome);
    report.rounds.push_back(std::move(rec));
  }
  report.cumulative_payoff = cumulative;
  if (cfg.control_rule) report.control_cumulative_payoff = control_cumulative;
  return report;
}

}  // namespace scorekit
