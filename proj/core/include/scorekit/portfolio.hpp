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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scorekit/estimation.hpp"

namespace scorekit {

/// Arrow-type assets priced by a market maker. Asset y pays one unit when
/// outcome y occurs.
struct Market {
  Distribution prices = uniform(2);
  std::vector<int> history;          // 1-based outcomes
  Distribution empirical = uniform(2);
  std::string model_name;
  EstimationResult pricing;

  std::size_t assets() const noexcept { return prices.size(); }
};

struct PortfolioOutcome {
  Distribution allocation = uniform(2);  // wealth fraction per asset
  Vector units;                          // allocation_i / price_i
  double risk = 0.0;                     // -s(allocation, r || prices)
  Vector theta;
  WellBehaved well_behaved = WellBehaved::unknown;
  std::vector<std::string> warnings;  // model mismatch, ill-behaved estimate
};

/// Prices the assets at p(theta~) where theta~ is the rule's optimal score
/// estimate on the empirical distribution of `history`. Throws DomainError
/// for an empty history and NumericError when the estimate is not well
/// behaved.
Market price_assets(const ScoringRule& rule, const ParametricModel& model, std::span<const int> history,
                    const OptimizerSettings& opts = {});

/// The investor's allocation p(theta) maximizing s(p(theta), r || prices),
/// i.e. minimizing risk, over the same model the market maker used.
/// Allocation equals the prices only when the investor's estimate is well
/// behaved; otherwise a warning is attached.
PortfolioOutcome best_portfolio(const WeightedFamily& family, const Market& market, const ParametricModel& model,
                                const OptimizerSettings& opts = {});

/// Units of asset y held, which is the realized payoff when y occurs.
double payoff_units(const Distribution& allocation, const Distribution& prices, int y);

/// Allocations within this sup-norm distance of the prices count as equal.
inline constexpr double kAllocationTolerance = 1e-5;

struct FixedCounts {
  std::vector<long long> counts;
};
struct SampledHistory {
  Vector truth;
  int n = 0;
  std::uint64_t seed = 0;
};

struct SimulationConfig {
  ScoringRule rule;
  WeightedFamily family;
  ParametricModel model;
  std::optional<ScoringRule> control_rule;  // mispriced comparison market
  std::variant<FixedCounts, SampledHistory> history;
  int rounds = 0;
  std::uint64_t seed = 0;  // outcome draws for FixedCounts histories
  OptimizerSettings optimizer;
};

struct InvestorRecord {
  Vector prices;
  Vector allocation;
  Vector units;
  double payoff = 0.0;
  double risk = 0.0;
  bool allocation_matches_prices = false;
};

struct RoundRecord {
  int round = 0;
  int outcome = 0;
  InvestorRecord investor;
  std::optional<InvestorRecord> control;
};

struct SimulationReport {
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  double cumulative_payoff = 0.0;
  std::optional<double> control_cumulative_payoff;
  std::vector<int> initial_history;
};

/// Round loop: price from history, invest, draw the next outcome from the
/// truth (or from the initial empirical distribution for fixed counts),
/// append it to the history.
SimulationReport simulate(const SimulationConfig& config);

}  // namespace scorekit
