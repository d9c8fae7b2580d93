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

#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "scorekit/errors.hpp"

namespace scorekit::cli {

namespace {

void check_fields(const Json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected a JSON object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) throw InputError(what + ": missing field '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw InputError(what + ": unknown field '" + key + "'");
  }
}

double get_real(const Json& j, const char* key, const std::string& what) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw InputError(what + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

std::string get_type(const Json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InputError(what + ": missing string field 'type'");
  }
  return j.at("type").get<std::string>();
}

Vector get_reals(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of numbers");
  Vector out;
  for (const Json& x : j) {
    if (!x.is_number()) throw InputError(what + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

MemberForm parse_form(const Json& j, const std::string& what) {
  if (!j.contains("form")) return MemberForm::baseline_normalized;
  const Json& f = j.at("form");
  if (f == "baseline_normalized") return MemberForm::baseline_normalized;
  if (f == "simplified") return MemberForm::simplified;
  throw InputError(what + ": form must be 'baseline_normalized' or 'simplified'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

long long parse_integer(const std::string& token, const std::string& where) {
  long long v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (token.empty() || ec != std::errc() || ptr != last) {
    throw InputError(where + ": '" + token + "' is not an integer");
  }
  return v;
}

}  // namespace

Json load_json(const std::string& text) {
  const std::string t = trim(text);
  try {
    if (!t.empty() && t.front() == '{') return Json::parse(t);
    std::ifstream in(text);
    if (!in) throw InputError("cannot open '" + text + "'");
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

CurvedFunction parse_curved(const Json& spec) {
  check_fields(spec, {"name"}, {"params"}, "curved function");
  if (!spec.at("name").is_string()) throw InputError("curved function: 'name' must be a string");
  const Vector params = spec.contains("params") ? get_reals(spec.at("params"), "curved function params") : Vector{};
  return CurvedFunction::from_name(spec.at("name").get<std::string>(), params);
}

ScoringRule parse_rule(const Json& spec) {
  const std::string type = get_type(spec, "rule");
  if (type == "log") {
    check_fields(spec, {"type"}, {}, "log rule");
    return log_rule();
  }
  if (type == "brier") {
    check_fields(spec, {"type"}, {}, "brier rule");
    return brier_rule();
  }
  if (type == "power") {
    check_fields(spec, {"type", "beta"}, {}, "power rule");
    return power_rule(get_real(spec, "beta", "power rule"));
  }
  if (type == "bregman") {
    check_fields(spec, {"type", "g"}, {}, "bregman rule");
    return bregman_rule(parse_curved(spec.at("g")));
  }
  throw InputError("unknown rule type '" + type + "'");
}

bool is_family_spec(const Json& spec) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string()) return false;
  const std::string type = spec.at("type").get<std::string>();
  if (type == "bregman") return spec.contains("f");
  return type == "weighted_power" || type == "weighted_pseudospherical" || type == "quasi_bregman" ||
         type == "trivial";
}

WeightedFamily parse_family(const Json& spec) {
  const std::string type = get_type(spec, "family");
  if (type == "weighted_power") {
    check_fields(spec, {"type", "beta"}, {}, "weighted_power family");
    return weighted_power_family(get_real(spec, "beta", "weighted_power family"));
  }
  if (type == "weighted_pseudospherical") {
    check_fields(spec, {"type", "beta"}, {}, "weighted_pseudospherical family");
    return weighted_pseudospherical_family(get_real(spec, "beta", "weighted_pseudospherical family"));
  }
  if (type == "quasi_bregman") {
    check_fields(spec, {"type", "f", "g", "h"}, {"form"}, "quasi_bregman family");
    return quasi_bregman_family(parse_curved(spec.at("f")), parse_curved(spec.at("g")), parse_curved(spec.at("h")),
                                parse_form(spec, "quasi_bregman family"));
  }
  if (type == "bregman") {
    check_fields(spec, {"type", "f", "g"}, {"form"}, "bregman family");
    return bregman_weighted_family(parse_curved(spec.at("f")), parse_curved(spec.at("g")),
                                   parse_form(spec, "bregman family"));
  }
  if (type == "trivial") {
    check_fields(spec, {"type", "rule"}, {}, "trivial family");
    return trivial_family(parse_rule(spec.at("rule")));
  }
  throw InputError("unknown family type '" + type + "'");
}

ParametricModel parse_model_name(const std::string& name) {
  if (name == "binomial_squares") return binomial_squares_model();
  if (name.rfind("softmax:", 0) == 0) {
    const long long m = parse_integer(name.substr(8), "model");
    if (m < 2 || m > 64) throw InputError("softmax model needs 2 <= m <= 64");
    return softmax_model(static_cast<std::size_t>(m));
  }
  throw InputError("unknown model '" + name + "' (expected softmax:<m> or binomial_squares)");
}

ParametricModel parse_model(const Json& spec) {
  if (spec.is_string()) return parse_model_name(spec.get<std::string>());
  check_fields(spec, {"name"}, {"m"}, "model");
  const std::string name = spec.at("name").is_string() ? spec.at("name").get<std::string>() : "";
  if (name == "binomial_squares") {
    if (spec.contains("m")) throw InputError("model: binomial_squares takes no 'm'");
    return binomial_squares_model();
  }
  if (name == "softmax") {
    if (!spec.contains("m") || !spec.at("m").is_number_integer()) throw InputError("model: softmax needs integer 'm'");
    return parse_model_name("softmax:" + std::to_string(spec.at("m").get<long long>()));
  }
  throw InputError("unknown model '" + name + "'");
}

OptimizerSettings parse_optimizer(const Json& spec) {
  check_fields(spec, {}, {"max_iters", "grad_tol", "n_starts", "seed"}, "optimizer");
  OptimizerSettings o;
  if (spec.contains("max_iters")) o.max_iters = spec.at("max_iters").get<int>();
  if (spec.contains("grad_tol")) o.grad_tol = get_real(spec, "grad_tol", "optimizer");
  if (spec.contains("n_starts")) o.n_starts = spec.at("n_starts").get<int>();
  if (spec.contains("seed")) o.seed = spec.at("seed").get<std::uint64_t>();
  if (o.max_iters <= 0 || o.n_starts <= 0 || !(o.grad_tol > 0.0)) throw InputError("optimizer: invalid settings");
  return o;
}

Vector parse_vector(const std::string& text) {
  Vector out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const std::string t = trim(token);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw InputError("'" + t + "' is not a number in vector '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty vector");
  return out;
}

std::vector<int> parse_outcomes_csv(const std::string& content, std::size_t m) {
  std::vector<int> outcomes;
  std::stringstream ss(content);
  std::string line;
  for (std::size_t lineno = 1; std::getline(ss, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    const long long y = parse_integer(t, where);
    if (y < 1 || static_cast<std::size_t>(y) > m) {
      throw InputError(where + ": outcome " + t + " outside 1.." + std::to_string(m));
    }
    outcomes.push_back(static_cast<int>(y));
  }
  if (outcomes.empty()) throw InputError("no outcomes in input");
  return outcomes;
}

std::vector<long long> parse_counts_csv(const std::string& content, std::size_t m) {
  std::stringstream ss(content);
  std::string line;
  std::optional<std::vector<long long>> counts;
  for (std::size_t lineno = 1; std::getline(ss, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (counts) throw InputError(where + ": counts input must be a single row");
    counts.emplace();
    std::stringstream row(t);
    std::string token;
    while (std::getline(row, token, ',')) {
      const long long c = parse_integer(trim(token), where);
      if (c < 0) throw InputError(where + ": negative count");
      counts->push_back(c);
    }
    if (counts->size() != m) {
      throw InputError(where + ": expected " + std::to_string(m) + " counts, got " + std::to_string(counts->size()));
    }
  }
  if (!counts) throw InputError("no counts in input");
  if (std::all_of(counts->begin(), counts->end(), [](long long c) { return c == 0; })) {
    throw InputError("counts are all zero");
  }
  return *counts;
}

std::vector<int> expand_counts(const std::vector<long long>& counts) {
  std::vector<int> out;
  for (std::size_t i = 0; i < counts.size(); ++i) out.insert(out.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i + 1));
  return out;
}

SimulationConfig parse_simulation(const Json& spec) {
  check_fields(spec, {"rule", "family", "model", "history", "rounds"}, {"control_rule", "seed", "optimizer"},
               "portfolio config");
  ParametricModel model = parse_model(spec.at("model"));
  const Json& h = spec.at("history");
  std::variant<FixedCounts, SampledHistory> history;
  if (h.is_array()) {
    FixedCounts fc;
    for (const Json& c : h) {
      if (!c.is_number_integer()) throw InputError("portfolio config: history counts must be integers");
      fc.counts.push_back(c.get<long long>());
    }
    history = fc;
  } else {
    check_fields(h, {"truth", "n", "seed"}, {}, "portfolio history");
    SampledHistory sh;
    sh.truth = get_reals(h.at("truth"), "portfolio history truth");
    if (!h.at("n").is_number_integer()) throw InputError("portfolio history: 'n' must be an integer");
    sh.n = h.at("n").get<int>();
    sh.seed = seed_override(h.at("seed").get<std::uint64_t>());
    history = sh;
  }
  if (!spec.at("rounds").is_number_integer()) throw InputError("portfolio config: 'rounds' must be an integer");
  const int rounds = spec.at("rounds").get<int>();
  if (rounds < 0) throw InputError("portfolio config: 'rounds' must be nonnegative");

  std::optional<ScoringRule> control;
  if (spec.contains("control_rule")) control = parse_rule(spec.at("control_rule"));
  const std::uint64_t seed = seed_override(spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 0);
  const OptimizerSettings opts = spec.contains("optimizer") ? parse_optimizer(spec.at("optimizer")) : OptimizerSettings{};

  return SimulationConfig{parse_rule(spec.at("rule")), parse_family(spec.at("family")), std::move(model),
                          std::move(control), std::move(history), rounds, seed, opts};
}

std::uint64_t seed_override(std::uint64_t fallback) {
  const char* env = std::getenv("SCOREKIT_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("SCOREKIT_SEED is not an unsigned integer");
  return v;
}

namespace {

void check_number_array(const Json& j, const std::string& what, bool allow_null = false) {
  if (!j.is_array()) throw InputError(what + ": expected array");
  for (const Json& x : j) {
    if (!(x.is_number() || (allow_null && x.is_null()))) throw InputError(what + ": expected numbers");
  }
}

}  // namespace

void validate_score_report(const Json& j) {
  check_fields(j, {"rule", "prediction", "n", "total_score", "mean_score", "per_outcome_scores"}, {"baseline"},
               "score report");
  check_number_array(j.at("prediction"), "score report prediction");
  check_number_array(j.at("per_outcome_scores"), "score report per_outcome_scores", true);
  for (const char* k : {"total_score", "mean_score"}) {
    if (!(j.at(k).is_number() || j.at(k).is_null())) throw InputError(std::string("score report: bad ") + k);
  }
}

void validate_estimate_report(const Json& j) {
  check_fields(j,
               {"rule", "model", "r", "theta_hat", "p_hat", "score_at_opt", "grad_norm", "well_behaved",
                "restarts_agree", "at_boundary", "iterations", "converged_starts", "seed"},
               {}, "estimate report");
  check_number_array(j.at("theta_hat"), "estimate report theta_hat");
  check_number_array(j.at("p_hat"), "estimate report p_hat");
  const std::string wb = j.at("well_behaved").get<std::string>();
  if (wb != "yes" && wb != "no" && wb != "unknown") throw InputError("estimate report: bad well_behaved");
}

void validate_compat_report(const Json& j) {
  check_fields(j,
               {"family", "rule", "m", "seed", "parallel_deviation", "factor_estimates", "factor_spread", "a_of_q",
                "spread_of_q", "degenerate_dimension", "verdict", "tolerance", "qs", "rs"},
               {}, "compat report");
  for (const Json& p : j.at("factor_estimates")) {
    check_fields(p, {"q_index", "r_index", "factor", "deviation"}, {}, "compat probe");
  }
  const std::string v = j.at("verdict").get<std::string>();
  if (v != "compatible" && v != "incompatible" && v != "degenerate") throw InputError("compat report: bad verdict");
}

void validate_portfolio_report(const Json& j) {
  check_fields(j, {"seed", "rounds", "cumulative_payoff", "initial_history"}, {"control_cumulative_payoff"},
               "portfolio report");
  const auto check_investor = [](const Json& inv) {
    check_fields(inv, {"prices", "allocation", "units", "payoff", "risk", "allocation_matches_prices"}, {},
                 "portfolio investor record");
  };
  for (const Json& r : j.at("rounds")) {
    check_fields(r, {"round", "outcome", "investor"}, {"control"}, "portfolio round");
    check_investor(r.at("investor"));
    if (r.contains("control")) check_investor(r.at("control"));
  }
}

}  // namespace scorekit::cli
