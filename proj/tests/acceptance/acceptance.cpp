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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Details of each failed check follow its line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "oracles.hpp"
#include "scorekit/baseline.hpp"
#include "scorekit/compatibility.hpp"
#include "scorekit/equivalence.hpp"
#include "scorekit/errors.hpp"
#include "scorekit/estimation.hpp"
#include "scorekit/parametric_model.hpp"
#include "scorekit/portfolio.hpp"
#include "scorekit/weighted_family.hpp"

namespace {

using namespace scorekit;
using CF = CurvedFunction;
using cli::Json;
namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string describe(const CF& f) {
  std::string s(f.name());
  if (f.params().empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < f.params().size(); ++i) s += (i ? "," : "") + fmt(f.params()[i]);
  return s + ")";
}

// Collects failed checks and a few informational notes for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failures_.empty(); }
  int checks() const { return checks_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  int checks_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct NamedRule {
  std::string name;
  ScoringRule rule;
};

struct NamedFamily {
  std::string name;
  WeightedFamily family;
};

std::vector<NamedRule> base_rules() {
  return {{"log", log_rule()},         {"power(1.5)", power_rule(1.5)}, {"power(2)", power_rule(2)},
          {"power(3)", power_rule(3)}, {"brier", brier_rule()},         {"bregman(xlogx)", bregman_rule(CF::xlogx())}};
}

std::vector<NamedFamily> all_families() {
  return {{"weighted_power(1.5)", weighted_power_family(1.5)},
          {"weighted_power(2)", weighted_power_family(2)},
          {"weighted_power(3)", weighted_power_family(3)},
          {"weighted_pseudospherical(1.5)", weighted_pseudospherical_family(1.5)},
          {"weighted_pseudospherical(2)", weighted_pseudospherical_family(2)},
          {"weighted_pseudospherical(3)", weighted_pseudospherical_family(3)},
          {"quasi_bregman(x^2,id)", quasi_bregman_family(CF::identity(), CF::power(2), CF::identity())},
          {"quasi_bregman(xlogx,id)", quasi_bregman_family(CF::identity(), CF::xlogx(), CF::identity())},
          {"bregman(x,x^2)", bregman_weighted_family(CF::identity(), CF::power(2))},
          {"bregman(x^2,xlogx)", bregman_weighted_family(CF::power(2), CF::xlogx())},
          {"trivial(power(2))", trivial_family(power_rule(2))}};
}

// Quasi-Bregman families with f = identity that are compatible with the log rule.
struct LogPair {
  std::string name;
  CF g, h;
  WeightedFamily family() const { return quasi_bregman_family(CF::identity(), g, h); }
};

std::vector<LogPair> log_pairs() {
  std::vector<LogPair> out;
  for (double beta : {2.0, 3.0}) {
    const std::string b = fmt(beta);
    out.push_back({"(x^" + b + ", h_pow)", CF::power(beta), power_family_h(beta)});
    out.push_back({"(x^" + b + ", h_ps)", CF::power(beta), pseudospherical_family_h(beta)});
  }
  out.push_back({"(x^2, id)", CF::power(2), CF::identity()});
  out.push_back({"(xlogx, id)", CF::xlogx(), CF::identity()});
  return out;
}

struct CompatPair {
  std::string name;
  WeightedFamily family;
  ScoringRule rule;
};

// Every compatible pair with a closed form: log-rule pairs, Bregman weights
// x^2 g~''(x) against bregman_rule(g~), power weights against power rules,
// and a trivial family.
std::vector<CompatPair> compatible_pairs() {
  std::vector<CompatPair> out;
  for (const LogPair& lp : log_pairs()) out.push_back({"qb" + lp.name + " / log", lp.family(), log_rule()});
  for (const CF& gt : {CF::scaled_power(2, 2), CF::scaled_power(3, 6), CF::xlogx()}) {
    for (const CF& g : {CF::power(2), CF::power(3), CF::xlogx()}) {
      out.push_back({"bregman(" + describe(g) + ") / bregman_rule(" + describe(gt) + ")",
                     bregman_weighted_family(bregman_compatible_weight(gt), g), bregman_rule(gt)});
    }
  }
  for (double beta : {2.0, 3.0}) {
    out.push_back({"bregman(x^" + fmt(beta) + ", neglog) / power(" + fmt(beta) + ")",
                   bregman_weighted_family(CF::power(beta), CF::neglog()), power_rule(beta)});
  }
  out.push_back({"trivial(power(2)) / power(2)", trivial_family(power_rule(2)), power_rule(2)});
  return out;
}

std::vector<int> history_from_counts(const std::vector<int>& counts) {
  std::vector<int> h;
  for (std::size_t i = 0; i < counts.size(); ++i) h.insert(h.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i) + 1);
  return h;
}

Distribution theta_point(const ParametricModel& model, double t) { return model.evaluate(std::span<const double>(&t, 1)); }

// ---------------------------------------------------------------------------

void propriety(Check& c) {
  std::mt19937_64 rng(101);
  auto run = [&](const std::string& name, const ScoringRule& rule, std::size_t m) {
    int bad = 0, weak = 0;
    for (int k = 0; k < 200; ++k) {
      const Distribution p = sample_interior(m, rng, 0.01);
      const Distribution r = sample_interior(m, rng, 0.01);
      const double gap = oracle::score(rule, r.weights(), r.weights()) - oracle::score(rule, p.weights(), r.weights());
      if (gap < 0) ++bad;
      if (max_abs_diff(p.weights(), r.weights()) > 1e-3 && !(gap > 1e-10)) ++weak;
    }
    c.expect(bad == 0 && weak == 0, name + ": " + std::to_string(bad) + " violations, " + std::to_string(weak) + " not strict");
  };
  for (const NamedRule& nr : base_rules()) run(nr.name, nr.rule, 3);
  for (const NamedFamily& nf : all_families()) {
    for (int b = 0; b < 10; ++b) {
      const Distribution q = sample_interior(3, rng);
      run(nf.name + " member " + std::to_string(b), nf.family.member(q), 3);
    }
  }
}

void entropy_relations(Check& c) {
  std::mt19937_64 rng(102);
  auto run = [&](const std::string& name, const ScoringRule& rule, std::size_t m) {
    double homog = 0, support = 0, midpoint = 0;
    for (int k = 0; k < 20; ++k) {
      const Distribution p = sample_interior(m, rng);
      const double S = rule.expected(p.weights());
      for (double lambda : {0.5, 2.0, 10.0}) {
        Vector x(p.begin(), p.end());
        for (double& v : x) v *= lambda;
        homog = std::max(homog, std::abs(rule.expected(x) - lambda * S) / std::max(1e-300, std::abs(lambda * S)));
      }
      for (int j = 0; j < 50; ++j) {
        const Distribution q = sample_interior(m, rng);
        support = std::max(support, oracle::score(rule, q.weights(), p.weights()) - S);
        Vector mid(m);
        for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (p[i] + q[i]);
        midpoint = std::max(midpoint, rule.expected(mid) - 0.5 * (S + rule.expected(q.weights())));
      }
    }
    c.expect(homog <= 1e-10, name + ": homogeneity rel err " + fmt(homog));
    c.expect(support <= 0, name + ": s(q,p) exceeds S(p) by " + fmt(support));
    c.expect(midpoint <= 1e-12, name + ": midpoint convexity violated by " + fmt(midpoint));
  };
  for (const NamedRule& nr : base_rules()) run(nr.name, nr.rule, 3);
  for (const NamedFamily& nf : all_families()) run(nf.name + " member", nf.family.member(sample_interior(3, rng)), 3);
}

void baselines(Check& c) {
  for (std::size_t m : {3u, 5u}) {
    const Distribution b = baseline(log_rule(), m);
    c.expect(max_abs_diff(b.weights(), uniform(m).weights()) <= 1e-8, "log baseline on m=" + std::to_string(m));
  }
  std::mt19937_64 rng(103);
  for (const NamedFamily& nf : all_families()) {
    double worst = 0;
    for (std::size_t m : {3u, 5u}) {
      for (int k = 0; k < 10; ++k) {
        const Distribution q = sample_interior(m, rng);
        const Distribution b = baseline(nf.family.member(q), m);
        worst = std::max(worst, max_abs_diff(b.weights(), q.weights()));
      }
    }
    c.expect(worst <= 1e-6, nf.name + ": baseline off by " + fmt(worst));
  }
}

void log_compatibility(Check& c) {
  for (const LogPair& lp : log_pairs()) {
    const WeightedFamily fam = lp.family();
    const double stated = first_derivative_factor(lp.g, lp.h);
    for (std::size_t m : {3u, 5u}) {
      std::mt19937_64 rng(104 + m);
      const auto qs = oracle::draw_interior(5, m, rng);
      const auto rs = oracle::draw_interior(5, m, rng);
      const CompatReport rep = check_compatibility(fam, log_rule(), qs, rs);
      const std::string tag = lp.name + " m=" + std::to_string(m);
      c.expect(rep.verdict == Verdict::compatible, tag + ": verdict " + std::string(to_string(rep.verdict)));
      c.expect(rep.parallel_deviation <= 1e-8, tag + ": parallel deviation " + fmt(rep.parallel_deviation));
      const auto [lo, hi] = std::minmax_element(rep.a_of_q.begin(), rep.a_of_q.end());
      c.expect(rep.factor_spread <= 1e-8 && (*hi - *lo) <= 1e-8 * *hi, tag + ": a(q) not constant");
      const double fitted = rep.a_of_q.front();
      c.expect(std::abs(fitted - stated) <= 1e-8 * std::max(1.0, stated),
               tag + ": fitted a = " + fmt(fitted) + ", stated h'(g(1))g'(1) = " + fmt(stated));
      if (m == 3) {
        c.note(lp.name + ": fitted a = " + fmt(fitted) + ", stated " + fmt(stated) + ", 1/(h'(g(1))g''(1)) = " +
               fmt(log_compatibility_factor(lp.g, lp.h)));
      }
    }
  }
  // x^2 - 1 and (x^4 - 1)/2 share g(1) = 0, g'(1) = 2 and h = identity.
  std::mt19937_64 rng(109);
  const auto qs = oracle::draw_interior(5, 3, rng);
  const auto rs = oracle::draw_interior(5, 3, rng);
  const CompatReport a = check_compatibility(
      quasi_bregman_family(CF::identity(), CF::shifted_power(2, 1), CF::identity()), log_rule(), qs, rs);
  const CompatReport b = check_compatibility(
      quasi_bregman_family(CF::identity(), CF::shifted_power(4, 2), CF::identity()), log_rule(), qs, rs);
  double diff = 0;
  for (std::size_t i = 0; i < a.a_of_q.size(); ++i) diff = std::max(diff, std::abs(a.a_of_q[i] - b.a_of_q[i]));
  c.expect(diff <= 1e-8, "g = x^2 - 1 vs (x^4 - 1)/2 (same g(1), g'(1)): fitted factors " + fmt(a.a_of_q[0]) +
                             " and " + fmt(b.a_of_q[0]));
}

void bregman_compatibility(Check& c) {
  std::mt19937_64 rng(110);
  const auto qs = oracle::draw_interior(5, 3, rng);
  const auto rs = oracle::draw_interior(5, 3, rng);
  for (const CF& gt : {CF::scaled_power(2, 2), CF::scaled_power(3, 6), CF::xlogx()}) {
    for (const CF& g : {CF::power(2), CF::power(3), CF::xlogx()}) {
      const CompatReport rep =
          check_compatibility(bregman_weighted_family(bregman_compatible_weight(gt), g), bregman_rule(gt), qs, rs, 1e-6);
      c.expect(rep.verdict == Verdict::compatible && rep.parallel_deviation <= 1e-6,
               describe(g) + " vs bregman_rule(" + describe(gt) + "): deviation " +
                   fmt(rep.parallel_deviation));
    }
  }
  for (double beta : {2.0, 3.0}) {
    c.expect(bregman_compatible_weight(CF::scaled_power(beta, beta * (beta - 1))) == CF::power(beta),
             "weight for power g~ is not x^beta");
    for (const CF& g : {CF::power(2), CF::neglog(), CF::xlogx()}) {
      const CompatReport rep =
          check_compatibility(bregman_weighted_family(CF::power(beta), g), power_rule(beta), qs, rs, 1e-6);
      c.expect(rep.verdict == Verdict::compatible && rep.parallel_deviation <= 1e-6,
               "x^" + fmt(beta) + " weight, g=" + std::string(g.name()) + ": deviation " + fmt(rep.parallel_deviation));
    }
  }
  const CompatReport neg = check_compatibility(weighted_power_family(2), power_rule(2), qs, rs);
  c.expect(neg.verdict == Verdict::incompatible, "weighted_power(2) vs power(2) not reported incompatible");
}

void stationarity_transfer(Check& c) {
  const ParametricModel model = binomial_squares_model();
  std::mt19937_64 rng(111);
  // transfer_check needs a well-behaved base estimate; r is redrawn until
  // five draws meet that precondition. The member gradient must vanish at
  // the base stationary point either way.
  for (const CompatPair& cp : compatible_pairs()) {
    double worst = 0;
    int accepted = 0, rejected = 0;
    while (accepted < 5 && rejected < 50) {
      const Distribution r = sample_interior(3, rng, 0.05);
      const TransferReport t = transfer_check(cp.family, cp.rule, model, r);
      worst = std::max(worst, t.member_grad_norm);
      if (t.passed) ++accepted;
      else ++rejected;
    }
    c.expect(accepted == 5 && worst <= kTransferTolerance, cp.name + ": member gradient " + fmt(worst));
    if (rejected > 0) c.note(cp.name + ": " + std::to_string(rejected) + " draw(s) with an ill-behaved base estimate");
  }
  const TransferReport neg =
      transfer_check(weighted_power_family(2), power_rule(2), model, make_distribution({0.5, 0.2, 0.3}));
  c.expect(neg.member_grad_norm >= 1e-3, "negative control gradient " + fmt(neg.member_grad_norm));

  for (int k = 0; k < 5; ++k) {
    const Distribution q = sample_interior(3, rng);
    const Distribution r = sample_interior(3, rng);
    const auto path = counterexample_path(weighted_power_family(2), power_rule(2), q, r);
    if (!path) {
      c.expect(false, "no counterexample path for an incompatible pair");
      continue;
    }
    const Vector w = grad_p(power_rule(2), q, r).vector();
    const Vector v = grad_p(weighted_power_family(2).member(q), q, r).vector();
    const double bw = dot(path->b, w), bv = dot(path->b, v);
    c.expect(std::abs(bw) <= 1e-10 && std::abs(bv) > 1e-8, "witness <b,w> = " + fmt(bw) + ", <b,v> = " + fmt(bv));
    // On the witness path the rule is stationary at theta = 0, the member is not.
    const double zero = 0.0;
    const ScoringRule member = weighted_power_family(2).member(q);
    const double gw = score_gradient_theta(power_rule(2), path->model, r, std::span<const double>(&zero, 1))[0];
    const double gv = score_gradient_theta(member, path->model, r, std::span<const double>(&zero, 1))[0];
    c.expect(std::abs(gw) <= 1e-10 && std::abs(gv) > 1e-8, "path gradients " + fmt(gw) + ", " + fmt(gv));
  }
  for (const CompatPair& cp : compatible_pairs()) {
    if (cp.name.rfind("qb", 0) != 0) continue;
    const Distribution q = sample_interior(3, rng);
    const Distribution r = sample_interior(3, rng);
    c.expect(!counterexample_path(cp.family, cp.rule, q, r), cp.name + ": counterexample for a compatible pair");
  }
}

void hessian_identity(Check& c) {
  std::mt19937_64 rng(112);
  for (const LogPair& lp : log_pairs()) {
    const WeightedFamily fam = lp.family();
    double worst = 0;
    for (int k = 0; k < 5; ++k) {
      const Distribution q = sample_interior(3, rng);
      const Distribution r = sample_interior(3, rng);
      const double a = check_compatibility(fam, log_rule(), {q}, {r}).a_of_q.front();
      const Eigen::MatrixXd lhs = hessian_restricted(log_rule(), q);
      const Eigen::MatrixXd rhs = a * hessian_restricted(fam.member(q), q);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    c.expect(worst <= 1e-5, lp.name + ": max element difference " + fmt(worst));
  }
}

void estimation(Check& c) {
  std::mt19937_64 rng(113);
  for (std::size_t m : {3u, 5u}) {
    const ParametricModel model = softmax_model(m);
    for (int k = 0; k < 5; ++k) {
      const Distribution r = sample_interior(m, rng, 0.01);
      const EstimationResult est = mle(model, r);
      c.expect(max_abs_diff(est.p_hat.weights(), r.weights()) <= 1e-6, "softmax m=" + std::to_string(m) + " not saturated");
    }
  }
  const ParametricModel bs = binomial_squares_model();
  const ScoringRule log = log_rule();
  std::vector<Distribution> rs{make_distribution({0.5, 0.2, 0.3}), make_distribution({0.3, 0.3, 0.4}),
                               make_distribution({0.25, 0.5, 0.25}), make_distribution({0.64, 0.32, 0.04})};
  for (int k = 0; k < 4; ++k) rs.push_back(sample_interior(3, rng, 0.02));
  for (const Distribution& r : rs) {
    const double theta = mle(bs, r).theta_hat[0];
    const double closed = oracle::binomial_squares_mle(r);
    // Coarse grid, then a fine grid around its winner.
    const auto f = oracle::model_objective(log, bs, r);
    const double eps = kBinomialSquaresEpsilon;
    const oracle::GridMax coarse = oracle::grid_argmax(f, eps + 1e-5, 1 - eps - 1e-5, 1e-5);
    const oracle::GridMax fine = oracle::grid_argmax(f, coarse.arg - 1e-5, coarse.arg + 1e-5, 1e-8);
    c.expect(std::abs(theta - closed) <= 1e-6, "binomial_squares: theta " + fmt(theta) + " vs closed form " + fmt(closed));
    c.expect(std::abs(theta - fine.arg) <= 1e-6, "binomial_squares: theta " + fmt(theta) + " vs grid " + fmt(fine.arg));
  }
  // Equivalent rules give the same estimates.
  for (const NamedRule& nr : {NamedRule{"log", log_rule()}, NamedRule{"power(2)", power_rule(2)},
                              NamedRule{"brier", brier_rule()}}) {
    for (const ParametricModel& model : {softmax_model(3), binomial_squares_model()}) {
      const Distribution q = sample_interior(3, rng);
      const Distribution r = sample_interior(3, rng);
      const Vector a = optimize_score(nr.rule, model, r).theta_hat;
      const Vector b = optimize_score(rebase(nr.rule, q), model, r).theta_hat;
      c.expect(max_abs_diff(a, b) <= 1e-6, nr.name + " vs rebased on " + model.name() + ": " + fmt(max_abs_diff(a, b)));
    }
  }
  for (double beta : {2.0, 3.0}) {
    const Distribution q = sample_interior(3, rng);
    const Distribution r = sample_interior(3, rng);
    const ScoringRule a = weighted_power_family(beta).member(q);
    const ScoringRule b = quasi_bregman_family(CF::identity(), CF::power(beta), power_family_h(beta)).member(q);
    const auto eq = equivalence_fit(a, b, 3);
    c.expect(eq.has_value(), "weighted_power member not equivalent to its quasi-Bregman form");
    const ParametricModel model = softmax_model(3);
    const double d = max_abs_diff(optimize_score(a, model, r).theta_hat, optimize_score(b, model, r).theta_hat);
    c.expect(d <= 1e-6, "weighted_power(" + fmt(beta) + ") vs quasi-Bregman estimates differ by " + fmt(d));
  }
}

void domination(Check& c) {
  const ParametricModel model = binomial_squares_model();
  const Market market = price_assets(log_rule(), model, history_from_counts({5, 2, 3}));
  const double theta_tilde = market.pricing.theta_hat[0];
  c.expect(max_abs_diff(market.prices.weights(), theta_point(model, 0.4).weights()) <= 1e-6, "log prices not p(0.4)");

  const double eps = kBinomialSquaresEpsilon;
  const double step = (1 - 2 * eps) / 10001.0;
  auto check_pair = [&](const std::string& name, const WeightedFamily& fam, const Market& mk, double tt) {
    const PortfolioOutcome pf = best_portfolio(fam, mk, model);
    const double gap = max_abs_diff(pf.allocation.weights(), mk.prices.weights());
    c.expect(gap <= 1e-5, name + ": allocation differs from prices by " + fmt(gap));
    double units = 0;
    for (int y = 1; y <= 3; ++y) units = std::max(units, std::abs(payoff_units(pf.allocation, mk.prices, y) - 1.0));
    c.expect(units <= 1e-4, name + ": units differ from 1 by " + fmt(units));

    const ScoringRule member = fam.member(mk.prices);
    double best = std::numeric_limits<double>::infinity(), best_t = 0;
    std::vector<double> risk(10000), ts(10000);
    for (int k = 0; k < 10000; ++k) {
      ts[k] = eps + (k + 1) * step;
      risk[k] = -member.score(theta_point(model, ts[k]), mk.empirical).value();
      if (risk[k] < best) best = risk[k], best_t = ts[k];
    }
    int rivals = 0;
    for (int k = 0; k < 10000; ++k) {
      if (std::abs(ts[k] - tt) > 2 * step && risk[k] <= best + 1e-8) ++rivals;
    }
    c.expect(std::abs(best_t - tt) <= step, name + ": risk grid minimum at " + fmt(best_t) + ", theta~ = " + fmt(tt));
    c.expect(rivals == 0, name + ": " + std::to_string(rivals) + " distant grid points within 1e-8 of the minimum");
  };
  for (const LogPair& lp : log_pairs()) check_pair("qb" + lp.name, lp.family(), market, theta_tilde);
  const Market pm = price_assets(power_rule(2), model, history_from_counts({5, 2, 3}));
  check_pair("trivial(power(2))", trivial_family(power_rule(2)), pm, pm.pricing.theta_hat[0]);

  for (int y = 1; y <= 3; ++y) c.expect(payoff_units(market.prices, market.prices, y) == 1.0, "p_i/q_i != 1 at q");
  const PortfolioOutcome neg = best_portfolio(weighted_power_family(2), pm, model);
  const double ng = max_abs_diff(neg.allocation.weights(), pm.prices.weights());
  c.expect(ng > 1e-3, "mispriced control allocation within " + fmt(ng) + " of prices");
}

void gradients(Check& c) {
  std::mt19937_64 rng(114);
  auto rule_grad = [&](const std::string& name, const ScoringRule& rule) {
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
      const Distribution p = sample_interior(3, rng);
      const Distribution r = sample_interior(3, rng);
      const Vector an = grad_p(rule, p, r).vector();
      const Vector fd = oracle::fd_tangent_gradient(
          [&](std::span<const double> x) { return oracle::score(rule, x, r.weights()); }, p.weights());
      worst = std::max(worst, oracle::rel_error(an, fd));
      const Vector san = tangent_project(rule.expected_gradient(p.weights()).vector()).vector();
      const Vector sfd =
          oracle::fd_tangent_gradient([&](std::span<const double> x) { return rule.expected(x); }, p.weights());
      worst = std::max(worst, oracle::rel_error(san, sfd));
    }
    c.expect(worst <= 1e-6, name + ": p-gradient rel err " + fmt(worst));
  };
  for (const NamedRule& nr : base_rules()) rule_grad(nr.name, nr.rule);
  for (const NamedFamily& nf : all_families()) rule_grad(nf.name + " member", nf.family.member(sample_interior(3, rng)));

  const std::vector<ParametricModel> models{softmax_model(3), softmax_model(5), binomial_squares_model()};
  for (const ParametricModel& model : models) {
    double jac = 0, theta = 0;
    for (int k = 0; k < 50; ++k) {
      Vector t(model.dim());
      for (std::size_t j = 0; j < t.size(); ++j) {
        std::uniform_real_distribution<double> u(model.lower()[j] + 0.05 * (model.upper()[j] - model.lower()[j]),
                                                 model.upper()[j] - 0.05 * (model.upper()[j] - model.lower()[j]));
        t[j] = model.dim() == 1 ? u(rng) : std::uniform_real_distribution<double>(-2, 2)(rng);
      }
      const Eigen::MatrixXd J = model.jacobian(t);
      for (std::size_t i = 0; i < model.outcomes(); ++i) {
        const Vector fd = oracle::fd_gradient([&](std::span<const double> x) { return model.evaluate(x)[i]; }, t);
        Vector an(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) an[j] = J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        jac = std::max(jac, oracle::rel_error(an, fd));
      }
      const Distribution r = sample_interior(model.outcomes(), rng);
      const ScoringRule rule = base_rules()[static_cast<std::size_t>(k) % base_rules().size()].rule;
      const Vector an = score_gradient_theta(rule, model, r, t);
      const Vector fd = oracle::fd_gradient(
          [&](std::span<const double> x) { return rule.score(model.evaluate(x), r).value(); }, t);
      theta = std::max(theta, oracle::rel_error(an, fd));
    }
    c.expect(jac <= 1e-6, model.name() + ": jacobian rel err " + fmt(jac));
    c.expect(theta <= 1e-6, model.name() + ": theta-gradient rel err " + fmt(theta));
  }
}

void degeneracy(Check& c) {
  std::mt19937_64 rng(115);
  const auto qs = oracle::draw_interior(5, 2, rng);
  const auto rs = oracle::draw_interior(5, 2, rng);
  for (const NamedFamily& nf : all_families()) {
    for (const NamedRule& nr : base_rules()) {
      const CompatReport rep = check_compatibility(nf.family, nr.rule, qs, rs);
      c.expect(rep.verdict == Verdict::degenerate, nf.name + " vs " + nr.name + " on m=2");
    }
  }
}

// ---------------------------------------------------------------------------
// CLI

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int code = cli::run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shell-style word splitting: whitespace, single quotes, double quotes.
std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char ch : line) {
    if (quote) {
      if (ch == quote) quote = 0;
      else cur += ch;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      in_word = true;
    } else if (ch == ' ' || ch == '\t') {
      if (in_word) words.push_back(cur), cur.clear(), in_word = false;
    } else {
      cur += ch;
      in_word = true;
    }
  }
  if (in_word) words.push_back(cur);
  return words;
}

// `scorekit ...` lines in ```sh blocks of the README, with backslash
// continuations joined.
std::vector<std::vector<std::string>> readme_commands(const fs::path& readme) {
  std::ifstream in(readme);
  std::vector<std::vector<std::string>> out;
  std::string line, pending;
  bool in_block = false;
  while (std::getline(in, line)) {
    if (line.rfind("```", 0) == 0) {
      in_block = !in_block && line.rfind("```sh", 0) == 0;
      continue;
    }
    if (!in_block) continue;
    if (!pending.empty() || line.rfind("scorekit ", 0) == 0) {
      const bool cont = !line.empty() && line.back() == '\\';
      pending += cont ? line.substr(0, line.size() - 1) : line;
      if (!cont) {
        auto words = split_words(pending);
        words.erase(words.begin());
        out.push_back(words);
        pending.clear();
      }
    }
  }
  return out;
}

std::string arg_after(const std::vector<std::string>& args, const std::string& flag) {
  const auto it = std::find(args.begin(), args.end(), flag);
  return it != args.end() && it + 1 != args.end() ? *(it + 1) : std::string();
}

// The stated factor h'(g(1)) g'(1) for log-compatible family specs.
std::optional<double> stated_factor(const Json& fam) {
  const std::string type = fam.at("type").get<std::string>();
  if (type == "weighted_power" || type == "weighted_pseudospherical") {
    const double beta = fam.at("beta").get<double>();
    const CF h = type == "weighted_power" ? power_family_h(beta) : pseudospherical_family_h(beta);
    return first_derivative_factor(CF::power(beta), h);
  }
  if (type == "quasi_bregman") return first_derivative_factor(cli::parse_curved(fam.at("g")), cli::parse_curved(fam.at("h")));
  return std::nullopt;
}

void check_readme_example(Check& c, const std::vector<std::string>& args, const fs::path& work, int index) {
  const std::string tag = "README example " + std::to_string(index) + " (" + args.front() + ")";
  const CliRun first = cli_run(args);
  c.expect(first.code == 0, tag + ": exit " + std::to_string(first.code) + " " + first.err);
  if (first.code != 0) return;
  const fs::path out = work / arg_after(args, "--out");
  const std::string bytes = slurp(out);
  const CliRun second = cli_run(args);
  c.expect(second.code == 0 && slurp(out) == bytes, tag + ": rerun not byte-identical");
  const Json j = Json::parse(bytes);

  if (args.front() == "compat") {
    c.expect(j.at("verdict") == "compatible", tag + ": verdict " + j.at("verdict").dump());
    c.expect(j.at("parallel_deviation").get<double>() <= 1e-8, tag + ": deviation");
    c.expect(j.at("factor_spread").get<double>() <= 1e-8, tag + ": a(q) not constant");
    const auto stated = stated_factor(cli::load_json(arg_after(args, "--family")));
    if (stated) {
      for (const Json& a : j.at("a_of_q")) {
        c.expect(std::abs(a.get<double>() - *stated) <= 1e-8 * std::max(1.0, *stated),
                 tag + ": a(q) " + a.dump() + " vs stated " + fmt(*stated));
      }
    }
  } else if (args.front() == "estimate") {
    const Vector r = j.at("r").get<Vector>();
    const std::string model = j.at("model").get<std::string>();
    if (model == "binomial_squares" && j.at("rule").at("type") == "log") {
      const double closed = (r[1] + 2 * r[2]) / 2;
      c.expect(std::abs(j.at("theta_hat")[0].get<double>() - closed) <= 1e-6, tag + ": theta vs closed form");
    } else if (model.rfind("softmax", 0) == 0 && j.at("rule").at("type") == "log") {
      c.expect(max_abs_diff(j.at("p_hat").get<Vector>(), r) <= 1e-6, tag + ": softmax not saturated");
    }
    c.expect(j.at("well_behaved") == "yes", tag + ": estimate not well behaved");
  } else if (args.front() == "portfolio") {
    for (const Json& round : j.at("rounds")) {
      const Json& inv = round.at("investor");
      const double gap = max_abs_diff(inv.at("allocation").get<Vector>(), inv.at("prices").get<Vector>());
      c.expect(inv.at("allocation_matches_prices") == true && gap <= 1e-5, tag + ": allocation off prices by " + fmt(gap));
    }
  }
}

void cli_criterion(Check& c) {
  const fs::path src = SCOREKIT_SOURCE_DIR;
  const fs::path work = fs::temp_directory_path() / "scorekit_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  fs::copy(src / "data", work / "data", fs::copy_options::recursive);
  const fs::path old = fs::current_path();
  fs::current_path(work);

  // Documented exit codes.
  std::ofstream("bad.csv") << "1\n4\n";
  std::ofstream("third.csv") << "3\n";
  const std::string log = R"({"type":"log"})", wp2 = R"({"type":"weighted_power","beta":2})";
  const std::vector<std::pair<std::vector<std::string>, int>> codes{
      {{"score", "--rule", log, "--pred", "0.5,0.3,0.2", "--input", "data/outcomes.csv", "--out", "s.json"}, 0},
      {{"compat", "--family", wp2, "--rule", R"({"type":"brier"})", "--m", "3", "--out", "c.json"}, 1},
      {{"score", "--rule", log, "--pred", "0.5,0.3,0.2", "--input", "bad.csv", "--out", "s.json"}, 2},
      {{"score", "--rule", R"({"type":"log","x":1})", "--pred", "0.5,0.5", "--input", "third.csv", "--out", "s.json"}, 2},
      {{"score", "--bogus"}, 2},
      {{"score", "--rule", log, "--pred", "0.5,0.5,0", "--input", "third.csv", "--out", "s.json"}, 3},
      {{"estimate", "--rule", log, "--model", "softmax:3", "--input", "data/outcomes.csv", "--max-iters", "1", "--out",
        "e.json"},
       4},
      {{"compat", "--family", wp2, "--rule", log, "--m", "2", "--out", "c.json"}, 5},
  };
  for (const auto& [args, want] : codes) {
    const int got = cli_run(args).code;
    c.expect(got == want, args.front() + " expected exit " + std::to_string(want) + ", got " + std::to_string(got));
  }

  // Fixed seed, byte-identical output, including through the environment.
  const std::vector<std::string> sim{
      "portfolio", "--config",
      R"({"rule":{"type":"log"},"family":{"type":"weighted_power","beta":2},"model":"binomial_squares",)"
      R"("history":{"truth":[0.3,0.5,0.2],"n":20,"seed":3},"rounds":5,"seed":9,"control_rule":{"type":"power","beta":2}})",
      "--out", "p.json"};
  cli_run(sim);
  const std::string a = slurp("p.json");
  cli_run(sim);
  c.expect(!a.empty() && slurp("p.json") == a, "portfolio output not byte-identical for a fixed seed");
  cli_run({"compat", "--family", wp2, "--rule", log, "--m", "3", "--seed", "21", "--out", "c1.json"});
  setenv("SCOREKIT_SEED", "21", 1);
  cli_run({"compat", "--family", wp2, "--rule", log, "--m", "3", "--out", "c2.json"});
  unsetenv("SCOREKIT_SEED");
  c.expect(slurp("c1.json") == slurp("c2.json"), "SCOREKIT_SEED does not reproduce --seed");

  // README examples.
  const auto cmds = readme_commands(src / "README.md");
  bool compat = false, estimate = false, portfolio = false;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (cmds[i].empty()) continue;
    compat |= cmds[i].front() == "compat";
    estimate |= cmds[i].front() == "estimate";
    portfolio |= cmds[i].front() == "portfolio";
    check_readme_example(c, cmds[i], work, static_cast<int>(i + 1));
  }
  c.expect(compat && estimate && portfolio, "README lacks compat, estimate or portfolio examples");
  c.note(std::to_string(cmds.size()) + " README invocations");

  fs::current_path(old);
  fs::remove_all(work);
}

struct Criterion {
  int id;
  std::string title;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "propriety of rules and family members", propriety},
      {2, "homogeneity, supporting hyperplanes and convexity of S", entropy_relations},
      {3, "baselines of the log rule and of family members", baselines},
      {4, "quasi-Bregman families vs log: parallelism, constant a(q) = h'(g(1))g'(1)", log_compatibility},
      {5, "Bregman families vs Bregman and power rules", bregman_compatibility},
      {6, "stationarity transfer, negative control, counterexample paths", stationarity_transfer},
      {7, "Hessian identity for log-compatible pairs", hessian_identity},
      {8, "estimation closed forms, grid oracle, equivalence invariance", estimation},
      {9, "domination under compatible pricing", domination},
      {10, "analytic gradients vs central differences", gradients},
      {11, "m = 2 compatibility is degenerate", degeneracy},
      {12, "CLI exit codes, determinism, README examples", cli_criterion},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (c.passed() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << " ["
              << c.checks() - static_cast<int>(c.failures().size()) << "/" << c.checks() << " checks, " << fmt(secs)
              << " s]\n";
    for (const std::string& f : c.failures()) std::cout << "    x " << f << "\n";
    for (const std::string& n : c.notes()) std::cout << "    - " << n << "\n";
    if (!c.passed()) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << "\n";
  return failed == 0 ? 0 : 1;
}
