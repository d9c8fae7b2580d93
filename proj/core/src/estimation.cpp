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

#include "scorekit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "scorekit/errors.hpp"

namespace scorekit {

std::string_view to_string(WellBehaved w) {
  switch (w) {
    case WellBehaved::yes: return "yes";
    case WellBehaved::no: return "no";
    case WellBehaved::unknown: return "unknown";
  }
  return "unknown";
}

Vector score_gradient_theta(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                            std::span<const double> theta) {
  const Distribution p = model.evaluate(theta);
  const TangentVector g = rule.grad_p(p.weights(), r.weights());
  const Eigen::MatrixXd jac = model.jacobian(theta);
  Vector out(model.dim(), 0.0);
  for (Eigen::Index j = 0; j < jac.cols(); ++j) {
    for (Eigen::Index i = 0; i < jac.rows(); ++i) out[static_cast<std::size_t>(j)] += jac(i, j) * g[static_cast<std::size_t>(i)];
  }
  return out;
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr int kMaxShrinks = 60;
constexpr std::size_t kNonmonotoneWindow = 10;
constexpr double kRidge = 1e-12;
constexpr double kAgreeTol = 1e-6;
constexpr double kHessianStep = 1e-5;
constexpr double kBoundaryFraction = 1e-6;

struct Ascent {
  Vector theta;
  double value = -std::numeric_limits<double>::infinity();
  double grad_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

std::optional<double> objective(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                                std::span<const double> theta) {
  const ScoreValue s = rule.score(model.evaluate(theta).weights(), r.weights());
  if (!s.is_finite()) return std::nullopt;
  return s.value();
}

// Parameters are clipped this far (relative to the box width) inside Theta.
constexpr double kClipFraction = 1e-9;

double clip_margin(const ParametricModel& model, std::size_t j) {
  return kClipFraction * (model.upper()[j] - model.lower()[j]);
}

// Metric J^T J (Euclidean distance between model points) plus a small ridge.
Eigen::MatrixXd metric(const ParametricModel& model, std::span<const double> theta) {
  const Eigen::MatrixXd jac = model.jacobian(theta);
  Eigen::MatrixXd m = jac.transpose() * jac;
  const double ridge = kRidge * (1.0 + m.trace() / static_cast<double>(m.rows()));
  m.diagonal().array() += ridge;
  return m;
}

// M^-1 g on the coordinates not pinned by an active bound; zero elsewhere.
Vector preconditioned(const Eigen::MatrixXd& m, const Vector& g, const std::vector<bool>& pinned) {
  std::vector<Eigen::Index> free;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!pinned[j]) free.push_back(static_cast<Eigen::Index>(j));
  }
  Vector d(g.size(), 0.0);
  if (free.empty()) return d;
  const auto k = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd sub(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i) = g[static_cast<std::size_t>(free[static_cast<std::size_t>(i)])];
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(free[static_cast<std::size_t>(i)], free[static_cast<std::size_t>(j)]);
  }
  const Eigen::VectorXd x = sub.llt().solve(rhs);
  for (Eigen::Index i = 0; i < k; ++i) d[static_cast<std::size_t>(free[static_cast<std::size_t>(i)])] = x(i);
  return d;
}

struct Point {
  Vector g;                 // projected gradient
  std::vector<bool> pinned;  // coordinates held by an active bound
};

Point gradient_at(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                  std::span<const double> theta) {
  Point pt;
  pt.g = score_gradient_theta(rule, model, r, theta);
  pt.pinned.assign(pt.g.size(), false);
  for (std::size_t j = 0; j < pt.g.size(); ++j) {
    const double tol = 2.0 * clip_margin(model, j);
    if ((theta[j] - model.lower()[j] <= tol && pt.g[j] < 0.0) ||
        (model.upper()[j] - theta[j] <= tol && pt.g[j] > 0.0)) {
      pt.g[j] = 0.0;
      pt.pinned[j] = true;
    }
  }
  return pt;
}

// Preconditioned projected gradient ascent. The direction is M^-1 g with
// the model metric M, the initial step a Barzilai-Borwein estimate in that
// metric, accepted by a nonmonotone Armijo test.
Ascent ascend(const ScoringRule& rule, const ParametricModel& model, const Distribution& r, Vector theta,
              const OptimizerSettings& opts) {
  Ascent a;
  const auto f0 = objective(rule, model, r, theta);
  if (!f0) return a;
  a.value = *f0;
  Point pt = gradient_at(rule, model, r, theta);
  a.grad_norm = norm2(pt.g);
  double step = 1.0;
  const std::size_t n = theta.size();
  std::deque<double> recent{a.value};

  for (; a.iterations < opts.max_iters; ++a.iterations) {
    if (a.grad_norm <= opts.grad_tol) break;
    const double reference = *std::max_element(recent.begin(), recent.end());
    const Eigen::MatrixXd m = metric(model, theta);
    const Vector dir = preconditioned(m, pt.g, pt.pinned);
    bool accepted = false;
    for (int k = 0; k < kMaxShrinks; ++k, step *= kShrink) {
      Vector trial(n);
      double ascent = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double lo = model.lower()[j] + clip_margin(model, j);
        const double hi = model.upper()[j] - clip_margin(model, j);
        trial[j] = std::clamp(theta[j] + step * dir[j], lo, hi);
        ascent += pt.g[j] * (trial[j] - theta[j]);
      }
      if (!model.contains(trial) || !(ascent > 0.0)) continue;
      const auto value = objective(rule, model, r, trial);
      if (!value) continue;
      Point next = gradient_at(rule, model, r, trial);
      const double gn_trial = norm2(next.g);
      const bool armijo = *value >= reference + kArmijo * ascent;
      // Below rounding resolution of the objective, accept gradient-reducing steps.
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a.value));
      const bool flat = *value >= a.value - slack && gn_trial < a.grad_norm;
      if (!armijo && !flat) continue;

      Eigen::VectorXd sv(static_cast<Eigen::Index>(n));
      double sy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        sv(static_cast<Eigen::Index>(j)) = trial[j] - theta[j];
        sy += (trial[j] - theta[j]) * (next.g[j] - pt.g[j]);
      }
      const double sms = sv.dot(metric(model, trial) * sv);
      theta = std::move(trial);
      pt = std::move(next);
      a.value = *value;
      a.grad_norm = gn_trial;
      recent.push_back(a.value);
      if (recent.size() > kNonmonotoneWindow) recent.pop_front();
      step = sy < 0.0 ? std::clamp(sms / -sy, 1e-8, 1e8) : std::min(step * 4.0, 1e8);
      accepted = true;
      break;
    }
    if (!accepted) break;
  }
  a.converged = a.grad_norm <= opts.grad_tol;
  a.theta = std::move(theta);
  return a;
}

bool near_boundary(const ParametricModel& model, std::span<const double> theta) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double margin = kBoundaryFraction * (model.upper()[j] - model.lower()[j]);
    if (theta[j] - model.lower()[j] < margin || model.upper()[j] - theta[j] < margin) return true;
  }
  return false;
}

// Negative definiteness of the finite-difference theta-Hessian.
bool hessian_negative_definite(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                               const Vector& theta) {
  const auto n = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd hess(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    Vector plus = theta, minus = theta;
    plus[static_cast<std::size_t>(l)] += kHessianStep;
    minus[static_cast<std::size_t>(l)] -= kHessianStep;
    if (!model.contains(plus) || !model.contains(minus)) return false;
    const Vector gp = score_gradient_theta(rule, model, r, plus);
    const Vector gm = score_gradient_theta(rule, model, r, minus);
    for (Eigen::Index k = 0; k < n; ++k) {
      hess(k, l) = (gp[static_cast<std::size_t>(k)] - gm[static_cast<std::size_t>(k)]) / (2.0 * kHessianStep);
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (hess + hess.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  return eig.info() == Eigen::Success && eig.eigenvalues().maxCoeff() < 0.0;
}

}  // namespace

EstimationResult optimize_score(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                                const OptimizerSettings& opts) {
  if (r.size() != model.outcomes()) throw DomainError("outcome distribution does not match the model");
  if (!r.interior() && !rule.flags().outcome_boundary_ok) {
    throw DomainError(rule.name() + ": outcome distribution must be interior");
  }

  std::mt19937_64 rng(opts.seed);
  EstimationResult result;
  const int n_starts = std::max(1, opts.n_starts);
  for (int s = 0; s < n_starts; ++s) {
    Vector start(model.dim());
    for (std::size_t j = 0; j < start.size(); ++j) {
      std::uniform_real_distribution<double> u(model.lower()[j], model.upper()[j]);
      do {
        start[j] = u(rng);
      } while (!(start[j] > model.lower()[j] && start[j] < model.upper()[j]));
    }
    result.starts.push_back(std::move(start));
  }

  std::vector<Ascent> runs;
  runs.reserve(result.starts.size());
  for (const Vector& start : result.starts) runs.push_back(ascend(rule, model, r, start, opts));

  // Best converged run; ties resolved by the lowest start index.
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].converged) continue;
    ++result.converged_starts;
    if (!best || runs[i].value > runs[*best].value) best = i;
  }
  if (!best) {
    double gn = std::numeric_limits<double>::infinity();
    for (const Ascent& a : runs) gn = std::min(gn, a.grad_norm);
    throw NumericError(rule.name() + " on " + model.name() +
                       ": no start converged (smallest gradient norm " + std::to_string(gn) + ")");
  }

  const Ascent& chosen = runs[*best];
  result.theta_hat = chosen.theta;
  result.p_hat = model.evaluate(chosen.theta);
  result.score_at_opt = chosen.value;
  result.grad_norm = chosen.grad_norm;
  result.iterations = chosen.iterations;
  result.at_boundary = near_boundary(model, chosen.theta);

  result.restarts_agree = true;
  for (const Ascent& a : runs) {
    if (a.converged && max_abs_diff(a.theta, chosen.theta) > kAgreeTol) result.restarts_agree = false;
  }
  const bool all_converged = result.converged_starts == static_cast<int>(runs.size());
  const bool concave = !result.at_boundary && hessian_negative_definite(rule, model, r, chosen.theta);

  if (result.at_boundary || !concave || !result.restarts_agree) {
    result.well_behaved = WellBehaved::no;
  } else if (all_converged) {
    result.well_behaved = WellBehaved::yes;
  } else {
    result.well_behaved = WellBehaved::unknown;
  }
  return result;
}

EstimationResult mle(const ParametricModel& model, const Distribution& r, const OptimizerSettings& opts) {
  return optimize_score(log_rule(), model, r, opts);
}

TransferReport transfer_check(const WeightedFamily& family, const ScoringRule& rule, const ParametricModel& model,
                              const Distribution& r, const OptimizerSettings& opts) {
  if (!r.interior()) throw DomainError("transfer check needs an interior outcome distribution");
  TransferReport report;
  report.base = optimize_score(rule, model, r, opts);
  report.member_baseline = report.base.p_hat;
  const ScoringRule member = family.member(report.base.p_hat);
  report.member_grad_norm = norm2(score_gradient_theta(member, model, r, report.base.theta_hat));
  if (report.base.well_behaved == WellBehaved::yes) {
    report.passed = report.member_grad_norm <= kTransferTolerance;
  }
  return report;
}

std::optional<CounterexamplePath> counterexample_path(const WeightedFamily& family, const ScoringRule& rule,
                                                      const Distribution& q, const Distribution& r, double tol) {
  if (q.size() < 3) throw DomainError("counterexample paths need m >= 3");
  if (q.size() != r.size()) throw DomainError("q and r disagree on outcome count");
  if (!q.interior() || !r.interior()) throw DomainError("counterexample path needs interior q and r");

  const Vector v = family.member(q).grad_p(q.weights(), r.weights()).vector();
  const Vector w = rule.grad_p(q.weights(), r.weights()).vector();
  const double vv = dot(v, v);
  const double ww = dot(w, w);
  if (!(vv > 1e-28) || !(ww > 1e-28)) throw NumericError("gradient vanishes at q; choose r != q");
  const double vw = dot(v, w);
  const double deviation = std::max(0.0, 1.0 - vw * vw / (vv * ww));
  if (deviation <= tol) return std::nullopt;

  Vector b(v.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = v[i] - (vw / ww) * w[i];
  return CounterexamplePath{linear_path_model(q, b), v, w, b, deviation};
}

}  // namespace scorekit
