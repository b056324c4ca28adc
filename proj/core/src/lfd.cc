// Copyright 2026 The DRGL Authors
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

#include "drgl/lfd.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace drgl {

using Eigen::Index;

const char* to_string(CostKind kind) {
  return kind == CostKind::kEuclidean ? "euclidean" : "squared_euclidean";
}

const char* to_string(RadiusRule rule) {
  return rule == RadiusRule::kAbsolute ? "absolute" : "median_fraction";
}

void validate(const DroConfig& config) {
  if (!(config.solver_tolerance > 0.0))
    throw InvalidArgument("dro: solver_tolerance must be positive");
  if (config.max_iterations < 1)
    throw InvalidArgument("dro: max_iterations must be positive");
  if (config.radius_rule == RadiusRule::kMedianFraction && !(config.rho >= 0.0))
    throw InvalidArgument("dro: rho must be non-negative");
  for (double r : config.radii)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw InvalidArgument("dro: radii must be finite and non-negative");
}

Eigen::MatrixXd pairwise_costs(const Eigen::MatrixXd& support, CostKind kind) {
  const Index s = support.rows();
  Eigen::MatrixXd costs = Eigen::MatrixXd::Zero(s, s);
  for (Index i = 0; i < s; ++i)
    for (Index j = i + 1; j < s; ++j) {
      const double sq = (support.row(i) - support.row(j)).squaredNorm();
      const double c = kind == CostKind::kEuclidean ? std::sqrt(sq) : sq;
      costs(i, j) = c;
      costs(j, i) = c;
    }
  return costs;
}

EmpiricalDistribution empirical_distributions(std::span<const std::int32_t> labels,
                                              int num_classes) {
  if (num_classes < 1) throw InvalidArgument("empirical: need at least one class");
  const auto s = static_cast<Index>(labels.size());
  std::vector<int> count(num_classes, 0);
  for (auto y : labels) {
    if (y < 0 || y >= num_classes)
      throw InvalidArgument("empirical: label out of range");
    ++count[y];
  }
  for (int m = 0; m < num_classes; ++m)
    if (count[m] == 0)
      throw InvalidArgument("empirical: class " + std::to_string(m) +
                            " has no member in the mini-set");
  EmpiricalDistribution out;
  out.weights = Eigen::MatrixXd::Zero(num_classes, s);
  for (Index i = 0; i < s; ++i)
    out.weights(labels[i], i) = 1.0 / count[labels[i]];
  return out;
}

double offdiagonal_median(const Eigen::MatrixXd& costs, Eigen::MatrixXd* weights) {
  const Index s = costs.rows();
  if (weights) *weights = Eigen::MatrixXd::Zero(s, s);
  if (s < 2) return 0.0;

  struct Entry {
    double value;
    Index i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(s * (s - 1)));
  for (Index i = 0; i < s; ++i)
    for (Index j = 0; j < s; ++j)
      if (i != j) entries.push_back({costs(i, j), i, j});
  // Stable order on ties so the selected entries are reproducible.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });
  const std::size_t count = entries.size();
  const std::size_t hi = count / 2;
  if (count % 2 == 1) {
    if (weights) (*weights)(entries[hi].i, entries[hi].j) = 1.0;
    return entries[hi].value;
  }
  const std::size_t lo = hi - 1;
  if (weights) {
    (*weights)(entries[lo].i, entries[lo].j) += 0.5;
    (*weights)(entries[hi].i, entries[hi].j) += 0.5;
  }
  return 0.5 * (entries[lo].value + entries[hi].value);
}

Eigen::VectorXd resolve_radii(const Eigen::MatrixXd& costs,
                              const DroConfig& config, int num_classes) {
  validate(config);
  if (config.radius_rule == RadiusRule::kMedianFraction)
    return Eigen::VectorXd::Constant(num_classes,
                                     config.rho * offdiagonal_median(costs));
  if (config.radii.size() == 1)
    return Eigen::VectorXd::Constant(num_classes, config.radii.front());
  if (static_cast<int>(config.radii.size()) != num_classes)
    throw InvalidArgument("dro: expected 1 or M absolute radii");
  return Eigen::Map<const Eigen::VectorXd>(config.radii.data(), num_classes);
}

LfdSolution solve_lfd(const Eigen::MatrixXd& costs,
                      const EmpiricalDistribution& phat,
                      const DroConfig& config) {
  return solve_lfd(costs, phat,
                   resolve_radii(costs, config, static_cast<int>(phat.num_classes())),
                   config);
}

LfdSolution solve_lfd(const Eigen::MatrixXd& costs,
                      const EmpiricalDistribution& phat,
                      const Eigen::VectorXd& radii, const DroConfig& config) {
  validate(config);
  const Index s = costs.rows();
  const Index num_classes = phat.num_classes();
  if (costs.cols() != s || phat.support_size() != s || s == 0)
    throw InvalidArgument("solve_lfd: cost and empirical shapes disagree");
  if (radii.size() != num_classes)
    throw InvalidArgument("solve_lfd: need one radius per class");
  if (!costs.allFinite() || (costs.array() < 0.0).any())
    throw InvalidArgument("solve_lfd: costs must be finite and non-negative");
  if ((radii.array() < 0.0).any() || !radii.allFinite())
    throw InvalidArgument("solve_lfd: radii must be finite and non-negative");
  for (Index m = 0; m < num_classes; ++m) {
    if ((phat.weights.row(m).array() < 0.0).any() ||
        std::abs(phat.weights.row(m).sum() - 1.0) > 1e-12)
      throw InvalidArgument("solve_lfd: empirical weights must be a distribution");
  }

  // Column layout: gamma blocks (class m, support column j, row i), then t,
  // then budget slacks, then dominance slacks.
  std::vector<std::vector<Index>> support(num_classes);
  for (Index m = 0; m < num_classes; ++m)
    for (Index j = 0; j < s; ++j)
      if (phat.weights(m, j) > 0.0) support[m].push_back(j);

  std::vector<Index> gamma_offset(num_classes + 1, 0);
  for (Index m = 0; m < num_classes; ++m)
    gamma_offset[m + 1] =
        gamma_offset[m] + static_cast<Index>(support[m].size()) * s;
  const Index t_offset = gamma_offset[num_classes];
  const Index budget_slack_offset = t_offset + s;
  const Index dominance_slack_offset = budget_slack_offset + num_classes;
  const Index num_cols = dominance_slack_offset + num_classes * s;

  const Index marginal_rows = t_offset / s;
  const Index budget_row0 = marginal_rows;
  const Index dominance_row0 = budget_row0 + num_classes;
  const Index num_rows = dominance_row0 + num_classes * s;

  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Zero(num_rows, num_cols);
  lp.b = Eigen::VectorXd::Zero(num_rows);
  lp.c = Eigen::VectorXd::Zero(num_cols);
  lp.c.segment(t_offset, s).setOnes();

  Index marginal_row = 0;
  for (Index m = 0; m < num_classes; ++m) {
    for (std::size_t k = 0; k < support[m].size(); ++k, ++marginal_row) {
      const Index j = support[m][k];
      const Index base = gamma_offset[m] + static_cast<Index>(k) * s;
      lp.b[marginal_row] = phat.weights(m, j);
      for (Index i = 0; i < s; ++i) {
        lp.a(marginal_row, base + i) = 1.0;
        lp.a(budget_row0 + m, base + i) = costs(i, j);
        lp.a(dominance_row0 + m * s + i, base + i) = -1.0;
      }
    }
    lp.b[budget_row0 + m] = radii[m];
    lp.a(budget_row0 + m, budget_slack_offset + m) = 1.0;
    for (Index i = 0; i < s; ++i) {
      lp.a(dominance_row0 + m * s + i, t_offset + i) = 1.0;
      lp.a(dominance_row0 + m * s + i, dominance_slack_offset + m * s + i) = -1.0;
    }
  }

  SimplexOptions options;
  options.tolerance = config.solver_tolerance;
  options.max_iterations = config.max_iterations;
  LpSolution lp_solution = solve_lp(lp, options);
  if (lp_solution.status != LpStatus::kOptimal) {
    options.record_trace = true;
    const LpSolution traced = solve_lp(lp, options);
    throw LfdSolveError(
        std::string("solve_lfd: simplex ended with status ") +
            to_string(lp_solution.status),
        format_lfd_dump(costs, phat, radii, config, traced.status, traced.trace));
  }

  LfdSolution out;
  out.radii = radii;
  out.lfd = Eigen::MatrixXd::Zero(num_classes, s);
  out.transport.assign(num_classes, Eigen::MatrixXd::Zero(s, s));
  out.budget_duals.resize(num_classes);
  for (Index m = 0; m < num_classes; ++m) {
    for (std::size_t k = 0; k < support[m].size(); ++k) {
      const Index j = support[m][k];
      const Index base = gamma_offset[m] + static_cast<Index>(k) * s;
      out.transport[m].col(j) = lp_solution.x.segment(base, s);
    }
    out.lfd.row(m) = out.transport[m].rowwise().sum().transpose();
    // y_budget = dV/d(radius) <= 0 for a minimization with a <= row.
    out.budget_duals[m] = std::max(0.0, -lp_solution.duals[budget_row0 + m]);
  }
  out.total_margin = out.lfd.colwise().maxCoeff().sum();
  out.worst_case_risk = static_cast<double>(num_classes) - out.total_margin;
  out.basis = std::move(lp_solution.basis);
  out.iterations = lp_solution.iterations;
  return out;
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw InvalidArgument("total_variation: size mismatch");
  return 0.5 * (p - q).cwiseAbs().sum();
}

LfdResiduals lfd_residuals(const LfdSolution& solution,
                           const Eigen::MatrixXd& costs,
                           const EmpiricalDistribution& phat) {
  LfdResiduals r;
  r.min_weight = solution.lfd.minCoeff();
  for (Index m = 0; m < phat.num_classes(); ++m) {
    const Eigen::MatrixXd& gamma = solution.transport[m];
    r.column_marginal = std::max(
        r.column_marginal,
        (gamma.colwise().sum() - phat.weights.row(m)).cwiseAbs().maxCoeff());
    r.row_marginal = std::max(
        r.row_marginal,
        (gamma.rowwise().sum().transpose() - solution.lfd.row(m)).cwiseAbs().maxCoeff());
    const double spent = gamma.cwiseProduct(costs).sum();
    r.budget_excess = std::max(r.budget_excess, spent - solution.radii[m]);
    r.min_weight = std::min(r.min_weight, gamma.minCoeff());
  }
  r.margin_gap =
      std::abs(solution.total_margin - solution.lfd.colwise().maxCoeff().sum());
  return r;
}

std::string format_lfd_dump(const Eigen::MatrixXd& costs,
                            const EmpiricalDistribution& phat,
                            const Eigen::VectorXd& radii, const DroConfig& config,
                            LpStatus status, const std::vector<std::string>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "drgl-lfd-dump v1\n";
  out << "status " << to_string(status) << "\n";
  out << "support " << costs.rows() << " classes " << phat.num_classes()
      << " cost_kind " << to_string(config.cost_kind) << " tolerance "
      << config.solver_tolerance << "\n";
  out << "radii";
  for (Index m = 0; m < radii.size(); ++m) out << ' ' << radii[m];
  out << "\ncosts\n";
  for (Index i = 0; i < costs.rows(); ++i) {
    for (Index j = 0; j < costs.cols(); ++j) out << (j ? " " : "") << costs(i, j);
    out << "\n";
  }
  out << "empirical\n";
  for (Index m = 0; m < phat.num_classes(); ++m) {
    for (Index j = 0; j < phat.support_size(); ++j)
      out << (j ? " " : "") << phat.weights(m, j);
    out << "\n";
  }
  out << "trace\n";
  for (const auto& line : trace) out << line << "\n";
  out << "end\n";
  return out.str();
}

}  // namespace drgl
