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

#ifndef DRGL_LFD_H_
#define DRGL_LFD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drgl/error.h"
#include "drgl/simplex.h"

namespace drgl {

enum class CostKind { kEuclidean, kSquaredEuclidean };
enum class RadiusRule { kAbsolute, kMedianFraction };

const char* to_string(CostKind kind);
const char* to_string(RadiusRule rule);

// Wasserstein budget configuration for the least-favorable-distribution LP.
struct DroConfig {
  // Used when radius_rule == kAbsolute: one radius per class, or a single
  // value shared by all classes.
  std::vector<double> radii;
  // Used when radius_rule == kMedianFraction: every class gets
  // rho * median of the off-diagonal costs of the mini-set.
  double rho = 0.1;
  CostKind cost_kind = CostKind::kEuclidean;
  RadiusRule radius_rule = RadiusRule::kMedianFraction;
  double solver_tolerance = 1e-9;
  int max_iterations = 200000;
};

void validate(const DroConfig& config);

// A training mini-batch; every class in [0, M) must appear among `labels`.
struct MiniSet {
  std::vector<std::int32_t> nodes;
  std::vector<std::int32_t> labels;
};

// Per-class weights over the s support points (M x s). Built from labels
// these are uniform Dirac masses on the class members, but any
// non-negative rows summing to one are accepted by solve_lfd.
struct EmpiricalDistribution {
  Eigen::MatrixXd weights;

  Eigen::Index num_classes() const { return weights.rows(); }
  Eigen::Index support_size() const { return weights.cols(); }
};

struct LfdSolution {
  Eigen::MatrixXd lfd;                     // M x s, row m is p*_m
  std::vector<Eigen::MatrixXd> transport;  // M plans, gamma_m(i, j), s x s
  Eigen::VectorXd budget_duals;            // lambda_m >= 0
  Eigen::VectorXd radii;                   // radii actually used
  double total_margin = 0.0;               // sum_i max_m p*_m(i)
  double worst_case_risk = 0.0;            // M - total_margin
  std::vector<Eigen::Index> basis;         // final simplex basis
  int iterations = 0;
};

// Raised when the simplex does not reach optimality. dump() holds the
// instance and solver trace in the format written by format_lfd_dump().
class LfdSolveError : public Error {
 public:
  LfdSolveError(const std::string& what, std::string dump)
      : Error(what), dump_(std::move(dump)) {}
  const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

// C(i, j) = |xi_i - xi_j| or |xi_i - xi_j|^2 over the rows of `support`.
Eigen::MatrixXd pairwise_costs(const Eigen::MatrixXd& support, CostKind kind);

// Uniform Dirac weights per class. Throws InvalidArgument when a class in
// [0, num_classes) has no member.
EmpiricalDistribution empirical_distributions(std::span<const std::int32_t> labels,
                                              int num_classes);

// Median of the s(s-1) off-diagonal entries (average of the two middle
// order statistics when their count is even; 0 when s < 2). When `weights`
// is given it receives d(median)/dC: 1 or 1/2 on the selected entries.
double offdiagonal_median(const Eigen::MatrixXd& costs,
                          Eigen::MatrixXd* weights = nullptr);

Eigen::VectorXd resolve_radii(const Eigen::MatrixXd& costs,
                              const DroConfig& config, int num_classes);

// Solves
//   min  sum_i t_i
//   s.t. t_i >= p_m(i)                             for all m, i
//        sum_i gamma_m(i, j) = phat_m(j)           for all m, j
//        sum_j gamma_m(i, j) = p_m(i)              for all m, i
//        sum_ij gamma_m(i, j) C(i, j) <= radius_m  for all m
//        gamma >= 0
// with p eliminated through the row marginals and gamma_m restricted to the
// columns where phat_m is positive (the column marginal pins the others to
// zero). Throws LfdSolveError when the simplex fails.
LfdSolution solve_lfd(const Eigen::MatrixXd& costs,
                      const EmpiricalDistribution& phat,
                      const DroConfig& config);

// Same, with explicit radii (one per class).
LfdSolution solve_lfd(const Eigen::MatrixXd& costs,
                      const EmpiricalDistribution& phat,
                      const Eigen::VectorXd& radii, const DroConfig& config);

// Half the L1 distance between two weight vectors.
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Worst violations of the LfdSolution invariants against its inputs.
struct LfdResiduals {
  double column_marginal = 0.0;  // max |sum_i gamma(i, j) - phat(j)|
  double row_marginal = 0.0;     // max |sum_j gamma(i, j) - p*(i)|
  double budget_excess = 0.0;    // max(0, max_m cost_m - radius_m)
  double min_weight = 0.0;       // min over p* and gamma entries
  double margin_gap = 0.0;       // |total_margin - sum_i max_m p*_m(i)|
};

LfdResiduals lfd_residuals(const LfdSolution& solution,
                           const Eigen::MatrixXd& costs,
                           const EmpiricalDistribution& phat);

// Plain-text description of a failed instance:
//   drgl-lfd-dump v1
//   status <status>
//   support <s> classes <M> cost_kind <kind> tolerance <tol>
//   radii <r_1> ... <r_M>
//   costs            (s rows of s values)
//   empirical        (M rows of s values)
//   trace            (one simplex pivot per line)
//   end
std::string format_lfd_dump(const Eigen::MatrixXd& costs,
                            const EmpiricalDistribution& phat,
                            const Eigen::VectorXd& radii, const DroConfig& config,
                            LpStatus status, const std::vector<std::string>& trace);

}  // namespace drgl

#endif  // DRGL_LFD_H_
