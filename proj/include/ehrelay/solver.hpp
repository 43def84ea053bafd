/*
Copyright 2026 ehrelay contributors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ehrelay/core.hpp"

namespace ehrelay {

struct SolverConfig {
    double barrier_start = 1.0;      ///< initial barrier parameter t
    double barrier_multiplier = 10.0;
    double newton_tol = 1e-10;       ///< stop Newton when lambda^2 / 2 falls below
    std::size_t max_newton_iters = 200;
    std::size_t max_outer_iters = 40;
    double objective_tol = 1e-8;     ///< stop outer loop when m/t < tol * max(1, |obj|)
    double start_margin = 0.1;       ///< initial gap between r and the rate bounds
};

/// Throughput maximization in epigraph form. Variables per epoch i:
/// x = (p1[0..n-1], q[0..n-1], r[0..n-1]) where q is b^2 p2 when both nodes
/// have separate budgets, or the combined power p1 + b^2 p2 for the modes
/// that constrain only totals. The objective sum(l r) is linear; every
/// constraint is linear or of the form log2(1 + (a.x)/N0) - r >= 0, so the
/// feasible set is convex and the log barrier is self-concordant enough for
/// damped Newton.
class EpigraphProblem {
  public:
    /// A linear inequality d.x + c >= 0.
    struct LinearConstraint {
        Eigen::VectorXd d;
        double c;
    };
    /// log2(1 + (a.x)/N0) - x[r_index] >= 0.
    struct RateConstraint {
        Eigen::VectorXd a;
        std::size_t r_index;
    };

    /// The problem keeps references to profile and ch; both must outlive it.
    static EpigraphProblem build(const EHProfile &profile, const ChannelModel &ch, EtMode mode);

    std::size_t dim() const { return 3 * n_; }
    std::size_t epoch_count() const { return n_; }
    std::size_t constraint_count() const { return linear_.size() + rate_.size(); }
    EtMode mode() const { return mode_; }

    double objective(const Eigen::VectorXd &x) const;
    /// Smallest constraint value at x; x is strictly feasible iff > 0.
    double min_constraint(const Eigen::VectorXd &x) const;

    /// phi(x) = -t * objective - sum(log g_j); +inf outside the interior.
    double barrier(double t, const Eigen::VectorXd &x) const;
    Eigen::VectorXd barrier_gradient(double t, const Eigen::VectorXd &x) const;
    Eigen::MatrixXd barrier_hessian(double t, const Eigen::VectorXd &x) const;

    Eigen::VectorXd strictly_feasible_start(double margin) const;

    /// Recover a (schedule, transfers) pair in the problem's mode from x.
    AllocationResult to_result(const Eigen::VectorXd &x, std::string policy_tag) const;

  private:
    EpigraphProblem() = default;

    std::size_t n_ = 0;
    EtMode mode_ = EtMode::none;
    double noise_ = 1.0;
    const EHProfile *profile_ = nullptr;
    const ChannelModel *channel_ = nullptr;
    std::vector<LinearConstraint> linear_;
    std::vector<RateConstraint> rate_;
    std::vector<double> cum_p1_budget_; // empty when p1 has no own budget
    std::vector<double> cum_q_budget_;
};

/// Interior-point solve failed to converge; best carries the last iterate.
class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string &what, std::optional<AllocationResult> best_iterate)
        : std::runtime_error(what), best(std::move(best_iterate)) {}
    std::optional<AllocationResult> best;
};

/// Reference optimum with separate S and R causality budgets.
AllocationResult solve_no_et(const EHProfile &profile, const ChannelModel &ch,
                             const SolverConfig &cfg = {});
/// Reference optimum with the S budget plus the combined total budget.
AllocationResult solve_one_way(const EHProfile &profile, const ChannelModel &ch,
                               const SolverConfig &cfg = {});
/// Reference optimum with only the combined total budget.
AllocationResult solve_two_way(const EHProfile &profile, const ChannelModel &ch,
                               const SolverConfig &cfg = {});

} // namespace ehrelay
