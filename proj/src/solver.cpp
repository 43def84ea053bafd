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

#include "ehrelay/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ehrelay/policies.hpp"

namespace ehrelay {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd unit(std::size_t dim, std::size_t i, double v = 1.0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    e[static_cast<Eigen::Index>(i)] = v;
    return e;
}

} // namespace

EpigraphProblem EpigraphProblem::build(const EHProfile &profile, const ChannelModel &ch,
                                       EtMode mode) {
    ch.require_relay_usable();
    EpigraphProblem pb;
    pb.n_ = profile.epoch_count();
    pb.mode_ = mode;
    pb.noise_ = ch.noise;
    pb.profile_ = &profile;
    pb.channel_ = &ch;

    const std::size_t n = pb.n_;
    const std::size_t dim = 3 * n;
    const double adag = ch.a_dag();
    const double b2 = ch.b2();

    for (std::size_t i = 0; i < n; ++i)
        if (profile.epoch_length(i) < 1e-9)
            throw ValidationError("degenerate epoch: length below 1e-9 s");

    // Rate epigraph constraints. q stands for b^2 p2 in mode none (the MAC
    // branch sees p1 + q) and for the combined p1 + b^2 p2 otherwise.
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd mac = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        if (mode == EtMode::none) {
            mac[static_cast<Eigen::Index>(i)] = 1.0;
            mac[static_cast<Eigen::Index>(n + i)] = 1.0;
        } else {
            mac[static_cast<Eigen::Index>(n + i)] = 1.0;
        }
        pb.rate_.push_back({std::move(mac), 2 * n + i});
        pb.rate_.push_back({unit(dim, i, adag), 2 * n + i});
    }

    // Nonnegativity of the physical powers.
    for (std::size_t i = 0; i < n; ++i) {
        pb.linear_.push_back({unit(dim, i), 0.0});
        if (mode == EtMode::none) {
            pb.linear_.push_back({unit(dim, n + i), 0.0});
        } else {
            Eigen::VectorXd d = unit(dim, n + i);
            d[static_cast<Eigen::Index>(i)] = -1.0; // q - p1 = b^2 p2 >= 0
            pb.linear_.push_back({std::move(d), 0.0});
        }
    }

    // Cumulative causality budgets.
    auto add_budget = [&](std::size_t block, const std::vector<double> &cum_budget) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < n; ++k) {
            d[static_cast<Eigen::Index>(block + k)] = -profile.epoch_length(k);
            pb.linear_.push_back({d, cum_budget[k]});
        }
    };
    if (mode != EtMode::two_way) {
        pb.cum_p1_budget_.resize(n);
        double cum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            cum += profile.e1[k];
            pb.cum_p1_budget_[k] = cum;
        }
        add_budget(0, pb.cum_p1_budget_);
    }
    {
        pb.cum_q_budget_.resize(n);
        double cum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            cum += mode == EtMode::none ? b2 * profile.e2[k]
                                        : profile.e1[k] + b2 * profile.e2[k];
            pb.cum_q_budget_[k] = cum;
        }
        add_budget(n, pb.cum_q_budget_);
    }
    return pb;
}

double EpigraphProblem::objective(const Eigen::VectorXd &x) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        total += profile_->epoch_length(i) * x[static_cast<Eigen::Index>(2 * n_ + i)];
    return total;
}

double EpigraphProblem::min_constraint(const Eigen::VectorXd &x) const {
    double worst = kInf;
    for (const auto &lc : linear_) worst = std::min(worst, lc.d.dot(x) + lc.c);
    for (const auto &rc : rate_) {
        const double s = rc.a.dot(x);
        const double g = s / noise_ <= -1.0
                             ? -kInf
                             : std::log2(1.0 + s / noise_) -
                                   x[static_cast<Eigen::Index>(rc.r_index)];
        worst = std::min(worst, g);
    }
    return worst;
}

double EpigraphProblem::barrier(double t, const Eigen::VectorXd &x) const {
    double phi = -t * objective(x);
    for (const auto &lc : linear_) {
        const double g = lc.d.dot(x) + lc.c;
        if (g <= 0.0) return kInf;
        phi -= std::log(g);
    }
    for (const auto &rc : rate_) {
        const double s = rc.a.dot(x);
        if (s / noise_ <= -1.0) return kInf;
        const double g = std::log2(1.0 + s / noise_) - x[static_cast<Eigen::Index>(rc.r_index)];
        if (g <= 0.0) return kInf;
        phi -= std::log(g);
    }
    return phi;
}

Eigen::VectorXd EpigraphProblem::barrier_gradient(double t, const Eigen::VectorXd &x) const {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
    for (std::size_t i = 0; i < n_; ++i)
        grad[static_cast<Eigen::Index>(2 * n_ + i)] = -t * profile_->epoch_length(i);
    for (const auto &lc : linear_) {
        const double g = lc.d.dot(x) + lc.c;
        grad -= lc.d / g;
    }
    for (const auto &rc : rate_) {
        const double s = rc.a.dot(x);
        const double g = std::log2(1.0 + s / noise_) - x[static_cast<Eigen::Index>(rc.r_index)];
        Eigen::VectorXd dg = rc.a / ((noise_ + s) * kLn2);
        dg[static_cast<Eigen::Index>(rc.r_index)] -= 1.0;
        grad -= dg / g;
    }
    return grad;
}

Eigen::MatrixXd EpigraphProblem::barrier_hessian(double t, const Eigen::VectorXd &x) const {
    (void)t; // the linear objective has no curvature
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (const auto &lc : linear_) {
        const double g = lc.d.dot(x) + lc.c;
        h += (lc.d * lc.d.transpose()) / (g * g);
    }
    for (const auto &rc : rate_) {
        const double s = rc.a.dot(x);
        const double g = std::log2(1.0 + s / noise_) - x[static_cast<Eigen::Index>(rc.r_index)];
        Eigen::VectorXd dg = rc.a / ((noise_ + s) * kLn2);
        dg[static_cast<Eigen::Index>(rc.r_index)] -= 1.0;
        h += (dg * dg.transpose()) / (g * g);
        // -(1/g) * d2g, with d2g = -a a^T / ((N0+s)^2 ln2), is positive
        h += (rc.a * rc.a.transpose()) / (g * (noise_ + s) * (noise_ + s) * kLn2);
    }
    return h;
}

Eigen::VectorXd EpigraphProblem::strictly_feasible_start(double margin) const {
    const std::size_t dim = 3 * n_;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));

    auto half_min_rate = [&](const std::vector<double> &cum_budget) {
        double best = kInf;
        double cuml = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            cuml += profile_->epoch_length(k);
            best = std::min(best, cum_budget[k] / cuml);
        }
        return 0.5 * best;
    };

    const double qc = half_min_rate(cum_q_budget_);
    double p1c;
    if (mode_ == EtMode::none) {
        p1c = half_min_rate(cum_p1_budget_);
    } else {
        p1c = 0.5 * qc;
        if (!cum_p1_budget_.empty()) p1c = std::min(p1c, half_min_rate(cum_p1_budget_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        x[static_cast<Eigen::Index>(i)] = p1c;
        x[static_cast<Eigen::Index>(n_ + i)] = qc;
    }
    for (const auto &rc : rate_) {
        const double bound = std::log2(1.0 + rc.a.dot(x) / noise_);
        auto &r = x[static_cast<Eigen::Index>(rc.r_index)];
        r = std::min(r == 0.0 ? kInf : r, bound - margin);
    }
    return x;
}

AllocationResult EpigraphProblem::to_result(const Eigen::VectorXd &x,
                                            std::string policy_tag) const {
    const double b2 = channel_->b2();
    PowerSchedule schedule;
    schedule.p1.resize(n_);
    schedule.p2.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (mode_ == EtMode::none) {
            schedule.p1[i] = std::max(x[static_cast<Eigen::Index>(i)], 0.0);
            schedule.p2[i] = std::max(x[static_cast<Eigen::Index>(n_ + i)], 0.0) / b2;
        } else {
            // The optimal face admits many (p1, q) pairs with the same rate
            // vector: wherever a branch is slack the barrier's analytic center
            // inflates the corresponding power. Rebuild the pointwise-smallest
            // combined power sustaining each epoch's rate and split it so both
            // rate branches are tight; this leaves the most slack for the
            // transfer constructions below to certify feasibility.
            const double r = x[static_cast<Eigen::Index>(2 * n_ + i)];
            const double total = noise_ * (std::exp2(r) - 1.0);
            const double adag = channel_->a_dag();
            schedule.p1[i] = total / adag;
            schedule.p2[i] = total * (1.0 - 1.0 / adag) / b2;
        }
    }
    TransferSchedule transfers = TransferSchedule::zeros(n_);
    if (mode_ == EtMode::one_way)
        transfers.d1 = construct_delta_one_way(*profile_, schedule.p1);
    else if (mode_ == EtMode::two_way)
        transfers = construct_deltas_two_way(*profile_, schedule, *channel_);
    return make_result(std::move(schedule), std::move(transfers), *profile_, *channel_, mode_,
                       std::move(policy_tag));
}

namespace {

AllocationResult solve(const EHProfile &profile, const ChannelModel &ch, EtMode mode,
                       const SolverConfig &cfg, const char *tag) {
    const auto pb = EpigraphProblem::build(profile, ch, mode);
    Eigen::VectorXd x = pb.strictly_feasible_start(cfg.start_margin);
    const double m = static_cast<double>(pb.constraint_count());

    double t = cfg.barrier_start;
    for (std::size_t outer = 0; outer < cfg.max_outer_iters; ++outer) {
        for (std::size_t iter = 0;; ++iter) {
            const Eigen::VectorXd grad = pb.barrier_gradient(t, x);
            Eigen::MatrixXd hess = pb.barrier_hessian(t, x);
            Eigen::VectorXd step = -hess.ldlt().solve(grad);
            double decrement = -grad.dot(step);
            if (!(decrement > 0.0) || !step.allFinite()) {
                // fall back to a regularized system
                hess.diagonal().array() += 1e-8 * (1.0 + hess.diagonal().maxCoeff());
                step = -hess.ldlt().solve(grad);
                decrement = -grad.dot(step);
                if (!(decrement > 0.0) || !step.allFinite())
                    throw SolverError("Newton step is not a descent direction",
                                      pb.to_result(x, tag));
            }
            const double phi = pb.barrier(t, x);
            // relative stop: at large t the barrier magnitude scales with t
            const double scale = std::max(1.0, std::abs(phi));
            if (0.5 * decrement < cfg.newton_tol * scale) break;
            if (iter >= cfg.max_newton_iters) {
                // accept a stage that reached the floating-point floor
                if (0.5 * decrement < 1e-6 * scale) break;
                throw SolverError("Newton iteration limit reached", pb.to_result(x, tag));
            }
            double alpha = 1.0;
            bool stalled = false;
            while (pb.barrier(t, x + alpha * step) > phi - 0.25 * alpha * decrement) {
                alpha *= 0.5;
                if (alpha < 1e-14) {
                    stalled = true;
                    break;
                }
            }
            if (stalled) {
                if (0.5 * decrement < 1e-6 * scale) break;
                throw SolverError("line search stalled", pb.to_result(x, tag));
            }
            x += alpha * step;
        }
        const double obj = pb.objective(x);
        if (m / t < cfg.objective_tol * std::max(1.0, std::abs(obj)))
            return pb.to_result(x, tag);
        t *= cfg.barrier_multiplier;
    }
    throw SolverError("barrier outer loop limit reached", pb.to_result(x, tag));
}

} // namespace

AllocationResult solve_no_et(const EHProfile &profile, const ChannelModel &ch,
                             const SolverConfig &cfg) {
    return solve(profile, ch, EtMode::none, cfg, "solve-no-et");
}

AllocationResult solve_one_way(const EHProfile &profile, const ChannelModel &ch,
                               const SolverConfig &cfg) {
    return solve(profile, ch, EtMode::one_way, cfg, "solve-one-way");
}

AllocationResult solve_two_way(const EHProfile &profile, const ChannelModel &ch,
                               const SolverConfig &cfg) {
    return solve(profile, ch, EtMode::two_way, cfg, "solve-two-way");
}

} // namespace ehrelay
