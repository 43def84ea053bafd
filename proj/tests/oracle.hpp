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

#include <cmath>
#include <vector>

// Brute-force reference for the single-user allocator: maximize the concave
// utility sum(l_j log2(1 + P_j)) over per-epoch powers with cumulative
// causality caps, by grid search over the cumulative consumption at the
// internal epoch boundaries (coarse pass, then a 0.01-step refinement around
// the coarse optimum; valid because the objective is concave in those
// coordinates). Supports up to two internal boundaries (three epochs).
namespace oracle {

struct Problem {
    std::vector<double> lengths;   // epoch lengths, size n <= 3
    std::vector<double> available; // cumulative energy usable by each boundary, size n
};

inline double utility(const Problem &pb, const std::vector<double> &cum) {
    double u = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j < pb.lengths.size(); ++j) {
        const double p = (cum[j] - prev) / pb.lengths[j];
        if (p < -1e-12) return -1e18;
        u += pb.lengths[j] * std::log2(1.0 + std::max(p, 0.0));
        prev = cum[j];
    }
    return u;
}

inline double search(const Problem &pb, std::vector<double> lo, std::vector<double> hi,
                     double step, std::vector<double> *best_point) {
    const std::size_t n = pb.lengths.size();
    const double total = pb.available.back();
    std::vector<double> cum(n);
    cum[n - 1] = total;
    double best = -1e18;

    auto scan = [&](auto &&self, std::size_t j) -> void {
        if (j == n - 1) {
            const double u = utility(pb, cum);
            if (u > best) {
                best = u;
                if (best_point) *best_point = cum;
            }
            return;
        }
        const double floor_c = j == 0 ? 0.0 : cum[j - 1];
        for (double c = lo[j]; c <= hi[j] + 1e-12; c += step) {
            if (c < floor_c - 1e-12 || c > pb.available[j] + 1e-12) continue;
            cum[j] = std::min(c, pb.available[j]);
            self(self, j + 1);
        }
    };
    scan(scan, 0);
    return best;
}

/// Best utility found by the coarse-then-fine grid.
inline double best_utility(const Problem &pb) {
    const std::size_t n = pb.lengths.size();
    if (n == 1) {
        std::vector<double> cum{pb.available[0]};
        return utility(pb, cum);
    }
    std::vector<double> lo(n - 1, 0.0), hi(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) hi[j] = pb.available[j];
    std::vector<double> coarse_best(n);
    const double coarse = search(pb, lo, hi, 0.1, &coarse_best);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        lo[j] = std::max(0.0, coarse_best[j] - 0.1);
        hi[j] = std::min(pb.available[j], coarse_best[j] + 0.1);
    }
    const double fine = search(pb, lo, hi, 0.01, nullptr);
    return std::max(coarse, fine);
}

} // namespace oracle
