// Copyright 2026 The xduce Authors
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

#ifndef XDUCE_TESTS_ORACLES_H
#define XDUCE_TESTS_ORACLES_H

// Independent reference computations used only by the tests. Nothing here calls
// into the code path it is used to check.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <utility>

#include "xduce/transducer.h"

namespace xduce::oracle {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

struct BlueReference {
    double p0, p1, p11, pmn, infidelity;
};

/// Blue breakdown formulas evaluated in 50-digit arithmetic.
inline BlueReference blue_reference(double mu_in) {
    HighPrecision mu(mu_in);
    HighPrecision p0 = exp(-mu);
    HighPrecision p1 = mu * p0;
    HighPrecision p11 = p1 * p1;
    HighPrecision pmn = 2 * (1 - p0 - p1);
    return {p0.convert_to<double>(), p1.convert_to<double>(), p11.convert_to<double>(), pmn.convert_to<double>(),
            (pmn + p11).convert_to<double>()};
}

/// P((1,1) or any count >= 2) for two independent Poisson(mu) counts, by
/// enumerating every (n_a, n_b) pair up to n_max.
inline double truncated_poisson_error_probability(double mu_in, int n_max = 20) {
    HighPrecision mu(mu_in);
    HighPrecision total = 0;
    HighPrecision pa = exp(-mu);
    for (int na = 0; na <= n_max; ++na) {
        if (na > 0) {
            pa *= mu / na;
        }
        HighPrecision pb = exp(-mu);
        for (int nb = 0; nb <= n_max; ++nb) {
            if (nb > 0) {
                pb *= mu / nb;
            }
            bool both_one = na == 1 && nb == 1;
            bool multi = na >= 2 || nb >= 2;
            if (both_one || multi) {
                total += pa * pb;
            }
        }
    }
    return total.convert_to<double>();
}

/// Bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)> &f, double lo, double hi, int iterations = 200) {
    double flo = f(lo);
    for (int k = 0; k < iterations; ++k) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Eigenvalues of a general complex 2x2 matrix [[a, b], [c, d]].
inline std::pair<std::complex<double>, std::complex<double>> eigenvalues_2x2(
    std::complex<double> a, std::complex<double> b, std::complex<double> c, std::complex<double> d) {
    auto half_trace = (a + d) / 2.0;
    auto disc = std::sqrt(((a - d) / 2.0) * ((a - d) / 2.0) + b * c);
    return {half_trace + disc, half_trace - disc};
}

/// Pump power maximizing f on [lo, hi] by repeated dense log-grid refinement.
inline double grid_argmax_log(const std::function<double(double)> &f, double lo, double hi) {
    double best = lo;
    for (int round = 0; round < 6; ++round) {
        constexpr int n = 4001;
        double best_val = -1;
        int best_k = 0;
        double llo = std::log(lo), lhi = std::log(hi);
        for (int k = 0; k < n; ++k) {
            double p = std::exp(llo + (lhi - llo) * k / (n - 1));
            double v = f(p);
            if (v > best_val) {
                best_val = v;
                best_k = k;
                best = p;
            }
        }
        int klo = std::max(best_k - 2, 0), khi = std::min(best_k + 2, n - 1);
        double new_lo = std::exp(llo + (lhi - llo) * klo / (n - 1));
        double new_hi = std::exp(llo + (lhi - llo) * khi / (n - 1));
        lo = new_lo;
        hi = new_hi;
    }
    return best;
}

inline double log_uniform(std::mt19937_64 &rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline double relative_error(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

}  // namespace xduce::oracle

#endif
