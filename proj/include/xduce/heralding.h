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

#ifndef XDUCE_HERALDING_H
#define XDUCE_HERALDING_H

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "xduce/errors.h"
#include "xduce/transducer.h"

/// Photon-statistics model for heralding entanglement between two remote
/// microwave cavities, each fed by its own transducer.
///
/// Both analytic breakdowns reproduce the reference formulas term for term,
/// including the factor-2 union bound in P_mn (blue) and the red-detuned
/// P_0 = 1 - exp(-mu), whose infidelity exp(-2 mu) *falls* with rate. Neither is
/// corrected here. The Monte Carlo sampler classifies exact Poisson draws and so
/// measures how far the blue closed form is from the true multi-photon rate.
namespace xduce {

struct HeraldModel {
    double r0 = 0;  // photon generation rate, 1/s
    double dt = 0;  // heralding window, s
    Scheme scheme = Scheme::Blue;

    /// Single-cavity Poisson mean r0 * dt.
    double mu() const {
        return r0 * dt;
    }

    void validate() const {
        if (!(r0 >= 0) || !std::isfinite(r0)) {
            throw DomainError("HeraldModel: r0 must be non-negative and finite");
        }
        if (!(dt >= 0) || !std::isfinite(dt)) {
            throw DomainError("HeraldModel: dt must be non-negative and finite");
        }
    }
};

struct HeraldBreakdown {
    Scheme scheme;
    double p0;
    std::optional<double> p1;  // only defined for the blue scheme
    double p11;
    double pmn;  // identically 0 for the red scheme
    double infidelity;
};

struct McEstimate {
    uint64_t samples;
    uint64_t error_events;
    double infidelity_mean;
    double standard_error;
    uint64_t seed;
};

inline HeraldBreakdown blue_breakdown(const HeraldModel &m) {
    if (m.scheme != Scheme::Blue) {
        throw UsageError("blue_breakdown: model is not blue-detuned");
    }
    m.validate();
    double mu = m.mu();
    HeraldBreakdown out{};
    out.scheme = Scheme::Blue;
    out.p0 = std::exp(-mu);
    double p1 = mu * std::exp(-mu);
    out.p1 = p1;
    out.p11 = p1 * p1;
    out.pmn = 2 * (1 - out.p0 - p1);
    out.infidelity = out.pmn + out.p11;
    return out;
}

inline HeraldBreakdown red_breakdown(const HeraldModel &m) {
    if (m.scheme != Scheme::Red) {
        throw UsageError("red_breakdown: model is not red-detuned");
    }
    m.validate();
    double mu = m.mu();
    HeraldBreakdown out{};
    out.scheme = Scheme::Red;
    out.p0 = 1 - std::exp(-mu);
    out.p11 = (1 - out.p0) * (1 - out.p0);
    out.pmn = 0;
    out.infidelity = out.p11;
    return out;
}

inline HeraldBreakdown herald_breakdown(const HeraldModel &m) {
    return m.scheme == Scheme::Blue ? blue_breakdown(m) : red_breakdown(m);
}

/// Exact probability, for independent Poisson(mu) counts in the two cavities,
/// that the pair is (1,1) or either cavity holds two or more photons:
///     P1^2 + 1 - (P0 + P1)^2.
/// This is what the Monte Carlo sampler estimates.
inline double poisson_error_probability(double mu) {
    if (!(mu >= 0)) {
        throw DomainError("poisson_error_probability: mu must be non-negative");
    }
    double p0 = std::exp(-mu);
    double p1 = mu * p0;
    // P(N >= 2) = e^-mu (e^mu - 1 - mu). Both forms cancel badly for small mu, so sum the series there.
    double tail;
    if (mu < 0.5) {
        double term = mu * mu / 2;
        tail = term;
        for (int k = 3; k < 40 && term > 1e-18 * tail; ++k) {
            term *= mu / k;
            tail += term;
        }
    } else {
        tail = std::expm1(mu) - mu;
    }
    double multi = p0 * tail;
    return p1 * p1 + multi * (2 - multi);
}

/// Probability that a photon stored in a cavity with intrinsic loss kappa_i
/// decays during hold_time. This is a memory-decay extension and does not enter
/// blue_breakdown / red_breakdown.
inline double storage_loss_infidelity(double kappa_i, double hold_time) {
    if (!(kappa_i >= 0) || !std::isfinite(kappa_i)) {
        throw DomainError("storage_loss_infidelity: kappa_i must be non-negative and finite");
    }
    if (!(hold_time >= 0) || !std::isfinite(hold_time)) {
        throw DomainError("storage_loss_infidelity: hold_time must be non-negative and finite");
    }
    return -std::expm1(-kappa_i * hold_time);
}

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent engine for one block of trials, keyed by (master seed, block index).
inline std::mt19937_64 block_engine(uint64_t seed, uint64_t block) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(block + 0x632BE59BD9B4E019ULL)));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Poisson draw by sequential search over the CDF.
inline uint32_t poisson_by_inversion(std::mt19937_64 &rng, double mu, double exp_neg_mu) {
    double u = unit_uniform(rng);
    uint32_t k = 0;
    double p = exp_neg_mu;
    double cdf = p;
    while (u >= cdf && k < 1000) {
        ++k;
        p *= mu / k;
        cdf += p;
        if (p == 0) {
            break;
        }
    }
    return k;
}

constexpr uint64_t MC_BLOCK_SIZE = uint64_t{1} << 16;

}  // namespace detail

/// Largest Poisson mean the sampler accepts.
constexpr double MC_MAX_MU = 10.0;

/// Monte Carlo estimate of the blue-detuned error probability.
///
/// Trials are cut into fixed blocks, each with its own engine derived from
/// (seed, block index), and per-block integer counts are summed. The result is
/// therefore bit-identical for any `workers` value (0 = hardware concurrency).
inline McEstimate mc_blue_infidelity(const HeraldModel &m, uint64_t samples, uint64_t seed, unsigned workers = 0) {
    if (m.scheme != Scheme::Blue) {
        throw UsageError("mc_blue_infidelity: model is not blue-detuned");
    }
    if (samples == 0) {
        throw UsageError("mc_blue_infidelity: need at least one sample");
    }
    m.validate();
    double mu = m.mu();
    if (!(mu < MC_MAX_MU)) {
        throw DomainError("mc_blue_infidelity: mu = " + std::to_string(mu) + " is outside the sampled regime (mu < 10)");
    }

    uint64_t num_blocks = (samples + detail::MC_BLOCK_SIZE - 1) / detail::MC_BLOCK_SIZE;
    std::vector<uint64_t> counts(num_blocks, 0);
    double exp_neg_mu = std::exp(-mu);
    auto run_block = [&](uint64_t block) {
        auto rng = detail::block_engine(seed, block);
        uint64_t begin = block * detail::MC_BLOCK_SIZE;
        uint64_t end = std::min(samples, begin + detail::MC_BLOCK_SIZE);
        uint64_t hits = 0;
        for (uint64_t t = begin; t < end; ++t) {
            uint32_t na = detail::poisson_by_inversion(rng, mu, exp_neg_mu);
            uint32_t nb = detail::poisson_by_inversion(rng, mu, exp_neg_mu);
            bool both_one = na == 1 && nb == 1;
            bool any_multi = na >= 2 || nb >= 2;
            hits += (both_one || any_multi) ? 1 : 0;
        }
        counts[block] = hits;
    };

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, num_blocks));
    if (workers <= 1) {
        for (uint64_t b = 0; b < num_blocks; ++b) {
            run_block(b);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (uint64_t b = w; b < num_blocks; b += workers) {
                    run_block(b);
                }
            });
        }
    }

    uint64_t hits = 0;
    for (uint64_t c : counts) {
        hits += c;
    }
    McEstimate out{};
    out.samples = samples;
    out.error_events = hits;
    out.seed = seed;
    double n = static_cast<double>(samples);
    out.infidelity_mean = static_cast<double>(hits) / n;
    if (samples > 1) {
        // Sample standard deviation of the 0/1 indicator, n - 1 denominator.
        double p = out.infidelity_mean;
        double variance = p * (1 - p) * n / (n - 1);
        out.standard_error = std::sqrt(variance / n);
    } else {
        out.standard_error = 0;
    }
    return out;
}

}  // namespace xduce

#endif
