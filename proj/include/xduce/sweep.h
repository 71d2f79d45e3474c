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

#ifndef XDUCE_SWEEP_H
#define XDUCE_SWEEP_H

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xduce/errors.h"
#include "xduce/heralding.h"
#include "xduce/transducer.h"

namespace xduce {

enum class Spacing { Linear, Log };

struct PowerAxis {
    double min = 0;
    double max = 0;
    std::optional<size_t> points;  // unset: 200 per decade (log, capped at 2000) or 200 (linear)
    Spacing spacing = Spacing::Log;

    static constexpr size_t POINTS_PER_DECADE = 200;
    static constexpr size_t MAX_DEFAULT_POINTS = 2000;

    size_t resolved_points() const {
        if (points.has_value()) {
            return *points;
        }
        if (spacing == Spacing::Linear) {
            return POINTS_PER_DECADE;
        }
        double decades = std::log10(max / min);
        auto n = static_cast<size_t>(std::ceil(decades * POINTS_PER_DECADE)) + 1;
        return std::clamp<size_t>(n, 2, MAX_DEFAULT_POINTS);
    }

    void validate() const {
        if (!std::isfinite(min) || !std::isfinite(max) || !(min >= 0) || !(min < max)) {
            throw DomainError("power axis: need 0 <= min < max, both finite");
        }
        if (spacing == Spacing::Log && !(min > 0)) {
            throw DomainError("power axis: log spacing needs min > 0");
        }
        if (points.has_value() && *points < 2) {
            throw DomainError("power axis: need at least 2 points");
        }
    }

    /// Grid values; the endpoints are exact.
    std::vector<double> values() const {
        validate();
        size_t n = resolved_points();
        std::vector<double> out(n);
        for (size_t k = 0; k < n; ++k) {
            double t = static_cast<double>(k) / static_cast<double>(n - 1);
            if (spacing == Spacing::Linear) {
                out[k] = min + (max - min) * t;
            } else {
                out[k] = std::exp(std::log(min) + (std::log(max) - std::log(min)) * t);
            }
        }
        out.front() = min;
        out.back() = max;
        return out;
    }
};

enum class RateMapping {
    Direct,     // r0 given explicitly
    CKappaB,    // r0 = C * kappa_b (weak-pump pair rate); a modelling assumption
};

inline std::string_view to_string(RateMapping mapping) {
    return mapping == RateMapping::Direct ? "direct" : "c_kappa_b";
}

struct HeraldOptions {
    double dt = 0;
    RateMapping mapping = RateMapping::Direct;
    double r0 = 0;  // used by RateMapping::Direct

    double rate(double cooperativity, double kappa_b) const {
        return mapping == RateMapping::Direct ? r0 : cooperativity * kappa_b;
    }
};

struct SweepOutputs {
    bool efficiency = true;
    bool cooperativity = true;
    bool infidelity = false;
};

struct SweepSpec {
    TransducerConfig base;
    double pump_detuning = 0;
    PowerAxis power;
    std::vector<double> q_axis;
    SweepOutputs outputs;
    std::optional<HeraldOptions> herald;
};

struct SweepRow {
    double pump_power;
    double q_b;
    double n_p;
    double cooperativity;
    double eta_internal;
    double eta;
    std::optional<double> infidelity;

    bool operator==(const SweepRow &) const = default;
};

/// Copy of cfg whose microwave mode has loaded quality factor q; the extraction ratio is kept.
inline TransducerConfig with_microwave_q(const TransducerConfig &cfg, double q) {
    const Mode &b = cfg.mode_b();
    double kappa = q_to_kappa(b.omega(), q);
    double extraction = b.extraction();
    return cfg.with_mode_b(Mode(ModeLabel::B, b.omega(), (1 - extraction) * kappa, extraction * kappa));
}

namespace detail {

inline double blue_infidelity_at(
    const TransducerConfig &cfg, double cooperativity, const HeraldOptions &herald) {
    HeraldModel model{herald.rate(cooperativity, cfg.mode_b().kappa()), herald.dt, Scheme::Blue};
    model.validate();
    double mu = model.mu();
    if (!(mu < MC_MAX_MU)) {
        throw DomainError("mu = " + std::to_string(mu) + " is outside the heralding model's regime (mu < 10)");
    }
    return blue_breakdown(model).infidelity;
}

}  // namespace detail

/// Blue-detuned heralding infidelity along a power axis: P -> n_p -> C -> r0 -> mu -> infidelity.
inline std::vector<std::pair<double, double>> infidelity_curve(
    const TransducerConfig &cfg, double pump_detuning, std::span<const double> powers, const HeraldOptions &herald) {
    std::vector<std::pair<double, double>> out;
    out.reserve(powers.size());
    for (double p : powers) {
        double n_p = intracavity_photon_number(cfg.mode_p(), DriveCondition{p, pump_detuning, Scheme::Blue});
        double c = cooperativity(cfg, n_p);
        out.emplace_back(p, detail::blue_infidelity_at(cfg, c, herald));
    }
    return out;
}

/// Evaluates every (Q_b, power) pair. Rows are sorted by (q_b, pump_power).
inline std::vector<SweepRow> run_sweep(const SweepSpec &spec) {
    if (spec.q_axis.empty()) {
        throw DomainError("sweep: q axis is empty");
    }
    for (double q : spec.q_axis) {
        if (!(q > 0) || !std::isfinite(q)) {
            throw DomainError("sweep: quality factors must be positive and finite");
        }
    }
    if (spec.outputs.infidelity && !spec.herald.has_value()) {
        throw DomainError("sweep: infidelity requested without herald options");
    }
    std::vector<double> powers = spec.power.values();

    std::vector<SweepRow> rows;
    rows.reserve(powers.size() * spec.q_axis.size());
    for (double q : spec.q_axis) {
        TransducerConfig cfg = with_microwave_q(spec.base, q);
        for (double p : powers) {
            try {
                SweepRow row{};
                row.pump_power = p;
                row.q_b = q;
                row.n_p = intracavity_photon_number(cfg.mode_p(), DriveCondition{p, spec.pump_detuning, Scheme::Red});
                auto eff = conversion_efficiency(cfg, row.n_p);
                row.cooperativity = eff.cooperativity;
                row.eta_internal = eff.eta_internal;
                row.eta = eff.eta;
                if (spec.outputs.infidelity) {
                    row.infidelity = detail::blue_infidelity_at(cfg, eff.cooperativity, *spec.herald);
                }
                rows.push_back(row);
            } catch (const DomainError &e) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "sweep row (q_b=" << q << ", pump_power_w=" << p << "): " << e.what();
                throw DomainError(msg.str());
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow &x, const SweepRow &y) {
        return std::pair(x.q_b, x.pump_power) < std::pair(y.q_b, y.pump_power);
    });
    return rows;
}

struct EfficiencyOptimum {
    double pump_power;
    double eta;
    size_t iterations;
};

/// Golden-section search for the pump power maximizing eta on [lo, hi].
///
/// eta(P) is unimodal with its peak at the critical power. The search runs in
/// log P, so a bracket spanning many decades converges as fast as a narrow one.
/// lo = 0 is replaced by hi * 1e-12.
inline EfficiencyOptimum maximize_efficiency(
    const TransducerConfig &cfg, double pump_detuning, std::pair<double, double> bracket) {
    auto [lo, hi] = bracket;
    if (!(lo >= 0) || !(lo < hi) || !std::isfinite(hi)) {
        throw BracketError("maximize_efficiency: need 0 <= lo < hi");
    }
    if (lo == 0) {
        lo = hi * 1e-12;
    }
    auto eta_at = [&](double p) {
        double n_p = intracavity_photon_number(cfg.mode_p(), DriveCondition{p, pump_detuning, Scheme::Red});
        return conversion_efficiency(cfg, n_p).eta;
    };

    constexpr double probe = 1e-6;
    if (!(eta_at(lo * (1 + probe)) > eta_at(lo)) || !(eta_at(hi * (1 - probe)) > eta_at(hi))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "maximize_efficiency: bracket [" << lo << ", " << hi << "] W does not contain the efficiency peak";
        throw BracketError(msg.str());
    }

    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = std::log(lo);
    double b = std::log(hi);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eta_at(std::exp(c));
    double fd = eta_at(std::exp(d));
    size_t iterations = 0;
    constexpr size_t max_iterations = 200;
    constexpr double tolerance = 1e-10;
    while (b - a > tolerance && iterations < max_iterations) {
        ++iterations;
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eta_at(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eta_at(std::exp(d));
        }
    }
    double best = std::exp((a + b) / 2);
    return EfficiencyOptimum{best, eta_at(best), iterations};
}

}  // namespace xduce

#endif
