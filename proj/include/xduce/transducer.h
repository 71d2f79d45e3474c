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

#ifndef XDUCE_TRANSDUCER_H
#define XDUCE_TRANSDUCER_H

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "xduce/errors.h"

/// Closed-form model of a triple-resonance cavity electro-optic transducer.
///
/// Every rate is an angular rate in rad/s and every loss rate is a full-width
/// energy decay rate. Frequencies given in Hz are converted exactly once, at
/// ingestion (see `hz_to_rad_per_s`).
namespace xduce {

/// CODATA 2018 reduced Planck constant, J*s.
constexpr double REDUCED_PLANCK = 1.054571817e-34;

constexpr double TWO_PI = 2.0 * std::numbers::pi;

inline double hz_to_rad_per_s(double hz) {
    return TWO_PI * hz;
}

enum class ModeLabel { A, B, P };
enum class Scheme { Red, Blue };

inline std::string_view to_string(ModeLabel label) {
    switch (label) {
        case ModeLabel::A:
            return "a";
        case ModeLabel::B:
            return "b";
        case ModeLabel::P:
            return "p";
    }
    return "?";
}

inline std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::Red ? "red" : "blue";
}

/// kappa = omega / Q. An infinite Q maps to a lossless channel.
inline double q_to_kappa(double omega, double q) {
    if (!(omega > 0)) {
        throw DomainError("q_to_kappa: omega must be positive, got " + std::to_string(omega));
    }
    if (!(q > 0)) {
        throw DomainError("q_to_kappa: Q must be positive, got " + std::to_string(q));
    }
    return omega / q;
}

/// Energy lifetime 1/kappa.
inline double kappa_to_lifetime(double kappa) {
    if (!(kappa > 0)) {
        throw DomainError("kappa_to_lifetime: kappa must be positive, got " + std::to_string(kappa));
    }
    return 1.0 / kappa;
}

/// One resonant mode. Losses are kept as (intrinsic, external) parts; the total is always derived.
class Mode {
   public:
    Mode(ModeLabel label, double omega, double kappa_i, double kappa_ex)
        : label_(label), omega_(omega), kappa_i_(kappa_i), kappa_ex_(kappa_ex) {
        std::string name(to_string(label));
        if (!(omega > 0) || !std::isfinite(omega)) {
            throw DomainError("mode " + name + ": omega must be positive and finite");
        }
        if (!(kappa_i >= 0) || !std::isfinite(kappa_i)) {
            throw DomainError("mode " + name + ": kappa_i must be non-negative and finite");
        }
        if (!(kappa_ex >= 0) || !std::isfinite(kappa_ex)) {
            throw DomainError("mode " + name + ": kappa_ex must be non-negative and finite");
        }
        if (!(kappa_i + kappa_ex > 0)) {
            throw DomainError("mode " + name + ": total loss rate must be positive");
        }
    }

    /// Builds a mode from intrinsic and external quality factors. Q = inf means no loss through that channel.
    static Mode from_q(ModeLabel label, double omega, double q_i, double q_ex) {
        return Mode(label, omega, q_to_kappa(omega, q_i), q_to_kappa(omega, q_ex));
    }

    ModeLabel label() const {
        return label_;
    }
    double omega() const {
        return omega_;
    }
    double kappa_i() const {
        return kappa_i_;
    }
    double kappa_ex() const {
        return kappa_ex_;
    }
    double kappa() const {
        return kappa_i_ + kappa_ex_;
    }
    /// Fraction of the decay leaving through the external port.
    double extraction() const {
        return kappa_ex_ / kappa();
    }
    /// Loaded quality factor omega / kappa.
    double q() const {
        return omega_ / kappa();
    }

    bool operator==(const Mode &) const = default;

   private:
    ModeLabel label_;
    double omega_;
    double kappa_i_;
    double kappa_ex_;
};

/// Optical signal mode a, microwave mode b, optical pump mode p and the vacuum coupling rate g_eo.
class TransducerConfig {
   public:
    TransducerConfig(Mode a, Mode b, Mode p, double g_eo) : a_(a), b_(b), p_(p), g_eo_(g_eo) {
        if (a.label() != ModeLabel::A || b.label() != ModeLabel::B || p.label() != ModeLabel::P) {
            throw DomainError("TransducerConfig: modes must be labelled a, b, p in that order");
        }
        if (!(g_eo >= 0) || !std::isfinite(g_eo)) {
            throw DomainError("TransducerConfig: g_eo must be non-negative and finite");
        }
    }

    const Mode &mode_a() const {
        return a_;
    }
    const Mode &mode_b() const {
        return b_;
    }
    const Mode &mode_p() const {
        return p_;
    }
    double g_eo() const {
        return g_eo_;
    }

    TransducerConfig with_mode_b(const Mode &b) const {
        return TransducerConfig(a_, b, p_, g_eo_);
    }
    TransducerConfig with_g_eo(double g_eo) const {
        return TransducerConfig(a_, b_, p_, g_eo);
    }

    bool operator==(const TransducerConfig &) const = default;

   private:
    Mode a_;
    Mode b_;
    Mode p_;
    double g_eo_;
};

/// Pump laser state. Detuning is laser frequency minus pump resonance, rad/s.
struct DriveCondition {
    double pump_power = 0;
    double pump_detuning = 0;
    Scheme scheme = Scheme::Red;

    void validate() const {
        if (!(pump_power >= 0) || !std::isfinite(pump_power)) {
            throw DomainError("DriveCondition: pump power must be non-negative and finite");
        }
        if (!std::isfinite(pump_detuning)) {
            throw DomainError("DriveCondition: pump detuning must be finite");
        }
    }
};

struct EfficiencyBreakdown {
    double extraction_a;
    double extraction_b;
    double cooperativity;
    double eta_internal;
    double eta;
};

/// Steady-state intracavity pump photon number for a single driven mode:
///     n_p = kappa_ex P / (hbar omega ((kappa/2)^2 + detuning^2))
inline double intracavity_photon_number(const Mode &pump, const DriveCondition &drive) {
    drive.validate();
    if (drive.pump_power == 0) {
        return 0;
    }
    double half_width = pump.kappa() / 2;
    double lorentzian = half_width * half_width + drive.pump_detuning * drive.pump_detuning;
    return pump.kappa_ex() * drive.pump_power / (REDUCED_PLANCK * pump.omega() * lorentzian);
}

inline double cooperativity(const TransducerConfig &cfg, double n_p) {
    if (!(n_p >= 0)) {
        throw DomainError("cooperativity: photon number must be non-negative");
    }
    double denominator = cfg.mode_a().kappa() * cfg.mode_b().kappa();
    if (!(denominator > 0)) {
        throw DomainError("cooperativity: kappa_a * kappa_b must be positive");
    }
    return 4 * n_p * cfg.g_eo() * cfg.g_eo() / denominator;
}

/// 4C / (1 + C)^2, unity only at C = 1.
inline double internal_efficiency(double c) {
    if (!(c >= 0)) {
        throw DomainError("internal_efficiency: cooperativity must be non-negative");
    }
    if (std::isinf(c)) {
        return 0;
    }
    double s = 1 + c;
    return 4 * c / (s * s);
}

inline EfficiencyBreakdown conversion_efficiency(const TransducerConfig &cfg, double n_p) {
    EfficiencyBreakdown out{};
    out.extraction_a = cfg.mode_a().extraction();
    out.extraction_b = cfg.mode_b().extraction();
    out.cooperativity = cooperativity(cfg, n_p);
    out.eta_internal = internal_efficiency(out.cooperativity);
    out.eta = out.extraction_a * out.extraction_b * out.eta_internal;
    return out;
}

/// Pump photon number at which C = 1.
inline double critical_photon_number(const TransducerConfig &cfg) {
    if (!(cfg.g_eo() > 0)) {
        throw NoCriticalPointError("critical_photon_number: g_eo = 0, cooperativity is identically zero");
    }
    return cfg.mode_a().kappa() * cfg.mode_b().kappa() / (4 * cfg.g_eo() * cfg.g_eo());
}

/// Pump power that puts critical_photon_number() photons in the pump mode.
inline double critical_pump_power(const TransducerConfig &cfg, double pump_detuning) {
    const Mode &pump = cfg.mode_p();
    if (!(pump.kappa_ex() > 0)) {
        throw UndriveablePumpError("critical_pump_power: pump mode has kappa_ex = 0 and cannot be driven");
    }
    if (!std::isfinite(pump_detuning)) {
        throw DomainError("critical_pump_power: pump detuning must be finite");
    }
    double n_star = critical_photon_number(cfg);
    double half_width = pump.kappa() / 2;
    double lorentzian = half_width * half_width + pump_detuning * pump_detuning;
    return n_star * REDUCED_PLANCK * pump.omega() * lorentzian / pump.kappa_ex();
}

}  // namespace xduce

#endif
