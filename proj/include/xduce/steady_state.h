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

#ifndef XDUCE_STEADY_STATE_H
#define XDUCE_STEADY_STATE_H

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xduce/errors.h"
#include "xduce/transducer.h"

/// Frequency-domain input-output solution of the linearized three-wave-mixing
/// interaction. With the pump replaced by its coherent amplitude sqrt(n_p), the
/// interaction reduces to a beam splitter between a and b (red) or a two-mode
/// squeezer (blue) with coupling G = g_eo sqrt(n_p).
///
/// Modes a, b are written in frames rotating at their carriers; probe_offset is
/// the detuning of the probe from the signal carrier. Inputs are flux normalized
/// so |amplitude|^2 is a photon conversion probability.
namespace xduce {

using Complex = std::complex<double>;

struct LinearizedSystem {
    double coupling = 0;
    double detuning_a = 0;
    double detuning_b = 0;
    double kappa_a_i = 0;
    double kappa_a_ex = 0;
    double kappa_b_i = 0;
    double kappa_b_ex = 0;
    Scheme scheme = Scheme::Red;

    double kappa_a() const {
        return kappa_a_i + kappa_a_ex;
    }
    double kappa_b() const {
        return kappa_b_i + kappa_b_ex;
    }
    /// 4 G^2 / (kappa_a kappa_b); identical to the closed-form cooperativity.
    double cooperativity() const {
        return 4 * coupling * coupling / (kappa_a() * kappa_b());
    }
};

struct ScatteringPoint {
    double probe_offset;
    Complex amplitude_ab;  // b input -> a output
    Complex amplitude_ba;  // a input -> b output
    double conversion;     // |amplitude_ba|^2
};

struct ParametricThreshold {
    /// Cooperativity at which the blue-detuned steady state ceases to exist.
    double cooperativity;
    /// Factor by which n_p must grow from its current value to reach threshold; +inf when G = 0.
    double pump_scale;
};

/// Pump as a stiff coherent amplitude; all three modes on resonance with their drives.
inline LinearizedSystem build_linearized(const TransducerConfig &cfg, double n_p, Scheme scheme) {
    if (!(n_p >= 0)) {
        throw DomainError("build_linearized: photon number must be non-negative");
    }
    LinearizedSystem sys;
    sys.coupling = cfg.g_eo() * std::sqrt(n_p);
    sys.kappa_a_i = cfg.mode_a().kappa_i();
    sys.kappa_a_ex = cfg.mode_a().kappa_ex();
    sys.kappa_b_i = cfg.mode_b().kappa_i();
    sys.kappa_b_ex = cfg.mode_b().kappa_ex();
    sys.scheme = scheme;
    return sys;
}

/// Coefficient matrix of the steady-state equations, row-major [m00, m01, m10, m11].
///
/// Red acts on (a, b), blue on (a, b^dagger); b^dagger rotates the other way, so
/// its row picks up the conjugate detuning and a coupling of opposite sign.
inline std::array<Complex, 4> steady_state_matrix(const LinearizedSystem &sys, double probe_offset) {
    const Complex i(0, 1);
    double w = probe_offset;
    if (sys.scheme == Scheme::Red) {
        return {
            i * (sys.detuning_a - w) + sys.kappa_a() / 2,
            i * sys.coupling,
            i * sys.coupling,
            i * (sys.detuning_b - w) + sys.kappa_b() / 2,
        };
    }
    return {
        i * (sys.detuning_a - w) + sys.kappa_a() / 2,
        i * sys.coupling,
        -i * sys.coupling,
        -i * (sys.detuning_b + w) + sys.kappa_b() / 2,
    };
}

inline Complex steady_state_determinant(const LinearizedSystem &sys, double probe_offset) {
    auto m = steady_state_matrix(sys, probe_offset);
    return m[0] * m[3] - m[1] * m[2];
}

/// Stability boundary of the blue-detuned system.
///
/// The linear dynamics lose stability when an eigenvalue of the drift matrix
/// reaches the imaginary axis. Solving det = 0 with a purely imaginary
/// eigenvalue gives G_th^2 = (kappa_a kappa_b / 4) (1 + 4 (D_a + D_b)^2 / (kappa_a + kappa_b)^2).
inline ParametricThreshold parametric_threshold(const LinearizedSystem &sys) {
    if (sys.scheme != Scheme::Blue) {
        throw UsageError("parametric_threshold: only defined for the blue-detuned scheme");
    }
    double ka = sys.kappa_a();
    double kb = sys.kappa_b();
    if (!(ka > 0 && kb > 0)) {
        throw DomainError("parametric_threshold: both modes need a positive total loss rate");
    }
    double detuning_sum = sys.detuning_a + sys.detuning_b;
    double ratio = 2 * detuning_sum / (ka + kb);
    ParametricThreshold out{};
    out.cooperativity = 1 + ratio * ratio;
    double c = sys.cooperativity();
    out.pump_scale = c > 0 ? out.cooperativity / c : std::numeric_limits<double>::infinity();
    return out;
}

inline ScatteringPoint scattering_at(const LinearizedSystem &sys, double probe_offset) {
    if (!(sys.kappa_a() > 0 && sys.kappa_b() > 0)) {
        throw DomainError("scattering_at: both modes need a positive total loss rate");
    }
    if (sys.scheme == Scheme::Blue) {
        auto threshold = parametric_threshold(sys);
        double c = sys.cooperativity();
        if (c >= threshold.cooperativity) {
            throw InstabilityError(
                "scattering_at: blue-detuned system is unstable (C = " + std::to_string(c) +
                    " at or above parametric threshold C = " + std::to_string(threshold.cooperativity) + ")",
                threshold.cooperativity,
                c);
        }
    }

    auto m = steady_state_matrix(sys, probe_offset);
    Complex det = m[0] * m[3] - m[1] * m[2];
    double scale = std::abs(m[0] * m[3]) + std::abs(m[1] * m[2]);
    if (std::abs(det) <= 4 * std::numeric_limits<double>::epsilon() * scale) {
        double c = sys.cooperativity();
        throw InstabilityError("scattering_at: steady-state matrix is singular", c, c);
    }

    double root_a = std::sqrt(sys.kappa_a_ex);
    double root_b = std::sqrt(sys.kappa_b_ex);
    auto solve = [&](Complex r0, Complex r1) {
        std::array<Complex, 2> x{(m[3] * r0 - m[1] * r1) / det, (m[0] * r1 - m[2] * r0) / det};
        Complex e0 = m[0] * x[0] + m[1] * x[1] - r0;
        Complex e1 = m[2] * x[0] + m[3] * x[1] - r1;
        double norm = std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) + std::abs(m[3]);
        double bound = 1e-10 * (norm * (std::abs(x[0]) + std::abs(x[1])) +
                                std::abs(r0) + std::abs(r1));
        if (std::abs(e0) > bound || std::abs(e1) > bound) {
            throw std::logic_error("scattering_at: residual check failed");
        }
        return x;
    };

    // out = sqrt(kappa_ex) x - in; cross terms only, so the -in part drops out.
    auto from_a = solve(root_a, 0);
    auto from_b = solve(0, root_b);
    ScatteringPoint out{};
    out.probe_offset = probe_offset;
    out.amplitude_ba = root_b * from_a[1];
    out.amplitude_ab = root_a * from_b[0];
    out.conversion = std::norm(out.amplitude_ba);
    return out;
}

inline std::vector<ScatteringPoint> conversion_spectrum(const LinearizedSystem &sys, std::span<const double> offsets) {
    if (offsets.empty()) {
        throw UsageError("conversion_spectrum: need at least one probe offset");
    }
    std::vector<ScatteringPoint> out;
    out.reserve(offsets.size());
    for (double w : offsets) {
        out.push_back(scattering_at(sys, w));
    }
    return out;
}

}  // namespace xduce

#endif
