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

#ifndef XDUCE_ERRORS_H
#define XDUCE_ERRORS_H

#include <limits>
#include <stdexcept>
#include <string>

namespace xduce {

/// An input lies outside the domain of a physical formula (negative rate, zero Q, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An operation was invoked on an object it does not apply to (e.g. wrong pumping scheme).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// g_eo = 0: cooperativity is identically zero, so no pump reaches C = 1.
struct NoCriticalPointError : DomainError {
    using DomainError::DomainError;
};

/// The pump mode has no external port, so no external power reaches it.
struct UndriveablePumpError : DomainError {
    using DomainError::DomainError;
};

/// A bracket handed to a scalar optimizer does not contain the optimum.
struct BracketError : DomainError {
    using DomainError::DomainError;
};

/// The blue-detuned linear system sits at or beyond its parametric threshold.
struct InstabilityError : DomainError {
    InstabilityError(const std::string &what, double threshold_cooperativity, double cooperativity)
        : DomainError(what), threshold_cooperativity(threshold_cooperativity), cooperativity(cooperativity) {
    }
    double threshold_cooperativity;
    double cooperativity;
};

}  // namespace xduce

#endif
