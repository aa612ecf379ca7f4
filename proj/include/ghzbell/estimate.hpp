// Copyright 2026 The ghzbell Authors
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

#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace ghzbell {

/// A value with a one-standard-deviation uncertainty.
struct EstimateWithError {
    double value = 0.0;
    double sigma = 0.0;

    bool operator==(const EstimateWithError &) const = default;
};

/// One coefficient-weighted term of a linear combination of estimates.
struct LinearTerm {
    double coefficient;
    EstimateWithError estimate;
};

/// First-order propagation for independent errors:
/// value = sum c_i v_i, sigma = sqrt(sum c_i^2 sigma_i^2).
inline EstimateWithError propagate(std::span<const LinearTerm> terms) {
    double value = 0.0;
    double variance = 0.0;
    for (const auto &t : terms) {
        if (!(t.estimate.sigma >= 0.0)) {
            throw std::invalid_argument("propagate: sigma must be nonnegative");
        }
        value += t.coefficient * t.estimate.value;
        variance += t.coefficient * t.coefficient * t.estimate.sigma * t.estimate.sigma;
    }
    return {value, std::sqrt(variance)};
}

inline EstimateWithError propagate(std::initializer_list<LinearTerm> terms) {
    return propagate(std::span<const LinearTerm>(terms.begin(), terms.size()));
}

/// a * e + b, with sigma scaled by |a|.
inline EstimateWithError affine(const EstimateWithError &e, double scale, double shift) {
    return {scale * e.value + shift, std::abs(scale) * e.sigma};
}

}  // namespace ghzbell
