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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghzbell/basis.hpp"
#include "ghzbell/quantum_state.hpp"

namespace ghzbell {

/// Thrown when a requested projection has (numerically) zero probability.
class ImpossibleProjection : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

inline constexpr double kImpossibleProjectionThreshold = 1e-15;

/// Exact outcome distribution of one measurement configuration.
///
/// probs()[i] is the probability of Outcome::from_index(i, n).
class ProbabilityTable {
   public:
    ProbabilityTable() = default;

    /// Validates rather than repairs: entries must lie in [0, 1] (1e-12 slack
    /// for rounding) and sum to 1 within 1e-9.
    ProbabilityTable(MeasurementConfig config, std::vector<double> probs)
        : config_(std::move(config)), probs_(std::move(probs)) {
        if (probs_.size() != (std::size_t{1} << config_.size())) {
            throw std::invalid_argument("ProbabilityTable: expected " +
                                        std::to_string(std::size_t{1} << config_.size()) + " entries");
        }
        double total = 0.0;
        for (double p : probs_) {
            if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
                throw std::invalid_argument("ProbabilityTable: entry outside [0, 1]: " + std::to_string(p));
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("ProbabilityTable: entries sum to " + std::to_string(total));
        }
    }

    const MeasurementConfig &config() const {
        return config_;
    }
    std::size_t n_qubits() const {
        return config_.size();
    }
    const std::vector<double> &probs() const {
        return probs_;
    }

    double probability(const Outcome &outcome) const {
        if (outcome.size() != config_.size()) {
            throw std::invalid_argument("ProbabilityTable: outcome length does not match configuration");
        }
        return probs_[outcome.index()];
    }

   private:
    MeasurementConfig config_;
    std::vector<double> probs_;
};

/// <d_1 (x) ... (x) d_n | state>, one bra direction per location.
inline Complex projection_amplitude(const PureState &state, std::span<const BasisVector> directions) {
    const std::size_t n = state.n_qubits();
    if (directions.size() != n) {
        throw std::invalid_argument("projection_amplitude: expected " + std::to_string(n) + " directions, got " +
                                    std::to_string(directions.size()));
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        if (state[i] == Complex{}) {
            continue;
        }
        Complex bra = 1.0;
        for (std::size_t q = 0; q < n; ++q) {
            bra *= std::conj(directions[q][(i >> (n - 1 - q)) & 1]);
        }
        acc += bra * state[i];
    }
    return acc;
}

namespace detail {

inline void check_dimensions(const MixedState &state, const MeasurementConfig &config) {
    if (config.size() != state.n_qubits()) {
        throw std::invalid_argument("measurement configuration has " + std::to_string(config.size()) +
                                    " settings but the state has " + std::to_string(state.n_qubits()) + " qubits");
    }
}

}  // namespace detail

/// Sum over mixture components of weight * |<outcome basis product|psi>|^2.
inline double outcome_probability(const MixedState &state, const MeasurementConfig &config, const Outcome &outcome) {
    detail::check_dimensions(state, config);
    if (outcome.size() != config.size()) {
        throw std::invalid_argument("outcome_probability: outcome length does not match configuration");
    }
    std::vector<BasisVector> directions;
    directions.reserve(config.size());
    for (std::size_t q = 0; q < config.size(); ++q) {
        directions.push_back(config[q].vector(outcome[q]));
    }
    double p = 0.0;
    for (const auto &c : state.components()) {
        p += c.weight * std::norm(projection_amplitude(c.state, directions));
    }
    return p;
}

/// All 2^n outcome probabilities at once.
///
/// Rotates each component into the measurement basis one location at a time,
/// which costs O(n 2^n) per component instead of O(n 4^n) for per-outcome
/// evaluation.
inline ProbabilityTable probability_table(const MixedState &state, const MeasurementConfig &config) {
    detail::check_dimensions(state, config);
    const std::size_t n = config.size();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> probs(dim, 0.0);
    std::vector<Complex> work(dim);
    for (const auto &c : state.components()) {
        if (c.weight == 0.0) {
            continue;
        }
        work = c.state.amplitudes();
        for (std::size_t q = 0; q < n; ++q) {
            const BasisVector plus = config[q].plus_vector();
            const BasisVector minus = config[q].minus_vector();
            const std::size_t mask = std::size_t{1} << (n - 1 - q);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & mask) {
                    continue;
                }
                Complex a0 = work[i];
                Complex a1 = work[i | mask];
                work[i] = std::conj(plus[0]) * a0 + std::conj(plus[1]) * a1;
                work[i | mask] = std::conj(minus[0]) * a0 + std::conj(minus[1]) * a1;
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            probs[i] += c.weight * std::norm(work[i]);
        }
    }
    return ProbabilityTable(config, std::move(probs));
}

/// Post-measurement state of a single-location projection.
struct Projection {
    PureState state;
    double probability;
};

/// Projects `location` (1-based) onto `direction` and traces it out.
///
/// Returns the renormalized state on the remaining n-1 qubits together with
/// the probability of the projection. Throws ImpossibleProjection when that
/// probability is below 1e-15.
inline Projection project(const PureState &state, std::size_t location, const BasisVector &direction) {
    const std::size_t n = state.n_qubits();
    if (location < 1 || location > n) {
        throw std::invalid_argument("project: location " + std::to_string(location) + " outside [1, " +
                                    std::to_string(n) + "]");
    }
    if (n < 2) {
        throw std::invalid_argument("project: need at least two qubits to keep a remainder");
    }
    const std::size_t shift = n - location;
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    std::vector<Complex> out(state.dimension() / 2);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        std::size_t bit = (i >> shift) & 1;
        std::size_t j = ((i >> (shift + 1)) << shift) | (i & low_mask);
        out[j] += std::conj(direction[bit]) * state[i];
    }
    double p = 0.0;
    for (const auto &a : out) {
        p += std::norm(a);
    }
    if (p < kImpossibleProjectionThreshold) {
        throw ImpossibleProjection("project: location " + std::to_string(location) +
                                   " has zero overlap with the requested direction");
    }
    return {PureState(n - 1, std::move(out)), p};
}

}  // namespace ghzbell
