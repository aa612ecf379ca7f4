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
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ghzbell {

using Complex = std::complex<double>;

/// Maximum number of polarization qubits a state may hold.
inline constexpr std::size_t kMaxQubits = 16;

/// Pure state of n polarization qubits.
///
/// Amplitudes are indexed by bitstrings with bit value 0 = H and 1 = V.
/// Location 1 is the most significant bit, so for three qubits index 0b011
/// is |H>|V>|V>.
class PureState {
   public:
    PureState() = default;

    /// Takes ownership of the amplitudes and normalizes them. Throws
    /// std::invalid_argument when the length is not 2^n_qubits or the vector
    /// has zero norm.
    PureState(std::size_t n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
        if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) {
            throw std::invalid_argument("PureState: n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
        }
        if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
            throw std::invalid_argument(
                "PureState: expected " + std::to_string(std::size_t{1} << n_qubits_) + " amplitudes, got " +
                std::to_string(amplitudes_.size()));
        }
        double n2 = squared_norm();
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            throw std::invalid_argument("PureState: amplitudes have zero or non-finite norm");
        }
        double scale = 1.0 / std::sqrt(n2);
        for (auto &a : amplitudes_) {
            a *= scale;
        }
    }

    /// Computational basis state; bits[q] is 0 for H and 1 for V at location q+1.
    static PureState basis(const std::vector<int> &bits) {
        std::size_t index = 0;
        for (int b : bits) {
            if (b != 0 && b != 1) {
                throw std::invalid_argument("PureState::basis: bits must be 0 (H) or 1 (V)");
            }
            index = (index << 1) | static_cast<std::size_t>(b);
        }
        std::vector<Complex> amps(std::size_t{1} << bits.size());
        amps[index] = 1.0;
        return PureState(bits.size(), std::move(amps));
    }

    std::size_t n_qubits() const {
        return n_qubits_;
    }
    std::size_t dimension() const {
        return amplitudes_.size();
    }
    const std::vector<Complex> &amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](std::size_t index) const {
        return amplitudes_[index];
    }

    double squared_norm() const {
        double acc = 0.0;
        for (const auto &a : amplitudes_) {
            acc += std::norm(a);
        }
        return acc;
    }

   private:
    std::size_t n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

/// <a|b>.
inline Complex inner_product(const PureState &a, const PureState &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner_product: qubit counts differ");
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

/// |<a|b>|^2, insensitive to global phase.
inline double fidelity(const PureState &a, const PureState &b) {
    return std::norm(inner_product(a, b));
}

/// Kronecker product; qubits of `a` occupy the leading locations.
inline PureState tensor(const PureState &a, const PureState &b) {
    std::vector<Complex> amps(a.dimension() * b.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        for (std::size_t j = 0; j < b.dimension(); ++j) {
            amps[i * b.dimension() + j] = a[i] * b[j];
        }
    }
    return PureState(a.n_qubits() + b.n_qubits(), std::move(amps));
}

/// (|H...H> + |V...V>)/sqrt(2) on n >= 2 qubits.
inline PureState ghz_state(std::size_t n) {
    if (n < 2 || n > kMaxQubits) {
        throw std::invalid_argument("ghz_state: n must be in [2, " + std::to_string(kMaxQubits) + "]");
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    amps.front() = std::numbers::sqrt2 / 2;
    amps.back() = std::numbers::sqrt2 / 2;
    return PureState(n, std::move(amps));
}

/// One weighted pure state inside a MixedState.
struct WeightedState {
    double weight;
    PureState state;
};

/// Convex mixture of pure states with equal qubit counts.
class MixedState {
   public:
    MixedState() = default;

    /// Throws std::invalid_argument on negative weights, weights not summing to
    /// 1 within 1e-12, mismatched qubit counts or an empty component list.
    explicit MixedState(std::vector<WeightedState> components) : components_(std::move(components)) {
        if (components_.empty()) {
            throw std::invalid_argument("MixedState: at least one component is required");
        }
        double total = 0.0;
        for (const auto &c : components_) {
            if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
                throw std::invalid_argument("MixedState: weights must be finite and nonnegative");
            }
            if (c.state.n_qubits() != components_.front().state.n_qubits()) {
                throw std::invalid_argument("MixedState: components have different qubit counts");
            }
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("MixedState: weights sum to " + std::to_string(total) + ", expected 1");
        }
    }

    // NOLINTNEXTLINE(google-explicit-constructor)
    MixedState(PureState state) : components_{{1.0, std::move(state)}} {
    }

    std::size_t n_qubits() const {
        return components_.front().state.n_qubits();
    }
    const std::vector<WeightedState> &components() const {
        return components_;
    }

   private:
    std::vector<WeightedState> components_;
};

}  // namespace ghzbell
