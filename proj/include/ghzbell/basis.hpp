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

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghzbell/quantum_state.hpp"

namespace ghzbell {

/// Single-qubit ket in the H/V basis: {<H|v>, <V|v>}.
using BasisVector = std::array<Complex, 2>;

inline constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2;

inline const BasisVector kH{1.0, 0.0};
inline const BasisVector kV{0.0, 1.0};
inline const BasisVector kHPrime{kInvSqrt2, kInvSqrt2};
inline const BasisVector kVPrime{kInvSqrt2, -kInvSqrt2};
inline const BasisVector kR{kInvSqrt2, Complex(0.0, kInvSqrt2)};
inline const BasisVector kL{kInvSqrt2, Complex(0.0, -kInvSqrt2)};

enum class BasisKind { Z, X, Y, Custom };

/// A two-outcome polarization measurement.
///
/// Outcome +1 is H, H' or R for Z, X and Y respectively; -1 is the orthogonal
/// vector. Custom settings use cos(theta/2)|H> + e^{i phi} sin(theta/2)|V> for
/// +1 and sin(theta/2)|H> - e^{i phi} cos(theta/2)|V> for -1.
class BasisSetting {
   public:
    constexpr BasisSetting() = default;

    static constexpr BasisSetting z() {
        return BasisSetting(BasisKind::Z, 0.0, 0.0);
    }
    static constexpr BasisSetting x() {
        return BasisSetting(BasisKind::X, 0.0, 0.0);
    }
    static constexpr BasisSetting y() {
        return BasisSetting(BasisKind::Y, 0.0, 0.0);
    }
    static BasisSetting custom(double theta, double phi) {
        if (!std::isfinite(theta) || !std::isfinite(phi)) {
            throw std::invalid_argument("BasisSetting::custom: angles must be finite");
        }
        return BasisSetting(BasisKind::Custom, theta, phi);
    }

    /// Parses one of 'X', 'Y', 'Z'.
    static BasisSetting from_char(char c) {
        switch (c) {
            case 'X':
                return x();
            case 'Y':
                return y();
            case 'Z':
                return z();
            default:
                throw std::invalid_argument(std::string("unknown basis '") + c + "', expected X, Y or Z");
        }
    }

    constexpr BasisKind kind() const {
        return kind_;
    }
    constexpr double theta() const {
        return theta_;
    }
    constexpr double phi() const {
        return phi_;
    }

    /// 'X', 'Y', 'Z' or 'C' for custom settings.
    constexpr char symbol() const {
        switch (kind_) {
            case BasisKind::Z:
                return 'Z';
            case BasisKind::X:
                return 'X';
            case BasisKind::Y:
                return 'Y';
            case BasisKind::Custom:
                break;
        }
        return 'C';
    }

    BasisVector vector(int outcome) const {
        if (outcome != 1 && outcome != -1) {
            throw std::invalid_argument("BasisSetting::vector: outcome must be +1 or -1");
        }
        bool plus = outcome == 1;
        switch (kind_) {
            case BasisKind::Z:
                return plus ? kH : kV;
            case BasisKind::X:
                return plus ? kHPrime : kVPrime;
            case BasisKind::Y:
                return plus ? kR : kL;
            case BasisKind::Custom:
                break;
        }
        Complex phase = std::polar(1.0, phi_);
        double c = std::cos(theta_ / 2);
        double s = std::sin(theta_ / 2);
        return plus ? BasisVector{c, phase * s} : BasisVector{s, -phase * c};
    }

    BasisVector plus_vector() const {
        return vector(1);
    }
    BasisVector minus_vector() const {
        return vector(-1);
    }

    bool operator==(const BasisSetting &) const = default;

   private:
    constexpr BasisSetting(BasisKind kind, double theta, double phi) : kind_(kind), theta_(theta), phi_(phi) {
    }

    BasisKind kind_ = BasisKind::Z;
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// One basis setting per location, location 1 first.
class MeasurementConfig {
   public:
    MeasurementConfig() = default;
    explicit MeasurementConfig(std::vector<BasisSetting> settings) : settings_(std::move(settings)) {
        if (settings_.empty() || settings_.size() > kMaxQubits) {
            throw std::invalid_argument("MeasurementConfig: need between 1 and " + std::to_string(kMaxQubits) +
                                        " settings");
        }
    }

    /// Parses strings such as "XYY" (location 1 first).
    static MeasurementConfig parse(std::string_view text) {
        if (text.empty()) {
            throw std::invalid_argument("empty measurement configuration");
        }
        std::vector<BasisSetting> settings;
        settings.reserve(text.size());
        for (char c : text) {
            settings.push_back(BasisSetting::from_char(c));
        }
        return MeasurementConfig(std::move(settings));
    }

    std::size_t size() const {
        return settings_.size();
    }
    const BasisSetting &operator[](std::size_t i) const {
        return settings_[i];
    }
    const std::vector<BasisSetting> &settings() const {
        return settings_;
    }

    std::string to_string() const {
        std::string out;
        for (const auto &s : settings_) {
            out.push_back(s.symbol());
        }
        return out;
    }

    bool operator==(const MeasurementConfig &) const = default;

   private:
    std::vector<BasisSetting> settings_;
};

/// Measured values at each location, each +1 or -1, location 1 first.
///
/// Outcomes map to table indices the same way amplitudes do: a -1 at location
/// q sets bit (n - q), so "+++" is index 0 and "---" is index 2^n - 1.
class Outcome {
   public:
    Outcome() = default;
    explicit Outcome(std::vector<int> results) : results_(std::move(results)) {
        if (results_.empty() || results_.size() > kMaxQubits) {
            throw std::invalid_argument("Outcome: length must be in [1, " + std::to_string(kMaxQubits) + "]");
        }
        for (int r : results_) {
            if (r != 1 && r != -1) {
                throw std::invalid_argument("Outcome: results must be +1 or -1");
            }
        }
    }

    static Outcome from_index(std::size_t index, std::size_t n) {
        if (n == 0 || n > kMaxQubits || index >= (std::size_t{1} << n)) {
            throw std::invalid_argument("Outcome::from_index: index out of range");
        }
        std::vector<int> results(n);
        for (std::size_t q = 0; q < n; ++q) {
            results[q] = ((index >> (n - 1 - q)) & 1) ? -1 : 1;
        }
        return Outcome(std::move(results));
    }

    /// Parses "+-+" style keys.
    static Outcome parse(std::string_view text) {
        std::vector<int> results;
        for (char c : text) {
            if (c == '+') {
                results.push_back(1);
            } else if (c == '-') {
                results.push_back(-1);
            } else {
                throw std::invalid_argument("Outcome::parse: unexpected character '" + std::string(1, c) + "'");
            }
        }
        return Outcome(std::move(results));
    }

    std::size_t size() const {
        return results_.size();
    }
    int operator[](std::size_t i) const {
        return results_[i];
    }
    const std::vector<int> &results() const {
        return results_;
    }

    std::size_t index() const {
        std::size_t idx = 0;
        for (int r : results_) {
            idx = (idx << 1) | (r == -1 ? 1u : 0u);
        }
        return idx;
    }

    /// Product of all results.
    int parity() const {
        int p = 1;
        for (int r : results_) {
            p *= r;
        }
        return p;
    }

    std::string to_string() const {
        std::string out;
        for (int r : results_) {
            out.push_back(r == 1 ? '+' : '-');
        }
        return out;
    }

    bool operator==(const Outcome &) const = default;

   private:
    std::vector<int> results_;
};

}  // namespace ghzbell
