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
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzbell/basis.hpp"
#include "ghzbell/montecarlo.hpp"
#include "ghzbell/probability.hpp"
#include "ghzbell/quantum_state.hpp"
#include "ghzbell/rng.hpp"

namespace ghzbell {

/// (|HH> + |VV>)/sqrt(2), the state of each down-converted pair.
inline PureState epr_pair() {
    return ghz_state(2);
}

/// Keeps the components in which locations a and b (1-based) carry the same
/// polarization, i.e. one photon leaves each PBS output port.
///
/// Returns the renormalized state and the surviving probability mass; throws
/// ImpossibleProjection if nothing survives.
inline Projection pbs_postselect(const PureState &state, std::size_t loc_a, std::size_t loc_b) {
    const std::size_t n = state.n_qubits();
    if (loc_a < 1 || loc_a > n || loc_b < 1 || loc_b > n) {
        throw std::invalid_argument("pbs_postselect: locations must lie in [1, " + std::to_string(n) + "]");
    }
    if (loc_a == loc_b) {
        throw std::invalid_argument("pbs_postselect: locations must differ");
    }
    const std::size_t shift_a = n - loc_a;
    const std::size_t shift_b = n - loc_b;
    std::vector<Complex> kept(state.dimension());
    double mass = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        if (((i >> shift_a) & 1) == ((i >> shift_b) & 1)) {
            kept[i] = state[i];
            mass += std::norm(state[i]);
        }
    }
    if (mass < kImpossibleProjectionThreshold) {
        throw ImpossibleProjection("pbs_postselect: no component with equal polarization at locations " +
                                   std::to_string(loc_a) + " and " + std::to_string(loc_b));
    }
    return {PureState(n, std::move(kept)), mass};
}

struct TriggerSettings {
    std::size_t location = 4;
    BasisVector direction = kHPrime;
};

/// Two EPR pairs on locations (1,2) and (3,4), PBS post-selection on (2,3),
/// then projection of the trigger photon. With the default trigger (H' at
/// location 4) this yields the three-photon GHZ state with probability 1/4.
inline Projection prepare_ghz3(const TriggerSettings &trigger = {}) {
    PureState pairs = tensor(epr_pair(), epr_pair());
    Projection merged = pbs_postselect(pairs, 2, 3);
    Projection triggered = project(merged.state, trigger.location, trigger.direction);
    return {std::move(triggered.state), merged.probability * triggered.probability};
}

/// Gaussian envelope of the two-photon interference versus delay.
struct DelayModel {
    double peak_visibility = 0.83;
    double coherence_width = 1.0;

    void validate() const {
        if (!(peak_visibility >= 0.0 && peak_visibility <= 1.0)) {
            throw std::invalid_argument("DelayModel: peak_visibility must lie in [0, 1]");
        }
        if (!(coherence_width > 0.0) || !std::isfinite(coherence_width)) {
            throw std::invalid_argument("DelayModel: coherence_width must be positive and finite");
        }
    }
};

/// peak_visibility * exp(-delay^2 / (2 width^2)).
inline double visibility_at(double delay, const DelayModel &model) {
    model.validate();
    double z = delay / model.coherence_width;
    return model.peak_visibility * std::exp(-0.5 * z * z);
}

struct DelayPoint {
    double delay = 0.0;
    /// Rate of H'H'H' per trigger event (a probability in analytic mode, a
    /// relative frequency when sampled).
    double rate_hhh_prime = 0.0;
    /// Rate of the suppressed H'H'V' component.
    double rate_hhv_prime = 0.0;
};

/// Rates of H'H'H' and H'H'V' across delay positions.
///
/// At each position the noise model's coherence is replaced by
/// visibility_at(delay) while populations stay fixed. shots_per_point = 0
/// gives exact probabilities; otherwise point p is sampled from stream
/// (seed, p).
inline std::vector<DelayPoint> delay_scan(const DelayModel &model, const NoiseModel &noise,
                                          std::span<const double> positions, std::uint64_t shots_per_point,
                                          std::uint64_t seed, const SamplingOptions &options = {}) {
    if (positions.empty()) {
        throw std::invalid_argument("delay_scan: positions must be non-empty");
    }
    model.validate();
    noise.validate();
    static const MeasurementConfig xxx = MeasurementConfig::parse("XXX");
    static const Outcome hhh = Outcome::parse("+++");
    static const Outcome hhv = Outcome::parse("++-");
    std::vector<DelayPoint> out;
    out.reserve(positions.size());
    for (std::size_t p = 0; p < positions.size(); ++p) {
        NoiseModel local = noise.with_coherence(visibility_at(positions[p], model));
        ProbabilityTable table = probability_table(local.to_mixture(), xxx);
        DelayPoint point{positions[p], table.probability(hhh), table.probability(hhv)};
        if (shots_per_point > 0) {
            CountsTable counts = sample_counts(table, shots_per_point, {seed, static_cast<std::uint32_t>(p), 0}, options);
            double n = static_cast<double>(counts.shots());
            point.rate_hhh_prime = n > 0 ? static_cast<double>(counts.count(hhh)) / n : 0.0;
            point.rate_hhv_prime = n > 0 ? static_cast<double>(counts.count(hhv)) / n : 0.0;
        }
        out.push_back(point);
    }
    return out;
}

/// Evenly spaced positions from `from` to `to` inclusive.
inline std::vector<double> scan_positions(double from, double to, double step) {
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to) || to < from) {
        throw std::invalid_argument("scan_positions: need finite from <= to and step > 0");
    }
    auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = from + step * static_cast<double>(i);
    }
    return out;
}

/// CSV with header `delay,rate_hhh_prime,rate_hhv_prime`, 17 significant
/// digits.
inline void write_delay_csv(std::ostream &out, std::span<const DelayPoint> points) {
    auto flags = out.flags();
    auto precision = out.precision();
    out.precision(17);
    out << "delay,rate_hhh_prime,rate_hhv_prime\n";
    for (const auto &p : points) {
        out << p.delay << ',' << p.rate_hhh_prime << ',' << p.rate_hhv_prime << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

}  // namespace ghzbell
