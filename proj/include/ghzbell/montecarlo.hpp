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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ghzbell/basis.hpp"
#include "ghzbell/estimate.hpp"
#include "ghzbell/probability.hpp"
#include "ghzbell/quantum_state.hpp"
#include "ghzbell/rng.hpp"

namespace ghzbell {

/// Raised when noise parameters cannot be realized with nonnegative weights.
class InfeasibleModel : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// (|HHH> - |VVV>)/sqrt(2).
inline PureState ghz_minus_state() {
    std::vector<Complex> amps(8);
    amps.front() = kInvSqrt2;
    amps.back() = -kInvSqrt2;
    return PureState(3, std::move(amps));
}

/// Three-photon noise family: w_plus |GHZ+> + w_minus |GHZ-> + eps on each of
/// the six non-desired computational basis states (as a convex mixture).
///
/// Populations depend only on W = w_plus + w_minus and eps; the coherence
/// c = w_plus - w_minus equals the X-basis suppression visibility
/// (P(H'H'H') - P(H'H'V')) / (P(H'H'H') + P(H'H'V')).
struct NoiseModel {
    double w_plus = 1.0;
    double w_minus = 0.0;
    double eps = 0.0;

    static NoiseModel perfect() {
        return {1.0, 0.0, 0.0};
    }

    /// Throws InfeasibleModel on negative weights or broken normalization.
    void validate() const {
        if (!(w_plus >= 0.0) || !(w_minus >= 0.0) || !(eps >= 0.0)) {
            throw InfeasibleModel("noise model weights must be nonnegative (w_plus=" + std::to_string(w_plus) +
                                  ", w_minus=" + std::to_string(w_minus) + ", eps=" + std::to_string(eps) + ")");
        }
        double total = w_plus + w_minus + 6.0 * eps;
        if (std::abs(total - 1.0) > 1e-12) {
            throw InfeasibleModel("noise model weights sum to " + std::to_string(total) +
                                  ", expected w_plus + w_minus + 6 eps = 1");
        }
    }

    double coherence() const {
        return w_plus - w_minus;
    }

    /// Population of HHH (or VVV) divided by that of one non-desired state.
    double population_ratio() const {
        double desired = (w_plus + w_minus) / 2.0;
        return eps == 0.0 ? std::numeric_limits<double>::infinity() : desired / eps;
    }

    /// Same populations, coherence replaced by `c`.
    NoiseModel with_coherence(double c) const {
        double w = w_plus + w_minus;
        if (!(c >= 0.0) || c > w + 1e-15) {
            throw InfeasibleModel("coherence " + std::to_string(c) + " outside [0, w_plus + w_minus = " +
                                  std::to_string(w) + "]");
        }
        c = std::min(c, w);
        return {(w + c) / 2.0, (w - c) / 2.0, eps};
    }

    MixedState to_mixture() const {
        validate();
        std::vector<WeightedState> components;
        components.push_back({w_plus, ghz_state(3)});
        components.push_back({w_minus, ghz_minus_state()});
        for (int index = 1; index < 7; ++index) {
            components.push_back({eps, PureState::basis({(index >> 2) & 1, (index >> 1) & 1, index & 1})});
        }
        return MixedState(std::move(components));
    }

    bool operator==(const NoiseModel &) const = default;
};

/// Fits the noise family to a desired-to-non-desired population ratio and an
/// X-basis visibility.
///
/// HHH population W/2 over eps equals `ratio` with W = 1 - 6 eps, so
/// eps = 1/(2 ratio + 6); the visibility fixes the coherence directly. The
/// pair is feasible iff visibility <= W = ratio / (ratio + 3). `ratio` may be
/// +infinity (no population noise).
inline NoiseModel fit_noise(double ratio, double visibility) {
    if (!(ratio > 0.0)) {
        throw std::invalid_argument("fit_noise: ratio must be positive");
    }
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw std::invalid_argument("fit_noise: visibility must lie in [0, 1]");
    }
    double eps = std::isinf(ratio) ? 0.0 : 1.0 / (2.0 * ratio + 6.0);
    double w = 1.0 - 6.0 * eps;
    if (visibility > w) {
        throw InfeasibleModel("fit_noise: visibility " + std::to_string(visibility) +
                              " exceeds the maximum " + std::to_string(w) + " reachable at ratio " +
                              std::to_string(ratio) + " (requires w_minus < 0)");
    }
    return {(w + visibility) / 2.0, (w - visibility) / 2.0, eps};
}

/// Sampled outcome counts of one measurement configuration.
///
/// counts()[i] is the number of occurrences of Outcome::from_index(i, n).
class CountsTable {
   public:
    CountsTable() = default;
    CountsTable(MeasurementConfig config, std::vector<std::uint64_t> counts)
        : config_(std::move(config)), counts_(std::move(counts)) {
        if (counts_.size() != (std::size_t{1} << config_.size())) {
            throw std::invalid_argument("CountsTable: expected " + std::to_string(std::size_t{1} << config_.size()) +
                                        " entries");
        }
        shots_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    }

    static CountsTable zeros(MeasurementConfig config) {
        std::vector<std::uint64_t> counts(std::size_t{1} << config.size(), 0);
        return CountsTable(std::move(config), std::move(counts));
    }

    const MeasurementConfig &config() const {
        return config_;
    }
    std::size_t n_qubits() const {
        return config_.size();
    }
    const std::vector<std::uint64_t> &counts() const {
        return counts_;
    }
    std::uint64_t shots() const {
        return shots_;
    }
    std::uint64_t count(const Outcome &outcome) const {
        if (outcome.size() != config_.size()) {
            throw std::invalid_argument("CountsTable: outcome length does not match configuration");
        }
        return counts_[outcome.index()];
    }

    bool operator==(const CountsTable &) const = default;

   private:
    MeasurementConfig config_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t shots_ = 0;
};

/// Count used in place of n = 0 when computing the Poisson sigma.
inline constexpr double kDefaultZeroCountFloor = 1.0;

/// value = n/N, sigma = sqrt(n)/N with N fixed; n = 0 uses sqrt(zero_floor)/N.
inline EstimateWithError estimate_probability(const CountsTable &counts, const Outcome &outcome,
                                              double zero_floor = kDefaultZeroCountFloor) {
    if (counts.shots() == 0) {
        throw std::invalid_argument("estimate_probability: table for " + counts.config().to_string() +
                                    " has zero shots");
    }
    double n = static_cast<double>(counts.count(outcome));
    double total = static_cast<double>(counts.shots());
    double var_count = n == 0.0 ? zero_floor : n;
    return {n / total, std::sqrt(var_count) / total};
}

/// Exact table entries carry no counting error.
inline EstimateWithError estimate_probability(const ProbabilityTable &table, const Outcome &outcome) {
    return {table.probability(outcome), 0.0};
}

/// Shots drawn per independent RNG stream.
inline constexpr std::uint64_t kShotsPerBatch = 1u << 16;

struct SamplingOptions {
    /// Worker threads; results do not depend on this value.
    unsigned threads = 1;
    /// Draw the total count from Poisson(shots) instead of using it as fixed N.
    bool poisson_total = false;
};

namespace detail {

inline std::vector<double> cumulative(const std::vector<double> &probs) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += std::max(probs[i], 0.0);
        cdf[i] = acc;
    }
    for (auto &c : cdf) {
        c /= acc;
    }
    return cdf;
}

inline std::size_t draw(const std::vector<double> &cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
        // u within rounding of 1: take the last outcome with nonzero mass.
        std::size_t i = cdf.size() - 1;
        while (i > 0 && cdf[i] == cdf[i - 1]) {
            --i;
        }
        return i;
    }
    return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace detail

/// Draws `shots` i.i.d. outcomes from `table`.
///
/// Batch b of kShotsPerBatch shots uses stream (key.seed, key.stream, b), so
/// the result is identical for every thread count.
inline CountsTable sample_counts(const ProbabilityTable &table, std::uint64_t shots, StreamKey key,
                                 const SamplingOptions &options = {}) {
    if (options.poisson_total && shots > 0) {
        PhiloxStream rng({key.seed, key.stream, std::numeric_limits<std::uint32_t>::max()});
        std::poisson_distribution<std::uint64_t> total(static_cast<double>(shots));
        shots = total(rng);
    }
    const std::vector<double> cdf = detail::cumulative(table.probs());
    const std::uint64_t batches = (shots + kShotsPerBatch - 1) / kShotsPerBatch;
    if (batches >= std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("sample_counts: too many shots");
    }
    std::vector<std::vector<std::uint64_t>> per_batch(batches, std::vector<std::uint64_t>(cdf.size(), 0));
    auto run_batch = [&](std::uint64_t b) {
        PhiloxStream rng({key.seed, key.stream, static_cast<std::uint32_t>(b)});
        std::uint64_t begin = b * kShotsPerBatch;
        std::uint64_t end = std::min(shots, begin + kShotsPerBatch);
        auto &local = per_batch[b];
        for (std::uint64_t s = begin; s < end; ++s) {
            ++local[detail::draw(cdf, rng.uniform())];
        }
    };
    unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(batches)));
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < batches; ++b) {
            run_batch(b);
        }
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::uint64_t b = t; b < batches; b += threads) {
                    run_batch(b);
                }
            });
        }
    }
    std::vector<std::uint64_t> counts(cdf.size(), 0);
    for (const auto &local : per_batch) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            counts[i] += local[i];
        }
    }
    return CountsTable(table.config(), std::move(counts));
}

inline CountsTable sample_counts(const NoiseModel &noise, const MeasurementConfig &config, std::uint64_t shots,
                                 StreamKey key, const SamplingOptions &options = {}) {
    return sample_counts(probability_table(noise.to_mixture(), config), shots, key, options);
}

}  // namespace ghzbell
