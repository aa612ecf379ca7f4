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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzbell/basis.hpp"
#include "ghzbell/inequalities.hpp"
#include "ghzbell/probability.hpp"
#include "ghzbell/quantum_state.hpp"
#include "ghzbell/rng.hpp"

namespace ghzbell {

/// Deterministic local strategy: party q answers x[q] to X and y[q] to Y.
///
/// Mixtures of such strategies are convex combinations, so every linear
/// inequality attains its local extremum on one of them.
struct LhvStrategy {
    std::vector<int> x;
    std::vector<int> y;

    std::size_t parties() const {
        return x.size();
    }

    /// e.g. "x=+-+ y=--+".
    std::string to_string() const {
        std::string out = "x=";
        for (int v : x) {
            out.push_back(v == 1 ? '+' : '-');
        }
        out += " y=";
        for (int v : y) {
            out.push_back(v == 1 ? '+' : '-');
        }
        return out;
    }

    bool operator==(const LhvStrategy &) const = default;
};

/// All 4^n deterministic strategies. Strategy s gives party q the value
/// x = -1 iff bit 2q of s is set and y = -1 iff bit 2q+1 is set.
inline std::vector<LhvStrategy> enumerate_strategies(std::size_t n_parties) {
    if (n_parties < 1 || n_parties > 10) {
        throw std::invalid_argument("enumerate_strategies: n_parties must be in [1, 10]");
    }
    const std::size_t total = std::size_t{1} << (2 * n_parties);
    std::vector<LhvStrategy> out;
    out.reserve(total);
    for (std::size_t s = 0; s < total; ++s) {
        LhvStrategy st{std::vector<int>(n_parties), std::vector<int>(n_parties)};
        for (std::size_t q = 0; q < n_parties; ++q) {
            st.x[q] = ((s >> (2 * q)) & 1) ? -1 : 1;
            st.y[q] = ((s >> (2 * q + 1)) & 1) ? -1 : 1;
        }
        out.push_back(std::move(st));
    }
    return out;
}

/// Indicator table of one strategy under an X/Y configuration.
inline ProbabilityTable strategy_table(const LhvStrategy &s, const MeasurementConfig &config) {
    if (config.size() != s.parties()) {
        throw std::invalid_argument("strategy_table: configuration " + config.to_string() + " does not match " +
                                    std::to_string(s.parties()) + " parties");
    }
    std::vector<int> results(config.size());
    for (std::size_t q = 0; q < config.size(); ++q) {
        switch (config[q].kind()) {
            case BasisKind::X:
                results[q] = s.x[q];
                break;
            case BasisKind::Y:
                results[q] = s.y[q];
                break;
            default:
                throw std::invalid_argument("strategy_table: only X and Y settings are defined for local strategies");
        }
    }
    std::vector<double> probs(std::size_t{1} << config.size(), 0.0);
    probs[Outcome(results).index()] = 1.0;
    return ProbabilityTable(config, std::move(probs));
}

inline std::vector<ProbabilityTable> strategy_tables(const LhvStrategy &s, std::span<const MeasurementConfig> configs) {
    std::vector<ProbabilityTable> out;
    out.reserve(configs.size());
    for (const auto &c : configs) {
        out.push_back(strategy_table(s, c));
    }
    return out;
}

inline std::vector<ProbabilityTable> strategy_tables(const LhvStrategy &s, std::span<const std::string_view> configs) {
    std::vector<MeasurementConfig> parsed;
    for (auto c : configs) {
        parsed.push_back(MeasurementConfig::parse(c));
    }
    return strategy_tables(s, std::span<const MeasurementConfig>(parsed));
}

/// Order of sign pairs in ChshLhvReport::attaining.
inline constexpr std::array<std::array<int, 2>, 4> kChshSignPairs{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

struct ChshLhvReport {
    double value = 0.0;
    std::size_t strategies = 0;
    /// Number of strategies reaching `value` for each sign pair (m, n).
    std::array<std::size_t, 4> attaining{};
    /// A strategy reaching `value` with signs (m, n) = (1, 1).
    LhvStrategy witness;
};

/// Maximum of |CHSH| over the 16 two-party strategies and all sign pairs,
/// with A = X1, a = Y1, B = X2, b = Y2.
inline ChshLhvReport max_chsh_lhv(double tolerance = 1e-9) {
    static constexpr std::array<std::size_t, 2> pair{1, 2};
    static constexpr std::array<std::string_view, 4> configs{"XX", "XY", "YX", "YY"};
    const auto strategies = enumerate_strategies(2);
    std::vector<std::array<double, 4>> values;
    ChshLhvReport report;
    report.strategies = strategies.size();
    for (const auto &s : strategies) {
        auto t = strategy_tables(s, configs);
        std::array<double, 4> v{};
        for (std::size_t k = 0; k < kChshSignPairs.size(); ++k) {
            ChshSigns signs(kChshSignPairs[k][0], kChshSignPairs[k][1]);
            v[k] = std::abs(chsh_value(correlation(t[0], pair), correlation(t[1], pair), correlation(t[2], pair),
                                       correlation(t[3], pair), signs));
            report.value = std::max(report.value, v[k]);
        }
        values.push_back(v);
    }
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            if (std::abs(values[i][k] - report.value) <= tolerance) {
                if (report.attaining[0] == 0 && k == 0) {
                    report.witness = strategies[i];
                }
                ++report.attaining[k];
            }
        }
    }
    return report;
}

/// C(XYY) + C(YXY) + C(YYX) - C(XXX), signed.
inline double mermin_signed(std::span<const ProbabilityTable> tables) {
    static constexpr std::array<std::size_t, 3> all{1, 2, 3};
    auto c = [&](std::string_view name) { return correlation(detail::find_config(tables, name), all); };
    return c("XYY") + c("YXY") + c("YYX") - c("XXX");
}

struct MerminLhvReport {
    double value = 0.0;
    LhvStrategy witness;
    double min_signed = 0.0;
    double max_signed = 0.0;
    std::size_t strategies = 0;
};

/// Maximum of the Mermin expression over the 64 three-party strategies.
inline MerminLhvReport max_mermin_lhv() {
    const auto strategies = enumerate_strategies(3);
    MerminLhvReport report;
    report.strategies = strategies.size();
    report.min_signed = std::numeric_limits<double>::infinity();
    report.max_signed = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto &s : strategies) {
        auto tables = strategy_tables(s, std::span<const std::string_view>(kMerminConfigs));
        double v = mermin_signed(tables);
        report.min_signed = std::min(report.min_signed, v);
        report.max_signed = std::max(report.max_signed, v);
        if (first || std::abs(v) > report.value) {
            report.value = std::abs(v);
            report.witness = s;
            first = false;
        }
    }
    return report;
}

struct ConditionedLhvEntry {
    LhvStrategy strategy;
    DecompositionResult decomposition;
};

struct ConditionedLhvReport {
    double max = 0.0;
    double min = 0.0;
    std::size_t count_at_max = 0;
    LhvStrategy witness;
    std::vector<ConditionedLhvEntry> entries;
};

/// Runs decompose on the five deterministic tables of every three-party
/// strategy. The maximum of s_prob_lower must not exceed 0.
inline ConditionedLhvReport max_conditioned_lhv(double tolerance = 1e-9) {
    const auto strategies = enumerate_strategies(3);
    ConditionedLhvReport report;
    report.max = -std::numeric_limits<double>::infinity();
    report.min = std::numeric_limits<double>::infinity();
    for (const auto &s : strategies) {
        auto tables = strategy_tables(s, std::span<const std::string_view>(kConditionedConfigs));
        DecompositionResult d = decompose(tables);
        double v = d.s_prob_lower.value;
        if (v > report.max) {
            report.max = v;
            report.witness = s;
        }
        report.min = std::min(report.min, v);
        report.entries.push_back({s, d});
    }
    for (const auto &e : report.entries) {
        if (std::abs(e.decomposition.s_prob_lower.value - report.max) <= tolerance) {
            ++report.count_at_max;
        }
    }
    return report;
}

/// Two custom settings per party: angles {theta_A, phi_A, theta_a, phi_a,
/// theta_B, phi_B, theta_b, phi_b}, with A/a on location 1 and B/b on
/// location 2.
struct SettingsVector {
    std::array<double, 8> angles{};

    BasisSetting setting(std::size_t party, std::size_t choice) const {
        std::size_t base = 4 * party + 2 * choice;
        return BasisSetting::custom(angles[base], angles[base + 1]);
    }

    /// A known optimum for (|HH> + |VV>)/sqrt(2): A = Z and a = X on the first
    /// qubit, B and b rotated to -45 and -135 degrees on the second.
    static SettingsVector textbook() {
        using std::numbers::pi;
        return {{0.0, 0.0, pi / 2, 0.0, -pi / 4, 0.0, -3 * pi / 4, 0.0}};
    }
};

/// |C(A,B) - C(A,b) - C(a,B) - C(a,b)| for a two-qubit state. Other sign
/// pairs are reached by relabeling outcomes, which the angles can express.
inline double chsh_objective(const PureState &state, const SettingsVector &s) {
    static constexpr std::array<std::size_t, 2> pair{1, 2};
    auto c = [&](std::size_t a, std::size_t b) {
        MeasurementConfig cfg({s.setting(0, a), s.setting(1, b)});
        return correlation(probability_table(state, cfg), pair);
    };
    return std::abs(chsh_value(c(0, 0), c(0, 1), c(1, 0), c(1, 1)));
}

struct TsirelsonOptions {
    double tolerance = 1e-9;
    std::size_t restarts = 20;
    std::uint64_t seed = 0x7C5E1502u;
    /// Grid points per coordinate before golden-section refinement.
    std::size_t grid = 24;
    std::size_t max_sweeps = 500;
};

struct TsirelsonResult {
    double value = 0.0;
    SettingsVector settings;
    /// Final objective of each restart, restart 0 starting from `initial`.
    std::vector<double> restart_values;
    /// Objective after every accepted coordinate step, per restart.
    std::vector<std::vector<double>> traces;
};

namespace detail {

/// Maximizes a unimodal-on-bracket function on [lo, hi].
template <typename F>
double golden_section_max(F &&f, double lo, double hi, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

/// Coordinate ascent from `start`; only strictly improving steps are taken.
inline double coordinate_ascent(const PureState &state, SettingsVector &s, const TsirelsonOptions &opt,
                                std::vector<double> &trace) {
    using std::numbers::pi;
    double best = chsh_objective(state, s);
    trace.push_back(best);
    for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double sweep_start = best;
        for (std::size_t k = 0; k < s.angles.size(); ++k) {
            SettingsVector trial = s;
            auto f = [&](double angle) {
                trial.angles[k] = angle;
                return chsh_objective(state, trial);
            };
            const double origin = s.angles[k];
            const double step = 2.0 * pi / static_cast<double>(opt.grid);
            double grid_best = origin;
            double grid_value = best;
            for (std::size_t g = 1; g < opt.grid; ++g) {
                double angle = origin + step * static_cast<double>(g);
                double v = f(angle);
                if (v > grid_value) {
                    grid_value = v;
                    grid_best = angle;
                }
            }
            double refined = golden_section_max(f, grid_best - step, grid_best + step, 1e-12);
            double refined_value = f(refined);
            double candidate = grid_best;
            double candidate_value = grid_value;
            if (refined_value > candidate_value) {
                candidate = refined;
                candidate_value = refined_value;
            }
            if (candidate_value > best) {
                const double previous = s.angles[k];
                s.angles[k] = std::remainder(candidate, 2.0 * pi);
                const double accepted = chsh_objective(state, s);
                if (accepted > best) {
                    best = accepted;
                    trace.push_back(best);
                } else {
                    s.angles[k] = previous;
                }
            }
        }
        if (best - sweep_start < opt.tolerance * 1e-3) {
            break;
        }
    }
    return best;
}

}  // namespace detail

/// Multi-start coordinate ascent over the eight measurement angles of a
/// two-qubit state, maximizing |CHSH|.
inline TsirelsonResult tsirelson_search(const SettingsVector &initial, const PureState &state,
                                        const TsirelsonOptions &options = {}) {
    using std::numbers::pi;
    if (state.n_qubits() != 2) {
        throw std::invalid_argument("tsirelson_search: state must have exactly 2 qubits, got " +
                                    std::to_string(state.n_qubits()));
    }
    if (!(options.tolerance > 0.0)) {
        throw std::invalid_argument("tsirelson_search: tolerance must be positive");
    }
    if (options.grid < 3) {
        throw std::invalid_argument("tsirelson_search: grid must have at least 3 points");
    }
    TsirelsonResult result;
    result.value = -1.0;
    const std::size_t starts = std::max<std::size_t>(options.restarts, 1);
    for (std::size_t r = 0; r < starts; ++r) {
        SettingsVector s = initial;
        if (r > 0) {
            PhiloxStream rng({options.seed, static_cast<std::uint32_t>(r), 0});
            for (auto &a : s.angles) {
                a = 2.0 * pi * rng.uniform() - pi;
            }
        }
        std::vector<double> trace;
        double v = detail::coordinate_ascent(state, s, options, trace);
        result.restart_values.push_back(v);
        result.traces.push_back(std::move(trace));
        if (v > result.value) {
            result.value = v;
            result.settings = s;
        }
    }
    return result;
}

}  // namespace ghzbell
