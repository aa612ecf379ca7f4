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
#include <concepts>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ghzbell/basis.hpp"
#include "ghzbell/estimate.hpp"
#include "ghzbell/montecarlo.hpp"
#include "ghzbell/probability.hpp"

namespace ghzbell {

/// Either a ProbabilityTable (exact, zero sigma) or a CountsTable (Poisson
/// sigma per outcome).
template <typename T>
concept OutcomeTable = requires(const T &t, const Outcome &o) {
    { t.config() } -> std::convertible_to<const MeasurementConfig &>;
    { t.n_qubits() } -> std::convertible_to<std::size_t>;
    { estimate_probability(t, o) } -> std::convertible_to<EstimateWithError>;
};

namespace detail {

inline void check_locations(std::size_t n, std::span<const std::size_t> locations) {
    if (locations.empty()) {
        throw std::invalid_argument("correlation: location subset must be non-empty");
    }
    for (std::size_t loc : locations) {
        if (loc < 1 || loc > n) {
            throw std::invalid_argument("correlation: location " + std::to_string(loc) + " outside [1, " +
                                        std::to_string(n) + "]");
        }
    }
}

inline int product_over(const Outcome &o, std::span<const std::size_t> locations) {
    int p = 1;
    for (std::size_t loc : locations) {
        p *= o[loc - 1];
    }
    return p;
}

}  // namespace detail

/// Expectation of the product of outcomes over `locations` (1-based),
/// marginalizing the rest. For two locations this is
/// P(1,1) - P(1,-1) - P(-1,1) + P(-1,-1).
inline double correlation(const ProbabilityTable &table, std::span<const std::size_t> locations) {
    detail::check_locations(table.n_qubits(), locations);
    double acc = 0.0;
    for (std::size_t i = 0; i < table.probs().size(); ++i) {
        acc += table.probs()[i] * detail::product_over(Outcome::from_index(i, table.n_qubits()), locations);
    }
    return acc;
}

inline double correlation(const ProbabilityTable &table, std::initializer_list<std::size_t> locations) {
    return correlation(table, std::span<const std::size_t>(locations.begin(), locations.size()));
}

/// Correlation with propagated sigma, treating every outcome's estimate as
/// independent.
template <OutcomeTable T>
EstimateWithError correlation_estimate(const T &table, std::span<const std::size_t> locations) {
    detail::check_locations(table.n_qubits(), locations);
    std::vector<LinearTerm> terms;
    const std::size_t dim = std::size_t{1} << table.n_qubits();
    terms.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Outcome o = Outcome::from_index(i, table.n_qubits());
        terms.push_back({static_cast<double>(detail::product_over(o, locations)), estimate_probability(table, o)});
    }
    return propagate(terms);
}

/// Sign choices (m, n) of the CHSH expression, each +1 or -1.
struct ChshSigns {
    int m = 1;
    int n = 1;

    ChshSigns() = default;
    ChshSigns(int m_, int n_) : m(m_), n(n_) {
        if ((m != 1 && m != -1) || (n != 1 && n != -1)) {
            throw std::invalid_argument("ChshSigns: m and n must be +1 or -1");
        }
    }
};

/// C(A,B) - m C(A,b) - n C(a,B) - m n C(a,b), signed. Bound checks take the
/// absolute value.
inline double chsh_value(double c_AB, double c_Ab, double c_aB, double c_ab, ChshSigns signs = {}) {
    return c_AB - signs.m * c_Ab - signs.n * c_aB - signs.m * signs.n * c_ab;
}

/// Affine map from CHSH-form bounds l to the probability form (l - 2)/4.
constexpr double bounds_map(double l) {
    return (l - 2.0) / 4.0;
}

constexpr double bounds_unmap(double p) {
    return 4.0 * p + 2.0;
}

/// Classical, quantum and algebraic limits of the CHSH expression and their
/// images in the probability form.
struct BoundSet {
    static constexpr double lhv_bound = 2.0;
    static constexpr double cirelson_bound = 2.0 * std::numbers::sqrt2;
    static constexpr double algebraic_max = 4.0;
    static constexpr double mermin_lhv_bound = 2.0;

    static constexpr double lhv_prob = bounds_map(lhv_bound);
    static constexpr double cirelson_prob = bounds_map(cirelson_bound);
    static constexpr double algebraic_prob = bounds_map(algebraic_max);
};

/// Measurement configurations required by the conditioned CHSH test, in the
/// order they are reported.
inline const std::array<std::string_view, 5> kConditionedConfigs{"XXX", "XYY", "YXY", "YYX", "YYY"};
inline const std::array<std::string_view, 4> kMerminConfigs{"XYY", "YXY", "YYX", "XXX"};

/// The three joint probabilities of the conditioned CHSH test and the lower
/// bound they give on its probability-form middle side.
struct DecompositionResult {
    /// P_{XiXj}(-1,-1), exact.
    EstimateWithError p_xx;
    /// Common upper bound on P_{XiYj}(-1,-yk) and P_{YiXj}(-yk,-1).
    EstimateWithError p_xy_upper;
    /// P_{YiYj}(yk,yk), exact and independent of yk.
    EstimateWithError p_yy;
    /// p_xx - 2 p_xy_upper - p_yy.
    EstimateWithError s_prob_lower;
    /// 4 s_prob_lower + 2.
    EstimateWithError s_chsh_lower;

    bool operator==(const DecompositionResult &) const = default;
};

/// Combines the three component estimates.
///
/// The cross-term bound enters twice as two independent terms, so
/// sigma^2 = s_xx^2 + 2 s_xy^2 + s_yy^2.
inline DecompositionResult decompose_components(const EstimateWithError &p_xx, const EstimateWithError &p_xy_upper,
                                                const EstimateWithError &p_yy) {
    DecompositionResult r;
    r.p_xx = p_xx;
    r.p_xy_upper = p_xy_upper;
    r.p_yy = p_yy;
    r.s_prob_lower = propagate({{1.0, p_xx}, {-1.0, p_xy_upper}, {-1.0, p_xy_upper}, {-1.0, p_yy}});
    r.s_chsh_lower = affine(r.s_prob_lower, 4.0, 2.0);
    return r;
}

namespace detail {

template <OutcomeTable T>
const T &find_config(std::span<const T> tables, std::string_view name) {
    for (const auto &t : tables) {
        if (t.config().to_string() == name) {
            return t;
        }
    }
    throw std::invalid_argument("missing measurement configuration " + std::string(name));
}

template <OutcomeTable T>
EstimateWithError sum_outcomes(const T &table, std::initializer_list<std::string_view> outcomes) {
    std::vector<LinearTerm> terms;
    for (auto key : outcomes) {
        terms.push_back({1.0, estimate_probability(table, Outcome::parse(key))});
    }
    return propagate(terms);
}

}  // namespace detail

/// Evaluates the five-configuration estimators from XXX, XYY, YXY, YYX and YYY
/// tables (any order, extra tables ignored).
///
/// p_xx sums the XXX outcomes with at least two -1 results. p_xy_upper sums,
/// for each of XYY, YXY, YYX, the two outcomes where the X location reads -1
/// and the Y pair disagrees. p_yy sums YYY outcomes +++ and ---. None of these
/// needs the unknown yk.
template <OutcomeTable T>
DecompositionResult decompose(std::span<const T> tables) {
    for (auto name : kConditionedConfigs) {
        const T &t = detail::find_config(tables, name);
        if (t.n_qubits() != 3) {
            throw std::invalid_argument("decompose: configuration " + std::string(name) + " must have 3 locations");
        }
    }
    const T &xxx = detail::find_config(tables, "XXX");
    const T &xyy = detail::find_config(tables, "XYY");
    const T &yxy = detail::find_config(tables, "YXY");
    const T &yyx = detail::find_config(tables, "YYX");
    const T &yyy = detail::find_config(tables, "YYY");

    EstimateWithError p_xx = detail::sum_outcomes(xxx, {"+--", "-+-", "--+", "---"});
    std::vector<LinearTerm> cross;
    for (auto e : {estimate_probability(xyy, Outcome::parse("-+-")), estimate_probability(xyy, Outcome::parse("--+")),
                   estimate_probability(yxy, Outcome::parse("+--")), estimate_probability(yxy, Outcome::parse("--+")),
                   estimate_probability(yyx, Outcome::parse("+--")), estimate_probability(yyx, Outcome::parse("-+-"))}) {
        cross.push_back({1.0, e});
    }
    EstimateWithError p_xy = propagate(cross);
    EstimateWithError p_yy = detail::sum_outcomes(yyy, {"+++", "---"});
    return decompose_components(p_xx, p_xy, p_yy);
}

template <OutcomeTable T>
DecompositionResult decompose(const std::vector<T> &tables) {
    return decompose(std::span<const T>(tables));
}

/// |C(X1,Y2,Y3) + C(Y1,X2,Y3) + C(Y1,Y2,X3) - C(X1,X2,X3)| from XYY, YXY, YYX
/// and XXX tables, with propagated sigma.
template <OutcomeTable T>
EstimateWithError mermin_value(std::span<const T> tables) {
    static constexpr std::array<std::size_t, 3> all{1, 2, 3};
    std::array<EstimateWithError, 4> c{};
    for (std::size_t i = 0; i < kMerminConfigs.size(); ++i) {
        const T &t = detail::find_config(tables, kMerminConfigs[i]);
        if (t.n_qubits() != 3) {
            throw std::invalid_argument("mermin_value: configuration " + std::string(kMerminConfigs[i]) +
                                        " must have 3 locations");
        }
        c[i] = correlation_estimate(t, all);
    }
    EstimateWithError signed_value = propagate({{1.0, c[0]}, {1.0, c[1]}, {1.0, c[2]}, {-1.0, c[3]}});
    return {std::abs(signed_value.value), signed_value.sigma};
}

template <OutcomeTable T>
EstimateWithError mermin_value(const std::vector<T> &tables) {
    return mermin_value(std::span<const T>(tables));
}

/// (value - bound) / sigma, unrounded.
inline double violation_sigmas(const EstimateWithError &estimate, double bound) {
    if (!(estimate.sigma > 0.0)) {
        throw std::invalid_argument("violation_sigmas: sigma must be positive");
    }
    return (estimate.value - bound) / estimate.sigma;
}

/// 1-based locations of the pair (i, j) and the remaining photon k.
struct PairRoles {
    std::size_t i;
    std::size_t j;
    std::size_t k;

    bool operator==(const PairRoles &) const = default;
};

/// Assigns roles from an XXX outcome: i and j are the two locations reading -1.
/// All +1 maps to (1, 2, 3). Returns std::nullopt (role undefined) when one or
/// three locations read -1.
inline std::optional<PairRoles> pair_roles(const Outcome &xxx_outcome) {
    if (xxx_outcome.size() != 3) {
        throw std::invalid_argument("pair_roles: outcome must have length 3");
    }
    std::vector<std::size_t> minus;
    std::size_t plus_location = 0;
    for (std::size_t q = 0; q < 3; ++q) {
        if (xxx_outcome[q] == -1) {
            minus.push_back(q + 1);
        } else {
            plus_location = q + 1;
        }
    }
    if (minus.empty()) {
        return PairRoles{1, 2, 3};
    }
    if (minus.size() == 2) {
        return PairRoles{minus[0], minus[1], plus_location};
    }
    return std::nullopt;
}

}  // namespace ghzbell
