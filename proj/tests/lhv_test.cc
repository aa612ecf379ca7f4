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


#include "ghzbell/lhv.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gtest/gtest.h"

#include "ghzbell/preparation.hpp"
#include "test_util.hpp"

using namespace ghzbell;

namespace {

const double kCirelson = 2.0 * std::numbers::sqrt2;

// Maximal CHSH value of a two-qubit pure state: 2 sqrt(1 + 4 |det M|^2) with M
// the 2x2 amplitude matrix (product of the Schmidt weights is |det M|^2).
double pure_state_chsh_max(const PureState &s) {
    Complex det = s[0b00] * s[0b11] - s[0b01] * s[0b10];
    return 2.0 * std::sqrt(1.0 + 4.0 * std::norm(det));
}

}  // namespace

TEST(lhv, strategy_counts) {
    EXPECT_EQ(enumerate_strategies(2).size(), 16u);
    EXPECT_EQ(enumerate_strategies(3).size(), 64u);
    std::set<std::string> distinct;
    for (const auto &s : enumerate_strategies(3)) {
        distinct.insert(s.to_string());
    }
    EXPECT_EQ(distinct.size(), 64u);
    EXPECT_THROW(enumerate_strategies(0), std::invalid_argument);
    EXPECT_THROW(enumerate_strategies(11), std::invalid_argument);
}

TEST(lhv, strategy_tables_are_indicators) {
    LhvStrategy all_plus{{1, 1, 1}, {1, 1, 1}};
    auto t = strategy_table(all_plus, MeasurementConfig::parse("XXX"));
    EXPECT_EQ(t.probability(Outcome::parse("+++")), 1.0);
    LhvStrategy s{{-1, -1, 1}, {1, 1, 1}};
    EXPECT_EQ(strategy_table(s, MeasurementConfig::parse("XXX")).probability(Outcome::parse("--+")), 1.0);
    LhvStrategy mixed{{-1, 1, 1}, {1, -1, -1}};
    EXPECT_EQ(strategy_table(mixed, MeasurementConfig::parse("XYY")).probability(Outcome::parse("---")), 1.0);
    EXPECT_EQ(strategy_table(mixed, MeasurementConfig::parse("YXY")).probability(Outcome::parse("++-")), 1.0);
    EXPECT_THROW(strategy_table(s, MeasurementConfig::parse("XZX")), std::invalid_argument);
    EXPECT_THROW(strategy_table(s, MeasurementConfig({BasisSetting::custom(0.1, 0.2), BasisSetting::x(),
                                                      BasisSetting::x()})),
                 std::invalid_argument);
}

TEST(lhv, chsh_bound_is_two) {
    auto report = max_chsh_lhv();
    EXPECT_EQ(report.value, 2.0);
    EXPECT_EQ(report.strategies, 16u);
    // Independent loop over raw +-1 assignments and sign choices.
    int best = 0;
    for (int bits = 0; bits < 16; ++bits) {
        int A = bits & 1 ? -1 : 1, a = bits & 2 ? -1 : 1, B = bits & 4 ? -1 : 1, b = bits & 8 ? -1 : 1;
        for (int m : {1, -1}) {
            for (int n : {1, -1}) {
                best = std::max(best, std::abs(A * B - m * A * b - n * a * B - m * n * a * b));
            }
        }
    }
    EXPECT_EQ(best, 2);
    for (auto count : report.attaining) {
        EXPECT_GT(count, 0u);
    }
}

TEST(lhv, mermin_bound_is_two) {
    auto report = max_mermin_lhv();
    EXPECT_EQ(report.value, 2.0);
    EXPECT_EQ(report.strategies, 64u);
    EXPECT_EQ(report.min_signed, -2.0);
    EXPECT_EQ(report.max_signed, 2.0);
    // The witness reproduces the value.
    auto tables = strategy_tables(report.witness, std::span<const std::string_view>(kMerminConfigs));
    EXPECT_EQ(std::abs(mermin_signed(tables)), 2.0);
}

TEST(lhv, mermin_sign_flip_symmetry) {
    for (const auto &s : enumerate_strategies(3)) {
        LhvStrategy flipped = s;
        for (auto &v : flipped.y) {
            v = -v;
        }
        auto t1 = strategy_tables(s, std::span<const std::string_view>(kMerminConfigs));
        auto t2 = strategy_tables(flipped, std::span<const std::string_view>(kMerminConfigs));
        // Every term holds an even number of y settings and an odd number of
        // x settings.
        ASSERT_EQ(mermin_signed(t1), mermin_signed(t2));
        LhvStrategy x_flipped = s;
        for (auto &v : x_flipped.x) {
            v = -v;
        }
        auto t3 = strategy_tables(x_flipped, std::span<const std::string_view>(kMerminConfigs));
        ASSERT_EQ(mermin_signed(t1), -mermin_signed(t3));
    }
}

TEST(lhv, conditioned_maximum_is_zero) {
    auto report = max_conditioned_lhv();
    EXPECT_EQ(report.entries.size(), 64u);
    EXPECT_LE(report.max, 0.0);
    EXPECT_EQ(report.max, 0.0);
    EXPECT_GT(report.count_at_max, 0u);
    for (const auto &e : report.entries) {
        ASSERT_LE(e.decomposition.s_prob_lower.value, 0.0);
        ASSERT_LE(e.decomposition.s_chsh_lower.value, 2.0);
    }
}

TEST(lhv, ghz_exceeds_every_local_strategy) {
    std::vector<ProbabilityTable> tables;
    for (auto name : kMerminConfigs) {
        tables.push_back(probability_table(ghz_state(3), MeasurementConfig::parse(name)));
    }
    EXPECT_NEAR(std::abs(mermin_signed(tables)), 4.0, 1e-12);
    EXPECT_GT(std::abs(mermin_signed(tables)), max_mermin_lhv().value);
}

TEST(tsirelson, textbook_settings_reach_optimum) {
    EXPECT_NEAR(chsh_objective(epr_pair(), SettingsVector::textbook()), kCirelson, 1e-12);
}

TEST(tsirelson, finds_cirelson_bound_for_epr_pair) {
    auto start = std::chrono::steady_clock::now();
    auto r = tsirelson_search({}, epr_pair(), {1e-6});
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_NEAR(r.value, kCirelson, 1e-6);
    EXPECT_LE(r.value, kCirelson + 1e-9);
    EXPECT_EQ(r.restart_values.size(), 20u);
    EXPECT_NEAR(chsh_objective(epr_pair(), r.settings), r.value, 1e-12);
    EXPECT_LT(seconds, 5.0);
}

TEST(tsirelson, traces_strictly_increase) {
    auto r = tsirelson_search({}, epr_pair(), {1e-6, 5});
    for (const auto &trace : r.traces) {
        for (std::size_t i = 1; i < trace.size(); ++i) {
            ASSERT_GT(trace[i], trace[i - 1]);
        }
    }
}

TEST(tsirelson, product_state_stays_classical) {
    auto r = tsirelson_search({}, PureState::basis({0, 0}), {1e-6, 5});
    EXPECT_LE(r.value, 2.0 + 1e-6);
    EXPECT_NEAR(r.value, 2.0, 1e-6);
}

TEST(tsirelson, independent_of_seed) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        TsirelsonOptions opt;
        opt.tolerance = 1e-6;
        opt.seed = seed;
        opt.restarts = 8;
        EXPECT_NEAR(tsirelson_search({}, epr_pair(), opt).value, kCirelson, 1e-6) << seed;
    }
}

TEST(tsirelson, random_states_match_closed_form) {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        PureState s = test_util::random_state(2, rng);
        auto r = tsirelson_search({}, s, {1e-6, 8});
        ASSERT_LE(r.value, kCirelson + 1e-9);
        ASSERT_NEAR(r.value, pure_state_chsh_max(s), 1e-6);
    }
}

TEST(tsirelson, rejects_bad_input) {
    EXPECT_THROW(tsirelson_search({}, ghz_state(3)), std::invalid_argument);
    EXPECT_THROW(tsirelson_search({}, epr_pair(), {0.0}), std::invalid_argument);
    TsirelsonOptions opt;
    opt.grid = 2;
    EXPECT_THROW(tsirelson_search({}, epr_pair(), opt), std::invalid_argument);
}
