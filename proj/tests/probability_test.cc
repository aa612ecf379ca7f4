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

#include "ghzbell/probability.hpp"

#include <random>

#include "gtest/gtest.h"

#include "oracle.hpp"
#include "test_util.hpp"

using namespace ghzbell;

namespace {

const MixedState kGhz3 = ghz_state(3);

double table_at(const ProbabilityTable &t, const char *key) {
    return t.probability(Outcome::parse(key));
}

}  // namespace

// Frozen values below were produced by oracle::probability (dense projector
// arithmetic in the 8-dimensional space) and are re-checked against it.
TEST(probability, outcome_probability_examples) {
    const oracle::Ket ghz = oracle::ghz(3);
    EXPECT_NEAR(oracle::probability(ghz, "XXX", {1, 1, 1}), 0.25, 1e-15);
    EXPECT_NEAR(oracle::probability(ghz, "XXX", {1, 1, -1}), 0.0, 1e-15);
    EXPECT_NEAR(oracle::probability(ghz, "YYY", {1, 1, 1}), 0.125, 1e-15);

    EXPECT_NEAR(outcome_probability(kGhz3, MeasurementConfig::parse("XXX"), Outcome::parse("+++")), 0.25, 1e-15);
    EXPECT_NEAR(outcome_probability(kGhz3, MeasurementConfig::parse("XXX"), Outcome::parse("++-")), 0.0, 1e-15);
    EXPECT_NEAR(outcome_probability(kGhz3, MeasurementConfig::parse("YYY"), Outcome::parse("+++")), 0.125, 1e-15);
}

TEST(probability, ghz3_xxx_table) {
    auto t = probability_table(kGhz3, MeasurementConfig::parse("XXX"));
    for (const char *k : {"+++", "+--", "-+-", "--+"}) {
        EXPECT_NEAR(table_at(t, k), 0.25, 1e-15) << k;
    }
    for (const char *k : {"++-", "+-+", "-++", "---"}) {
        EXPECT_NEAR(table_at(t, k), 0.0, 1e-15) << k;
    }
}

TEST(probability, ghz3_xyy_table) {
    auto t = probability_table(kGhz3, MeasurementConfig::parse("XYY"));
    for (std::size_t i = 0; i < 8; ++i) {
        Outcome o = Outcome::from_index(i, 3);
        EXPECT_NEAR(t.probs()[i], o.parity() == -1 ? 0.25 : 0.0, 1e-15) << o.to_string();
    }
}

TEST(probability, tables_match_projector_oracle) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + trial % 4;
        PureState s = test_util::random_state(n, rng);
        std::vector<BasisSetting> settings;
        for (std::size_t q = 0; q < n; ++q) {
            settings.push_back(test_util::random_setting(rng));
        }
        MeasurementConfig config(settings);
        auto table = probability_table(s, config);
        double total = 0.0;
        for (std::size_t i = 0; i < table.probs().size(); ++i) {
            Outcome o = Outcome::from_index(i, n);
            std::vector<oracle::Ket> kets;
            for (std::size_t q = 0; q < n; ++q) {
                const auto &b = config[q];
                kets.push_back(b.kind() == BasisKind::Custom ? oracle::custom_ket(b.theta(), b.phi(), o[q])
                                                             : oracle::basis_ket(b.symbol(), o[q]));
            }
            double expected = oracle::projector_expectation(oracle::kron_all(kets), test_util::to_ket(s));
            ASSERT_NEAR(table.probs()[i], expected, 1e-12);
            ASSERT_NEAR(outcome_probability(s, config, o), expected, 1e-12);
            total += table.probs()[i];
        }
        ASSERT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(probability, ghz3_stabilizer_checks) {
    auto mass = [](const ProbabilityTable &t, int parity) {
        double m = 0.0;
        for (std::size_t i = 0; i < t.probs().size(); ++i) {
            if (Outcome::from_index(i, 3).parity() == parity) {
                m += t.probs()[i];
            }
        }
        return m;
    };
    EXPECT_NEAR(mass(probability_table(kGhz3, MeasurementConfig::parse("XXX")), 1), 1.0, 1e-12);
    for (const char *c : {"XYY", "YXY", "YYX"}) {
        EXPECT_NEAR(mass(probability_table(kGhz3, MeasurementConfig::parse(c)), -1), 1.0, 1e-12) << c;
    }
}

TEST(probability, basis_phase_invariance) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> phase(-3.2, 3.2);
    for (int trial = 0; trial < 40; ++trial) {
        PureState s = test_util::random_state(3, rng);
        std::vector<BasisVector> dirs;
        std::vector<BasisVector> phased;
        for (int q = 0; q < 3; ++q) {
            BasisVector v = test_util::random_setting(rng).vector(trial % 2 ? 1 : -1);
            dirs.push_back(v);
            Complex u = std::polar(1.0, phase(rng));
            phased.push_back({u * v[0], u * v[1]});
        }
        ASSERT_NEAR(std::norm(projection_amplitude(s, dirs)), std::norm(projection_amplitude(s, phased)), 1e-12);
    }
}

TEST(probability, mixture_is_linear) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        PureState a = test_util::random_state(3, rng);
        PureState b = test_util::random_state(3, rng);
        double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        MixedState mix({{w, a}, {1.0 - w, b}});
        MeasurementConfig config({test_util::random_setting(rng), test_util::random_setting(rng),
                                  test_util::random_setting(rng)});
        auto tm = probability_table(mix, config);
        auto ta = probability_table(a, config);
        auto tb = probability_table(b, config);
        for (std::size_t i = 0; i < 8; ++i) {
            ASSERT_NEAR(tm.probs()[i], w * ta.probs()[i] + (1.0 - w) * tb.probs()[i], 1e-12);
        }
    }
}

TEST(probability, single_component_mixture_equals_pure_state) {
    PureState s = ghz_state(3);
    MixedState one({{1.0, s}});
    auto c = MeasurementConfig::parse("XYY");
    EXPECT_EQ(probability_table(one, c).probs(), probability_table(MixedState(s), c).probs());
}

TEST(probability, dimension_mismatch) {
    EXPECT_THROW(probability_table(kGhz3, MeasurementConfig::parse("XX")), std::invalid_argument);
    EXPECT_THROW(outcome_probability(kGhz3, MeasurementConfig::parse("XXX"), Outcome::parse("++")),
                 std::invalid_argument);
}

TEST(probability, table_validation_does_not_repair) {
    auto c = MeasurementConfig::parse("X");
    EXPECT_THROW(ProbabilityTable(c, {0.5, 0.4}), std::invalid_argument);
    EXPECT_THROW(ProbabilityTable(c, {1.5, -0.5}), std::invalid_argument);
    EXPECT_THROW(ProbabilityTable(c, {1.0}), std::invalid_argument);
    // Tiny values are kept as computed.
    ProbabilityTable t(c, {1.0 - 1e-14, 1e-14});
    EXPECT_EQ(t.probs()[1], 1e-14);
}

TEST(project, ghz4_trigger_gives_ghz3) {
    Projection p = project(ghz_state(4), 4, kHPrime);
    EXPECT_NEAR(p.probability, 0.5, 1e-12);
    EXPECT_NEAR(fidelity(p.state, ghz_state(3)), 1.0, 1e-12);
}

TEST(project, ghz2_onto_h) {
    Projection p = project(ghz_state(2), 2, kH);
    EXPECT_NEAR(p.probability, 0.5, 1e-12);
    EXPECT_NEAR(fidelity(p.state, PureState::basis({0})), 1.0, 1e-12);
}

TEST(project, orthogonal_projection_is_impossible) {
    EXPECT_THROW(project(PureState::basis({0, 0}), 1, kV), ImpossibleProjection);
}

TEST(project, location_out_of_range) {
    EXPECT_THROW(project(ghz_state(3), 0, kH), std::invalid_argument);
    EXPECT_THROW(project(ghz_state(3), 4, kH), std::invalid_argument);
}

TEST(project, complementary_directions_sum_to_one) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + trial % 4;
        PureState s = test_util::random_state(n, rng);
        BasisSetting b = test_util::random_setting(rng);
        std::size_t loc = 1 + trial % n;
        double total = 0.0;
        for (int o : {1, -1}) {
            try {
                total += project(s, loc, b.vector(o)).probability;
            } catch (const ImpossibleProjection &) {
            }
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(project, matches_oracle_marginal) {
    // Projecting location 2 of a random 3-qubit state onto a direction d and
    // then measuring the rest equals the joint probability from the oracle.
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        PureState s = test_util::random_state(3, rng);
        Projection p = project(s, 2, kR);
        auto rest = probability_table(p.state, MeasurementConfig::parse("XZ"));
        for (std::size_t i = 0; i < 4; ++i) {
            Outcome o = Outcome::from_index(i, 2);
            oracle::Ket b = oracle::kron_all(
                {oracle::basis_ket('X', o[0]), oracle::basis_ket('Y', 1), oracle::basis_ket('Z', o[1])});
            double joint = oracle::projector_expectation(b, test_util::to_ket(s));
            ASSERT_NEAR(p.probability * rest.probs()[i], joint, 1e-12);
        }
    }
}
