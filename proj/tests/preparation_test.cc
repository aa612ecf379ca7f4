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


#include "ghzbell/preparation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "oracle.hpp"
#include "test_util.hpp"

using namespace ghzbell;

TEST(preparation, epr_pair) {
    PureState s = epr_pair();
    EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
    EXPECT_NEAR(s[0b00].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s[0b11].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(s[0b01], Complex{});
    EXPECT_EQ(s[0b10], Complex{});
    double expected = oracle::probability(test_util::to_ket(s), "XX", {1, 1});
    EXPECT_NEAR(expected, 0.5, 1e-15);
    EXPECT_NEAR(outcome_probability(s, MeasurementConfig::parse("XX"), Outcome::parse("++")), expected, 1e-15);
}

TEST(preparation, pbs_merges_two_pairs_into_ghz4) {
    Projection p = pbs_postselect(tensor(epr_pair(), epr_pair()), 2, 3);
    EXPECT_NEAR(p.probability, 0.5, 1e-12);
    EXPECT_NEAR(fidelity(p.state, ghz_state(4)), 1.0, 1e-12);
}

TEST(preparation, pbs_examples) {
    EXPECT_THROW(pbs_postselect(PureState::basis({0, 1}), 1, 2), ImpossibleProjection);
    Projection p = pbs_postselect(ghz_state(2), 1, 2);
    EXPECT_NEAR(p.probability, 1.0, 1e-12);
    EXPECT_NEAR(fidelity(p.state, ghz_state(2)), 1.0, 1e-12);
    EXPECT_THROW(pbs_postselect(ghz_state(2), 1, 1), std::invalid_argument);
    EXPECT_THROW(pbs_postselect(ghz_state(2), 1, 3), std::invalid_argument);
}

TEST(preparation, pbs_is_idempotent) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        PureState s = test_util::random_state(4, rng);
        Projection once = pbs_postselect(s, 2, 3);
        Projection twice = pbs_postselect(once.state, 2, 3);
        ASSERT_NEAR(twice.probability, 1.0, 1e-12);
        ASSERT_NEAR(fidelity(once.state, twice.state), 1.0, 1e-12);
    }
}

TEST(preparation, prepare_ghz3) {
    Projection p = prepare_ghz3();
    EXPECT_NEAR(p.probability, 0.25, 1e-12);
    EXPECT_NEAR(fidelity(p.state, ghz_state(3)), 1.0, 1e-12);
    // Amplitudes match up to one global phase.
    Complex phase = p.state[0] / ghz_state(3)[0];
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(std::abs(p.state[i] - phase * ghz_state(3)[i]), 0.0, 1e-12) << i;
    }
}

TEST(preparation, prepared_state_passes_stabilizer_checks) {
    MixedState s = prepare_ghz3().state;
    auto correlation3 = [&](const char *config) {
        auto t = probability_table(s, MeasurementConfig::parse(config));
        double c = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            c += Outcome::from_index(i, 3).parity() * t.probs()[i];
        }
        return c;
    };
    EXPECT_NEAR(correlation3("XXX"), 1.0, 1e-12);
    EXPECT_NEAR(correlation3("XYY"), -1.0, 1e-12);
    EXPECT_NEAR(correlation3("YXY"), -1.0, 1e-12);
    EXPECT_NEAR(correlation3("YYX"), -1.0, 1e-12);
}

TEST(preparation, vertical_trigger_gives_minus_ghz) {
    Projection p = prepare_ghz3({4, kVPrime});
    EXPECT_NEAR(p.probability, 0.25, 1e-12);
    EXPECT_NEAR(fidelity(p.state, ghz_minus_state()), 1.0, 1e-12);
}

TEST(delay_model, visibility_examples) {
    DelayModel m{0.83, 7.0};
    EXPECT_EQ(visibility_at(0.0, m), 0.83);
    EXPECT_LT(visibility_at(70.0, m), 1e-20);
    EXPECT_NEAR(visibility_at(7.0, m), 0.83 * std::exp(-0.5), 1e-15);
    EXPECT_NEAR(visibility_at(7.0, m), 0.5034, 1e-4);
    EXPECT_THROW(visibility_at(0.0, {1.5, 1.0}), std::invalid_argument);
    EXPECT_THROW(visibility_at(0.0, {0.5, 0.0}), std::invalid_argument);
}

TEST(delay_model, symmetric_and_monotone) {
    DelayModel m{0.9, 3.0};
    double previous = visibility_at(0.0, m);
    for (double d = 0.25; d < 40.0; d += 0.25) {
        double v = visibility_at(d, m);
        ASSERT_EQ(v, visibility_at(-d, m));
        ASSERT_LE(v, previous);
        previous = v;
    }
    EXPECT_EQ(visibility_at(1e6, m), 0.0);
}

namespace {

double suppression_visibility(const DelayPoint &p) {
    return (p.rate_hhh_prime - p.rate_hhv_prime) / (p.rate_hhh_prime + p.rate_hhv_prime);
}

}  // namespace

TEST(delay_scan, analytic_visibility_at_zero_delay) {
    DelayModel m{0.83, 30.0};
    std::vector<double> positions{0.0};
    auto points = delay_scan(m, NoiseModel::perfect(), positions, 0, 0);
    ASSERT_EQ(points.size(), 1u);
    EXPECT_NEAR(suppression_visibility(points[0]), 0.83, 1e-9);
    // Analytic rates agree with the dense oracle on the mixture.
    auto mix = oracle::noise_mixture((1 + 0.83) / 2, (1 - 0.83) / 2, 0.0);
    EXPECT_NEAR(points[0].rate_hhh_prime, oracle::mixture_probability(mix, "XXX", {1, 1, 1}), 1e-12);
    EXPECT_NEAR(points[0].rate_hhv_prime, oracle::mixture_probability(mix, "XXX", {1, 1, -1}), 1e-12);
}

TEST(delay_scan, population_noise_keeps_visibility) {
    auto points = delay_scan({0.83, 1.0}, fit_noise(65.0, 0.5), std::vector<double>{0.0}, 0, 0);
    EXPECT_NEAR(suppression_visibility(points[0]), 0.83, 1e-9);
}

TEST(delay_scan, rates_equalize_far_from_zero) {
    DelayModel m{0.83, 2.0};
    std::vector<double> positions{-100.0, -20.0, 20.0, 35.0};
    for (const auto &p : delay_scan(m, NoiseModel::perfect(), positions, 0, 0)) {
        EXPECT_NEAR(p.rate_hhh_prime, p.rate_hhv_prime, 1e-9) << p.delay;
    }
}

TEST(delay_scan, suppressed_rate_minimal_at_zero) {
    DelayModel m{0.83, 30.0};
    auto positions = scan_positions(-100.0, 100.0, 10.0);
    ASSERT_EQ(positions.size(), 21u);
    auto points = delay_scan(m, NoiseModel::perfect(), positions, 0, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        ASSERT_GE(points[i].rate_hhv_prime, points[10].rate_hhv_prime);
        const auto &mirror = points[points.size() - 1 - i];
        ASSERT_EQ(points[i].rate_hhh_prime, mirror.rate_hhh_prime);
        ASSERT_EQ(points[i].rate_hhv_prime, mirror.rate_hhv_prime);
    }
}

TEST(delay_scan, sampled_rates_converge) {
    DelayModel m{0.83, 30.0};
    std::vector<double> positions{-45.0, 0.0, 15.0, 200.0};
    const std::uint64_t shots = 20000;
    auto analytic = delay_scan(m, NoiseModel::perfect(), positions, 0, 0);
    int inside = 0;
    int total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto sampled = delay_scan(m, NoiseModel::perfect(), positions, shots, seed);
        for (std::size_t i = 0; i < positions.size(); ++i) {
            for (auto rate : {&DelayPoint::rate_hhh_prime, &DelayPoint::rate_hhv_prime}) {
                double p = analytic[i].*rate;
                double sigma = std::sqrt(p * shots) / shots;
                inside += std::abs(sampled[i].*rate - p) <= 4.0 * sigma;
                ++total;
            }
        }
    }
    EXPECT_GE(inside, 0.95 * total);
}

TEST(delay_scan, sampling_is_deterministic_and_thread_independent) {
    DelayModel m{0.83, 30.0};
    auto positions = scan_positions(-20.0, 20.0, 10.0);
    auto serial = delay_scan(m, NoiseModel::perfect(), positions, 150000, 5);
    auto parallel = delay_scan(m, NoiseModel::perfect(), positions, 150000, 5, {test_util::test_threads(), false});
    for (std::size_t i = 0; i < positions.size(); ++i) {
        EXPECT_EQ(serial[i].rate_hhh_prime, parallel[i].rate_hhh_prime);
        EXPECT_EQ(serial[i].rate_hhv_prime, parallel[i].rate_hhv_prime);
    }
}

TEST(delay_scan, rejects_empty_positions) {
    EXPECT_THROW(delay_scan({}, NoiseModel::perfect(), std::vector<double>{}, 0, 0), std::invalid_argument);
}

TEST(delay_scan, csv_format) {
    auto points = delay_scan({0.83, 30.0}, NoiseModel::perfect(), scan_positions(-10.0, 10.0, 10.0), 0, 0);
    std::ostringstream out;
    write_delay_csv(out, points);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "delay,rate_hhh_prime,rate_hhv_prime");
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string delay, a, b;
        std::getline(row, delay, ',');
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        EXPECT_EQ(std::stod(delay), points[rows].delay);
        EXPECT_EQ(std::stod(a), points[rows].rate_hhh_prime);
        EXPECT_EQ(std::stod(b), points[rows].rate_hhv_prime);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST(scan_positions, inclusive_range) {
    auto p = scan_positions(-1.0, 1.0, 0.5);
    EXPECT_EQ(p, (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
    EXPECT_EQ(scan_positions(3.0, 3.0, 1.0).size(), 1u);
    EXPECT_THROW(scan_positions(1.0, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(scan_positions(0.0, 1.0, 0.0), std::invalid_argument);
}
