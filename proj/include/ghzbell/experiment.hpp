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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ghzbell/estimate.hpp"
#include "ghzbell/inequalities.hpp"
#include "ghzbell/montecarlo.hpp"
#include "ghzbell/probability.hpp"

namespace ghzbell {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct ReportMetadata {
    /// "counts", "simulation", "analytic" or "paper-fixtures".
    std::string source;
    std::optional<std::uint64_t> seed;
    /// Shots per configuration, when all configurations share one total.
    std::optional<std::uint64_t> shots;
    std::optional<NoiseModel> noise;
    std::string tool_version{kToolVersion};

    bool operator==(const ReportMetadata &) const = default;
};

/// Everything the analysis reports for one data set.
///
/// decomposition is absent in Mermin-only mode. Sigma counts are absent when
/// the inputs carry no uncertainty (exact tables).
struct InequalityReport {
    std::optional<DecompositionResult> decomposition;
    EstimateWithError mermin;
    std::optional<double> sigmas_vs_lhv;
    std::optional<double> sigmas_vs_cirelson;
    std::optional<double> sigmas_vs_mermin_bound;
    ReportMetadata metadata;

    bool operator==(const InequalityReport &) const = default;
};

namespace detail {

inline std::optional<double> sigmas_if_defined(const EstimateWithError &e, double bound) {
    if (e.sigma > 0.0) {
        return violation_sigmas(e, bound);
    }
    return std::nullopt;
}

}  // namespace detail

/// Assembles a report from component estimates directly.
inline InequalityReport report_from_estimates(const std::optional<DecompositionResult> &decomposition,
                                              const EstimateWithError &mermin, ReportMetadata metadata) {
    InequalityReport r;
    r.decomposition = decomposition;
    r.mermin = mermin;
    if (decomposition) {
        r.sigmas_vs_lhv = detail::sigmas_if_defined(decomposition->s_chsh_lower, BoundSet::lhv_bound);
        r.sigmas_vs_cirelson = detail::sigmas_if_defined(decomposition->s_chsh_lower, BoundSet::cirelson_bound);
    }
    r.sigmas_vs_mermin_bound = detail::sigmas_if_defined(mermin, BoundSet::mermin_lhv_bound);
    r.metadata = std::move(metadata);
    return r;
}

/// Full report from tables. With `mermin_only` the YYY table may be absent and
/// no decomposition is computed.
template <OutcomeTable T>
InequalityReport build_report(std::span<const T> tables, ReportMetadata metadata, bool mermin_only = false) {
    std::optional<DecompositionResult> d;
    if (!mermin_only) {
        d = decompose(tables);
    }
    return report_from_estimates(d, mermin_value(tables), std::move(metadata));
}

/// The five configurations as parsed objects, in reporting order.
inline std::vector<MeasurementConfig> conditioned_configs() {
    std::vector<MeasurementConfig> out;
    for (auto name : kConditionedConfigs) {
        out.push_back(MeasurementConfig::parse(name));
    }
    return out;
}

/// Exact report for a noise model.
inline InequalityReport analytic_report(const NoiseModel &noise) {
    MixedState mixture = noise.to_mixture();
    std::vector<ProbabilityTable> tables;
    for (const auto &c : conditioned_configs()) {
        tables.push_back(probability_table(mixture, c));
    }
    return build_report(std::span<const ProbabilityTable>(tables), {"analytic", std::nullopt, std::nullopt, noise});
}

struct RunConfig {
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    std::vector<MeasurementConfig> configurations = conditioned_configs();
    NoiseModel noise = NoiseModel::perfect();
    SamplingOptions sampling;
};

struct ExperimentResult {
    std::vector<CountsTable> tables;
    InequalityReport report;
};

/// Samples every configuration (configuration c uses stream (seed, c)) and
/// analyzes the counts.
inline ExperimentResult run_experiment(const RunConfig &run) {
    if (run.shots == 0) {
        throw std::invalid_argument("run_experiment: shots must be positive");
    }
    if (run.configurations.empty()) {
        throw std::invalid_argument("run_experiment: no configurations");
    }
    MixedState mixture = run.noise.to_mixture();
    ExperimentResult result;
    for (std::size_t c = 0; c < run.configurations.size(); ++c) {
        ProbabilityTable table = probability_table(mixture, run.configurations[c]);
        result.tables.push_back(sample_counts(table, run.shots, {run.seed, static_cast<std::uint32_t>(c), 0},
                                              run.sampling));
    }
    bool has_yyy = std::any_of(result.tables.begin(), result.tables.end(),
                               [](const CountsTable &t) { return t.config().to_string() == "YYY"; });
    std::optional<std::uint64_t> shots;
    if (!run.sampling.poisson_total) {
        shots = run.shots;
    }
    result.report = build_report(std::span<const CountsTable>(result.tables),
                                 {"simulation", run.seed, shots, run.noise}, !has_yyy);
    return result;
}

}  // namespace ghzbell
