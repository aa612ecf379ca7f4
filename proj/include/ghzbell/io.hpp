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

// JSON interchange formats. Doubles are written by nlohmann/json's shortest
// round-trip formatter, so every value parses back to the identical double.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ghzbell/basis.hpp"
#include "ghzbell/estimate.hpp"
#include "ghzbell/experiment.hpp"
#include "ghzbell/inequalities.hpp"
#include "ghzbell/montecarlo.hpp"
#include "ghzbell/probability.hpp"

namespace ghzbell {

using Json = nlohmann::ordered_json;

/// A document does not follow the expected schema. field() names the
/// offending JSON path, e.g. "counts.+-+".
class SchemaError : public std::runtime_error {
   public:
    SchemaError(std::string field, const std::string &message)
        : std::runtime_error("field '" + field + "': " + message), field_(std::move(field)) {
    }
    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

/// {"config":"XYY","shots":N,"counts":{"+++":n1,...,"---":n8}}, outcome keys
/// in table order.
inline Json to_json(const CountsTable &t) {
    Json counts = Json::object();
    for (std::size_t i = 0; i < t.counts().size(); ++i) {
        counts[Outcome::from_index(i, t.n_qubits()).to_string()] = t.counts()[i];
    }
    return Json{{"config", t.config().to_string()}, {"shots", t.shots()}, {"counts", std::move(counts)}};
}

namespace detail {

inline const Json &require(const Json &obj, const std::string &key, const std::string &path) {
    if (!obj.is_object()) {
        throw SchemaError(path.empty() ? "<root>" : path, "expected a JSON object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(path.empty() ? key : path + "." + key, "missing");
    }
    return *it;
}

inline std::uint64_t require_count(const Json &v, const std::string &path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw SchemaError(path, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

inline MeasurementConfig require_config(const Json &v, const std::string &path) {
    if (!v.is_string()) {
        throw SchemaError(path, "expected a configuration string such as \"XYY\"");
    }
    try {
        return MeasurementConfig::parse(v.get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw SchemaError(path, e.what());
    }
}

inline double require_number(const Json &v, const std::string &path) {
    if (!v.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    return v.get<double>();
}

}  // namespace detail

/// Parses and validates a counts document: every outcome key present, no
/// extra keys, counts summing to shots.
inline CountsTable counts_from_json(const Json &j) {
    MeasurementConfig config = detail::require_config(detail::require(j, "config", ""), "config");
    std::uint64_t shots = detail::require_count(detail::require(j, "shots", ""), "shots");
    const Json &counts = detail::require(j, "counts", "");
    if (!counts.is_object()) {
        throw SchemaError("counts", "expected an object keyed by outcome strings");
    }
    const std::size_t dim = std::size_t{1} << config.size();
    std::vector<std::uint64_t> values(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::string key = Outcome::from_index(i, config.size()).to_string();
        values[i] = detail::require_count(detail::require(counts, key, "counts"), "counts." + key);
    }
    if (counts.size() != dim) {
        for (const auto &[key, value] : counts.items()) {
            bool known = false;
            try {
                known = Outcome::parse(key).size() == config.size();
            } catch (const std::invalid_argument &) {
            }
            if (!known) {
                throw SchemaError("counts." + key, "unexpected outcome key for configuration " + config.to_string());
            }
        }
    }
    CountsTable table(config, std::move(values));
    if (table.shots() != shots) {
        throw SchemaError("shots", "declared " + std::to_string(shots) + " but counts sum to " +
                                       std::to_string(table.shots()));
    }
    return table;
}

/// {"config":"XXX","probs":{"+++":p,...}}.
inline Json to_json(const ProbabilityTable &t) {
    Json probs = Json::object();
    for (std::size_t i = 0; i < t.probs().size(); ++i) {
        probs[Outcome::from_index(i, t.n_qubits()).to_string()] = t.probs()[i];
    }
    return Json{{"config", t.config().to_string()}, {"probs", std::move(probs)}};
}

inline ProbabilityTable probability_table_from_json(const Json &j) {
    MeasurementConfig config = detail::require_config(detail::require(j, "config", ""), "config");
    const Json &probs = detail::require(j, "probs", "");
    const std::size_t dim = std::size_t{1} << config.size();
    std::vector<double> values(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::string key = Outcome::from_index(i, config.size()).to_string();
        values[i] = detail::require_number(detail::require(probs, key, "probs"), "probs." + key);
    }
    try {
        return ProbabilityTable(config, std::move(values));
    } catch (const std::invalid_argument &e) {
        throw SchemaError("probs", e.what());
    }
}

inline Json to_json(const EstimateWithError &e) {
    return Json{{"value", e.value}, {"sigma", e.sigma}};
}

inline EstimateWithError estimate_from_json(const Json &j, const std::string &path) {
    return {detail::require_number(detail::require(j, "value", path), path + ".value"),
            detail::require_number(detail::require(j, "sigma", path), path + ".sigma")};
}

inline Json to_json(const NoiseModel &n) {
    return Json{{"w_plus", n.w_plus}, {"w_minus", n.w_minus}, {"eps", n.eps}};
}

inline NoiseModel noise_from_json(const Json &j, const std::string &path) {
    return {detail::require_number(detail::require(j, "w_plus", path), path + ".w_plus"),
            detail::require_number(detail::require(j, "w_minus", path), path + ".w_minus"),
            detail::require_number(detail::require(j, "eps", path), path + ".eps")};
}

inline Json to_json(const DecompositionResult &d) {
    return Json{{"p_xx", to_json(d.p_xx)},
                {"p_xy_upper", to_json(d.p_xy_upper)},
                {"p_yy", to_json(d.p_yy)},
                {"s_prob_lower", to_json(d.s_prob_lower)},
                {"s_chsh_lower", to_json(d.s_chsh_lower)}};
}

inline Json bounds_json() {
    return Json{{"lhv_bound", BoundSet::lhv_bound},
                {"cirelson_bound", BoundSet::cirelson_bound},
                {"algebraic_max", BoundSet::algebraic_max},
                {"mermin_lhv_bound", BoundSet::mermin_lhv_bound},
                {"lhv_prob", BoundSet::lhv_prob},
                {"cirelson_prob", BoundSet::cirelson_prob},
                {"algebraic_prob", BoundSet::algebraic_prob}};
}

namespace detail {

template <typename T>
Json optional_json(const std::optional<T> &v) {
    if (!v) {
        return nullptr;
    }
    if constexpr (std::is_arithmetic_v<T>) {
        return *v;
    } else {
        return to_json(*v);
    }
}

inline std::optional<double> optional_number(const Json &j, const std::string &key) {
    const Json &v = require(j, key, "");
    if (v.is_null()) {
        return std::nullopt;
    }
    return require_number(v, key);
}

}  // namespace detail

inline Json to_json(const InequalityReport &r) {
    const auto &m = r.metadata;
    return Json{{"decomposition", detail::optional_json(r.decomposition)},
                {"mermin", to_json(r.mermin)},
                {"sigmas_vs_lhv", detail::optional_json(r.sigmas_vs_lhv)},
                {"sigmas_vs_cirelson", detail::optional_json(r.sigmas_vs_cirelson)},
                {"sigmas_vs_mermin_bound", detail::optional_json(r.sigmas_vs_mermin_bound)},
                {"bounds", bounds_json()},
                {"metadata",
                 {{"source", m.source},
                  {"seed", detail::optional_json(m.seed)},
                  {"shots", detail::optional_json(m.shots)},
                  {"noise", detail::optional_json(m.noise)},
                  {"tool_version", m.tool_version}}}};
}

inline InequalityReport report_from_json(const Json &j) {
    InequalityReport r;
    const Json &d = detail::require(j, "decomposition", "");
    if (!d.is_null()) {
        DecompositionResult dec;
        dec.p_xx = estimate_from_json(detail::require(d, "p_xx", "decomposition"), "decomposition.p_xx");
        dec.p_xy_upper =
            estimate_from_json(detail::require(d, "p_xy_upper", "decomposition"), "decomposition.p_xy_upper");
        dec.p_yy = estimate_from_json(detail::require(d, "p_yy", "decomposition"), "decomposition.p_yy");
        dec.s_prob_lower =
            estimate_from_json(detail::require(d, "s_prob_lower", "decomposition"), "decomposition.s_prob_lower");
        dec.s_chsh_lower =
            estimate_from_json(detail::require(d, "s_chsh_lower", "decomposition"), "decomposition.s_chsh_lower");
        r.decomposition = dec;
    }
    r.mermin = estimate_from_json(detail::require(j, "mermin", ""), "mermin");
    r.sigmas_vs_lhv = detail::optional_number(j, "sigmas_vs_lhv");
    r.sigmas_vs_cirelson = detail::optional_number(j, "sigmas_vs_cirelson");
    r.sigmas_vs_mermin_bound = detail::optional_number(j, "sigmas_vs_mermin_bound");
    const Json &m = detail::require(j, "metadata", "");
    const Json &source = detail::require(m, "source", "metadata");
    if (!source.is_string()) {
        throw SchemaError("metadata.source", "expected a string");
    }
    r.metadata.source = source.get<std::string>();
    if (const Json &seed = detail::require(m, "seed", "metadata"); !seed.is_null()) {
        r.metadata.seed = detail::require_count(seed, "metadata.seed");
    }
    if (const Json &shots = detail::require(m, "shots", "metadata"); !shots.is_null()) {
        r.metadata.shots = detail::require_count(shots, "metadata.shots");
    }
    if (const Json &noise = detail::require(m, "noise", "metadata"); !noise.is_null()) {
        r.metadata.noise = noise_from_json(noise, "metadata.noise");
    }
    const Json &version = detail::require(m, "tool_version", "metadata");
    if (!version.is_string()) {
        throw SchemaError("metadata.tool_version", "expected a string");
    }
    r.metadata.tool_version = version.get<std::string>();
    return r;
}

}  // namespace ghzbell
