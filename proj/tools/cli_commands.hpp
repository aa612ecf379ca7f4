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

// Subcommands of the ghzbell command-line tool. Kept in a header so the test
// suites can drive them in-process.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ghzbell/ghzbell.hpp"
#include "ghzbell/io.hpp"

namespace ghzbell::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kInfeasible = 3,
    kInternal = 4,
};

/// Environment variable consulted for the default seed.
inline constexpr const char *kSeedEnv = "GHZBELL_SEED";

/// Usage or parse error (exit 2).
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A verified invariant did not hold (exit 4).
class InvariantBreach : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline std::uint64_t default_seed() {
    const char *env = std::getenv(kSeedEnv);
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(env, &used, 0);
        if (used != std::string(env).size()) {
            throw std::invalid_argument(env);
        }
        return v;
    } catch (const std::exception &) {
        throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer: " + env);
    }
}

inline void write_text(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open " + path + " for writing");
    }
    f << text;
}

inline std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

inline Json read_json_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open " + path);
    }
    try {
        return Json::parse(f);
    } catch (const Json::parse_error &e) {
        throw UsageError(path + ": invalid JSON: " + e.what());
    }
}

struct IdealOptions {
    std::vector<std::string> configs;
    std::string out;
};

inline void cmd_ideal(const IdealOptions &opt, std::ostream &out) {
    MixedState ghz = ghz_state(3);
    Json tables = Json::array();
    for (const auto &c : opt.configs) {
        MeasurementConfig config;
        try {
            config = MeasurementConfig::parse(c);
        } catch (const std::invalid_argument &e) {
            throw UsageError("bad configuration '" + c + "': " + e.what());
        }
        if (config.size() != 3) {
            throw UsageError("bad configuration '" + c + "': expected 3 settings");
        }
        tables.push_back(to_json(probability_table(ghz, config)));
    }
    write_text(opt.out, dump(Json{{"state", "ghz3"}, {"tables", std::move(tables)}}), out);
}

struct SimulateOptions {
    std::optional<double> ratio;
    std::optional<double> visibility;
    std::optional<double> w_plus;
    std::optional<double> w_minus;
    std::optional<double> eps;
    std::uint64_t shots = 100000;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    unsigned threads = 1;
    bool poisson_total = false;
    std::vector<std::string> configs{kConditionedConfigs.begin(), kConditionedConfigs.end()};
};

inline NoiseModel resolve_noise(const SimulateOptions &opt) {
    bool fit = opt.ratio || opt.visibility;
    bool weights = opt.w_plus || opt.w_minus || opt.eps;
    if (fit && weights) {
        throw UsageError("give either --ratio/--visibility or --w-plus/--w-minus/--eps, not both");
    }
    if (fit) {
        return fit_noise(opt.ratio.value_or(std::numeric_limits<double>::infinity()), opt.visibility.value_or(1.0));
    }
    if (weights) {
        if (!(opt.w_plus && opt.w_minus && opt.eps)) {
            throw UsageError("--w-plus, --w-minus and --eps must be given together");
        }
        NoiseModel n{*opt.w_plus, *opt.w_minus, *opt.eps};
        n.validate();
        return n;
    }
    return NoiseModel::perfect();
}

inline void cmd_simulate(const SimulateOptions &opt, std::ostream &out) {
    if (opt.shots == 0) {
        throw UsageError("--shots must be positive");
    }
    RunConfig run;
    run.shots = opt.shots;
    run.seed = opt.seed ? *opt.seed : default_seed();
    run.noise = resolve_noise(opt);
    run.sampling.threads = opt.threads;
    run.sampling.poisson_total = opt.poisson_total;
    run.configurations.clear();
    for (const auto &c : opt.configs) {
        try {
            run.configurations.push_back(MeasurementConfig::parse(c));
        } catch (const std::invalid_argument &e) {
            throw UsageError("bad configuration '" + c + "': " + e.what());
        }
        if (run.configurations.back().size() != 3) {
            throw UsageError("bad configuration '" + c + "': expected 3 settings");
        }
    }
    ExperimentResult result = run_experiment(run);
    std::filesystem::create_directories(opt.out_dir);
    Json files = Json::array();
    for (const auto &t : result.tables) {
        std::string name = "counts_" + t.config().to_string() + ".json";
        write_text((std::filesystem::path(opt.out_dir) / name).string(), dump(to_json(t)), out);
        files.push_back(name);
    }
    Json manifest{{"tool_version", std::string(kToolVersion)},
                  {"seed", run.seed},
                  {"shots", run.shots},
                  {"poisson_total", run.sampling.poisson_total},
                  {"noise", to_json(run.noise)},
                  {"files", std::move(files)}};
    write_text((std::filesystem::path(opt.out_dir) / "manifest.json").string(), dump(manifest), out);
}

/// Published component estimates used by --paper-fixtures.
struct PublishedEstimates {
    static constexpr EstimateWithError p_xx{0.738, 0.012};
    static constexpr EstimateWithError p_xy_upper{0.072, 0.007};
    static constexpr EstimateWithError p_yy{0.254, 0.011};
    static constexpr EstimateWithError mermin{3.57, 0.04};
};

struct AnalyzeOptions {
    std::vector<std::string> files;
    bool mermin_only = false;
    bool paper_fixtures = false;
    std::string out;
};

inline InequalityReport analyze(const AnalyzeOptions &opt) {
    if (opt.paper_fixtures) {
        if (!opt.files.empty()) {
            throw UsageError("--paper-fixtures takes no count files");
        }
        std::optional<DecompositionResult> d;
        if (!opt.mermin_only) {
            d = decompose_components(PublishedEstimates::p_xx, PublishedEstimates::p_xy_upper, PublishedEstimates::p_yy);
        }
        return report_from_estimates(d, PublishedEstimates::mermin, {"paper-fixtures", std::nullopt, std::nullopt, std::nullopt});
    }
    if (opt.files.empty()) {
        throw UsageError("analyze needs count files (or --paper-fixtures)");
    }
    std::vector<CountsTable> tables;
    for (const auto &path : opt.files) {
        try {
            tables.push_back(counts_from_json(read_json_file(path)));
        } catch (const SchemaError &e) {
            throw UsageError(path + ": " + e.what());
        }
        if (tables.back().n_qubits() != 3) {
            throw UsageError(path + ": field 'config': expected 3 settings");
        }
        if (tables.back().shots() == 0) {
            throw UsageError(path + ": field 'shots': must be positive");
        }
    }
    std::optional<std::uint64_t> shots = tables.front().shots();
    for (const auto &t : tables) {
        if (t.shots() != *shots) {
            shots.reset();
            break;
        }
    }
    try {
        return build_report(std::span<const CountsTable>(tables), {"counts", std::nullopt, shots, std::nullopt}, opt.mermin_only);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

inline void cmd_analyze(const AnalyzeOptions &opt, std::ostream &out) {
    write_text(opt.out, dump(to_json(analyze(opt))), out);
}

struct TsirelsonCliOptions {
    double tolerance = 1e-6;
    std::size_t restarts = 20;
    std::uint64_t seed = TsirelsonOptions{}.seed;
};

inline Json settings_json(const SettingsVector &s) {
    return Json{{"theta_A", s.angles[0]}, {"phi_A", s.angles[1]}, {"theta_a", s.angles[2]}, {"phi_a", s.angles[3]},
                {"theta_B", s.angles[4]}, {"phi_B", s.angles[5]}, {"theta_b", s.angles[6]}, {"phi_b", s.angles[7]}};
}

inline TsirelsonResult run_tsirelson(const TsirelsonCliOptions &opt) {
    TsirelsonOptions t;
    t.tolerance = opt.tolerance;
    t.restarts = opt.restarts;
    t.seed = opt.seed;
    return tsirelson_search(SettingsVector{}, epr_pair(), t);
}

inline void cmd_tsirelson(const TsirelsonCliOptions &opt, std::ostream &out) {
    if (!(opt.tolerance > 0.0)) {
        throw UsageError("--tol must be positive");
    }
    TsirelsonResult r = run_tsirelson(opt);
    Json restarts = Json::array();
    for (double v : r.restart_values) {
        restarts.push_back(v);
    }
    Json j{{"value", r.value},
           {"target", BoundSet::cirelson_bound},
           {"abs_error", std::abs(r.value - BoundSet::cirelson_bound)},
           {"tolerance", opt.tolerance},
           {"within_tolerance", std::abs(r.value - BoundSet::cirelson_bound) <= opt.tolerance},
           {"settings", settings_json(r.settings)},
           {"restart_values", std::move(restarts)}};
    out << dump(j);
    if (std::abs(r.value - BoundSet::cirelson_bound) > opt.tolerance) {
        throw InvariantBreach("optimizer returned " + std::to_string(r.value) + ", not 2*sqrt(2) within tolerance");
    }
}

inline void cmd_bounds(const TsirelsonCliOptions &opt, std::ostream &out) {
    ChshLhvReport chsh = max_chsh_lhv();
    MerminLhvReport mermin = max_mermin_lhv();
    ConditionedLhvReport conditioned = max_conditioned_lhv();
    TsirelsonResult tsirelson = run_tsirelson(opt);

    Json attaining = Json::object();
    for (std::size_t k = 0; k < kChshSignPairs.size(); ++k) {
        std::string key = std::string("m=") + (kChshSignPairs[k][0] > 0 ? "+1" : "-1") +
                          ",n=" + (kChshSignPairs[k][1] > 0 ? "+1" : "-1");
        attaining[key] = chsh.attaining[k];
    }
    Json j{{"chsh_lhv", chsh.value},
           {"mermin_lhv", mermin.value},
           {"conditioned_max", conditioned.max},
           {"cirelson", tsirelson.value},
           {"witnesses",
            {{"chsh_lhv", {{"strategies", chsh.strategies}, {"attaining", attaining}, {"witness", chsh.witness.to_string()}}},
             {"mermin_lhv",
              {{"strategies", mermin.strategies},
               {"witness", mermin.witness.to_string()},
               {"min_signed", mermin.min_signed},
               {"max_signed", mermin.max_signed}}},
             {"conditioned",
              {{"strategies", conditioned.entries.size()},
               {"min", conditioned.min},
               {"count_at_max", conditioned.count_at_max},
               {"witness", conditioned.witness.to_string()}}},
             {"cirelson", {{"tolerance", opt.tolerance}, {"settings", settings_json(tsirelson.settings)}}}}}};
    out << dump(j);
    if (chsh.value != 2.0 || mermin.value != 2.0 || conditioned.max > 0.0 ||
        std::abs(tsirelson.value - BoundSet::cirelson_bound) > opt.tolerance) {
        throw InvariantBreach("bound verification failed");
    }
}

struct DelayScanOptions {
    double from = -100.0;
    double to = 100.0;
    double step = 10.0;
    double visibility = 0.83;
    double width = 30.0;
    double ratio = std::numeric_limits<double>::infinity();
    std::uint64_t shots = 0;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
};

inline void cmd_delay_scan(const DelayScanOptions &opt, std::ostream &out) {
    std::vector<double> positions;
    DelayModel model{opt.visibility, opt.width};
    try {
        positions = scan_positions(opt.from, opt.to, opt.step);
        model.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    // Populations from the ratio; full coherence is replaced point by point.
    NoiseModel noise = fit_noise(opt.ratio, 0.0);
    SamplingOptions sampling;
    sampling.threads = opt.threads;
    auto points = delay_scan(model, noise, positions, opt.shots, opt.seed ? *opt.seed : default_seed(), sampling);
    std::ostringstream csv;
    write_delay_csv(csv, points);
    write_text(opt.out, csv.str(), out);
}

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit code.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Three-photon GHZ Bell-inequality simulator and analyzer", "ghzbell"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    IdealOptions ideal;
    auto *ideal_cmd = app.add_subcommand("ideal", "Exact outcome tables of the ideal three-photon GHZ state");
    ideal_cmd->add_option("--configs", ideal.configs, "Configurations such as XXX YYY")->required();
    ideal_cmd->add_option("--out", ideal.out, "Output file (default stdout)");

    SimulateOptions sim;
    auto *sim_cmd = app.add_subcommand("simulate", "Sample count tables for the five configurations");
    sim_cmd->add_option("--ratio", sim.ratio, "Desired-to-non-desired population ratio (fits the noise model)");
    sim_cmd->add_option("--visibility", sim.visibility, "X-basis visibility (fits the noise model)");
    sim_cmd->add_option("--w-plus", sim.w_plus, "Weight of the GHZ+ state");
    sim_cmd->add_option("--w-minus", sim.w_minus, "Weight of the GHZ- state");
    sim_cmd->add_option("--eps", sim.eps, "Weight of each non-desired basis state");
    sim_cmd->add_option("--shots", sim.shots, "Shots per configuration")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, std::string("RNG seed (default $") + kSeedEnv + " or 0)");
    sim_cmd->add_option("--out", sim.out_dir, "Output directory")->capture_default_str();
    sim_cmd->add_option("--threads", sim.threads, "Sampling threads (results do not depend on it)")
        ->capture_default_str();
    sim_cmd->add_flag("--poisson-total", sim.poisson_total, "Draw each configuration's total from Poisson(shots)");
    sim_cmd->add_option("--configs", sim.configs, "Configurations to sample")->capture_default_str();

    AnalyzeOptions ana;
    auto *ana_cmd = app.add_subcommand("analyze", "Inequality report from count files");
    ana_cmd->add_option("files", ana.files, "Count table JSON files");
    ana_cmd->add_flag("--mermin-only", ana.mermin_only, "Only the Mermin test (YYY not required)");
    ana_cmd->add_flag("--paper-fixtures", ana.paper_fixtures, "Use the published component estimates as input");
    ana_cmd->add_option("--out", ana.out, "Output file (default stdout)");

    TsirelsonCliOptions bounds_opt;
    auto *bounds_cmd = app.add_subcommand("bounds", "Verify LHV bounds by enumeration and the quantum bound");
    bounds_cmd->add_option("--tol", bounds_opt.tolerance, "Optimizer tolerance")->capture_default_str();
    bounds_cmd->add_option("--restarts", bounds_opt.restarts, "Optimizer restarts")->capture_default_str();

    TsirelsonCliOptions ts;
    auto *ts_cmd = app.add_subcommand("tsirelson", "Maximize CHSH over measurement angles for (HH+VV)/sqrt(2)");
    ts_cmd->add_option("--tol", ts.tolerance, "Tolerance")->capture_default_str();
    ts_cmd->add_option("--restarts", ts.restarts, "Random restarts")->capture_default_str();
    ts_cmd->add_option("--seed", ts.seed, "Restart seed")->capture_default_str();

    DelayScanOptions scan;
    auto *scan_cmd = app.add_subcommand("delay-scan", "H'H'H' and H'H'V' rates versus delay (CSV)");
    scan_cmd->add_option("--from", scan.from, "First delay")->capture_default_str();
    scan_cmd->add_option("--to", scan.to, "Last delay")->capture_default_str();
    scan_cmd->add_option("--step", scan.step, "Delay step")->capture_default_str();
    scan_cmd->add_option("--visibility", scan.visibility, "Peak visibility at zero delay")->capture_default_str();
    scan_cmd->add_option("--width", scan.width, "Coherence width (delay units)")->capture_default_str();
    scan_cmd->add_option("--ratio", scan.ratio, "Population ratio (default: no population noise)");
    scan_cmd->add_option("--shots", scan.shots, "Shots per point (0 = exact rates)")->capture_default_str();
    scan_cmd->add_option("--seed", scan.seed, "RNG seed");
    scan_cmd->add_option("--threads", scan.threads, "Sampling threads")->capture_default_str();
    scan_cmd->add_option("--out", scan.out, "Output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion &) {
        out << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "ghzbell: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*ideal_cmd) {
            cmd_ideal(ideal, out);
        } else if (*sim_cmd) {
            cmd_simulate(sim, out);
        } else if (*ana_cmd) {
            cmd_analyze(ana, out);
        } else if (*bounds_cmd) {
            cmd_bounds(bounds_opt, out);
        } else if (*ts_cmd) {
            cmd_tsirelson(ts, out);
        } else if (*scan_cmd) {
            cmd_delay_scan(scan, out);
        }
    } catch (const UsageError &e) {
        err << "ghzbell: " << e.what() << "\n";
        return kUsage;
    } catch (const InfeasibleModel &e) {
        err << "ghzbell: infeasible noise model: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::invalid_argument &e) {
        err << "ghzbell: " << e.what() << "\n";
        return kUsage;
    } catch (const InvariantBreach &e) {
        err << "ghzbell: invariant breach: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception &e) {
        err << "ghzbell: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}

}  // namespace ghzbell::cli
