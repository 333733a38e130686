// harness.hpp - seeded multi-trial experiments and their CSV output.
//
// Trial seeds: trial_seed = derive_seed(master_seed, trial_index, sweep_point).
// From a trial seed, the instance draw uses derive_seed(trial_seed, 0), the
// comparison stream derive_seed(trial_seed, 1) and the algorithm's own
// randomness derive_seed(trial_seed, 2) (all mt19937_64, see rng.hpp). Output
// is therefore independent of how trials are scheduled across threads.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topk/core.hpp"
#include "topk/oracle.hpp"

namespace topk {

enum class Algorithm { Eqs, Tks, Seebs, Seeks, SeeksV2 };

const char* to_string(Algorithm a) noexcept;
Algorithm algorithm_from_string(const std::string& s);
bool is_pac(Algorithm a) noexcept;

enum class SweepAxis { N, K, Epsilon };

struct Sweep {
    SweepAxis axis = SweepAxis::N;
    std::vector<double> values;
};

/// Which ranking defines "correct" for exact_correct.
enum class Truth { Auto, Tournament, Borda };

struct ExperimentConfig {
    InstanceSpec instance;
    Algorithm algorithm = Algorithm::Tks;
    SelectionParams params;
    std::size_t trials = 100;
    std::uint64_t master_seed = 0;
    std::optional<Sweep> sweep;
    /// Auto: Borda for empirical matrices, tournament order otherwise (Borda
    /// again if the matrix has no strict total order).
    Truth truth = Truth::Auto;

    void validate() const;
};

/// Parses and validates a config; errors carry the offending field path.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = "");
nlohmann::json config_to_json(const ExperimentConfig& c);

struct TrialReport {
    std::size_t point = 0;
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    std::uint64_t comparisons = 0;
    std::optional<double> elapsed;  // seconds; only when timing is on
    bool pac_correct = false;
    bool exact_correct = false;
    bool flagged = false;
    ItemSet returned;
};

struct Aggregate {
    std::size_t trials = 0;
    double mean_comparisons = 0.0;
    double stddev_comparisons = 0.0;  // sample standard deviation
    double pac_rate = 0.0;
    double exact_rate = 0.0;
    std::optional<double> mean_elapsed;

    bool empty() const noexcept { return trials == 0; }
};

struct PointReport {
    std::size_t index = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<TrialReport> trials;
    Aggregate aggregate;
};

struct ExperimentReport {
    Algorithm algorithm = Algorithm::Tks;
    std::vector<PointReport> points;
};

struct RunOptions {
    /// 0: RANK_THREADS if set, else hardware concurrency.
    std::size_t threads = 0;
    bool timing = false;
};

std::size_t resolve_threads(std::size_t requested);

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

Aggregate aggregate(const std::vector<TrialReport>& trials);

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Header, one row per trial, one "AGG" row per sweep point.
std::string to_csv(const ExperimentReport& report);

inline constexpr const char* kCsvHeader =
    "algorithm,n,k,epsilon,delta,trial,seed,comparisons,pac_correct,exact_correct,elapsed,comparisons_sd";

}  // namespace topk
