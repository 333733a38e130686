// oracle.hpp - noisy pairwise comparison oracles.
//
// Every selection algorithm talks to a ComparisonOracle. Matrix-backed oracles
// sample from a PreferenceInstance; FlippedOracle inverts winners (used to
// select worst items); the arm oracles answer comparisons through the
// Bernoulli and Gaussian bandit reductions.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topk/core.hpp"
#include "topk/rng.hpp"

namespace topk {

class ComparisonOracle {
public:
    virtual ~ComparisonOracle() = default;

    /// One noisy comparison. Returns the winner (i or j) and counts the query.
    /// Throws IdenticalItems if i == j, IndexOutOfRange if either is >= size().
    ItemId compare(ItemId i, ItemId j);

    virtual std::size_t size() const = 0;
    /// Total comparisons served.
    virtual std::uint64_t comparisons() const = 0;

protected:
    /// Draw a winner; i != j already checked. Implementations count the query.
    virtual ItemId winner(ItemId i, ItemId j) = 0;
};

class MatrixOracle final : public ComparisonOracle {
public:
    MatrixOracle(PreferenceInstance instance, std::uint64_t seed);
    /// Shares an immutable matrix, e.g. across concurrent trials.
    MatrixOracle(std::shared_ptr<const PreferenceInstance> instance, std::uint64_t seed);

    std::size_t size() const override { return instance_->size(); }
    std::uint64_t comparisons() const override { return count_; }
    const PreferenceInstance& instance() const noexcept { return *instance_; }

protected:
    ItemId winner(ItemId i, ItemId j) override;

private:
    std::shared_ptr<const PreferenceInstance> instance_;
    Rng rng_;
    std::uint64_t count_ = 0;
};

/// View over another oracle with every outcome inverted. Shares the inner
/// oracle's counter; the inner oracle must outlive the view.
class FlippedOracle final : public ComparisonOracle {
public:
    explicit FlippedOracle(ComparisonOracle& inner) : inner_(inner) {}

    std::size_t size() const override { return inner_.size(); }
    std::uint64_t comparisons() const override { return inner_.comparisons(); }

protected:
    ItemId winner(ItemId i, ItemId j) override { return inner_.compare(i, j) == i ? j : i; }

private:
    ComparisonOracle& inner_;
};

inline FlippedOracle flipped(ComparisonOracle& inner) { return FlippedOracle(inner); }

// ---------------------------------------------------------------------------
// Instance generators. Items are ordered 0 > 1 > ... > n-1 where a model
// implies an order.

PreferenceInstance equal_gap_instance(std::size_t n, double p_win);
/// p(i,j) = 1/2 + U(lo, hi) for i < j. `enforce` resamples whole instances
/// until SST and STI hold (at most 1000 attempts, then Infeasible).
PreferenceInstance uniform_gap_instance(std::size_t n, double lo, double hi, std::uint64_t seed,
                                        bool enforce = false);
PreferenceInstance mnl_instance(const std::vector<double>& scores);
PreferenceInstance thurstone_instance(const std::vector<double>& scores, double sigma);

/// Standard normal CDF.
double normal_cdf(double x);
/// P{theta_i + Z1 > theta_j + Z2} for Z1, Z2 ~ N(0, sigma^2).
double thurstone_probability(double theta_i, double theta_j, double sigma);

MatrixOracle make_equal_gap(std::size_t n, double p_win, std::uint64_t seed);
MatrixOracle make_uniform_gap(std::size_t n, double lo, double hi, std::uint64_t seed, bool enforce = false);
MatrixOracle make_mnl(const std::vector<double>& scores, std::uint64_t seed);
MatrixOracle make_thurstone(const std::vector<double>& scores, double sigma, std::uint64_t seed);
MatrixOracle make_empirical(PreferenceInstance matrix, std::uint64_t seed);

/// Gap interval for the unequal-noise protocol: gaps ~ U(0.5*0.1, 1.5*0.1).
struct GapInterval {
    double lo, hi;
};
inline constexpr GapInterval kUniformGapText{0.05, 0.15};
/// Alternative reading of the same protocol: p ~ U(0.55, 0.7).
inline constexpr GapInterval kUniformGapCaption{0.05, 0.20};

// ---------------------------------------------------------------------------
// Bandit reductions.

struct DuelOutcome {
    bool first_wins;       // true when arm i (the first argument) is returned
    std::uint64_t pulls;   // arm pulls consumed
};

/// Repeatedly pick an arm uniformly and sample Bernoulli(mu) until a 1 is
/// drawn; that arm wins. Means in [0,1], not both zero.
DuelOutcome duel_bernoulli_p1(double mu_i, double mu_j, Rng& rng);

/// One Gaussian(mu, 1) reward per arm; the strictly larger reward wins, ties
/// go to arm j. Always 2 pulls.
DuelOutcome duel_gaussian_p2(double mu_i, double mu_j, Rng& rng);

/// Oracle whose items are bandit arms; comparisons run a reduction duel.
class ArmDuelOracle final : public ComparisonOracle {
public:
    enum class Reduction { Bernoulli, Gaussian };

    ArmDuelOracle(std::vector<double> means, Reduction reduction, std::uint64_t seed);

    std::size_t size() const override { return means_.size(); }
    std::uint64_t comparisons() const override { return count_; }
    std::uint64_t arm_pulls() const noexcept { return pulls_; }

protected:
    ItemId winner(ItemId i, ItemId j) override;

private:
    std::vector<double> means_;
    Reduction reduction_;
    Rng rng_;
    std::uint64_t count_ = 0;
    std::uint64_t pulls_ = 0;
};

// ---------------------------------------------------------------------------
// Serializable instance description used by harness configs.

enum class Model { EqualGap, UniformGap, Mnl, Thurstone, Empirical };

const char* to_string(Model m) noexcept;
Model model_from_string(const std::string& s);

struct InstanceSpec {
    Model model = Model::EqualGap;
    std::size_t n = 0;
    double p_win = 0.6;                 // equal_gap
    double lo = kUniformGapText.lo;     // uniform_gap
    double hi = kUniformGapText.hi;
    bool enforce = false;               // uniform_gap
    std::vector<double> scores;         // mnl, thurstone
    double sigma = 1.0;                 // thurstone
    /// empirical: inline matrix, or a path to a .pwg / matrix .json file
    std::optional<PreferenceInstance> matrix;
    std::string source;
    std::string missing_policy = "error";
    std::uint64_t seed = 0;

    /// Checks model-legal ranges. `path` prefixes error messages.
    void validate(const std::string& path = "instance") const;
    /// Item count implied by the spec (n, scores size or matrix size).
    std::size_t item_count() const;
};

void to_json(nlohmann::json& j, const InstanceSpec& s);
/// Reads a spec; `source` paths resolve relative to `base_dir` when given.
InstanceSpec instance_spec_from_json(const nlohmann::json& j, const std::string& path = "instance",
                                     const std::string& base_dir = "");

/// Ground-truth matrix for a spec; random models draw from `seed`.
PreferenceInstance build_instance(const InstanceSpec& spec, std::uint64_t seed);
inline PreferenceInstance build_instance(const InstanceSpec& spec) { return build_instance(spec, spec.seed); }

}  // namespace topk
