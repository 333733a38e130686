#include "topk/oracle.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <type_traits>

#include "topk/ingest.hpp"
#include "topk/verify.hpp"

namespace topk {

ItemId ComparisonOracle::compare(ItemId i, ItemId j) {
    if (i == j) throw Error(ErrorKind::IdenticalItems, "cannot compare item " + std::to_string(i) + " with itself");
    if (i >= size() || j >= size()) throw Error(ErrorKind::IndexOutOfRange, "item id out of range");
    return winner(i, j);
}

MatrixOracle::MatrixOracle(PreferenceInstance instance, std::uint64_t seed)
    : MatrixOracle(std::make_shared<const PreferenceInstance>(std::move(instance)), seed) {}

MatrixOracle::MatrixOracle(std::shared_ptr<const PreferenceInstance> instance, std::uint64_t seed)
    : instance_(std::move(instance)), rng_(seed) {
    if (!instance_) throw Error(ErrorKind::InvalidArgument, "null instance");
}

ItemId MatrixOracle::winner(ItemId i, ItemId j) {
    ++count_;
    return rng_.uniform() < (*instance_)(i, j) ? i : j;
}

// ---------------------------------------------------------------------------

PreferenceInstance equal_gap_instance(std::size_t n, double p_win) {
    if (!(p_win > 0.5 && p_win <= 1.0)) throw Error(ErrorKind::InvalidArgument, "equal-gap p must be in (1/2, 1]");
    return PreferenceInstance::from_upper(n, [&](ItemId, ItemId) { return p_win; });
}

PreferenceInstance uniform_gap_instance(std::size_t n, double lo, double hi, std::uint64_t seed, bool enforce) {
    if (!(lo > 0.0 && lo <= hi && hi <= 0.5))
        throw Error(ErrorKind::InvalidArgument, "uniform-gap interval must satisfy 0 < lo <= hi <= 1/2");
    constexpr int kMaxAttempts = 1000;
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto inst = PreferenceInstance::from_upper(n, [&](ItemId, ItemId) { return 0.5 + lo + (hi - lo) * rng.uniform(); });
        if (!enforce || (validate_sst(inst) && validate_sti(inst))) return inst;
    }
    throw Error(ErrorKind::Infeasible, "no SST+STI uniform-gap instance after 1000 attempts");
}

PreferenceInstance mnl_instance(const std::vector<double>& scores) {
    for (double s : scores)
        if (!(s > 0.0 && std::isfinite(s))) throw Error(ErrorKind::InvalidArgument, "MNL scores must be positive");
    return PreferenceInstance::from_upper(scores.size(),
                                          [&](ItemId i, ItemId j) { return scores[i] / (scores[i] + scores[j]); });
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double thurstone_probability(double theta_i, double theta_j, double sigma) {
    return normal_cdf((theta_i - theta_j) / (sigma * std::numbers::sqrt2));
}

PreferenceInstance thurstone_instance(const std::vector<double>& scores, double sigma) {
    if (!(sigma > 0.0 && std::isfinite(sigma))) throw Error(ErrorKind::InvalidArgument, "Thurstone sigma must be positive");
    return PreferenceInstance::from_upper(
        scores.size(), [&](ItemId i, ItemId j) { return thurstone_probability(scores[i], scores[j], sigma); });
}

MatrixOracle make_equal_gap(std::size_t n, double p_win, std::uint64_t seed) {
    return MatrixOracle(equal_gap_instance(n, p_win), seed);
}
MatrixOracle make_uniform_gap(std::size_t n, double lo, double hi, std::uint64_t seed, bool enforce) {
    // The matrix and the comparison stream draw from separate sub-streams.
    return MatrixOracle(uniform_gap_instance(n, lo, hi, derive_seed(seed, 0), enforce), derive_seed(seed, 1));
}
MatrixOracle make_mnl(const std::vector<double>& scores, std::uint64_t seed) {
    return MatrixOracle(mnl_instance(scores), seed);
}
MatrixOracle make_thurstone(const std::vector<double>& scores, double sigma, std::uint64_t seed) {
    return MatrixOracle(thurstone_instance(scores, sigma), seed);
}
MatrixOracle make_empirical(PreferenceInstance matrix, std::uint64_t seed) {
    return MatrixOracle(std::move(matrix), seed);
}

// ---------------------------------------------------------------------------

DuelOutcome duel_bernoulli_p1(double mu_i, double mu_j, Rng& rng) {
    if (!(mu_i >= 0.0 && mu_i <= 1.0 && mu_j >= 0.0 && mu_j <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "Bernoulli means must be in [0, 1]");
    if (mu_i == 0.0 && mu_j == 0.0) throw Error(ErrorKind::InvalidArgument, "both Bernoulli means are zero");
    for (std::uint64_t pulls = 1;; ++pulls) {
        const bool first = rng.uniform() < 0.5;
        if (rng.bernoulli(first ? mu_i : mu_j)) return {first, pulls};
    }
}

DuelOutcome duel_gaussian_p2(double mu_i, double mu_j, Rng& rng) {
    const double ri = mu_i + rng.normal();
    const double rj = mu_j + rng.normal();
    return {ri > rj, 2};
}

ArmDuelOracle::ArmDuelOracle(std::vector<double> means, Reduction reduction, std::uint64_t seed)
    : means_(std::move(means)), reduction_(reduction), rng_(seed) {
    if (means_.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one arm");
    if (reduction_ == Reduction::Bernoulli) {
        for (double m : means_)
            if (!(m > 0.0 && m <= 1.0)) throw Error(ErrorKind::InvalidArgument, "Bernoulli arm means must be in (0, 1]");
    }
}

ItemId ArmDuelOracle::winner(ItemId i, ItemId j) {
    ++count_;
    const auto out = reduction_ == Reduction::Bernoulli ? duel_bernoulli_p1(means_[i], means_[j], rng_)
                                                        : duel_gaussian_p2(means_[i], means_[j], rng_);
    pulls_ += out.pulls;
    return out.first_wins ? i : j;
}

// ---------------------------------------------------------------------------

const char* to_string(Model m) noexcept {
    switch (m) {
        case Model::EqualGap: return "equal_gap";
        case Model::UniformGap: return "uniform_gap";
        case Model::Mnl: return "mnl";
        case Model::Thurstone: return "thurstone";
        case Model::Empirical: return "empirical";
    }
    return "unknown";
}

Model model_from_string(const std::string& s) {
    for (Model m : {Model::EqualGap, Model::UniformGap, Model::Mnl, Model::Thurstone, Model::Empirical})
        if (s == to_string(m)) return m;
    throw Error(ErrorKind::InvalidConfig, "unknown model '" + s + "'");
}

std::size_t InstanceSpec::item_count() const {
    switch (model) {
        case Model::Mnl:
        case Model::Thurstone: return scores.size();
        case Model::Empirical: return matrix ? matrix->size() : n;
        default: return n;
    }
}

void InstanceSpec::validate(const std::string& path) const {
    auto bad = [&](const std::string& field, const std::string& msg) {
        throw Error(ErrorKind::InvalidConfig, path + "." + field + ": " + msg);
    };
    switch (model) {
        case Model::EqualGap:
            if (n < 1) bad("n", "must be >= 1");
            if (!(p_win > 0.5 && p_win <= 1.0)) bad("p_win", "must be in (1/2, 1]");
            break;
        case Model::UniformGap:
            if (n < 1) bad("n", "must be >= 1");
            if (!(lo > 0.0 && lo <= hi)) bad("lo", "must satisfy 0 < lo <= hi");
            if (!(hi <= 0.5)) bad("hi", "must be <= 1/2");
            break;
        case Model::Mnl:
            if (scores.empty()) bad("scores", "must be non-empty");
            for (double s : scores)
                if (!(s > 0.0)) bad("scores", "must be positive");
            break;
        case Model::Thurstone:
            if (scores.empty()) bad("scores", "must be non-empty");
            if (!(sigma > 0.0)) bad("sigma", "must be positive");
            break;
        case Model::Empirical:
            if (!matrix) bad("matrix", "required for the empirical model");
            break;
    }
}

void to_json(nlohmann::json& j, const InstanceSpec& s) {
    j = nlohmann::json{{"model", to_string(s.model)}, {"n", s.item_count()}, {"seed", s.seed}};
    switch (s.model) {
        case Model::EqualGap: j["p_win"] = s.p_win; break;
        case Model::UniformGap:
            j["lo"] = s.lo;
            j["hi"] = s.hi;
            j["enforce"] = s.enforce;
            break;
        case Model::Mnl: j["scores"] = s.scores; break;
        case Model::Thurstone:
            j["scores"] = s.scores;
            j["sigma"] = s.sigma;
            break;
        case Model::Empirical:
            if (!s.source.empty()) j["matrix"] = s.source;
            else if (s.matrix) j["matrix"] = instance_to_json(*s.matrix)["p"];
            j["missing_policy"] = s.missing_policy;
            break;
    }
}

InstanceSpec instance_spec_from_json(const nlohmann::json& j, const std::string& path, const std::string& base_dir) {
    auto field = [&](const char* key) { return path + "." + key; };
    InstanceSpec s;
    // Typed read of one optional field; errors name the field.
    auto read = [&](const char* key, auto& out) {
        if (!j.contains(key)) return;
        using T = std::decay_t<decltype(out)>;
        if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            const auto& v = j.at(key);
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                throw Error(ErrorKind::InvalidConfig, field(key) + ": must be a non-negative integer");
        }
        try {
            j.at(key).get_to(out);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidConfig, field(key) + ": " + e.what());
        }
    };
    try {
        if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, path + ": must be an object");
        std::string model;
        if (!j.contains("model")) throw Error(ErrorKind::InvalidConfig, field("model") + ": required");
        read("model", model);
        try {
            s.model = model_from_string(model);
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidConfig, field("model") + ": " + e.what());
        }
        read("n", s.n);
        read("p_win", s.p_win);
        read("lo", s.lo);
        read("hi", s.hi);
        read("enforce", s.enforce);
        read("scores", s.scores);
        read("sigma", s.sigma);
        read("seed", s.seed);
        read("missing_policy", s.missing_policy);
        if (j.contains("matrix")) {
            const auto& m = j.at("matrix");
            if (m.is_string()) {
                s.source = m.get<std::string>();
                std::filesystem::path p(s.source);
                if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
                s.matrix = load_instance_file(p.string(), missing_policy_from_string(s.missing_policy));
            } else {
                s.matrix = instance_from_json(nlohmann::json{{"p", m}});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, path + ": " + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidConfig) throw;
        throw Error(ErrorKind::InvalidConfig, field("matrix") + ": " + e.what());
    }
    if (s.model == Model::Mnl || s.model == Model::Thurstone) {
        if (j.contains("n") && s.n != s.scores.size()) throw Error(ErrorKind::InvalidConfig, field("n") + ": does not match scores");
        s.n = s.scores.size();
    }
    if (s.model == Model::Empirical && s.matrix) {
        if (j.contains("n") && s.n != s.matrix->size()) throw Error(ErrorKind::InvalidConfig, field("n") + ": does not match matrix");
        s.n = s.matrix->size();
    }
    s.validate(path);
    return s;
}

PreferenceInstance build_instance(const InstanceSpec& spec, std::uint64_t seed) {
    switch (spec.model) {
        case Model::EqualGap: return equal_gap_instance(spec.n, spec.p_win);
        case Model::UniformGap: return uniform_gap_instance(spec.n, spec.lo, spec.hi, seed, spec.enforce);
        case Model::Mnl: return mnl_instance(spec.scores);
        case Model::Thurstone: return thurstone_instance(spec.scores, spec.sigma);
        case Model::Empirical:
            if (!spec.matrix) throw Error(ErrorKind::InvalidConfig, "empirical model without a matrix");
            return *spec.matrix;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown model");
}

}  // namespace topk
