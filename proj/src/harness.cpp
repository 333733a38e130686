#include "topk/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <type_traits>

#include "topk/ingest.hpp"
#include "topk/selection.hpp"
#include "topk/verify.hpp"

namespace topk {
namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::InvalidConfig, path + ": " + msg);
}

struct PointSetup {
    InstanceSpec instance;
    SelectionParams params;
    std::size_t n = 0;
    // Set when the matrix does not depend on the trial seed.
    std::shared_ptr<const PreferenceInstance> shared;
    ItemSet shared_truth;
};

ItemSet truth_set(const PreferenceInstance& inst, std::size_t k, Truth truth, Model model) {
    const bool borda = truth == Truth::Borda || (truth == Truth::Auto && model == Model::Empirical);
    Ranking r;
    if (!borda) {
        try {
            r = ranking_of(inst);
        } catch (const Error&) {
            if (truth == Truth::Tournament) throw;
            r = borda_ranking(inst).ranking;
        }
    } else {
        r = borda_ranking(inst).ranking;
    }
    return make_item_set({r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k)});
}

std::vector<PointSetup> expand_points(const ExperimentConfig& c) {
    std::vector<PointSetup> points;
    const std::size_t count = c.sweep ? c.sweep->values.size() : 1;
    for (std::size_t p = 0; p < count; ++p) {
        PointSetup s;
        s.instance = c.instance;
        s.params = c.params;
        const std::string where = c.sweep ? "sweep.values[" + std::to_string(p) + "]" : "params";
        if (c.sweep) {
            const double v = c.sweep->values[p];
            const bool integral = v >= 1.0 && std::floor(v) == v;
            switch (c.sweep->axis) {
                case SweepAxis::N:
                    if (!integral) config_error(where, "n must be a positive integer");
                    if (s.instance.model != Model::EqualGap && s.instance.model != Model::UniformGap)
                        config_error("sweep.axis", "n can only be swept for equal_gap and uniform_gap");
                    s.instance.n = static_cast<std::size_t>(v);
                    break;
                case SweepAxis::K:
                    if (!integral) config_error(where, "k must be a positive integer");
                    s.params.k = static_cast<std::size_t>(v);
                    break;
                case SweepAxis::Epsilon: s.params.epsilon = v; break;
            }
        }
        s.n = s.instance.item_count();
        try {
            s.instance.validate("instance");
        } catch (const Error& e) {
            if (c.sweep) config_error(where, e.what());
            throw;
        }
        if (s.n < 2) config_error(c.sweep ? where : "instance.n", "need at least 2 items");
        try {
            s.params.validate(s.n, is_pac(c.algorithm));
        } catch (const Error& e) {
            config_error(where, e.what());
        }
        if (c.algorithm == Algorithm::Seebs && s.params.k != 1) config_error(c.sweep ? where : "params.k", "seebs selects k = 1");
        if (s.instance.model != Model::UniformGap) {
            s.shared = std::make_shared<const PreferenceInstance>(build_instance(s.instance));
            s.shared_truth = truth_set(*s.shared, s.params.k, c.truth, s.instance.model);
        }
        points.push_back(std::move(s));
    }
    return points;
}

TrialReport run_trial(const ExperimentConfig& c, const PointSetup& s, std::size_t point, std::size_t trial,
                      bool timing) {
    TrialReport rep;
    rep.point = point;
    rep.trial_index = trial;
    rep.seed = derive_seed(c.master_seed, trial, point);

    auto inst = s.shared ? s.shared
                         : std::make_shared<const PreferenceInstance>(build_instance(s.instance, derive_seed(rep.seed, 0)));
    const ItemSet truth = s.shared ? s.shared_truth : truth_set(*inst, s.params.k, c.truth, s.instance.model);

    MatrixOracle oracle(inst, derive_seed(rep.seed, 1));
    Rng rng(derive_seed(rep.seed, 2));
    const auto items = all_items(s.n);
    const auto& p = s.params;

    const auto t0 = std::chrono::steady_clock::now();
    SelectionResult res;
    switch (c.algorithm) {
        case Algorithm::Eqs: res = epsilon_quick_select(oracle, items, p.k, p.epsilon, p.delta, rng); break;
        case Algorithm::Tks: res = tournament_k_select(oracle, items, p.k, p.epsilon, p.delta, rng); break;
        case Algorithm::Seebs: res = seebs(oracle, items, p.delta, rng); break;
        case Algorithm::Seeks: res = seeks(oracle, items, p.k, p.delta, rng, PacSelector::Tks); break;
        case Algorithm::SeeksV2: res = seeks(oracle, items, p.k, p.delta, rng, PacSelector::Eqs); break;
    }
    if (timing) rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.comparisons != oracle.comparisons()) throw std::logic_error("comparison accounting mismatch");

    rep.comparisons = res.comparisons;
    rep.flagged = res.flagged;
    rep.returned = res.selected;
    rep.pac_correct = res.selected.size() == p.k && is_eps_k_optimal(*inst, res.selected, p.epsilon).pass;
    rep.exact_correct = res.selected == truth;
    return rep;
}

}  // namespace

const char* to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::Eqs: return "eqs";
        case Algorithm::Tks: return "tks";
        case Algorithm::Seebs: return "seebs";
        case Algorithm::Seeks: return "seeks";
        case Algorithm::SeeksV2: return "seeks_v2";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
    for (Algorithm a : {Algorithm::Eqs, Algorithm::Tks, Algorithm::Seebs, Algorithm::Seeks, Algorithm::SeeksV2})
        if (s == to_string(a)) return a;
    config_error("algorithm", "unknown algorithm '" + s + "'");
}

bool is_pac(Algorithm a) noexcept { return a == Algorithm::Eqs || a == Algorithm::Tks; }

void ExperimentConfig::validate() const { expand_points(*this); }

ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir) {
    if (!j.is_object()) config_error("$", "config must be a JSON object");
    ExperimentConfig c;
    auto get = [&](const nlohmann::json& obj, const char* key, const std::string& path, auto& out) {
        if (!obj.contains(key)) return false;
        using T = std::decay_t<decltype(out)>;
        if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
            const auto& v = obj.at(key);
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                config_error(path, "must be a non-negative integer");
        }
        try {
            obj.at(key).get_to(out);
        } catch (const nlohmann::json::exception& e) {
            config_error(path, e.what());
        }
        return true;
    };

    if (!j.contains("instance")) config_error("instance", "required");
    c.instance = instance_spec_from_json(j.at("instance"), "instance", base_dir);

    std::string alg;
    if (!get(j, "algorithm", "algorithm", alg)) config_error("algorithm", "required");
    c.algorithm = algorithm_from_string(alg);

    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (!p.is_object()) config_error("params", "must be an object");
        get(p, "k", "params.k", c.params.k);
        get(p, "epsilon", "params.epsilon", c.params.epsilon);
        get(p, "delta", "params.delta", c.params.delta);
    }
    get(j, "trials", "trials", c.trials);
    get(j, "master_seed", "master_seed", c.master_seed);

    std::string truth = "auto";
    get(j, "truth", "truth", truth);
    if (truth == "auto") c.truth = Truth::Auto;
    else if (truth == "tournament") c.truth = Truth::Tournament;
    else if (truth == "borda") c.truth = Truth::Borda;
    else config_error("truth", "must be auto, tournament or borda");

    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const auto& sw = j.at("sweep");
        Sweep s;
        std::string axis;
        if (!get(sw, "axis", "sweep.axis", axis)) config_error("sweep.axis", "required");
        if (axis == "n") s.axis = SweepAxis::N;
        else if (axis == "k") s.axis = SweepAxis::K;
        else if (axis == "epsilon") s.axis = SweepAxis::Epsilon;
        else config_error("sweep.axis", "must be n, k or epsilon");
        if (!get(sw, "values", "sweep.values", s.values) || s.values.empty())
            config_error("sweep.values", "must be a non-empty array");
        c.sweep = std::move(s);
    }
    c.validate();
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["instance"] = c.instance;
    j["algorithm"] = to_string(c.algorithm);
    j["params"] = {{"k", c.params.k}, {"epsilon", c.params.epsilon}, {"delta", c.params.delta}};
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    j["truth"] = c.truth == Truth::Auto ? "auto" : (c.truth == Truth::Borda ? "borda" : "tournament");
    if (c.sweep) {
        const char* axis = c.sweep->axis == SweepAxis::N ? "n" : (c.sweep->axis == SweepAxis::K ? "k" : "epsilon");
        j["sweep"] = {{"axis", axis}, {"values", c.sweep->values}};
    }
    return j;
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RANK_THREADS")) {
        std::size_t v = 0;
        const std::string s(env);
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size() && v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    const auto points = expand_points(config);
    ExperimentReport report;
    report.algorithm = config.algorithm;

    struct Job {
        std::size_t point, trial;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < points.size(); ++p) {
        PointReport pr;
        pr.index = p;
        pr.n = points[p].n;
        pr.k = points[p].params.k;
        pr.epsilon = points[p].params.epsilon;
        pr.delta = points[p].params.delta;
        pr.trials.resize(config.trials);
        report.points.push_back(std::move(pr));
        for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({p, t});
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t idx; !failed && (idx = next.fetch_add(1)) < jobs.size();) {
            const auto [p, t] = jobs[idx];
            try {
                report.points[p].trials[t] = run_trial(config, points[p], p, t, options.timing);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    const std::size_t workers = std::min(resolve_threads(options.threads), std::max<std::size_t>(jobs.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    for (auto& pr : report.points) pr.aggregate = aggregate(pr.trials);
    return report;
}

Aggregate aggregate(const std::vector<TrialReport>& trials) {
    Aggregate a;
    a.trials = trials.size();
    if (trials.empty()) return a;
    std::uint64_t sum = 0;
    std::size_t pac = 0, exact = 0;
    double elapsed = 0.0;
    bool timed = true;
    for (const auto& t : trials) {
        sum += t.comparisons;
        pac += t.pac_correct;
        exact += t.exact_correct;
        if (t.elapsed) elapsed += *t.elapsed;
        else timed = false;
    }
    const double n = static_cast<double>(trials.size());
    a.mean_comparisons = static_cast<double>(sum) / n;
    if (trials.size() > 1) {
        double ss = 0.0;
        for (const auto& t : trials) {
            const double d = static_cast<double>(t.comparisons) - a.mean_comparisons;
            ss += d * d;
        }
        a.stddev_comparisons = std::sqrt(ss / (n - 1.0));
    }
    a.pac_rate = static_cast<double>(pac) / n;
    a.exact_rate = static_cast<double>(exact) / n;
    if (timed) a.mean_elapsed = elapsed / n;
    return a;
}

std::string format_double(double x) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::string to_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    const char* alg = to_string(report.algorithm);
    for (const auto& pr : report.points) {
        const std::string prefix = std::string(alg) + ',' + std::to_string(pr.n) + ',' + std::to_string(pr.k) + ',' +
                                   format_double(pr.epsilon) + ',' + format_double(pr.delta) + ',';
        for (const auto& t : pr.trials) {
            os << prefix << t.trial_index << ',' << t.seed << ',' << t.comparisons << ',' << (t.pac_correct ? 1 : 0)
               << ',' << (t.exact_correct ? 1 : 0) << ',' << (t.elapsed ? format_double(*t.elapsed) : "") << ",\n";
        }
        const auto& a = pr.aggregate;
        os << prefix << "AGG," << a.trials << ',';
        if (a.empty()) {
            os << ",,,,\n";
        } else {
            os << format_double(a.mean_comparisons) << ',' << format_double(a.pac_rate) << ','
               << format_double(a.exact_rate) << ',' << (a.mean_elapsed ? format_double(*a.mean_elapsed) : "") << ','
               << format_double(a.stddev_comparisons) << '\n';
        }
    }
    return os.str();
}

}  // namespace topk
