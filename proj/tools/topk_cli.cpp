// topk - command-line front end.
//
//   topk run --config cfg.json [--out results.csv] [--threads N] [--timing]
//   topk bounds --gap 0.1 --delta 0.01 --k 1 --n-grid 10:1000:log [--out table.csv]
//   topk validate (--pwg file.pwg | --matrix file.json) [--gamma 5] [--missing error|half] [--sample]
//   topk parse-pwg file.pwg [--missing error|half] [--out instance.json]
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topk/bounds.hpp"
#include "topk/harness.hpp"
#include "topk/ingest.hpp"
#include "topk/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

json witness_json(const topk::Verdict& v) {
    if (v.pass || !v.witness) return nullptr;
    json items = json::array();
    for (auto i : v.witness->items) items.push_back(i + 1);  // 1-based for display
    return {{"items", items}, {"values", v.witness->values}, {"reason", v.witness->reason}};
}

int cmd_run(const std::string& config_path, const std::string& out, std::size_t threads, bool timing) {
    json j;
    std::string base_dir;
    try {
        if (config_path == "-") {
            std::cin >> j;
        } else {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open " + config_path);
            in >> j;
            base_dir = std::filesystem::path(config_path).parent_path().string();
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
    }
    const auto config = topk::config_from_json(j, base_dir);
    const auto report = topk::run_experiment(config, {threads, timing});
    write_output(out, topk::to_csv(report));
    return 0;
}

int cmd_bounds(double gap, double delta, std::size_t k, const std::string& grid, const std::string& out) {
    const auto rows = topk::growth_table(gap, delta, k, topk::parse_n_grid(grid));
    write_output(out, topk::growth_table_csv(rows));
    return 0;
}

int cmd_validate(const std::string& pwg, const std::string& matrix, std::optional<double> gamma,
                 const std::string& missing, bool sample) {
    if (pwg.empty() == matrix.empty()) throw UsageError("validate needs exactly one of --pwg or --matrix");
    const auto policy = topk::missing_policy_from_string(missing);
    const auto inst = pwg.empty() ? topk::load_instance_file(matrix, policy)
                                  : topk::to_preference_instance(topk::read_pwg_file(pwg), policy);
    topk::ValidateOptions opts;
    opts.sample_large = sample;
    const auto sst = topk::validate_sst(inst, opts);
    const auto sti = topk::validate_sti(inst, opts);
    json out = {{"n", inst.size()}, {"strict", inst.strict()}, {"sst", sst.pass}, {"sti", sti.pass}};
    out["sst_witness"] = witness_json(sst);
    out["sti_witness"] = witness_json(sti);
    try {
        const auto rep = topk::validate_gamma(inst, gamma.value_or(1.0), opts);
        out["min_gamma"] = rep.min_gamma;
        out["gamma_order"] = rep.order;
        if (gamma) out["gamma" + topk::format_double(*gamma)] = rep.verdict.pass;
    } catch (const topk::Error& e) {
        if (e.kind() != topk::ErrorKind::NotStrictOrder) throw;
        out["min_gamma"] = nullptr;
        out["gamma_error"] = e.what();
        if (gamma) out["gamma" + topk::format_double(*gamma)] = nullptr;
    }
    if (sample && inst.size() > opts.exhaustive_max_n) out["sampled"] = true;
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_parse_pwg(const std::string& path, const std::string& missing, const std::string& out) {
    const auto doc = topk::read_pwg_file(path);
    const auto inst = topk::to_preference_instance(doc, topk::missing_policy_from_string(missing));
    write_output(out, topk::instance_to_json(inst, doc.labels).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active best-k selection from noisy pairwise comparisons"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::size_t threads = 0;
    bool timing = false;
    auto* run = app.add_subcommand("run", "Run a seeded multi-trial experiment and write CSV");
    run->add_option("--config", config_path, "Experiment config JSON (path or '-' for stdin)")->required();
    run->add_option("--out", out, "Output CSV path (default stdout)");
    run->add_option("--threads", threads, "Worker threads (default RANK_THREADS or all cores)");
    run->add_flag("--timing", timing, "Record per-trial wall time in the elapsed column");

    double gap = 0.1, delta = 0.01;
    std::size_t k = 1;
    std::string grid;
    auto* bounds = app.add_subcommand("bounds", "Growth table of the exact-selection bound expressions");
    bounds->add_option("--gap", gap, "Common item gap")->required();
    bounds->add_option("--delta", delta, "Confidence parameter")->required();
    bounds->add_option("--k", k, "Target size")->default_val(1);
    bounds->add_option("--n-grid", grid, "a,b,c | start:stop:step | start:stop:log[:count]")->required();
    bounds->add_option("--out", out, "Output CSV path (default stdout)");

    std::string pwg, matrix, missing = "error";
    std::optional<double> gamma;
    auto* validate = app.add_subcommand("validate", "Check SST, STI and gamma-relaxed conditions");
    validate->add_option("--pwg", pwg, "PrefLib .pwg file");
    validate->add_option("--matrix", matrix, "Matrix JSON file {n, labels, p}");
    validate->add_option("--gamma", gamma, "Relaxation factor to test (>= 1)");
    validate->add_option("--missing", missing, "Zero-vote pairs: error | half");
    bool sample = false;
    validate->add_flag("--sample", sample, "Check sampled triples when n is above the exhaustive limit");

    std::string pwg_path;
    auto* parse = app.add_subcommand("parse-pwg", "Print a .pwg file as normalized instance JSON");
    parse->add_option("file", pwg_path, "PrefLib .pwg file")->required();
    parse->add_option("--missing", missing, "Zero-vote pairs: error | half");
    parse->add_option("--out", out, "Output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*run) return cmd_run(config_path, out, threads, timing);
        if (*bounds) return cmd_bounds(gap, delta, k, grid, out);
        if (*validate) return cmd_validate(pwg, matrix, gamma, missing, sample);
        if (*parse) return cmd_parse_pwg(pwg_path, missing, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsageError;
}
