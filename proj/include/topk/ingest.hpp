// ingest.hpp - PrefLib pairwise-graph (.pwg) files and Borda-score ground truth.
//
// .pwg layout (older PrefLib form; the newer "# KEY: value" header with
// NUMBER ALTERNATIVES / ALTERNATIVE NAME i / NUMBER VOTERS lines is also read):
//   <n>
//   <index>,<label>          (n lines, 1-based index)
//   <voters>,<sum>,<records> (totals line, echoed verbatim)
//   <count>,<i>,<j>          (one per observed ordered pair, 1-based)
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topk/core.hpp"

namespace topk {

struct PwgDocument {
    std::size_t n = 0;
    std::vector<std::string> labels;
    std::vector<std::int64_t> totals;
    /// (i, j) -> N_{i,j}, zero-based.
    std::map<std::pair<ItemId, ItemId>, std::int64_t> counts;

    std::int64_t count(ItemId i, ItemId j) const;
    bool operator==(const PwgDocument&) const = default;
};

PwgDocument parse_pwg(std::string_view text);
PwgDocument read_pwg_file(const std::string& path);
/// Canonical text form: records sorted by (i, j).
std::string serialize_pwg(const PwgDocument& doc);

enum class MissingPolicy { Error, Half };
MissingPolicy missing_policy_from_string(const std::string& s);

/// p(i,j) = N_{i,j} / (N_{i,j} + N_{j,i}).
PreferenceInstance to_preference_instance(const PwgDocument& doc, MissingPolicy policy = MissingPolicy::Error);

struct BordaResult {
    Ranking ranking;
    std::vector<double> scores;
};

/// score_i = mean over j != i of p(i,j); ranked by descending score, ties by
/// ascending index.
BordaResult borda_ranking(const PreferenceInstance& inst);

/// {"n", "labels", "p"} with the matrix as nested rows.
nlohmann::json instance_to_json(const PreferenceInstance& inst, const std::vector<std::string>& labels = {});
PreferenceInstance instance_from_json(const nlohmann::json& j);

/// Loads a .pwg file (by extension) or a matrix JSON file.
PreferenceInstance load_instance_file(const std::string& path, MissingPolicy policy = MissingPolicy::Error);

}  // namespace topk
