#include "topk/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace topk {
namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(',', start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line); }

std::int64_t parse_int(std::string_view field, std::size_t line, ErrorKind kind) {
    std::int64_t v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc() || ptr != end) {
        throw Error(kind, where(line) + ": expected an integer, got '" + std::string(field) + "'");
    }
    return v;
}

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t number = 0;

    // Next non-blank line; returns false at end of input.
    bool next(std::string_view& out) {
        while (pos < text.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            auto line = trim(text.substr(pos, nl - pos));
            pos = nl + 1;
            ++number;
            if (!line.empty()) {
                out = line;
                return true;
            }
        }
        return false;
    }
};

// Count records shared by both layouts.
void parse_records(LineReader& rd, PwgDocument& doc) {
    const auto n = static_cast<std::int64_t>(doc.n);
    std::string_view line;
    while (rd.next(line)) {
        if (line.front() == '#') continue;
        const auto fields = split_commas(line);
        if (fields.size() != 3)
            throw Error(ErrorKind::MalformedLine, where(rd.number) + ": expected '<count>,<i>,<j>'");
        const auto cnt = parse_int(fields[0], rd.number, ErrorKind::NonIntegerCount);
        if (cnt < 0) throw Error(ErrorKind::NonIntegerCount, where(rd.number) + ": negative count");
        const auto i = parse_int(fields[1], rd.number, ErrorKind::MalformedLine);
        const auto j = parse_int(fields[2], rd.number, ErrorKind::MalformedLine);
        if (i < 1 || i > n || j < 1 || j > n || i == j) {
            throw Error(ErrorKind::IndexOutOfRange, where(rd.number) + ": pair (" + std::to_string(i) + "," +
                                                        std::to_string(j) + ") out of range");
        }
        // Repeated records for one ordered pair accumulate.
        doc.counts[{static_cast<ItemId>(i - 1), static_cast<ItemId>(j - 1)}] += cnt;
    }
}

// Newer PrefLib layout: "# KEY: value" metadata lines, then count records.
PwgDocument parse_pwg_with_metadata(std::string_view text) {
    PwgDocument doc;
    LineReader rd{text};
    std::string_view line;
    std::vector<std::pair<std::int64_t, std::string>> names;
    std::optional<std::int64_t> voters, orders;
    LineReader probe = rd;
    while (probe.next(line)) {
        if (line.front() != '#') break;
        rd = probe;
        const auto body = trim(line.substr(1));
        const auto colon = body.find(':');
        if (colon == std::string_view::npos) continue;
        const auto key = trim(body.substr(0, colon));
        const auto value = trim(body.substr(colon + 1));
        if (key == "NUMBER ALTERNATIVES") {
            const auto n = parse_int(value, rd.number, ErrorKind::MalformedLine);
            if (n < 1) throw Error(ErrorKind::MalformedLine, where(rd.number) + ": alternative count must be positive");
            doc.n = static_cast<std::size_t>(n);
        } else if (key == "NUMBER VOTERS") {
            voters = parse_int(value, rd.number, ErrorKind::MalformedLine);
        } else if (key == "NUMBER UNIQUE ORDERS") {
            orders = parse_int(value, rd.number, ErrorKind::MalformedLine);
        } else if (key.starts_with("ALTERNATIVE NAME")) {
            const auto idx = parse_int(trim(key.substr(16)), rd.number, ErrorKind::MalformedLine);
            names.emplace_back(idx, std::string(value));
        }
    }
    if (doc.n == 0) throw Error(ErrorKind::MalformedLine, "missing '# NUMBER ALTERNATIVES' line");
    doc.labels.assign(doc.n, {});
    for (const auto& [idx, label] : names) {
        if (idx < 1 || static_cast<std::size_t>(idx) > doc.n)
            throw Error(ErrorKind::IndexOutOfRange, "alternative index " + std::to_string(idx) + " out of range");
        doc.labels[static_cast<std::size_t>(idx - 1)] = label;
    }
    if (voters) doc.totals.push_back(*voters);
    if (orders) doc.totals.push_back(*orders);
    parse_records(rd, doc);
    return doc;
}

}  // namespace

std::int64_t PwgDocument::count(ItemId i, ItemId j) const {
    const auto it = counts.find({i, j});
    return it == counts.end() ? 0 : it->second;
}

PwgDocument parse_pwg(std::string_view text) {
    {
        LineReader probe{text};
        std::string_view first;
        if (probe.next(first) && first.front() == '#') return parse_pwg_with_metadata(text);
    }
    PwgDocument doc;
    LineReader rd{text};
    std::string_view line;

    if (!rd.next(line)) throw Error(ErrorKind::MalformedLine, "line 1: missing candidate count");
    const auto n = parse_int(line, rd.number, ErrorKind::MalformedLine);
    if (n < 1) throw Error(ErrorKind::MalformedLine, where(rd.number) + ": candidate count must be positive");
    doc.n = static_cast<std::size_t>(n);
    doc.labels.assign(doc.n, {});

    std::vector<bool> seen(doc.n, false);
    for (std::size_t c = 0; c < doc.n; ++c) {
        if (!rd.next(line)) throw Error(ErrorKind::MalformedLine, where(rd.number + 1) + ": missing candidate line");
        const auto comma = line.find(',');
        if (comma == std::string_view::npos)
            throw Error(ErrorKind::MalformedLine, where(rd.number) + ": expected '<index>,<label>'");
        const auto idx = parse_int(trim(line.substr(0, comma)), rd.number, ErrorKind::MalformedLine);
        if (idx < 1 || idx > n || seen[static_cast<std::size_t>(idx - 1)]) {
            throw Error(ErrorKind::IndexOutOfRange,
                        where(rd.number) + ": candidate index " + std::to_string(idx) + " invalid or repeated");
        }
        seen[static_cast<std::size_t>(idx - 1)] = true;
        doc.labels[static_cast<std::size_t>(idx - 1)] = std::string(trim(line.substr(comma + 1)));
    }

    if (!rd.next(line)) throw Error(ErrorKind::MalformedLine, where(rd.number + 1) + ": missing totals line");
    for (auto f : split_commas(line)) doc.totals.push_back(parse_int(f, rd.number, ErrorKind::MalformedLine));

    parse_records(rd, doc);
    return doc;
}

PwgDocument read_pwg_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pwg(ss.str());
}

std::string serialize_pwg(const PwgDocument& doc) {
    std::ostringstream os;
    os << doc.n << '\n';
    for (std::size_t i = 0; i < doc.n; ++i) os << (i + 1) << ',' << doc.labels[i] << '\n';
    for (std::size_t t = 0; t < doc.totals.size(); ++t) os << (t ? "," : "") << doc.totals[t];
    os << '\n';
    for (const auto& [pair, cnt] : doc.counts) os << cnt << ',' << (pair.first + 1) << ',' << (pair.second + 1) << '\n';
    return os.str();
}

MissingPolicy missing_policy_from_string(const std::string& s) {
    if (s == "error") return MissingPolicy::Error;
    if (s == "half") return MissingPolicy::Half;
    throw Error(ErrorKind::InvalidArgument, "missing policy must be 'error' or 'half', got '" + s + "'");
}

PreferenceInstance to_preference_instance(const PwgDocument& doc, MissingPolicy policy) {
    return PreferenceInstance::from_upper(doc.n, [&](ItemId i, ItemId j) {
        const auto nij = doc.count(i, j), nji = doc.count(j, i);
        if (nij + nji == 0) {
            if (policy == MissingPolicy::Error) {
                throw Error(ErrorKind::MissingPair, "no votes between candidates " + std::to_string(i + 1) +
                                                        " and " + std::to_string(j + 1));
            }
            return 0.5;
        }
        return static_cast<double>(nij) / static_cast<double>(nij + nji);
    });
}

BordaResult borda_ranking(const PreferenceInstance& inst) {
    const std::size_t n = inst.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "Borda scores need n >= 2");
    BordaResult out;
    out.scores.resize(n);
    for (ItemId i = 0; i < n; ++i) {
        double s = 0.0;
        for (ItemId j = 0; j < n; ++j)
            if (j != i) s += inst(i, j);
        out.scores[i] = s / static_cast<double>(n - 1);
    }
    out.ranking.order = all_items(n);
    std::stable_sort(out.ranking.order.begin(), out.ranking.order.end(),
                     [&](ItemId a, ItemId b) { return out.scores[a] > out.scores[b]; });
    return out;
}

nlohmann::json instance_to_json(const PreferenceInstance& inst, const std::vector<std::string>& labels) {
    nlohmann::json rows = nlohmann::json::array();
    for (ItemId i = 0; i < inst.size(); ++i) {
        const auto r = inst.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    nlohmann::json j;
    j["n"] = inst.size();
    j["labels"] = labels;
    j["p"] = std::move(rows);
    return j;
}

PreferenceInstance instance_from_json(const nlohmann::json& j) {
    const auto& rows = j.at("p");
    const std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : rows.size();
    if (rows.size() != n) throw Error(ErrorKind::InvalidInstance, "matrix row count does not match n");
    std::vector<double> p;
    p.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) throw Error(ErrorKind::InvalidInstance, "matrix row length does not match n");
        for (const auto& v : row) p.push_back(v.get<double>());
    }
    return PreferenceInstance(n, std::move(p));
}

PreferenceInstance load_instance_file(const std::string& path, MissingPolicy policy) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".pwg") return to_preference_instance(read_pwg_file(path), policy);
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, path + ": " + e.what());
    }
    return instance_from_json(j);
}

}  // namespace topk
