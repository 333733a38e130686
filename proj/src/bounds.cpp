#include "topk/bounds.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "topk/harness.hpp"

namespace topk {
namespace {

void require_gaps(const BoundQuery& q) {
    if (q.gaps.item.empty()) throw Error(ErrorKind::InvalidArgument, "bound query has no gaps");
    for (double g : q.gaps.item)
        if (!(g > 0.0)) throw Error(ErrorKind::ZeroGap, "all item gaps must be positive");
}

void require_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "delta must be in (0, 1]");
}

std::size_t parse_size(const std::string& s) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw Error(ErrorKind::InvalidArgument, "bad grid value '" + s + "'");
    return v;
}

}  // namespace

GapVector uniform_gaps(std::size_t n, std::size_t k, double gap) {
    GapVector g;
    g.k = k;
    g.ranking.order = all_items(n);
    g.item.assign(n, gap);
    return g;
}

double loglog_inverse(double gap) {
    if (gap >= 1.0 / std::numbers::e) return 0.0;
    return std::log(std::log(1.0 / gap));
}

double pac_lower_bound(const BoundQuery& q) {
    return static_cast<double>(q.n) / (q.epsilon * q.epsilon) *
           std::log(static_cast<double>(q.k) / q.delta);
}

double exact_lower_bound(const BoundQuery& q) {
    require_gaps(q);
    require_delta(q.delta);
    const double l = std::log(1.0 / q.delta);
    double sum = 0.0;
    for (double g : q.gaps.item) sum += l / (g * g);
    return sum + loglog_inverse(q.gaps.of_rank(q.gaps.k - 1));
}

double seebs_upper_bound(const BoundQuery& q) {
    require_gaps(q);
    require_delta(q.delta);
    const double l = std::log(1.0 / q.delta);
    const ItemId best = q.gaps.ranking[0];
    double sum = 0.0;
    for (ItemId i = 0; i < q.gaps.item.size(); ++i) {
        if (i == best) continue;
        const double g = q.gaps.item[i];
        sum += (l + loglog_inverse(g)) / (g * g);
    }
    return sum;
}

double seeks_upper_bound(const BoundQuery& q) {
    require_gaps(q);
    require_delta(q.delta);
    const double l = std::log(static_cast<double>(q.gaps.item.size()) / q.delta);
    double sum = 0.0;
    for (double g : q.gaps.item) sum += (l + loglog_inverse(g)) / (g * g);
    return sum;
}

std::vector<GrowthRow> growth_table(double gap, double delta, std::size_t k, const std::vector<std::size_t>& n_grid) {
    if (n_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty n grid");
    std::vector<GrowthRow> rows;
    for (std::size_t n : n_grid) {
        if (n < 1 || k > n) throw Error(ErrorKind::KOutOfRange, "grid point n=" + std::to_string(n) + " below k");
        BoundQuery q{n, k, 0.0, delta, uniform_gaps(n, k, gap)};
        rows.push_back({n, exact_lower_bound(q), seebs_upper_bound(q), seeks_upper_bound(q)});
    }
    return rows;
}

std::vector<std::size_t> parse_n_grid(const std::string& spec) {
    std::vector<std::string> parts;
    const char sep = spec.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, sep);) parts.push_back(p);

    std::vector<std::size_t> grid;
    if (sep == ',') {
        for (const auto& p : parts) grid.push_back(parse_size(p));
    } else {
        if (parts.size() < 3 || parts.size() > 4) throw Error(ErrorKind::InvalidArgument, "bad grid '" + spec + "'");
        const std::size_t a = parse_size(parts[0]), b = parse_size(parts[1]);
        if (a < 1 || b < a) throw Error(ErrorKind::InvalidArgument, "grid needs 1 <= start <= stop");
        if (parts[2] == "log") {
            const std::size_t count = parts.size() == 4 ? parse_size(parts[3]) : 10;
            if (count < 1) throw Error(ErrorKind::InvalidArgument, "grid count must be positive");
            for (std::size_t i = 0; i < count; ++i) {
                const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
                const auto v = static_cast<std::size_t>(std::llround(std::exp(
                    std::log(static_cast<double>(a)) + f * (std::log(static_cast<double>(b)) - std::log(static_cast<double>(a))))));
                if (grid.empty() || grid.back() != v) grid.push_back(v);
            }
        } else {
            if (parts.size() != 3) throw Error(ErrorKind::InvalidArgument, "bad grid '" + spec + "'");
            const std::size_t step = parse_size(parts[2]);
            if (step < 1) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
            for (std::size_t v = a; v <= b; v += step) grid.push_back(v);
        }
    }
    if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
    return grid;
}

std::string growth_table_csv(const std::vector<GrowthRow>& rows) {
    std::ostringstream os;
    os << "# Θ-expression, constants omitted\n";
    os << "n,lower,upper_k1,upper_kgt1\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_double(r.lower) << ',' << format_double(r.upper_k1) << ','
           << format_double(r.upper_kgt1) << '\n';
    return os.str();
}

}  // namespace topk
