#include "topk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topk/ingest.hpp"
#include "topk/rng.hpp"

namespace topk {
namespace {

// Slack for rounding in derived quantities (1 - p, |p - 1/2| sums).
constexpr double kSlack = 1e-12;

std::vector<bool> membership(const PreferenceInstance& inst, const ItemSet& u) {
    std::vector<bool> in(inst.size(), false);
    for (ItemId i : u) {
        if (i >= inst.size() || in[i]) throw Error(ErrorKind::WrongSize, "item set has repeated or out-of-range ids");
        in[i] = true;
    }
    return in;
}

// Some 3-cycle of a non-transitive strict tournament.
Witness find_cycle(const PreferenceInstance& inst) {
    const std::size_t n = inst.size();
    for (ItemId a = 0; a < n; ++a)
        for (ItemId b = 0; b < n; ++b)
            if (a != b && inst(a, b) > 0.5)
                for (ItemId c = 0; c < n; ++c)
                    if (c != a && c != b && inst(b, c) > 0.5 && inst(c, a) > 0.5)
                        return {{a, b, c}, {inst(a, b), inst(b, c), inst(c, a)}, "preference cycle"};
    return {{}, {}, "preference cycle"};
}

std::optional<Witness> strict_order_failure(const PreferenceInstance& inst) {
    const std::size_t n = inst.size();
    for (ItemId i = 0; i < n; ++i)
        for (ItemId j = i + 1; j < n; ++j)
            if (inst(i, j) == 0.5) return Witness{{i, j}, {0.5}, "p equals 1/2 off the diagonal"};
    return std::nullopt;
}

// Calls f(a, b, c) with a < b < c over all triples, or over sampled ones for
// large n. Stops when f returns false.
template <typename F>
void for_each_triple(std::size_t n, const ValidateOptions& opts, F&& f) {
    if (n < 3) return;
    if (n <= opts.exhaustive_max_n) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c)
                    if (!f(a, b, c)) return;
        return;
    }
    if (!opts.sample_large)
        throw Error(ErrorKind::TooLarge, "n = " + std::to_string(n) + " exceeds the exhaustive triple limit " +
                                             std::to_string(opts.exhaustive_max_n) + "; enable sampling");
    Rng rng(opts.seed);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        std::size_t t[3];
        do {
            for (auto& x : t) x = static_cast<std::size_t>(rng.below(n));
        } while (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]);
        std::sort(t, t + 3);
        if (!f(t[0], t[1], t[2])) return;
    }
}

}  // namespace

Verdict is_eps_k_optimal(const PreferenceInstance& inst, const ItemSet& u, double epsilon) {
    if (u.empty() || u.size() > inst.size()) throw Error(ErrorKind::WrongSize, "item set size must be in [1, n]");
    const auto in = membership(inst, u);
    double worst = std::numeric_limits<double>::infinity();
    ItemId wi = 0, wj = 0;
    for (ItemId i : u)
        for (ItemId j = 0; j < inst.size(); ++j)
            if (!in[j] && inst(i, j) < worst) {
                worst = inst(i, j);
                wi = i;
                wj = j;
            }
    if (worst >= 0.5 - epsilon) return Verdict::ok();
    return Verdict::fail({{wi, wj}, {worst}, "p(i,j) < 1/2 - epsilon"});
}

Verdict is_exact_best_k(const PreferenceInstance& inst, const ItemSet& u, std::size_t k) {
    const ItemSet truth = true_best_k(inst, k);
    const ItemSet given = make_item_set(u);
    if (given.size() == u.size() && given == truth) return Verdict::ok();
    Witness w;
    w.reason = "returned set differs from the best-k set";
    std::set_symmetric_difference(given.begin(), given.end(), truth.begin(), truth.end(),
                                  std::back_inserter(w.items));
    return Verdict::fail(std::move(w));
}

Verdict validate_sst(const PreferenceInstance& inst, const ValidateOptions& opts) {
    if (auto w = strict_order_failure(inst)) return Verdict::fail(*w);
    Ranking r;
    try {
        r = ranking_of(inst);
    } catch (const Error&) {
        return Verdict::fail(find_cycle(inst));
    }
    std::optional<Witness> w;
    for_each_triple(inst.size(), opts, [&](std::size_t a, std::size_t b, std::size_t c) {
        const ItemId i = r[a], j = r[b], l = r[c];
        const double pil = inst(i, l), pij = inst(i, j), pjl = inst(j, l);
        if (pil < std::max(pij, pjl) - kSlack) {
            w = Witness{{i, j, l}, {pil, pij, pjl}, "p(i,l) < max(p(i,j), p(j,l))"};
            return false;
        }
        return true;
    });
    return w ? Verdict::fail(*w) : Verdict::ok();
}

Verdict validate_sti(const PreferenceInstance& inst, const ValidateOptions& opts) {
    double worst = 0.0;
    std::optional<Witness> w;
    // Each unordered triple is checked with every member as the middle item j.
    auto check = [&](ItemId i, ItemId j, ItemId l) {
        const double gil = pair_gap(inst, i, l), gij = pair_gap(inst, i, j), gjl = pair_gap(inst, j, l);
        const double excess = gil - (gij + gjl);
        if (excess > kSlack && excess > worst) {
            worst = excess;
            w = Witness{{i, j, l}, {gil, gij, gjl}, "gap(i,l) > gap(i,j) + gap(j,l)"};
        }
    };
    for_each_triple(inst.size(), opts, [&](std::size_t a, std::size_t b, std::size_t c) {
        check(a, b, c);
        check(a, c, b);
        check(b, a, c);
        return true;
    });
    return w ? Verdict::fail(*w) : Verdict::ok();
}

GammaReport validate_gamma(const PreferenceInstance& inst, double gamma, const ValidateOptions& opts) {
    if (!(gamma >= 1.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be >= 1");
    if (auto w = strict_order_failure(inst)) throw Error(ErrorKind::NotStrictOrder, w->reason);
    GammaReport rep;
    Ranking r;
    try {
        r = ranking_of(inst);
        rep.order = "tournament";
    } catch (const Error&) {
        r = borda_ranking(inst).ranking;
        rep.order = "borda";
    }

    const double inf = std::numeric_limits<double>::infinity();
    double need = 1.0;
    std::optional<Witness> first;
    for_each_triple(inst.size(), opts, [&](std::size_t a, std::size_t b, std::size_t c) {
        const ItemId i = r[a], j = r[b], l = r[c];
        const double pil = inst(i, l), pmax = std::max(inst(i, j), inst(j, l));
        const double gil = pair_gap(inst, i, l), gsum = pair_gap(inst, i, j) + pair_gap(inst, j, l);
        const double g_sst = pil > 0.0 ? pmax / pil : inf;
        const double g_sti = gil == 0.0 ? 0.0 : (gsum > 0.0 ? gil / gsum : inf);
        need = std::max({need, g_sst, g_sti});
        if (!first && (pil * gamma < pmax - kSlack || gil > gamma * gsum + kSlack))
            first = Witness{{i, j, l}, {pil, inst(i, j), inst(j, l)}, "relaxed condition violated"};
        return true;
    });
    rep.min_gamma = std::isinf(need) ? need : round_sig6(need);
    rep.verdict = first ? Verdict::fail(*first) : Verdict::ok();
    return rep;
}

double round_sig6(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double mag = std::floor(std::log10(std::abs(x)));
    const double scale = std::pow(10.0, 5.0 - mag);
    return std::round(x * scale) / scale;
}

BruteForceResult best_k_bruteforce(const PreferenceInstance& inst, std::size_t k) {
    const std::size_t n = inst.size();
    if (n > kBruteForceMaxN) throw Error(ErrorKind::TooLarge, "brute force limited to n <= 12");
    if (k < 1 || k > n) throw Error(ErrorKind::KOutOfRange, "k must be in [1, n]");

    BruteForceResult out;
    double best_score = -1.0;
    // Subsets as bitmasks in increasing numeric order.
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        ++out.subsets_enumerated;
        double score = std::numeric_limits<double>::infinity();
        for (ItemId i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            for (ItemId j = 0; j < n; ++j)
                if (!(mask >> j & 1u)) score = std::min(score, inst(i, j));
        }
        if (score > best_score) {
            best_score = score;
            out.best.clear();
            for (ItemId i = 0; i < n; ++i)
                if (mask >> i & 1u) out.best.push_back(i);
        }
    }
    return out;
}

}  // namespace topk
