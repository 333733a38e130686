#include "topk/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace topk {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void require_items(const std::vector<ItemId>& items, std::size_t k) {
    if (items.empty()) throw Error(ErrorKind::EmptySet, "no items to select from");
    if (k < 1 || k > items.size()) {
        throw Error(ErrorKind::KOutOfRange,
                    "k=" + std::to_string(k) + " outside [1, " + std::to_string(items.size()) + "]");
    }
}

void require_positive(double x, const char* name) {
    if (!(x > 0.0 && std::isfinite(x))) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be positive");
}

// Uniform sample of `count` items without replacement.
std::vector<ItemId> sample(std::vector<ItemId> pool, std::size_t count, Rng& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

std::vector<ItemId> without(const std::vector<ItemId>& from, const std::vector<ItemId>& drop) {
    const ItemSet d = make_item_set(drop);
    std::vector<ItemId> out;
    out.reserve(from.size());
    for (ItemId i : from)
        if (!std::binary_search(d.begin(), d.end(), i)) out.push_back(i);
    return out;
}

void check_partition(const Buckets& b, std::size_t n) {
    if (b.total() != n) throw std::logic_error("bucket sizes do not partition the round's items");
}

}  // namespace

std::uint64_t di_budget(double epsilon, double delta) {
    require_positive(epsilon, "epsilon");
    require_positive(delta, "delta");
    const double t = std::ceil(2.0 / (epsilon * epsilon) * std::log(4.0 / delta));
    if (!(t <= static_cast<double>(kMaxDiBudget)))
        throw Error(ErrorKind::Infeasible, "comparison budget exceeds 2^31; epsilon too small");
    return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
}

double di_radius(std::uint64_t t, double delta) {
    const double td = static_cast<double>(t);
    return std::sqrt(std::log(kPi2 * td * td / (3.0 * delta)) / (2.0 * td));
}

DiOutcome distribute_item(ComparisonOracle& oracle, ItemId i, ItemId v, const DiParams& params, Buckets& buckets) {
    if (i == v) throw Error(ErrorKind::IdenticalItems, "item equals pivot");
    if (params.s_up < 0.0 || params.s_down < 0.0) throw Error(ErrorKind::InvalidArgument, "shifts must be >= 0");
    const std::uint64_t t_max = di_budget(params.epsilon, params.delta);
    const double upper = 0.5 + params.s_up;
    const double lower = 0.5 - params.s_down;

    std::uint64_t wins = 0;
    for (std::uint64_t t = 1; t <= t_max; ++t) {
        if (oracle.compare(i, v) == i) ++wins;
        const double rate = static_cast<double>(wins) / static_cast<double>(t);
        const double b = di_radius(t, params.delta);
        if (rate - b > upper) {
            buckets.up.push_back(i);
            return {Bucket::Up, t};
        }
        if (rate + b < lower) {
            buckets.down.push_back(i);
            return {Bucket::Down, t};
        }
    }
    const double rate = static_cast<double>(wins) / static_cast<double>(t_max);
    const double half_eps = 0.5 * params.epsilon;
    Bucket b = Bucket::Mid;
    if (rate > upper + half_eps) b = Bucket::Up;
    else if (rate < lower - half_eps) b = Bucket::Down;
    buckets[b].push_back(i);
    return {b, t_max};
}

SelectionResult epsilon_quick_select(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k,
                                     double epsilon, double delta, Rng& rng) {
    require_items(items, k);
    require_positive(epsilon, "epsilon");
    require_positive(delta, "delta");
    const std::uint64_t start = oracle.comparisons();

    SelectionResult res;
    std::vector<ItemId> chosen;
    std::vector<ItemId> s = items;
    while (true) {
        if (k == s.size()) {
            chosen.insert(chosen.end(), s.begin(), s.end());
            break;
        }
        const std::size_t n = s.size();
        const ItemId v = s[rng.below(n)];
        Buckets b;
        b.mid.push_back(v);
        const double delta1 = delta / (static_cast<double>(n) * static_cast<double>(n - 1));
        const DiParams di{epsilon / 2.0, 0.0, 0.0, delta1};
        for (ItemId i : s)
            if (i != v) distribute_item(oracle, i, v, di, b);
        check_partition(b, n);
        res.trace.push_back({++res.rounds, n, 0, v, epsilon, delta1, b.up.size(), b.mid.size(), b.down.size()});

        const double next_delta = static_cast<double>(n - 1) * delta / static_cast<double>(n);
        if (b.up.size() > k) {
            s = std::move(b.up);
            delta = next_delta;
        } else if (b.up.size() + b.mid.size() >= k) {
            chosen.insert(chosen.end(), b.up.begin(), b.up.end());
            const auto extra = sample(std::move(b.mid), k - b.up.size(), rng);
            chosen.insert(chosen.end(), extra.begin(), extra.end());
            break;
        } else {
            chosen.insert(chosen.end(), b.up.begin(), b.up.end());
            chosen.insert(chosen.end(), b.mid.begin(), b.mid.end());
            k -= b.up.size() + b.mid.size();
            s = std::move(b.down);
            delta = next_delta;
        }
    }
    res.selected = make_item_set(std::move(chosen));
    res.comparisons = oracle.comparisons() - start;
    return res;
}

double tks_tolerance(double epsilon, std::size_t round) {
    return epsilon / 4.0 * std::pow(0.8, static_cast<double>(round));
}

double round_confidence(double delta, std::size_t round) {
    const double t = static_cast<double>(round);
    return 6.0 * delta / (kPi2 * t * t);
}

std::vector<std::size_t> tks_group_sizes(std::size_t survivors, std::size_t k) {
    std::vector<std::size_t> sizes;
    for (std::size_t left = survivors; left > 0;) {
        const std::size_t g = std::min(left, 2 * k);
        sizes.push_back(g);
        left -= g;
    }
    return sizes;
}

SelectionResult tournament_k_select(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k,
                                    double epsilon, double delta, Rng& rng) {
    require_items(items, k);
    require_positive(epsilon, "epsilon");
    require_positive(delta, "delta");
    const std::uint64_t start = oracle.comparisons();

    SelectionResult res;
    std::vector<ItemId> r = items;
    while (r.size() != k) {
        const std::size_t t = res.rounds + 1;
        const double eps_t = tks_tolerance(epsilon, t);
        const double conf = round_confidence(delta, t) / static_cast<double>(k);
        rng.shuffle(std::span<ItemId>(r));
        std::vector<ItemId> next;
        std::size_t offset = 0;
        for (std::size_t g : tks_group_sizes(r.size(), k)) {
            const std::vector<ItemId> group(r.begin() + static_cast<std::ptrdiff_t>(offset),
                                            r.begin() + static_cast<std::ptrdiff_t>(offset + g));
            offset += g;
            const auto sub = epsilon_quick_select(oracle, group, std::min(k, g), eps_t, conf, rng);
            next.insert(next.end(), sub.selected.begin(), sub.selected.end());
        }
        res.trace.push_back({t, r.size(), 0, std::nullopt, eps_t, conf, next.size(), 0, r.size() - next.size()});
        res.rounds = t;
        r = std::move(next);
    }
    res.selected = make_item_set(std::move(r));
    res.comparisons = oracle.comparisons() - start;
    return res;
}

SelectionResult tournament_worst_select(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k,
                                        double epsilon, double delta, Rng& rng) {
    FlippedOracle inverted(oracle);
    return tournament_k_select(inverted, items, k, epsilon, delta, rng);
}

double elimination_tolerance(std::size_t round) { return std::ldexp(1.0, -static_cast<int>(round)); }

SelectionResult seebs(ComparisonOracle& oracle, const std::vector<ItemId>& items, double delta, Rng& rng) {
    require_items(items, 1);
    require_positive(delta, "delta");
    const std::uint64_t start = oracle.comparisons();

    SelectionResult res;
    std::vector<ItemId> r = items;
    for (std::size_t t = 1; r.size() > 1; ++t) {
        const double alpha = elimination_tolerance(t);
        const double delta_t = round_confidence(delta, t);
        const ItemId v = tournament_k_select(oracle, r, 1, alpha / 3.0, 2.0 * delta_t / 3.0, rng).selected.front();
        Buckets b;
        b.mid.push_back(v);
        const DiParams di{alpha / 3.0, 0.0, alpha / 3.0, delta_t / 3.0};
        for (ItemId i : r)
            if (i != v) distribute_item(oracle, i, v, di, b);
        check_partition(b, r.size());
        res.trace.push_back({t, r.size(), 0, v, alpha, delta_t, b.up.size(), b.mid.size(), b.down.size()});
        res.rounds = t;
        r = without(r, b.down);
    }
    res.selected = make_item_set(std::move(r));
    res.comparisons = oracle.comparisons() - start;
    return res;
}

SelectionResult seeks(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k, double delta,
                      Rng& rng, PacSelector selector) {
    require_items(items, k);
    if (2 * k > items.size()) throw Error(ErrorKind::KOutOfRange, "exact k-selection needs k <= n/2");
    require_positive(delta, "delta");
    const std::uint64_t start = oracle.comparisons();

    SelectionResult res;
    std::vector<ItemId> r = items;
    std::vector<ItemId> s;
    std::vector<ItemId> dropped;
    std::size_t k_t = k;
    for (std::size_t t = 1; s.size() < k && s.size() + r.size() > k; ++t) {
        const double alpha = elimination_tolerance(t);
        const double delta_t = round_confidence(delta, t);
        const double tol = alpha / 3.0;
        const auto candidates = selector == PacSelector::Tks
                                    ? tournament_k_select(oracle, r, k_t, tol, delta_t / 3.0, rng)
                                    : epsilon_quick_select(oracle, r, k_t, tol, delta_t / 3.0, rng);
        const ItemId v =
            tournament_worst_select(oracle, candidates.selected, 1, tol, delta_t / 3.0, rng).selected.front();

        Buckets b;
        b.mid.push_back(v);
        const DiParams di{tol, tol, tol, delta_t / (3.0 * static_cast<double>(r.size() - 1))};
        for (ItemId i : r)
            if (i != v) distribute_item(oracle, i, v, di, b);
        check_partition(b, r.size());
        res.trace.push_back({t, r.size(), s.size(), v, alpha, delta_t, b.up.size(), b.mid.size(), b.down.size()});
        res.rounds = t;

        s.insert(s.end(), b.up.begin(), b.up.end());
        dropped.insert(dropped.end(), b.down.begin(), b.down.end());
        std::vector<ItemId> leaving = b.up;
        leaving.insert(leaving.end(), b.down.begin(), b.down.end());
        r = without(r, leaving);
        // Once S reaches k the loop ends, so k_t never underflows inside it.
        k_t = b.up.size() >= k_t ? 0 : k_t - b.up.size();
    }

    ItemSet chosen = make_item_set(std::move(s));
    if (chosen.size() > k) {
        chosen.resize(k);
        res.flagged = true;
    }
    for (const auto* pool : {&r, &dropped}) {
        if (chosen.size() >= k) break;
        if (pool == &dropped) res.flagged = true;
        const ItemSet fill = make_item_set(*pool);
        for (ItemId i : fill) {
            if (chosen.size() >= k) break;
            chosen.push_back(i);
        }
    }
    res.selected = make_item_set(std::move(chosen));
    res.comparisons = oracle.comparisons() - start;
    return res;
}

}  // namespace topk
