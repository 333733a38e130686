#include "topk/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace topk {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InvalidInstance: return "InvalidInstance";
        case ErrorKind::NotStrictOrder: return "NotStrictOrder";
        case ErrorKind::CyclicPreference: return "CyclicPreference";
        case ErrorKind::IdenticalItems: return "IdenticalItems";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::KOutOfRange: return "KOutOfRange";
        case ErrorKind::WrongSize: return "WrongSize";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::ZeroGap: return "ZeroGap";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::MalformedLine: return "MalformedLine";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::NonIntegerCount: return "NonIntegerCount";
        case ErrorKind::MissingPair: return "MissingPair";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

PreferenceInstance::PreferenceInstance(std::size_t n, std::vector<double> p)
    : n_(n), p_(std::move(p)), strict_(true) {
    if (n_ == 0) throw Error(ErrorKind::InvalidInstance, "instance needs at least one item");
    if (p_.size() != n_ * n_) {
        throw Error(ErrorKind::InvalidInstance, "matrix has " + std::to_string(p_.size()) +
                                                    " entries, expected " + std::to_string(n_ * n_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 0.5) {
            throw Error(ErrorKind::InvalidInstance, "p[" + std::to_string(i) + "][" +
                                                        std::to_string(i) + "] must be 1/2");
        }
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double a = (*this)(i, j), b = (*this)(j, i);
            if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
                throw Error(ErrorKind::InvalidInstance,
                            "entry out of [0,1] at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (std::abs(a + b - 1.0) > kAntisymmetryTolerance) {
                std::ostringstream os;
                os << "p[i][j] + p[j][i] != 1 at (" << i << "," << j << "): " << a << " + " << b;
                throw Error(ErrorKind::InvalidInstance, os.str());
            }
            if (a == 0.5) strict_ = false;
        }
    }
}

PreferenceInstance flipped(const PreferenceInstance& inst) {
    const std::size_t n = inst.size();
    std::vector<double> p(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p[i * n + j] = inst(j, i);
    return PreferenceInstance(n, std::move(p));
}

PreferenceInstance permuted(const PreferenceInstance& inst, std::span<const ItemId> perm) {
    const std::size_t n = inst.size();
    if (perm.size() != n) throw Error(ErrorKind::InvalidArgument, "permutation size mismatch");
    std::vector<double> p(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p[perm[i] * n + perm[j]] = inst(i, j);
    return PreferenceInstance(n, std::move(p));
}

std::vector<std::size_t> Ranking::positions() const {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) pos[order[r]] = r;
    return pos;
}

Ranking ranking_of(const PreferenceInstance& inst) {
    if (!inst.strict()) throw Error(ErrorKind::NotStrictOrder, "some off-diagonal p equals 1/2");
    const std::size_t n = inst.size();
    // A tournament is transitive iff its out-degrees are exactly {0, .., n-1}.
    std::vector<std::size_t> wins(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && inst(i, j) > 0.5) ++wins[i];

    Ranking r;
    r.order.assign(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t rank = n - 1 - wins[i];
        if (r.order[rank] != n) throw Error(ErrorKind::CyclicPreference, "tournament relation has a cycle");
        r.order[rank] = i;
    }
    return r;
}

ItemSet true_best_k(const PreferenceInstance& inst, std::size_t k) {
    if (k < 1 || k > inst.size()) throw Error(ErrorKind::KOutOfRange, "k must be in [1, n]");
    const Ranking r = ranking_of(inst);
    return make_item_set({r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k)});
}

GapVector gap_vector(const PreferenceInstance& inst, std::size_t k) {
    if (k < 1 || k >= inst.size()) throw Error(ErrorKind::KOutOfRange, "gap vector needs 1 <= k < n");
    GapVector g;
    g.k = k;
    g.ranking = ranking_of(inst);
    const ItemId rk = g.ranking[k - 1];
    const ItemId rk1 = g.ranking[k];
    const auto pos = g.ranking.positions();
    g.item.resize(inst.size());
    for (ItemId i = 0; i < inst.size(); ++i) {
        // Exactly one branch applies except at r_k / r_{k+1}, where both
        // expressions reduce to the boundary pair gap.
        g.item[i] = pos[i] < k ? pair_gap(inst, i, rk1) : pair_gap(inst, rk, i);
    }
    return g;
}

void SelectionParams::validate(std::size_t n, bool pac) const {
    if (k < 1 || 2 * k > n) {
        throw Error(ErrorKind::KOutOfRange,
                    "k=" + std::to_string(k) + " must satisfy 1 <= k <= n/2 (n=" + std::to_string(n) + ")");
    }
    if (!(delta > 0.0 && delta < 0.5)) throw Error(ErrorKind::InvalidArgument, "delta must be in (0, 1/2)");
    if (pac && !(epsilon > 0.0 && epsilon < 0.5))
        throw Error(ErrorKind::InvalidArgument, "epsilon must be in (0, 1/2)");
}

ItemSet make_item_set(std::vector<ItemId> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

ItemSet all_items(std::size_t n) {
    ItemSet s(n);
    std::iota(s.begin(), s.end(), ItemId{0});
    return s;
}

}  // namespace topk
