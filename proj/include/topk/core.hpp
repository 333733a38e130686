// core.hpp - domain types shared by every module: items, preference matrices,
// rankings, gaps and selection parameters.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topk {

/// Dense zero-based item index.
using ItemId = std::size_t;

/// Item set, kept sorted ascending and duplicate-free by the functions that
/// return one.
using ItemSet = std::vector<ItemId>;

enum class ErrorKind {
    InvalidArgument,
    InvalidInstance,
    NotStrictOrder,
    CyclicPreference,
    IdenticalItems,
    EmptySet,
    KOutOfRange,
    WrongSize,
    TooLarge,
    ZeroGap,
    Infeasible,
    MalformedLine,
    IndexOutOfRange,
    NonIntegerCount,
    MissingPair,
    InvalidConfig,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Full pairwise win-probability matrix. Immutable after construction.
///
/// Invariants (checked by the constructor):
///   p(i,i) == 1/2, p(i,j) in [0,1], |p(i,j) + p(j,i) - 1| <= 1e-12.
class PreferenceInstance {
public:
    /// Row-major n*n matrix.
    PreferenceInstance(std::size_t n, std::vector<double> p);

    /// Build from the upper triangle: `upper(i,j)` for i < j gives p(i,j).
    template <typename F>
    static PreferenceInstance from_upper(std::size_t n, F&& upper) {
        std::vector<double> p(n * n, 0.5);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = upper(i, j);
                p[i * n + j] = v;
                p[j * n + i] = 1.0 - v;
            }
        }
        return PreferenceInstance(n, std::move(p));
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(ItemId i, ItemId j) const noexcept { return p_[i * n_ + j]; }
    std::span<const double> row(ItemId i) const noexcept { return {p_.data() + i * n_, n_}; }
    const std::vector<double>& data() const noexcept { return p_; }

    /// True when no off-diagonal entry equals exactly 1/2.
    bool strict() const noexcept { return strict_; }

    bool operator==(const PreferenceInstance&) const = default;

private:
    std::size_t n_;
    std::vector<double> p_;
    bool strict_;
};

inline constexpr double kAntisymmetryTolerance = 1e-12;

/// Pair gap |p(i,j) - 1/2|.
inline double pair_gap(const PreferenceInstance& inst, ItemId i, ItemId j) {
    const double d = inst(i, j) - 0.5;
    return d < 0 ? -d : d;
}

/// Transposed instance: every comparison outcome is inverted.
PreferenceInstance flipped(const PreferenceInstance& inst);

/// Simultaneous row/column permutation: result(perm[i], perm[j]) = inst(i, j).
PreferenceInstance permuted(const PreferenceInstance& inst, std::span<const ItemId> perm);

/// Permutation of item ids, best first.
struct Ranking {
    std::vector<ItemId> order;

    std::size_t size() const noexcept { return order.size(); }
    ItemId operator[](std::size_t rank) const noexcept { return order[rank]; }
    /// position[item] = rank of item (0 = best).
    std::vector<std::size_t> positions() const;
    bool operator==(const Ranking&) const = default;
};

/// Ranking under the tournament relation i > j <=> p(i,j) > 1/2.
/// Throws NotStrictOrder or CyclicPreference.
Ranking ranking_of(const PreferenceInstance& inst);

/// {r_1..r_k}, sorted ascending.
ItemSet true_best_k(const PreferenceInstance& inst, std::size_t k);

/// Item gaps relative to the k-boundary. For the top k items the gap is taken
/// against r_{k+1}; for the rest against r_k.
struct GapVector {
    std::size_t k = 0;
    Ranking ranking;
    std::vector<double> item;

    double of_rank(std::size_t rank) const { return item[ranking[rank]]; }
};

GapVector gap_vector(const PreferenceInstance& inst, std::size_t k);

struct SelectionParams {
    std::size_t k = 1;
    double epsilon = 0.0;  // PAC tolerance; unused by exact selection
    double delta = 0.1;

    /// Top-level preconditions: 1 <= k <= n/2, delta in (0,1/2) and, when
    /// `pac`, epsilon in (0,1/2).
    void validate(std::size_t n, bool pac) const;
};

struct RoundTrace {
    std::size_t round = 0;
    std::size_t survivors = 0;  // |R_t| (or |S| for quick-select) at round start
    std::size_t accepted = 0;   // |S_t| at round start (exact k-selection only)
    std::optional<ItemId> pivot;
    double tolerance = 0.0;     // epsilon_t or alpha_t
    double confidence = 0.0;    // confidence handed to the round's subroutine calls
    std::size_t up = 0, mid = 0, down = 0;
};

struct SelectionResult {
    ItemSet selected;
    std::uint64_t comparisons = 0;
    std::size_t rounds = 0;
    std::vector<RoundTrace> trace;
    /// Set when an exact selector had to truncate or pad its answer.
    bool flagged = false;
};

/// Sorts and deduplicates.
ItemSet make_item_set(std::vector<ItemId> items);

/// All ids 0..n-1.
ItemSet all_items(std::size_t n);

}  // namespace topk
