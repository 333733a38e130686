// selection.hpp - active PAC and exact best-k selection from noisy comparisons.
//
//   distribute_item        three-way split of one item against a pivot
//   epsilon_quick_select   quickselect-style PAC k-selection
//   tournament_k_select    tournament over 2k-sized groups, O(n eps^-2 log(k/delta))
//   tournament_worst_select  the same against inverted outcomes
//   seebs                  exact best item via sequential elimination
//   seeks                  exact best-k via sequential elimination
//
// All logarithms are natural. Every routine draws its own randomness (pivot
// choice, shuffles) from the Rng it is given; comparison noise lives in the
// oracle.
#pragma once

#include <cstdint>
#include <vector>

#include "topk/core.hpp"
#include "topk/oracle.hpp"
#include "topk/rng.hpp"

namespace topk {

struct DiParams {
    double epsilon;
    double s_up = 0.0;
    double s_down = 0.0;
    double delta;
};

enum class Bucket { Up, Mid, Down };

struct Buckets {
    std::vector<ItemId> up, mid, down;

    std::size_t total() const noexcept { return up.size() + mid.size() + down.size(); }
    std::vector<ItemId>& operator[](Bucket b) { return b == Bucket::Up ? up : (b == Bucket::Mid ? mid : down); }
};

/// Hard cap on the per-call comparison budget; larger budgets mean epsilon is
/// too small for a feasible run.
inline constexpr std::uint64_t kMaxDiBudget = std::uint64_t{1} << 31;

/// ceil((2 / eps^2) * ln(4 / delta)). Throws Infeasible above kMaxDiBudget.
std::uint64_t di_budget(double epsilon, double delta);

/// Confidence radius after t comparisons: sqrt(ln(pi^2 t^2 / (3 delta)) / (2t)).
double di_radius(std::uint64_t t, double delta);

struct DiOutcome {
    Bucket bucket;
    std::uint64_t comparisons;
};

/// Compares i with pivot v until the empirical win rate clears a shifted
/// confidence band, or the budget runs out, and files i into one bucket.
DiOutcome distribute_item(ComparisonOracle& oracle, ItemId i, ItemId v, const DiParams& params, Buckets& buckets);

/// PAC k-selection by random pivoting. Returns an (epsilon,k)-optimal subset
/// of `items` with probability >= 1 - delta under SST and STI.
SelectionResult epsilon_quick_select(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k,
                                     double epsilon, double delta, Rng& rng);

/// Round-t tolerance (eps/4)(4/5)^t; the tolerances sum to eps.
double tks_tolerance(double epsilon, std::size_t round);
/// 6 delta / (pi^2 t^2); sums to delta over all rounds.
double round_confidence(double delta, std::size_t round);
/// Sizes of the contiguous groups of at most 2k a round splits `survivors` into.
std::vector<std::size_t> tks_group_sizes(std::size_t survivors, std::size_t k);

/// PAC k-selection as a knockout tournament. Accepts any 1 <= k <= |items|;
/// k == |items| returns immediately without comparisons.
SelectionResult tournament_k_select(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k,
                                    double epsilon, double delta, Rng& rng);

/// PAC worst-k selection: tournament_k_select against inverted outcomes.
SelectionResult tournament_worst_select(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k,
                                        double epsilon, double delta, Rng& rng);

/// alpha_t = 2^-t.
double elimination_tolerance(std::size_t round);

/// Exact best item with probability >= 1 - delta.
SelectionResult seebs(ComparisonOracle& oracle, const std::vector<ItemId>& items, double delta, Rng& rng);

enum class PacSelector { Tks, Eqs };

/// Exact best-k with probability >= 1 - delta. With PacSelector::Eqs the
/// per-round candidate set comes from epsilon_quick_select instead of the
/// tournament.
SelectionResult seeks(ComparisonOracle& oracle, const std::vector<ItemId>& items, std::size_t k, double delta,
                      Rng& rng, PacSelector selector = PacSelector::Tks);

}  // namespace topk
