// verify.hpp - ground-truth checks against a known preference matrix.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

/// Violating items with the matrix values that witness the violation.
struct Witness {
    std::vector<ItemId> items;
    std::vector<double> values;
    std::string reason;
};

struct Verdict {
    bool pass = true;
    std::optional<Witness> witness;  // present iff !pass

    explicit operator bool() const noexcept { return pass; }
    static Verdict ok() { return {}; }
    static Verdict fail(Witness w) { return {false, std::move(w)}; }
};

/// |u| == k, and p(i,j) >= 1/2 - epsilon for every i in u, j not in u.
/// Witness: the minimizing cross pair (i, j) with value p(i,j).
/// Throws WrongSize for an empty, oversized or repeated/out-of-range set.
Verdict is_eps_k_optimal(const PreferenceInstance& inst, const ItemSet& u, double epsilon);

/// u equals the true best-k set. Throws NotStrictOrder.
Verdict is_exact_best_k(const PreferenceInstance& inst, const ItemSet& u, std::size_t k);

/// Triple scans are O(n^3). Above `exhaustive_max_n` they throw TooLarge
/// unless `sample_large` is set, in which case `samples` random triples drawn
/// from `seed` are checked instead (a pass is then not a proof).
struct ValidateOptions {
    std::size_t exhaustive_max_n = 2000;
    bool sample_large = false;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

/// Strong stochastic transitivity. Witness: the offending pair / triple.
Verdict validate_sst(const PreferenceInstance& inst, const ValidateOptions& opts = {});

/// Stochastic triangle inequality over all triples. Witness: the triple with
/// the largest violation, values (gap_il, gap_ij, gap_jl).
Verdict validate_sti(const PreferenceInstance& inst, const ValidateOptions& opts = {});

struct GammaReport {
    Verdict verdict;
    /// Smallest gamma >= 1 for which both relaxed conditions hold (may be +inf).
    double min_gamma = 1.0;
    /// "tournament" when the matrix has a strict total order, else "borda".
    std::string order;
};

/// gamma-relaxed SST/STI over i > j > l: p(i,l) >= max(p(i,j), p(j,l)) / gamma
/// and gap(i,l) <= gamma * (gap(i,j) + gap(j,l)). The order is the tournament
/// order when one exists, otherwise the Borda ranking. Throws NotStrictOrder
/// when some off-diagonal p equals 1/2.
GammaReport validate_gamma(const PreferenceInstance& inst, double gamma, const ValidateOptions& opts = {});

/// Rounds to 6 significant digits, as reported.
double round_sig6(double x);

struct BruteForceResult {
    ItemSet best;
    std::uint64_t subsets_enumerated = 0;
};

inline constexpr std::size_t kBruteForceMaxN = 12;

/// Enumerates every k-subset and keeps the one maximizing the minimum cross
/// probability (lowest bitmask on ties). Throws TooLarge for n > 12.
BruteForceResult best_k_bruteforce(const PreferenceInstance& inst, std::size_t k);

}  // namespace topk
