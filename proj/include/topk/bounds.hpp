// bounds.hpp - sample-complexity expressions for PAC and exact k-selection.
//
// Asymptotic forms evaluated with unit constants and natural logarithms. The
// values are growth-rate curves, not comparison counts.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

struct BoundQuery {
    std::size_t n = 0;
    std::size_t k = 1;
    double epsilon = 0.0;
    double delta = 0.0;
    GapVector gaps;  // exact-selection bounds only
};

/// GapVector with every item gap equal to `gap`, ranking 0 > 1 > ... > n-1.
GapVector uniform_gaps(std::size_t n, std::size_t k, double gap);

/// ln ln(1/gap), clamped at 0 once gap >= 1/e.
double loglog_inverse(double gap);

/// n eps^-2 ln(k/delta).
double pac_lower_bound(const BoundQuery& q);
/// sum_i gap_i^-2 ln(1/delta) + lnln(1/gap_{r_k}).
double exact_lower_bound(const BoundQuery& q);
/// sum_{i != r_1} gap_i^-2 (ln(1/delta) + lnln(1/gap_i)).
double seebs_upper_bound(const BoundQuery& q);
/// sum_i gap_i^-2 (ln(n/delta) + lnln(1/gap_i)).
double seeks_upper_bound(const BoundQuery& q);

struct GrowthRow {
    std::size_t n;
    double lower, upper_k1, upper_kgt1;
};

std::vector<GrowthRow> growth_table(double gap, double delta, std::size_t k, const std::vector<std::size_t>& n_grid);

/// Grid syntax: "a,b,c" | "start:stop:step" | "start:stop:log[:count]"
/// (count defaults to 10, points rounded and deduplicated).
std::vector<std::size_t> parse_n_grid(const std::string& spec);

std::string growth_table_csv(const std::vector<GrowthRow>& rows);

}  // namespace topk
