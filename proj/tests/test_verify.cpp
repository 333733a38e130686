#include <catch_amalgamated.hpp>

#include <cmath>

#include "support/reference.hpp"
#include "topk/ingest.hpp"
#include "topk/oracle.hpp"
#include "topk/verify.hpp"

using namespace topk;
using Catch::Approx;

namespace {

std::vector<double> random_scores(Rng& rng, std::size_t n) {
    std::vector<double> theta(n);
    for (auto& t : theta) t = 0.05 + rng.uniform();
    return theta;
}

// 0 > 1 > 2 with p(0,2) below p(0,1).
const PreferenceInstance kWeakSst = PreferenceInstance::from_upper(3, [](auto i, auto j) {
    if (i == 0 && j == 1) return 0.6;
    if (i == 0 && j == 2) return 0.55;
    return 0.6;
});

const PreferenceInstance kNoSti = PreferenceInstance::from_upper(3, [](auto i, auto j) {
    if (i == 0 && j == 2) return 0.95;
    return 0.6;
});

}  // namespace

TEST_CASE("eps-k optimality examples") {
    const auto eg = equal_gap_instance(5, 0.6);
    for (double eps : {0.0, 0.01, 0.3}) CHECK(is_eps_k_optimal(eg, {0, 1}, eps).pass);
    const auto v = is_eps_k_optimal(eg, {0, 4}, 0.05);
    REQUIRE_FALSE(v.pass);
    REQUIRE(v.witness);
    CHECK(v.witness->values[0] == Approx(0.4));
    CHECK(v.witness->items[0] == 4);
    CHECK_THROWS_AS(is_eps_k_optimal(eg, {}, 0.1), Error);
    CHECK_THROWS_AS(is_eps_k_optimal(eg, {1, 1}, 0.1), Error);
    CHECK_THROWS_AS(is_eps_k_optimal(eg, {7}, 0.1), Error);
}

TEST_CASE("eps-k optimality agrees with the naive definition") {
    Rng rng(1);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 2 + rng.below(7);
        const auto inst = mnl_instance(random_scores(rng, n));
        const std::size_t k = 1 + rng.below(n);
        const double eps = rng.uniform() * 0.2;
        for (const auto& u : ref::combinations(n, k))
            CHECK(is_eps_k_optimal(inst, u, eps).pass == ref::eps_k_optimal(inst, u, eps));
    }
}

TEST_CASE("every k-subset is 1/2-optimal") {
    Rng rng(2);
    const auto inst = mnl_instance(random_scores(rng, 7));
    for (const auto& u : ref::combinations(7, 3)) CHECK(is_eps_k_optimal(inst, u, 0.5).pass);
}

TEST_CASE("exact best-k examples") {
    const auto inst = mnl_instance({6, 5, 4, 3, 2, 1});
    CHECK(is_exact_best_k(inst, {0, 1, 2}, 3).pass);
    const auto swapped = is_exact_best_k(inst, {0, 1, 3}, 3);
    CHECK_FALSE(swapped.pass);
    CHECK(swapped.witness->items == std::vector<ItemId>{2, 3});
    CHECK_THROWS_AS(is_exact_best_k(PreferenceInstance(2, std::vector<double>(4, 0.5)), {0}, 1), Error);
}

TEST_CASE("exact implies eps-optimal, and small eps forces exactness") {
    Rng rng(3);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 3 + rng.below(6);
        const auto inst = mnl_instance(random_scores(rng, n));
        const std::size_t k = 1 + rng.below(n - 1);
        const auto top = true_best_k(inst, k);
        for (double eps : {0.0, 0.05, 0.4}) CHECK(is_eps_k_optimal(inst, top, eps).pass);

        const auto r = ranking_of(inst);
        double min_gap = 1.0;
        for (std::size_t pos = k; pos < n; ++pos) min_gap = std::min(min_gap, pair_gap(inst, r[pos], r[k - 1]));
        const double eps = min_gap * 0.999;
        for (const auto& u : ref::combinations(n, k))
            if (is_eps_k_optimal(inst, u, eps).pass) CHECK(is_exact_best_k(inst, u, k).pass);
    }
}

TEST_CASE("SST examples") {
    CHECK(validate_sst(equal_gap_instance(6, 0.6)).pass);
    CHECK(validate_sst(PreferenceInstance(1, {0.5})).pass);
    const auto v = validate_sst(kWeakSst);
    REQUIRE_FALSE(v.pass);
    CHECK(v.witness->items == std::vector<ItemId>{0, 1, 2});
    // cycle
    const PreferenceInstance cyc(3, {0.5, 0.6, 0.4, 0.4, 0.5, 0.6, 0.6, 0.4, 0.5});
    const auto c = validate_sst(cyc);
    REQUIRE_FALSE(c.pass);
    CHECK(c.witness->items.size() == 3);
    CHECK_FALSE(validate_sst(PreferenceInstance(2, std::vector<double>(4, 0.5))).pass);
}

TEST_CASE("STI examples") {
    CHECK(validate_sti(equal_gap_instance(6, 0.6)).pass);
    CHECK(validate_sti(PreferenceInstance(1, {0.5})).pass);
    const auto v = validate_sti(kNoSti);
    REQUIRE_FALSE(v.pass);
    CHECK(v.witness->items == std::vector<ItemId>{0, 1, 2});
    CHECK(v.witness->values[0] == Approx(0.45));
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> theta(6);
        for (auto& t : theta) t = rng.uniform();
        CHECK(validate_sti(thurstone_instance(theta, 1.0)).pass);
    }
}

TEST_CASE("witnesses reproduce from the matrix") {
    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + rng.below(5);
        const auto inst = PreferenceInstance::from_upper(n, [&](auto, auto) { return 0.02 + 0.96 * rng.uniform(); });
        const auto sst = validate_sst(inst);
        if (!sst.pass && sst.witness->items.size() == 3 && sst.witness->reason != "preference cycle") {
            const auto& w = *sst.witness;
            CHECK(w.values == std::vector<double>{inst(w.items[0], w.items[2]), inst(w.items[0], w.items[1]),
                                                  inst(w.items[1], w.items[2])});
            CHECK(w.values[0] < std::max(w.values[1], w.values[2]));
        }
        if (!sst.pass && sst.witness->reason == "preference cycle") {
            const auto& w = *sst.witness;
            CHECK(w.values == std::vector<double>{inst(w.items[0], w.items[1]), inst(w.items[1], w.items[2]),
                                                  inst(w.items[2], w.items[0])});
            for (double p : w.values) CHECK(p > 0.5);
        }
        const auto sti = validate_sti(inst);
        if (!sti.pass) {
            const auto& w = *sti.witness;
            const ItemId i = w.items[0], j = w.items[1], l = w.items[2];
            CHECK(w.values == std::vector<double>{pair_gap(inst, i, l), pair_gap(inst, i, j), pair_gap(inst, j, l)});
            CHECK(w.values[0] > w.values[1] + w.values[2]);
        }
        const auto eps = is_eps_k_optimal(inst, {0}, 0.0);
        if (!eps.pass) CHECK(eps.witness->values[0] == inst(eps.witness->items[0], eps.witness->items[1]));
    }
}

TEST_CASE("gamma relaxation") {
    Rng rng(6);
    for (int rep = 0; rep < 30; ++rep) {
        const auto inst = mnl_instance(random_scores(rng, 8));
        REQUIRE(validate_sst(inst).pass);
        REQUIRE(validate_sti(inst).pass);
        const auto g = validate_gamma(inst, 1.0);
        CHECK(g.verdict.pass);
        CHECK(g.min_gamma == 1.0);
        CHECK(g.order == "tournament");
    }
    const auto weak = validate_gamma(kWeakSst, 1.0);
    CHECK_FALSE(weak.verdict.pass);
    CHECK(weak.min_gamma == Approx(0.6 / 0.55).epsilon(1e-5));
    CHECK(validate_gamma(kWeakSst, weak.min_gamma + 1e-4).verdict.pass);
    const auto sti = validate_gamma(kNoSti, 1.0);
    CHECK(sti.min_gamma == Approx(0.45 / 0.2).epsilon(1e-5));
    CHECK_THROWS_AS(validate_gamma(kNoSti, 0.5), Error);
    CHECK_THROWS_AS(validate_gamma(PreferenceInstance(2, std::vector<double>(4, 0.5)), 2.0), Error);
}

TEST_CASE("gamma 1000 passes everywhere it is finite") {
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        const auto inst =
            PreferenceInstance::from_upper(6, [&](auto, auto) { return 0.05 + 0.9 * rng.uniform(); });
        const auto g = validate_gamma(inst, 1000.0);
        CHECK(g.verdict.pass == (g.min_gamma <= 1000.0));
    }
    CHECK(validate_gamma(kWeakSst, 1000.0).verdict.pass);
    CHECK(validate_gamma(kNoSti, 1000.0).verdict.pass);
    CHECK(validate_gamma(equal_gap_instance(5, 0.6), 1000.0).verdict.pass);
    const auto inst = to_preference_instance(read_pwg_file(std::string(TOPK_TEST_DATA) + "/nonsst.pwg"));
    CHECK(validate_gamma(inst, 1000.0).verdict.pass);
}

TEST_CASE("gamma on a cyclic instance uses the Borda order") {
    const auto inst = to_preference_instance(read_pwg_file(std::string(TOPK_TEST_DATA) + "/nonsst.pwg"));
    const auto g = validate_gamma(inst, 5.0);
    CHECK(g.order == "borda");
    CHECK(g.min_gamma > 1.0);
    CHECK(std::isfinite(g.min_gamma));
}

TEST_CASE("six significant digits") {
    CHECK(round_sig6(1.23456789) == 1.23457);
    CHECK(round_sig6(0.000123456789) == Approx(0.000123457).epsilon(1e-12));
    CHECK(round_sig6(0.0) == 0.0);
}

TEST_CASE("brute force best-k") {
    const auto bf = best_k_bruteforce(equal_gap_instance(4, 0.6), 2);
    CHECK(bf.best == ItemSet{0, 1});
    CHECK(bf.subsets_enumerated == 6);
    CHECK(best_k_bruteforce(equal_gap_instance(6, 0.6), 2).best == ItemSet{0, 1});
    CHECK_THROWS_AS(best_k_bruteforce(equal_gap_instance(13, 0.6), 2), Error);
    Rng rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.below(7);
        const auto inst = mnl_instance(random_scores(rng, n));
        const std::size_t k = 1 + rng.below(n);
        CHECK(best_k_bruteforce(inst, k).best == true_best_k(inst, k));
    }
}

TEST_CASE("large instances need sampling") {
    const auto inst = equal_gap_instance(30, 0.6);
    ValidateOptions opts;
    opts.exhaustive_max_n = 20;
    CHECK_THROWS_AS(validate_sst(inst, opts), Error);
    CHECK_THROWS_AS(validate_sti(inst, opts), Error);
    opts.sample_large = true;
    opts.samples = 5000;
    CHECK(validate_sst(inst, opts).pass);
    CHECK(validate_sti(inst, opts).pass);
    CHECK(validate_gamma(inst, 1.0, opts).verdict.pass);
    const auto bad = PreferenceInstance::from_upper(30, [](auto i, auto j) { return (i == 0 && j == 29) ? 0.95 : 0.6; });
    opts.samples = 200000;
    CHECK_FALSE(validate_sti(bad, opts).pass);
}
