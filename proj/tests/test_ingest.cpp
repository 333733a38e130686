#include <catch_amalgamated.hpp>

#include <numeric>

#include "topk/ingest.hpp"
#include "topk/oracle.hpp"
#include "topk/rng.hpp"
#include "topk/verify.hpp"

using namespace topk;
using Catch::Approx;

namespace {

const std::string kData = TOPK_TEST_DATA;

ErrorKind parse_error(std::string_view text, std::string* msg = nullptr) {
    try {
        parse_pwg(text);
    } catch (const Error& e) {
        if (msg) *msg = e.what();
        return e.kind();
    }
    FAIL("parse did not throw");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("parse a two-candidate file") {
    const auto doc = read_pwg_file(kData + "/tiny.pwg");
    CHECK(doc.n == 2);
    CHECK(doc.labels == std::vector<std::string>{"Left", "Right"});
    CHECK(doc.totals == std::vector<std::int64_t>{40, 40, 2});
    CHECK(doc.count(0, 1) == 30);
    CHECK(doc.count(1, 0) == 10);
    CHECK(to_preference_instance(doc)(0, 1) == 0.75);
}

TEST_CASE("metadata header layout parses to the same counts") {
    const auto a = read_pwg_file(kData + "/tiny.pwg");
    const auto b = read_pwg_file(kData + "/tiny_meta.pwg");
    CHECK(b.n == 2);
    CHECK(b.labels == a.labels);
    CHECK(b.counts == a.counts);
    CHECK(b.totals == std::vector<std::int64_t>{40, 2});
}

TEST_CASE("whitespace, blank lines and repeated records") {
    const auto doc = parse_pwg("  3 \r\n1, A\n\n2,B\n3,C  \n 9,9,3\n 4 , 1 , 2 \n1,1,2\n5,3,1\n");
    CHECK(doc.n == 3);
    CHECK(doc.labels[2] == "C");
    CHECK(doc.count(0, 1) == 5);
    CHECK(doc.count(2, 0) == 5);
    CHECK(doc.count(1, 2) == 0);
}

TEST_CASE("parse errors carry kinds and line numbers") {
    std::string msg;
    CHECK(parse_error("", &msg) == ErrorKind::MalformedLine);
    CHECK(parse_error("two\n") == ErrorKind::MalformedLine);
    CHECK(parse_error("2\n1,A\n") == ErrorKind::MalformedLine);
    CHECK(parse_error("2\n1,A\n3,B\n1,1,1\n") == ErrorKind::IndexOutOfRange);
    CHECK(parse_error("2\n1,A\n2,B\n1,1,1\n5,1\n", &msg) == ErrorKind::MalformedLine);
    CHECK(msg.find("line 5") != std::string::npos);
    CHECK(parse_error("2\n1,A\n2,B\n1,1,1\n2.5,1,2\n", &msg) == ErrorKind::NonIntegerCount);
    CHECK(msg.find("line 5") != std::string::npos);
    CHECK(parse_error("2\n1,A\n2,B\n1,1,1\n-3,1,2\n") == ErrorKind::NonIntegerCount);
    CHECK(parse_error("2\n1,A\n2,B\n1,1,1\n3,1,3\n") == ErrorKind::IndexOutOfRange);
    CHECK(parse_error("2\n1,A\n2,B\n1,1,1\n3,2,2\n") == ErrorKind::IndexOutOfRange);
}

TEST_CASE("serialize then parse round-trips") {
    for (const char* f : {"/tiny.pwg", "/nonsst.pwg", "/tiny_meta.pwg"}) {
        const auto doc = read_pwg_file(kData + f);
        CHECK(parse_pwg(serialize_pwg(doc)) == doc);
    }
}

TEST_CASE("missing pairs follow the policy") {
    const auto doc = parse_pwg("3\n1,A\n2,B\n3,C\n1,1,1\n3,1,2\n1,2,1\n17,2,3\n17,3,2\n");
    try {
        to_preference_instance(doc);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingPair);
    }
    const auto inst = to_preference_instance(doc, MissingPolicy::Half);
    CHECK(inst(0, 2) == 0.5);
    CHECK(inst(1, 2) == 0.5);
    CHECK_FALSE(inst.strict());
    CHECK(missing_policy_from_string("half") == MissingPolicy::Half);
    CHECK_THROWS_AS(missing_policy_from_string("drop"), Error);
}

TEST_CASE("Borda scores") {
    const auto eg = borda_ranking(equal_gap_instance(3, 0.6));
    CHECK(eg.scores[0] == Approx(0.6));
    CHECK(eg.scores[1] == Approx(0.5));
    CHECK(eg.scores[2] == Approx(0.4));
    CHECK(eg.ranking.order == std::vector<ItemId>{0, 1, 2});

    const PreferenceInstance flat(4, std::vector<double>(16, 0.5));
    const auto fb = borda_ranking(flat);
    CHECK(fb.ranking.order == std::vector<ItemId>{0, 1, 2, 3});
    for (double s : fb.scores) CHECK(s == 0.5);
}

TEST_CASE("Borda scores sum to n/2") {
    Rng rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng.below(15);
        const auto inst = PreferenceInstance::from_upper(n, [&](auto, auto) { return rng.uniform(); });
        const auto b = borda_ranking(inst);
        const double sum = std::accumulate(b.scores.begin(), b.scores.end(), 0.0);
        CHECK(sum == Approx(n / 2.0).margin(1e-9));
    }
}

TEST_CASE("Borda ranking equals the tournament order on MNL instances") {
    Rng rng(10);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.below(19);
        std::vector<double> theta(n);
        for (auto& t : theta) t = 0.05 + rng.uniform();
        const auto inst = mnl_instance(theta);
        CHECK(borda_ranking(inst).ranking == ranking_of(inst));
    }
}

TEST_CASE("synthetic non-SST election") {
    const auto doc = read_pwg_file(kData + "/nonsst.pwg");
    const auto inst = to_preference_instance(doc);
    CHECK(inst.size() == 6);
    CHECK_FALSE(validate_sst(inst).pass);
    CHECK_FALSE(validate_sti(inst).pass);
    CHECK_THROWS_AS(ranking_of(inst), Error);
    CHECK(borda_ranking(inst).ranking.order == std::vector<ItemId>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("instance JSON round-trip") {
    const auto inst = mnl_instance({3, 1, 2});
    const auto j = instance_to_json(inst, {"a", "b", "c"});
    CHECK(j.at("n") == 3);
    CHECK(j.at("labels")[1] == "b");
    CHECK(instance_from_json(j) == inst);
    CHECK_THROWS_AS(instance_from_json(nlohmann::json{{"n", 2}, {"p", {{0.5, 0.7}}}}), Error);
}
