#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "retailsim/random.hpp"

using namespace retailsim;

namespace {

double sample_mean(RngStream& s, const Distribution& d, int n) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += s.sample(d);
    return sum / n;
}

}  // namespace

TEST_SUITE("random") {

TEST_CASE("bernoulli extremes are deterministic") {
    RngStream s(7, "coin");
    for (int i = 0; i < 1000; ++i) {
        CHECK(s.sample(Distribution::bernoulli(0.0)) == 0.0);
        CHECK(s.sample(Distribution::bernoulli(1.0)) == 1.0);
        CHECK_FALSE(s.bernoulli(0.0));
        CHECK(s.bernoulli(1.0));
    }
}

TEST_CASE("exponential interarrival at 70 per hour has mean 60/70 minutes") {
    RngStream s(20070601, "arrivals");
    CHECK(std::abs(sample_mean(s, Distribution::exponential(60.0 / 70.0), 1'000'000) - 0.857) < 0.01);
}

TEST_CASE("triangular(1,3,8) has mean 4") {
    RngStream s(11, "tri");
    CHECK(std::abs(sample_mean(s, Distribution::triangular(1, 3, 8), 1'000'000) - 4.0) < 0.05);
}

TEST_CASE("triangular and uniform samples stay in their support") {
    RngStream s(3, "support");
    const auto tri = Distribution::triangular(2, 2, 5);  // mode at the lower edge
    const auto uni = Distribution::uniform(-1, 1);
    for (int i = 0; i < 100000; ++i) {
        const double x = s.sample(tri);
        CHECK((x >= 2.0 && x <= 5.0));
        const double y = s.sample(uni);
        CHECK((y >= -1.0 && y < 1.0));
    }
}

TEST_CASE("analytic means") {
    CHECK(Distribution::exponential(2.5).mean() == 2.5);
    CHECK(Distribution::uniform(2, 6).mean() == 4.0);
    CHECK(Distribution::triangular(1, 3, 8).mean() == 4.0);
    CHECK(Distribution::bernoulli(0.3).mean() == 0.3);
}

TEST_CASE("invalid parameters raise BadDistributionParams") {
    RngStream s(1, "bad");
    CHECK_THROWS_AS(s.sample(Distribution::exponential(0.0)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::exponential(-1.0)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::uniform(2, 1)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::triangular(1, 9, 8)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::triangular(3, 2, 8)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::bernoulli(1.5)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::bernoulli(-0.1)), BadDistributionParams);
    CHECK_THROWS_AS(s.sample(Distribution::exponential(std::nan(""))), BadDistributionParams);
    CHECK_THROWS_AS(s.below(0), BadDistributionParams);
}

TEST_CASE("a stream replays from (seed, name)") {
    RngStream a(99, "service");
    RngStream b(99, "service");
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform01() == b.uniform01());
}

TEST_CASE("draws on one stream do not perturb another") {
    RngStream a1(5, "a");
    RngStream b1(5, "b");
    RngStream b2(5, "b");
    std::vector<double> undisturbed;
    for (int i = 0; i < 100; ++i) undisturbed.push_back(b2.uniform01());
    std::vector<double> interleaved;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < i % 7; ++j) a1.uniform01();
        interleaved.push_back(b1.uniform01());
    }
    CHECK(interleaved == undisturbed);
}

TEST_CASE("distinct names and seeds give distinct streams") {
    RngStream a(5, "a"), b(5, "b"), c(6, "a");
    const double x = a.uniform01(), y = b.uniform01(), z = c.uniform01();
    CHECK(x != y);
    CHECK(x != z);
}

TEST_CASE("derive_seed separates levels and replications") {
    std::set<std::uint64_t> seen;
    for (double level : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (std::uint64_t rep = 0; rep < 50; ++rep) seen.insert(derive_seed(20070601, level, rep));
    }
    CHECK(seen.size() == 250);
    CHECK(derive_seed(1, 0.5, 3) == derive_seed(1, 0.5, 3));
    CHECK(derive_seed(1, 0.0, 0) != derive_seed(2, 0.0, 0));
    CHECK(derive_seed(1, "x") != derive_seed(1, "y"));
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("below stays in range and covers it") {
    RngStream s(8, "below");
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto v = s.below(7);
        REQUIRE(v < 7);
        ++hits[v];
    }
    for (int h : hits) CHECK(std::abs(h - 10000) < 500);
}

}  // TEST_SUITE
