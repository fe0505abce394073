#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "modsample/core.hpp"

using namespace modsample;

TEST_CASE("centered_modulo fixed points and folds") {
    CHECK(centered_modulo(0.5, 1.0) == 0.5);
    CHECK(centered_modulo(1.5, 1.0) == -0.5);
    CHECK(centered_modulo(-3.0, 1.0) == -1.0);
    // half-open boundary: x = lambda maps to -lambda
    CHECK(centered_modulo(1.0, 1.0) == -1.0);
    CHECK(centered_modulo(-1.0, 1.0) == -1.0);
}

TEST_CASE("centered_modulo rejects bad arguments") {
    CHECK_THROWS_AS(centered_modulo(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(centered_modulo(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(centered_modulo(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(centered_modulo(INFINITY, 1.0), std::invalid_argument);
}

TEST_CASE("centered_modulo range, periodicity, idempotence") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-50.0, 50.0);
    std::uniform_real_distribution<double> lams(0.1, 4.0);
    std::uniform_int_distribution<int> ks(-20, 20);
    for (int i = 0; i < 5000; ++i) {
        const double lam = lams(rng);
        const double x = xs(rng);
        const double m = centered_modulo(x, lam);
        CHECK(m >= -lam);
        CHECK(m < lam);
        CHECK(centered_modulo(m, lam) == m);
        const int k = ks(rng);
        const double shifted = centered_modulo(x + 2.0 * lam * k, lam);
        CHECK_THAT(shifted, Catch::Matchers::WithinAbs(m, 1e-9 * std::max(1.0, std::abs(x))));
    }
}

TEST_CASE("decompose splits folds exactly") {
    SampleSeq g{{0.2, -0.7}, 1.0};
    auto d = decompose(g, 1.0);
    CHECK(d.y.values == std::vector<double>{0.2, -0.7});
    CHECK(d.eps == SimpleFn{0, 0});

    auto d2 = decompose(SampleSeq{{2.5}, 1.0}, 1.0);
    CHECK(d2.y.values[0] == 0.5);
    CHECK(d2.eps[0] == 1);

    auto d3 = decompose(SampleSeq{{-4.0}, 1.0}, 1.0);
    CHECK(d3.y.values[0] == 0.0);
    CHECK(d3.eps[0] == -2);
}

TEST_CASE("recompose inverts decompose") {
    CHECK(recompose(SampleSeq{{0.5}, 0}, {1}, 1.0).values[0] == 2.5);
    CHECK(recompose(SampleSeq{{0.3}, 0}, {0}, 1.0).values[0] == 0.3);
    CHECK_THROWS_AS(recompose(SampleSeq{{0.5, 0.1}, 0}, {1}, 1.0), std::invalid_argument);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(-20.0, 20.0);
    SampleSeq g;
    for (int i = 0; i < 1000; ++i) g.values.push_back(xs(rng));
    const auto d = decompose(g, 1.0);
    const auto back = recompose(d.y, d.eps, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(g.values[i]));
        CHECK(std::abs(back.values[i] - g.values[i]) <= tol);
    }
}

TEST_CASE("oversampling_factor") {
    CHECK_THAT(oversampling_factor(102400, 1500), Catch::Matchers::WithinAbs(34.1333, 5e-4));
    CHECK_THAT(oversampling_factor(102400, 2500), Catch::Matchers::WithinAbs(20.48, 1e-9));
    CHECK(oversampling_factor(2000, 1000) == 1.0);
    CHECK_THROWS_AS(oversampling_factor(0, 100), std::invalid_argument);
    CHECK_THROWS_AS(oversampling_factor(100, 0), std::invalid_argument);
}

TEST_CASE("diff basics") {
    CHECK(diff(std::vector<double>{1, 2, 4}, 1) == std::vector<double>{1, 2});
    CHECK(diff(std::vector<double>{1, 2, 4}, 2) == std::vector<double>{1});
    CHECK(diff(std::vector<double>{3, 3, 3, 3}, 1) == std::vector<double>{0, 0, 0});
    CHECK_THROWS_AS(diff(std::vector<double>{1, 2}, 2), std::invalid_argument);
}

TEST_CASE("antidiff basics") {
    CHECK(antidiff(std::vector<double>{1, 1, 1}, 1) == std::vector<double>{0, 1, 2, 3});
    CHECK(antidiff(std::vector<double>{0, 0}, 2) == std::vector<double>{0, 0, 0, 0});
    const std::vector<double> x{2.5, -1.0, 4.0, 4.5};
    CHECK(antidiff(diff(x, 1), 1, {x[0]}) == x);
}

TEST_CASE("diff and antidiff invert each other at every order") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> vals(-50, 50);
    for (int order = 1; order <= 4; ++order) {
        std::vector<double> d(40);
        for (auto& v : d) v = vals(rng);
        CHECK(diff(antidiff(d, order), order) == d);
    }
    // float inputs round-trip to a few ulps
    std::uniform_real_distribution<double> fs(-2.0, 2.0);
    std::vector<double> d(40);
    for (auto& v : d) v = fs(rng);
    const auto round_trip = diff(antidiff(d, 3), 3);
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK_THAT(round_trip[i], Catch::Matchers::WithinAbs(d[i], 1e-10));
}
