#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "causalcast/common.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/stats.hpp"

using namespace causalcast;

namespace {

// Test-side oracles, written independently of the library: direct loops
// over every sign pattern / rank assignment.

std::vector<double> oracle_midranks(std::vector<double> v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k)
            ranks[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
        i = j + 1;
    }
    return ranks;
}

double oracle_signed_rank_p(const std::vector<double>& sample) {
    std::vector<double> x;
    for (double v : sample)
        if (v != 0.0) x.push_back(v);
    std::vector<double> abs_x;
    for (double v : x) abs_x.push_back(std::abs(v));
    auto ranks = oracle_midranks(abs_x);
    double W = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0) W += ranks[i];
    const std::size_t n = x.size();
    long ge = 0, le = 0;
    const long total = 1L << n;
    for (long mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1L << i)) w += ranks[i];
        if (w >= W - 1e-12) ++ge;
        if (w <= W + 1e-12) ++le;
    }
    double p = 2.0 * std::min(static_cast<double>(ge) / static_cast<double>(total),
                              static_cast<double>(le) / static_cast<double>(total));
    return std::min(1.0, p);
}

double oracle_rank_sum_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    auto ranks = oracle_midranks(pooled);
    const std::size_t na = a.size(), N = pooled.size();
    double ra = 0.0;
    for (std::size_t i = 0; i < na; ++i) ra += ranks[i];
    double U = ra - static_cast<double>(na * (na + 1)) / 2.0;

    long ge = 0, le = 0, total = 0;
    std::vector<char> pick(N, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(na), 1);
    std::sort(pick.begin(), pick.end());  // lowest permutation
    do {
        double rs = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            if (pick[i]) rs += ranks[i];
        double u = rs - static_cast<double>(na * (na + 1)) / 2.0;
        ++total;
        if (u >= U - 1e-9) ++ge;
        if (u <= U + 1e-9) ++le;
    } while (std::next_permutation(pick.begin(), pick.end()));
    double p = 2.0 * std::min(static_cast<double>(ge), static_cast<double>(le)) /
               static_cast<double>(total);
    return std::min(1.0, p);
}

}  // namespace

TEST_CASE("signed rank matches the [1,2,3] enumeration") {
    auto r = wilcoxon_signed_rank({1.0, 2.0, 3.0}, TestMode::exact);
    CHECK(r.statistic == doctest::Approx(6.0));
    CHECK(r.p_value == doctest::Approx(0.25));
}

TEST_CASE("perfectly balanced pairs give p = 1") {
    auto r = wilcoxon_signed_rank({2.5, -2.5}, TestMode::exact);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("all-zero samples are degenerate") {
    CHECK_THROWS_AS(wilcoxon_signed_rank({0.0, 0.0, 0.0}), StatError);
    CHECK_THROWS_AS(wilcoxon_signed_rank({}), StatError);
}

TEST_CASE("zeros are dropped before ranking") {
    auto with_zeros = wilcoxon_signed_rank({0.0, 1.0, 2.0, 0.0, 3.0}, TestMode::exact);
    auto without = wilcoxon_signed_rank({1.0, 2.0, 3.0}, TestMode::exact);
    CHECK(with_zeros.statistic == doctest::Approx(without.statistic));
    CHECK(with_zeros.p_value == doctest::Approx(without.p_value));
}

TEST_CASE("signed rank exact mode equals brute-force enumeration for n <= 12") {
    Rng rng(2024);
    for (std::size_t n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<double> sample;
            for (std::size_t i = 0; i < n; ++i) {
                double v = rng.next_normal() + 0.3;
                if (rep % 3 == 0) v = std::round(v * 2.0) / 2.0;  // force ties
                if (v == 0.0) v = 0.5;
                sample.push_back(v);
            }
            auto r = wilcoxon_signed_rank(sample, TestMode::exact);
            CHECK(r.p_value == doctest::Approx(oracle_signed_rank_p(sample)).epsilon(1e-12));
        }
    }
}

TEST_CASE("signed rank normal approximation tracks the exact tail") {
    // n = 20 all-positive: both p-values are tiny and within 0.02
    std::vector<double> allpos;
    for (int i = 1; i <= 20; ++i) allpos.push_back(static_cast<double>(i));
    auto exact = wilcoxon_signed_rank(allpos, TestMode::exact);
    auto approx = wilcoxon_signed_rank(allpos, TestMode::normal_approx);
    CHECK(std::abs(exact.p_value - approx.p_value) < 0.02);

    Rng rng(5150);
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t n = 10 + rng.next_index(11);
        std::vector<double> sample;
        for (std::size_t i = 0; i < n; ++i) sample.push_back(rng.next_normal() + 0.4);
        auto e = wilcoxon_signed_rank(sample, TestMode::exact);
        auto a = wilcoxon_signed_rank(sample, TestMode::normal_approx);
        CHECK(std::abs(e.p_value - a.p_value) < 0.02);
    }
}

TEST_CASE("signed rank p is invariant under sample permutation") {
    std::vector<double> sample{1.5, -0.3, 2.2, 0.7, -1.1, 0.9};
    auto base = wilcoxon_signed_rank(sample, TestMode::exact);
    std::sort(sample.begin(), sample.end());
    auto sorted = wilcoxon_signed_rank(sample, TestMode::exact);
    CHECK(base.p_value == doctest::Approx(sorted.p_value));
}

TEST_CASE("rank sum matches the [1,2] vs [3,4] enumeration") {
    auto r = rank_sum({1.0, 2.0}, {3.0, 4.0}, TestMode::exact);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("identical samples are exchangeable") {
    auto r = rank_sum({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, TestMode::exact);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("complete separation at n=10 per arm is decisive") {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) {
        a.push_back(static_cast<double>(i));
        b.push_back(100.0 + i);
    }
    auto r = rank_sum(a, b, TestMode::exact);
    CHECK(r.p_value < 0.001);
}

TEST_CASE("rank sum exact mode equals brute-force enumeration") {
    Rng rng(31337);
    for (int rep = 0; rep < 40; ++rep) {
        std::size_t na = 2 + rng.next_index(4);
        std::size_t nb = 2 + rng.next_index(4);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) a.push_back(rng.next_normal());
        for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.next_normal() + 0.5);
        if (rep % 3 == 0) {
            for (double& v : a) v = std::round(v);
            for (double& v : b) v = std::round(v);
        }
        auto r = rank_sum(a, b, TestMode::exact);
        CHECK(r.p_value == doctest::Approx(oracle_rank_sum_p(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("rank sum normal approximation tracks the exact p for 10 <= N <= 20") {
    Rng rng(808);
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t na = 5 + rng.next_index(6);
        std::size_t nb = 5 + rng.next_index(6);
        if (na + nb > 20) continue;
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) a.push_back(rng.next_normal());
        for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.next_normal() + 0.6);
        auto e = rank_sum(a, b, TestMode::exact);
        auto ap = rank_sum(a, b, TestMode::normal_approx);
        CHECK(std::abs(e.p_value - ap.p_value) < 0.02);
    }
}

TEST_CASE("rank tests are invariant under strictly monotone transforms") {
    std::vector<double> a{0.1, 0.4, 0.9, 1.4}, b{0.2, 0.8, 1.9, 2.5, 3.0};
    auto base = rank_sum(a, b, TestMode::exact);
    auto mono = [](double v) { return std::exp(3.0 * v) - 2.0; };
    std::vector<double> ta, tb;
    for (double v : a) ta.push_back(mono(v));
    for (double v : b) tb.push_back(mono(v));
    auto after = rank_sum(ta, tb, TestMode::exact);
    CHECK(base.statistic == doctest::Approx(after.statistic));
    CHECK(base.p_value == doctest::Approx(after.p_value));
}

TEST_CASE("exact modes enforce their size limits") {
    std::vector<double> big(26, 1.0);
    CHECK_THROWS_AS(wilcoxon_signed_rank(big, TestMode::exact), StatError);
    std::vector<double> a(11, 1.0), b(10, 2.0);
    CHECK_THROWS_AS(rank_sum(a, b, TestMode::exact), StatError);
    CHECK_THROWS_AS(rank_sum({}, {1.0}), StatError);
}
