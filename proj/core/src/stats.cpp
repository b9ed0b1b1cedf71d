#include "causalcast/stats.hpp"

#include <algorithm>
#include <cmath>

#include "causalcast/common.hpp"

namespace causalcast {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488016887242097); }

namespace {

// Midranks (1-based) of v; also reports tie-group sizes.
std::vector<double> midranks(const std::vector<double>& v, std::vector<std::size_t>& tie_sizes) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    tie_sizes.clear();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        double rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
        tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }
    return ranks;
}

double two_sided(double p_low, double p_high) {
    return std::min(1.0, 2.0 * std::min(p_low, p_high));
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t N) {
    const std::size_t k = comb.size();
    for (std::size_t i = k; i-- > 0;) {
        if (comb[i] < N - k + i) {
            ++comb[i];
            for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<double>& sample, TestMode mode) {
    std::vector<double> x;
    for (double v : sample)
        if (v != 0.0) x.push_back(v);
    if (x.empty()) throw StatError("signed-rank: degenerate sample (all zeros or empty)");
    const std::size_t n = x.size();

    std::vector<double> abs_x(n);
    for (std::size_t i = 0; i < n; ++i) abs_x[i] = std::abs(x[i]);
    std::vector<std::size_t> ties;
    std::vector<double> ranks = midranks(abs_x, ties);

    double W = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > 0.0) W += ranks[i];

    TestMode m = mode;
    if (m == TestMode::automatic) m = n <= 25 ? TestMode::exact : TestMode::normal_approx;

    TestResult res;
    res.statistic = W;
    if (m == TestMode::exact) {
        if (n > 25) throw StatError("signed-rank: exact mode limited to n <= 25");
        // Distribution of W over all 2^n sign patterns, via subset-sum
        // counting on doubled ranks (midranks are half-integers).
        std::vector<long long> r2(n);
        long long total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r2[i] = std::llround(2.0 * ranks[i]);
            total += r2[i];
        }
        std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
        ways[0] = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (long long s = total; s >= r2[i]; --s)
                ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r2[i])];
        const double denom = std::pow(2.0, static_cast<double>(n));
        long long w2 = std::llround(2.0 * W);
        double p_ge = 0.0, p_le = 0.0;
        for (long long s = 0; s <= total; ++s) {
            if (s >= w2) p_ge += ways[static_cast<std::size_t>(s)];
            if (s <= w2) p_le += ways[static_cast<std::size_t>(s)];
        }
        res.p_value = two_sided(p_le / denom, p_ge / denom);
    } else {
        const double nd = static_cast<double>(n);
        double mean = nd * (nd + 1.0) / 4.0;
        double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
        for (std::size_t t : ties) {
            double td = static_cast<double>(t);
            var -= (td * td * td - td) / 48.0;
        }
        if (var <= 0.0) {
            res.p_value = 1.0;
            return res;
        }
        double diff = W - mean;
        double cc = diff > 0.0 ? -0.5 : (diff < 0.0 ? 0.5 : 0.0);
        double z = (diff + cc) / std::sqrt(var);
        res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    }
    return res;
}

TestResult rank_sum(const std::vector<double>& a, const std::vector<double>& b, TestMode mode) {
    if (a.empty() || b.empty()) throw StatError("rank-sum: empty sample");
    const std::size_t na = a.size(), nb = b.size(), N = na + nb;

    std::vector<double> pooled;
    pooled.reserve(N);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::size_t> ties;
    std::vector<double> ranks = midranks(pooled, ties);

    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];
    const double U = rank_sum_a - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;

    TestMode m = mode;
    if (m == TestMode::automatic) m = N <= 20 ? TestMode::exact : TestMode::normal_approx;

    TestResult res;
    res.statistic = U;
    if (m == TestMode::exact) {
        if (N > 20) throw StatError("rank-sum: exact mode limited to n_a + n_b <= 20");
        // Enumerate all C(N, na) assignments of the pooled midranks.
        std::vector<std::size_t> comb(na);
        for (std::size_t i = 0; i < na; ++i) comb[i] = i;
        double count_le = 0.0, count_ge = 0.0, count_total = 0.0;
        const double eps = 1e-9;
        do {
            double rs = 0.0;
            for (std::size_t i : comb) rs += ranks[i];
            double u = rs - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
            count_total += 1.0;
            if (u <= U + eps) count_le += 1.0;
            if (u >= U - eps) count_ge += 1.0;
        } while (next_combination(comb, N));
        res.p_value = two_sided(count_le / count_total, count_ge / count_total);
    } else {
        const double nad = static_cast<double>(na), nbd = static_cast<double>(nb);
        const double Nd = static_cast<double>(N);
        double mean = nad * nbd / 2.0;
        double tie_term = 0.0;
        for (std::size_t t : ties) {
            double td = static_cast<double>(t);
            tie_term += td * td * td - td;
        }
        double var = nad * nbd / 12.0 * ((Nd + 1.0) - tie_term / (Nd * (Nd - 1.0)));
        if (var <= 0.0) {
            res.p_value = 1.0;
            return res;
        }
        double diff = U - mean;
        double cc = diff > 0.0 ? -0.5 : (diff < 0.0 ? 0.5 : 0.0);
        double z = (diff + cc) / std::sqrt(var);
        res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    }
    return res;
}

}  // namespace causalcast
