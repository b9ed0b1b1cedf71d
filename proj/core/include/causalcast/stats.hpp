#ifndef CAUSALCAST_STATS_HPP
#define CAUSALCAST_STATS_HPP

#include <vector>

namespace causalcast {

enum class TestMode { exact, normal_approx, automatic };

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;  // two-sided
};

// Wilcoxon signed-rank test of symmetry about zero. Zeros are dropped,
// ties get midranks. Exact mode enumerates the sign-pattern distribution
// (n <= 25); the normal approximation applies a tie-corrected variance and
// a continuity correction.
TestResult wilcoxon_signed_rank(const std::vector<double>& sample,
                                TestMode mode = TestMode::automatic);

// Mann-Whitney rank-sum test; statistic is U for the first sample. Exact
// mode enumerates rank assignments (n_a + n_b <= 20).
TestResult rank_sum(const std::vector<double>& a, const std::vector<double>& b,
                    TestMode mode = TestMode::automatic);

double normal_cdf(double x);

}  // namespace causalcast

#endif
