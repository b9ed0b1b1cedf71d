#include <doctest.h>

#include <cmath>

#include "causalcast/common.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/student_t.hpp"

using namespace causalcast;

TEST_CASE("softplus and digamma basics") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(softplus(50.0) == doctest::Approx(50.0));
    CHECK(softplus(-50.0) == doctest::Approx(std::exp(-50.0)));

    // digamma against central differences of lgamma
    for (double x : {0.3, 1.0, 2.5, 7.0, 42.0}) {
        double eps = 1e-6;
        double fd = (std::lgamma(x + eps) - std::lgamma(x - eps)) / (2 * eps);
        CHECK(digamma(x) == doctest::Approx(fd).epsilon(1e-7));
    }
    // psi(1) = -euler_gamma
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
}

TEST_CASE("student t nll matches the Cauchy closed form at the mode") {
    DistParams cauchy{0.0, 1.0, 1.0};
    CHECK(student_t_nll(0.0, cauchy) == doctest::Approx(std::log(3.141592653589793)).epsilon(1e-12));
    CHECK(student_t_nll(0.0, cauchy) == doctest::Approx(1.1447298858494002).epsilon(1e-12));
}

TEST_CASE("nll gradient in mu vanishes at the mode") {
    DistParams p{2.5, 1.7, 5.0};
    CHECK(student_t_nll_grad(2.5, p).dmu == doctest::Approx(0.0));
}

TEST_CASE("large nu approaches the Gaussian nll") {
    DistParams p{0.0, 1.0, 1e6};
    CHECK(student_t_nll(0.0, p) == doctest::Approx(0.9189385332046727).epsilon(1e-3));
    CHECK(gaussian_nll(0.0, DistParams{0.0, 1.0, 0.0}) ==
          doctest::Approx(0.9189385332046727).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences") {
    Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        DistParams p;
        p.mu = 4.0 * rng.next_normal();
        p.sigma = 0.3 + 3.0 * rng.next_double();
        p.nu = 2.1 + 8.0 * rng.next_double();
        double y = p.mu + 5.0 * rng.next_normal();
        for (bool gaussian : {false, true}) {
            HeadType head = gaussian ? HeadType::gaussian : HeadType::student_t;
            DistGrad g = nll_grad(y, p, head);
            const double eps = 1e-6;
            auto at = [&](double mu, double sigma, double nu) {
                return nll(y, DistParams{mu, sigma, nu}, head);
            };
            double fd_mu = (at(p.mu + eps, p.sigma, p.nu) - at(p.mu - eps, p.sigma, p.nu)) /
                           (2 * eps);
            double fd_sigma = (at(p.mu, p.sigma + eps, p.nu) - at(p.mu, p.sigma - eps, p.nu)) /
                              (2 * eps);
            double fd_nu = (at(p.mu, p.sigma, p.nu + eps) - at(p.mu, p.sigma, p.nu - eps)) /
                           (2 * eps);
            CHECK(g.dmu == doctest::Approx(fd_mu).epsilon(1e-5));
            CHECK(g.dsigma == doctest::Approx(fd_sigma).epsilon(1e-5));
            CHECK(g.dnu == doctest::Approx(fd_nu).epsilon(1e-5));
        }
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(student_t_nll(0.0, DistParams{0.0, 0.0, 3.0}), DomainError);
    CHECK_THROWS_AS(student_t_nll(0.0, DistParams{0.0, -1.0, 3.0}), DomainError);
    CHECK_THROWS_AS(student_t_nll(0.0, DistParams{0.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("sampling matches distribution moments") {
    DistParams p{3.0, 2.0, 8.0};
    Rng rng(12345);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = sample(p, HeadType::student_t, rng);
        sum += v;
        sq += v * v;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.01));
    // variance = sigma^2 * nu / (nu - 2) = 4 * 8/6
    CHECK(var == doctest::Approx(4.0 * 8.0 / 6.0).epsilon(0.05));

    Rng rng2(999);
    sum = sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = sample(p, HeadType::gaussian, rng2);
        sum += v;
        sq += v * v;
    }
    mean = sum / n;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.01));
    CHECK(sq / n - mean * mean == doctest::Approx(4.0).epsilon(0.05));
}
