#include "causalcast/student_t.hpp"

#include <cmath>

#include "causalcast/common.hpp"

namespace causalcast {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

void check_location_scale(const DistParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.mu))
        throw DomainError("invalid distribution parameters");
}

void check(const DistParams& p) {
    check_location_scale(p);
    if (!(p.nu > 0.0)) throw DomainError("invalid distribution parameters");
}
}  // namespace

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

double digamma(double x) {
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 -
                                      inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return result;
}

double student_t_nll(double y, const DistParams& p) {
    check(p);
    double z = (y - p.mu) / p.sigma;
    double half_nu = 0.5 * p.nu;
    return -std::lgamma(half_nu + 0.5) + std::lgamma(half_nu) + 0.5 * std::log(p.nu * kPi) +
           std::log(p.sigma) + (half_nu + 0.5) * std::log1p(z * z / p.nu);
}

DistGrad student_t_nll_grad(double y, const DistParams& p) {
    check(p);
    double z = (y - p.mu) / p.sigma;
    double z2 = z * z;
    double denom = p.nu + z2;
    DistGrad g;
    g.dmu = -(p.nu + 1.0) * z / (p.sigma * denom);
    g.dsigma = 1.0 / p.sigma - (p.nu + 1.0) * z2 / (p.sigma * denom);
    g.dnu = -0.5 * digamma(0.5 * (p.nu + 1.0)) + 0.5 * digamma(0.5 * p.nu) + 0.5 / p.nu +
            0.5 * std::log1p(z2 / p.nu) - (p.nu + 1.0) * z2 / (2.0 * p.nu * denom);
    return g;
}

double gaussian_nll(double y, const DistParams& p) {
    check_location_scale(p);
    double z = (y - p.mu) / p.sigma;
    return 0.5 * std::log(2.0 * kPi) + std::log(p.sigma) + 0.5 * z * z;
}

DistGrad gaussian_nll_grad(double y, const DistParams& p) {
    check_location_scale(p);
    double z = (y - p.mu) / p.sigma;
    DistGrad g;
    g.dmu = -z / p.sigma;
    g.dsigma = (1.0 - z * z) / p.sigma;
    g.dnu = 0.0;
    return g;
}

double nll(double y, const DistParams& p, HeadType head) {
    return head == HeadType::student_t ? student_t_nll(y, p) : gaussian_nll(y, p);
}

DistGrad nll_grad(double y, const DistParams& p, HeadType head) {
    return head == HeadType::student_t ? student_t_nll_grad(y, p) : gaussian_nll_grad(y, p);
}

double sample(const DistParams& p, HeadType head, Rng& rng) {
    if (head == HeadType::gaussian) {
        check_location_scale(p);
        return p.mu + p.sigma * rng.next_normal();
    }
    check(p);
    return p.mu + p.sigma * rng.next_student_t(p.nu);
}

}  // namespace causalcast
