#ifndef CAUSALCAST_STUDENT_T_HPP
#define CAUSALCAST_STUDENT_T_HPP

#include "causalcast/rng.hpp"

namespace causalcast {

enum class HeadType { student_t, gaussian };

// Location-scale Student's t parameters. The network head constrains
// sigma > 0 and nu > 2; the density functions themselves only require
// sigma > 0 and nu > 0 (the Cauchy case is a legitimate density).
struct DistParams {
    double mu = 0.0;
    double sigma = 1.0;
    double nu = 3.0;
};

struct DistGrad {
    double dmu = 0.0;
    double dsigma = 0.0;
    double dnu = 0.0;
};

double softplus(double x);
double digamma(double x);

// Negative log density of the location-scale Student's t at y.
double student_t_nll(double y, const DistParams& p);
DistGrad student_t_nll_grad(double y, const DistParams& p);

// Gaussian negative log density; nu is ignored and its gradient is zero.
double gaussian_nll(double y, const DistParams& p);
DistGrad gaussian_nll_grad(double y, const DistParams& p);

double nll(double y, const DistParams& p, HeadType head);
DistGrad nll_grad(double y, const DistParams& p, HeadType head);

double sample(const DistParams& p, HeadType head, Rng& rng);

}  // namespace causalcast

#endif
