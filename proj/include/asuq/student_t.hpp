#pragma once

namespace asuq {

// I_x(a, b) by modified Lentz continued fraction. Accurate to ~1e-14 for moderate a, b.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);

/// Inverse of student_t_cdf by bracketing and bisection on the CDF;
/// absolute error below 1e-8 over p in [1e-10, 1 - 1e-10], dof >= 1.
double student_t_quantile(double p, double dof);

double normal_cdf(double z);

}  // namespace asuq
