#pragma once

namespace hiereval {

// Regularized incomplete beta function I_x(a, b), continued-fraction form.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value for a t statistic with df degrees of freedom.
double t_test_two_sided(double t, double df);

}  // namespace hiereval
