#pragma once

namespace adt {

// Special-function kernel for the gamma-process machinery. All functions are
// pure and thread-safe; domain violations throw std::domain_error, overflow
// throws std::range_error.

// log Gamma(s), s > 0.
double ln_gamma(double s);

// psi(s) = d ln Gamma / ds, s > 0.
double digamma(double s);

// psi_1(s) = d^2 ln Gamma / ds^2, s > 0.
double trigamma(double s);

// Upper regularized incomplete gamma Q(s, z) = Gamma(s, z) / Gamma(s),
// s > 0, z >= 0. Increasing in s, decreasing in z.
double reg_gamma_q(double s, double z);

// Solves Q(s, z) = alpha for the shape s, given z > 0 and alpha in (0, 1).
// Bracketing bisection on the monotone map s -> Q(s, z).
double inv_reg_gamma_q_shape(double alpha, double z);

// 2F2(a, a; a+1, a+1; -z) for a > 0, z >= 0, by direct alternating series
// with compensated summation. The series cancels heavily for large z, so it
// is accumulated in extended precision.
double hyp2f2_reg(double a, double z);

// dQ(s, z)/ds in closed form:
//   Gamma(s)/Gamma(s+1)^2 z^s 2F2(s,s;s+1,s+1;-z) + (Q(s,z)-1)(ln z - psi(s))
// with the gamma-ratio factor evaluated in log space.
double dq_dshape(double s, double z);

}  // namespace adt
