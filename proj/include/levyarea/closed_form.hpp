#pragma once

#include "levyarea/special_functions.hpp"

namespace levyarea {

/// Exponent pair of the master integrals. beta2 > -1 is required for
/// integrability at b; asymptotic statements additionally need
/// beta1 + beta2 + 1 < 0 (validated only where used).
struct PowerPair {
    double beta1 = 0.0;
    double beta2 = 0.0;
};

/// Arguments of the master integrals over [0, t]: complex insertion points
/// a, b with 0 < Re a < t, 0 < Re b < t and Im b <= 0. The minus-type
/// integral additionally needs Im a < Im b, the plus-type Im a > 0.
struct IntegralArgs {
    double t = 1.0;
    Complex a{0.0, 0.0};
    Complex b{0.0, 0.0};
};

/// Building block
///   Phi(b1,b2;s)(a,b) = (-i(s-b))^{b1+b2+1}
///                       2F1(-b1, -b1-b2-1; -b1-b2; (a-b)/(s-b)),
/// for s in {0, t}, with the equivalent regional expansions around a/b (for
/// s = 0) or (t-a)/(t-b) (for s = t). Region thresholds c = 0.9, C = 1.1;
/// in the bands adjacent to the thresholds both expressions are evaluated
/// and cross-checked to 1e-8 in debug builds.
Complex phi_block(const PowerPair& pp, double s, const IntegralArgs& args);

/// Closed form of int_0^t (-i(u-a))^{b1} (-i(u-b))^{b2} du on the domain
/// Im a < Im b <= 0:
///   I- = i/(b1+b2+1) [Phi(b1,b2;t) - Phi(b1,b2;0)].
Complex i_minus(const PowerPair& pp, const IntegralArgs& args);

/// Closed form of int_0^t (i(u-a))^{b1} (-i(u-b))^{b2} du for Im a > 0:
///   I+ = i/(b1+b2+1) [e^{i pi b1} Phi(t) - e^{-i pi b1} Phi(0)]
///        - Gamma(b2+1)Gamma(-b1-b2-1)/Gamma(-b1) 2 sin(pi b2)
///          (i(b-a))^{b1+b2+1}.
/// The last term carries the non-analytic divergence as a -> b.
Complex i_plus(const PowerPair& pp, const IntegralArgs& args);

/// Coefficient of the iterated non-analytic power term:
///   C_n = (1/2pi) (pi/2 / (cos(pi a) Gamma(-2a)))^{2n}
///         sin(pi a) Gamma(2a+1) Gamma(-2a - 4an).
double c_n_coeff(int n, double alpha);

/// n-times iterated integral of u -> u^beta (-i(z-u))^{2 alpha - 2}:
///   F_n(alpha,beta;t;z) = int_0^t (t-u)^n/n! u^beta (-i(z-u))^{2a-2} du,
/// continued analytically off the upper half-plane. Two regional closed
/// forms (interior |z| < t and exterior), selected by |z/t| and cut
/// position.
Complex f_n_appendix(double alpha, double beta, int n, double t, Complex z);

} // namespace levyarea
