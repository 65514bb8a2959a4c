#pragma once

#include <complex>

#include "levyarea/errors.hpp"

namespace levyarea {

using Complex = std::complex<double>;

/// z^beta = exp(beta log z) with the principal determination of the
/// logarithm, Arg z in (-pi, pi). Defined on the cut plane C \ R_-.
/// For z = 0: returns 0 for beta > 0 and 1 for beta = 0.
/// Throws BranchCutError on the cut and for z = 0 with beta < 0.
Complex principal_power(Complex z, double beta);

/// Euler gamma for real argument. Lanczos rational approximation on
/// [0.5, inf), reflection formula below. Throws PoleError at non-positive
/// integers (within 1e-12 of one).
double gamma_real(double x);

/// 1/Gamma(x); equals 0 at the poles of Gamma instead of throwing.
double reciprocal_gamma(double x);

struct Hyp2F1Params {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    /// Tolerance for the integer-distance degeneracy guard on parameter
    /// differences used by the connection formulas.
    double degeneracy_tol = 1e-6;
};

/// Gauss hypergeometric 2F1(a,b;c;z) for real parameters and complex z on
/// the cut plane C \ [1, inf). Maclaurin series inside |z| <= 0.7,
/// connection formulas in the transformed arguments 1-z, 1/z and 1/(1-z)
/// elsewhere. Series truncation: absolute tail bound below 1e-14 times the
/// running partial sum, hard cap 10000 terms (ConvergenceError beyond).
Complex hyp2f1(const Hyp2F1Params& p, Complex z);

/// Test oracle: the Euler integral representation
///   Gamma(c)/(Gamma(b)Gamma(c-b)) int_0^1 t^{b-1}(1-t)^{c-b-1}(1-tz)^{-a} dt,
/// valid for c > b > 0, evaluated with adaptive quadrature with declared
/// endpoint exponents. Independent of the series/connection path.
Complex hyp2f1_integral_oracle(const Hyp2F1Params& p, Complex z, double tol = 1e-10);

namespace detail {

/// Evaluation route through a single fixed expression, used by the
/// connection-consistency tests. The route must converge at the given z.
enum class Hyp2F1Route { direct, one_minus_z, inv_z, inv_one_minus_z };

Complex hyp2f1_via(Hyp2F1Route route, const Hyp2F1Params& p, Complex z);

/// Plain Maclaurin sum, |z| < 1 (or terminating); no region switching. The
/// safe path when huge parameters make the connection-formula gamma
/// coefficients ill-conditioned.
Complex hyp2f1_maclaurin(double a, double b, double c, Complex z);

/// Distance from x to the nearest integer.
double integer_distance(double x);

} // namespace detail

} // namespace levyarea
