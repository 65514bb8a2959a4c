#pragma once

#include "levyarea/special_functions.hpp"

namespace levyarea {

/// Global model configuration: Hurst-type exponent alpha in the singular
/// regime (0, 1/4) and the regularization height eta.
struct ModelParams {
    double alpha = 0.2;
    double eta = 0.1;

    /// Throws PreconditionError unless 0 < alpha < 1/4 and eta satisfies the
    /// stated lower bound (0 by default; pass strictly positive minimum for
    /// operations that diverge at eta = 0).
    void validate(double min_eta = 0.0) const;
};

/// Derivative-covariance kernel (sign +1 or -1):
///   K'^{+-}(eta; x, y) = alpha(1-2alpha)/(2 cos pi alpha) (+-i(x-y)+eta)^{2alpha-2}.
/// Requires eta > 0 (the diagonal is a pole at eta = 0).
Complex kprime_pm(const ModelParams& p, int sign, double x, double y);

/// Real combined kernel 2 Re K'^{+-}.
double kprime_real(const ModelParams& p, double x, double y);

/// Integrated kernel closed form:
///   K^{+-}(eta; x, y) = [(+-ix+eta)^{2a} + (-+iy+eta)^{2a} - (+-i(x-y)+eta)^{2a}]
///                       / (4 cos pi alpha).
/// Note the double integral of K' differs from this by the constant corner
/// term eta^{2alpha}/(4 cos pi alpha); see increment_covariance.
Complex k_pm(const ModelParams& p, int sign, double x, double y);

double k_real(const ModelParams& p, double x, double y);

/// K*^{+-}(eta; x, y) = -(+-i(x-y)+eta)^{2alpha} / (4 cos pi alpha).
Complex kstar_pm(const ModelParams& p, int sign, double x, double y);

double kstar_real(const ModelParams& p, double x, double y);

/// Cov(B_x - B_s, B_y - B_s) for the eta-regularized process with point
/// covariance k_real: the double difference
///   k(x,y) - k(s,y) - k(x,s) + k(s,s),
/// which equals the double integral of K' over [s,x] x [s,y].
double increment_covariance(const ModelParams& p, double s, double x, double y);

/// Analytic series basis on the upper half-plane:
///   f_k(z) = 2^{a-1} sqrt(a(1-2a)/(2 cos pi a))
///            sqrt((2-2a)_k / k!) ((z+i)/(2i))^{2a-2} ((z-i)/(z+i))^k.
/// The Pochhammer ratio is accumulated by recurrence in k. Requires
/// Im z > 0 (DomainError otherwise) and k >= 0.
Complex basis_fk(double alpha, int k, Complex z);

/// Partial sum S_K = sum_{k<=K} f_k(x + i eta/2) conj(f_k(y + i eta/2)),
/// which converges to K'^{-}(eta; x, y) as K grows.
Complex basis_fk_partial_sum(double alpha, double eta, double x, double y, int K);

/// fBm covariance (eta -> 0 limit of the model):
///   (|s|^{2a} + |t|^{2a} - |t-s|^{2a}) / 2.
double fbm_covariance(double alpha, double s, double t);

} // namespace levyarea
