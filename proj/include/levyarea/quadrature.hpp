#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "levyarea/errors.hpp"
#include "levyarea/kernels.hpp"

namespace levyarea {

/// Gauss-Legendre rule on (-1, 1). Weights sum to 2; exact for polynomials
/// of degree up to 2n-1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached Gauss-Legendre rule with n points (Newton iteration on P_n).
const QuadratureRule& gauss_legendre(int n);

/// Algebraic endpoint behaviour |x-a|^left, |b-x|^right of the integrand;
/// exponents must be > -1. Use nullopt in a slot for a regular endpoint.
struct EndpointExponents {
    std::optional<double> left;
    std::optional<double> right;
    EndpointExponents() = default;
    EndpointExponents(double l, double r) : left(l), right(r) {}
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct ComplexIntegrationResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (15 point) integration of f over [a, b].
/// Declared endpoint singularities get a geometrically graded initial mesh
/// (ratio 1/2 toward the endpoint, depth from the exponent). Panel budget
/// 2^14; ConvergenceError when exhausted.
///
/// The graded mesh resolves distances down to one ulp of the endpoint
/// value, so a singular endpoint away from 0 bottoms out near eps * |a|
/// (or eps * |b|); integrands with strong singularities at a non-zero
/// endpoint should be substituted so the singularity sits at 0, where the
/// full denormal range is available.
IntegrationResult integrate_1d(const std::function<double(double)>& f, double a,
                               double b, double tol,
                               const std::optional<EndpointExponents>& endpoints = {});

ComplexIntegrationResult
integrate_1d_complex(const std::function<Complex(double)>& f, double a, double b,
                     double tol,
                     const std::optional<EndpointExponents>& endpoints = {});

/// Symmetrically weighted Nystrom discretization M[i][j] =
/// sqrt(w_i) k(x_i, x_j) sqrt(w_j) of an integral operator on [0, t].
struct NystromOperator {
    std::vector<double> grid;
    std::vector<double> weights;
    Eigen::MatrixXd matrix;

    static NystromOperator
    build(const std::function<double(double, double)>& kernel, double t, int n_nodes,
          bool symmetric_kernel, int workers = 0);
};

/// Connected 2N-th moment of the regularized Levy area on [0, t]: the cyclic
/// integral of alternating K and K' kernels, evaluated as
/// trace((K_w K'_w)^N) with Nystrom matrices of k_real and kprime_real.
/// A warning stream entry is emitted when n_nodes < 8 t / eta.
double connected_moment_trace(const ModelParams& p, double t, int N, int n_nodes,
                              int workers = 0);

/// As above, with an (n, 2n) refinement check; ResolutionError if the two
/// resolutions differ by more than rel_tol in relative terms.
double connected_moment_trace_checked(const ModelParams& p, double t, int N,
                                      int n_nodes, double rel_tol, int workers = 0);

/// E[(A_{s,t}(eta))^2] by tensor quadrature: the N = 1 Wick pairing sum of
/// the derivative kernel against the increment covariance.
double second_moment_direct(const ModelParams& p, double s, double t,
                            int n_nodes = 1024, int workers = 0);

/// E[A_{s1,t1}(eta) A_{s2,t2}(eta)] by tensor quadrature (areas of the
/// unrescaled process over two intervals).
double area_covariance_quadrature(const ModelParams& p, double s1, double t1,
                                  double s2, double t2, int n_nodes = 1024,
                                  int workers = 0);

} // namespace levyarea
