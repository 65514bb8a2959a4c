#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levyarea/kernels.hpp"

namespace levyarea {

/// Uniform sampling grid on [t0, t1]. Paths of the eta-regularized process
/// are smooth at scale eta, so the grid step must satisfy step <= eta / 10.
struct TimeGrid {
    std::vector<double> points;
    double step = 0.0;

    static TimeGrid uniform(double t0, double t1, double step);

    /// Index of a grid-aligned time (GridError if off-grid).
    std::size_t index_of(double t) const;
};

enum class SampleMethod { cholesky, series };

inline const char* method_name(SampleMethod m) {
    return m == SampleMethod::cholesky ? "cholesky" : "series";
}

/// Seeded collection of sampled component paths. Columns of b1/b2 are paths,
/// rows grid points. Immutable after construction.
struct PathEnsemble {
    ModelParams params;
    TimeGrid grid;
    std::uint64_t seed = 0;
    int n_paths = 0;
    SampleMethod method = SampleMethod::cholesky;
    Eigen::MatrixXd b1; // grid x paths
    Eigen::MatrixXd b2;

    double value(int component, int path, std::size_t grid_index) const {
        const auto& m = component == 1 ? b1 : b2;
        return m(static_cast<Eigen::Index>(grid_index), path);
    }
};

/// Samples n_paths independent pairs (B1, B2) with per-component point
/// covariance k_real(eta; x_i, x_j).
///   cholesky: LLT of the covariance matrix with relative jitter escalation
///             1e-12 -> 1e-10 -> 1e-8 (CholeskyError beyond);
///   series:   truncated analytic basis sum 2 Re sum_k F_k(x + i eta/2) xi_k
///             with F_k the integral of the basis from 0 and xi_k standard
///             complex Gaussians (ConvergenceError if the tail bound needs
///             more than the term cap).
/// Reproducible: draw (seed, path, component, index) determines every normal
/// independently of thread count or evaluation order.
PathEnsemble sample_paths(const ModelParams& p, const TimeGrid& grid, int n_paths,
                          std::uint64_t seed, SampleMethod method, int workers = 0);

struct AreaSample {
    double s = 0.0;
    double t = 0.0;
    double value = 0.0;    // trapezoidal second-order integral over [s, t]
    double rescaled = 0.0; // eta^{(1-4 alpha)/2} * value
};

/// Per-path area over the grid-aligned window [s, t]: the trapezoidal
/// Stieltjes sum  sum_i (mid(B1)_i - B1(s)) (B2_{i+1} - B2_i), which
/// satisfies the pathwise splitting identity
///   A_{s,t} = A_{s,u} + A_{u,t} + (B1_u - B1_s)(B2_t - B2_u)
/// exactly for grid-aligned u.
std::vector<AreaSample> levy_area(const PathEnsemble& e, double s, double t);

/// Sample covariance of the rescaled areas over two grid-aligned windows.
double overlap_covariance(const PathEnsemble& e, double s1, double t1, double s2,
                          double t2);

/// Columnar little-endian binary cache (header, grid, then row-major doubles
/// per component).
void save_ensemble(const PathEnsemble& e, const std::string& path);
PathEnsemble load_ensemble(const std::string& path);

} // namespace levyarea
