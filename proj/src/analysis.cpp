#include "levyarea/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyarea/parallel.hpp"
#include "levyarea/special_functions.hpp"

namespace levyarea {

double c_irr(int N, double alpha) {
    if (N < 1) throw PreconditionError("c_irr: N must be >= 1");
    if (!(alpha > 0.0 && alpha < 0.25))
        throw PreconditionError("c_irr: alpha must be in (0, 1/4)");
    const double cosa = std::cos(M_PI * alpha);
    const double kernel_coeff = alpha * (1.0 - 2.0 * alpha) / cosa;
    const double base = (M_PI / 2.0) / (cosa * gamma_real(-2.0 * alpha));
    return kernel_coeff * std::pow(base, 2.0 * (N - 1)) * std::sin(M_PI * alpha) *
           gamma_real(2.0 * alpha + 1.0) / gamma_real(2.0 - 2.0 * alpha) *
           gamma_real(1.0 - 4.0 * alpha * N) *
           std::pow(2.0 * N, 4.0 * alpha * N - 1.0);
}

double predicted_moment(int N, double alpha, double t, double eta) {
    if (N < 1) throw PreconditionError("predicted_moment: N must be >= 1");
    double dfact = 1.0;
    for (int k = 2 * N - 1; k > 1; k -= 2) dfact *= k;
    return dfact * std::pow(c_irr(1, alpha), N) * std::pow(t, N) *
           std::pow(eta, (4.0 * alpha - 1.0) * N);
}

namespace {

// least squares for y ~ X beta via normal equations (tiny systems only)
std::vector<double> lstsq(const std::vector<std::vector<double>>& X,
                          const std::vector<double>& y) {
    const std::size_t n = X.size(), m = X.front().size();
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        b(static_cast<Eigen::Index>(i)) = y[i];
        for (std::size_t j = 0; j < m; ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X[i][j];
    }
    Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
    return {sol.data(), sol.data() + sol.size()};
}

} // namespace

std::pair<double, double> estimate_regular_part(
    const std::vector<std::pair<double, double>>& pairs, double exponent) {
    if (pairs.size() < 2)
        throw PreconditionError("estimate_regular_part: need at least 2 points");
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (auto [eta, v] : pairs) {
        X.push_back({1.0, std::pow(eta, exponent)});
        y.push_back(v);
    }
    auto beta = lstsq(X, y);
    return {beta[0], beta[1]};
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& pairs,
                       double regular_estimate) {
    if (pairs.size() < 3)
        throw PreconditionError("fit_scaling: need at least 3 etas");
    double emin = pairs.front().first, emax = emin;
    ScalingFit fit;
    fit.regular_estimate = regular_estimate;
    std::vector<double> lx, ly;
    for (auto [eta, v] : pairs) {
        emin = std::min(emin, eta);
        emax = std::max(emax, eta);
        const double sing = v - regular_estimate;
        if (!(sing > 0.0))
            throw FitError("fit_scaling: singular part not positive after "
                           "subtracting the regular estimate");
        fit.etas.push_back(eta);
        fit.values.push_back(v);
        lx.push_back(std::log(eta));
        ly.push_back(std::log(sing));
    }
    if (emax / emin < 4.0)
        throw PreconditionError("fit_scaling: etas must span a factor >= 4");
    const auto n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < lx.size(); ++i)
        fit.residual = std::max(fit.residual,
                                std::abs(ly[i] - fit.intercept - fit.slope * lx[i]));
    fit.singular_coeff = std::exp(fit.intercept);
    return fit;
}

ScalingFit fit_scaling_structured(const std::vector<std::pair<double, double>>& pairs,
                                  int N, double alpha) {
    const double exponent = 4.0 * N * alpha - 1.0;
    auto [r2, s2] = estimate_regular_part(pairs, exponent);
    ScalingFit fit = fit_scaling(pairs, r2);
    // coefficient from the richer regular model with the known correction
    // exponents of the moment expansion
    if (pairs.size() >= 4) {
        std::vector<std::vector<double>> X;
        std::vector<double> y;
        for (auto [eta, v] : pairs) {
            X.push_back({1.0, std::pow(eta, 2.0 * alpha), std::pow(eta, 4.0 * alpha),
                         std::pow(eta, exponent)});
            y.push_back(v);
        }
        fit.singular_coeff = lstsq(X, y)[3];
    } else {
        fit.singular_coeff = s2;
    }
    return fit;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TestReport ks_gaussian_test(const std::vector<double>& samples, double variance) {
    if (samples.size() < 500)
        throw PreconditionError("ks_gaussian_test: need n >= 500");
    if (!(variance > 0.0))
        throw PreconditionError("ks_gaussian_test: variance must be positive");
    std::vector<double> s = samples;
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    const double sd = std::sqrt(variance);
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = normal_cdf(s[i] / sd);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, f - lo, hi - f});
    }
    TestReport r;
    r.statistic = d;
    r.threshold = 1.63 / std::sqrt(n);
    r.pass = r.statistic <= r.threshold;
    r.n = static_cast<int>(s.size());
    return r;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw PreconditionError("correlation: need two equal columns, n >= 2");
    const auto n = a.size();
    std::vector<double> va(a), vb(b);
    const double ma = tree_sum(va) / static_cast<double>(n);
    const double mb = tree_sum(vb) / static_cast<double>(n);
    std::vector<double> pab(n), paa(n), pbb(n);
    for (std::size_t i = 0; i < n; ++i) {
        pab[i] = (a[i] - ma) * (b[i] - mb);
        paa[i] = (a[i] - ma) * (a[i] - ma);
        pbb[i] = (b[i] - mb) * (b[i] - mb);
    }
    const double denom = std::sqrt(tree_sum(paa) * tree_sum(pbb));
    if (denom == 0.0) throw PreconditionError("correlation: zero variance column");
    return tree_sum(pab) / denom;
}

TestReport independence_test(const PathEnsemble& e,
                             const std::vector<AreaSample>& areas,
                             const std::vector<IncrementSpec>& increments) {
    if (areas.size() < 500)
        throw PreconditionError("independence_test: need n >= 500");
    std::vector<double> col(areas.size());
    for (std::size_t i = 0; i < areas.size(); ++i) col[i] = areas[i].rescaled;
    double worst = 0.0;
    for (const auto& inc : increments) {
        const std::size_t is = e.grid.index_of(inc.s);
        const std::size_t it = e.grid.index_of(inc.t);
        std::vector<double> incr(areas.size());
        for (std::size_t p = 0; p < areas.size(); ++p)
            incr[p] = e.value(inc.component, static_cast<int>(p), it) -
                      e.value(inc.component, static_cast<int>(p), is);
        bool identical = true;
        for (std::size_t p = 0; p < areas.size() && identical; ++p)
            identical = incr[p] == col[p];
        if (identical)
            throw PreconditionError("independence_test: increment column identical to "
                                    "the area column (self-correlation guard)");
        worst = std::max(worst, std::abs(correlation(col, incr)));
    }
    TestReport r;
    r.statistic = worst;
    r.threshold = 3.0 / std::sqrt(static_cast<double>(areas.size()));
    r.pass = r.statistic <= r.threshold;
    r.n = static_cast<int>(areas.size());
    return r;
}

TestReport exp_moment_check(const std::vector<double>& rescaled_samples,
                            const std::vector<double>& lambdas, double t_minus_s,
                            double alpha, double eta, double c0) {
    if (!(alpha > 0.125 && alpha < 0.25))
        throw RangeError("exp_moment_check: requires alpha in (1/8, 1/4)");
    if (rescaled_samples.empty() || lambdas.empty())
        throw PreconditionError("exp_moment_check: empty input");
    (void)eta;
    const double c1 = c_irr(1, alpha);
    double worst = 0.0;
    for (double lam : lambdas) {
        std::vector<double> ex(rescaled_samples.size());
        for (std::size_t i = 0; i < ex.size(); ++i)
            ex[i] = std::exp(lam * rescaled_samples[i]);
        const double emp = tree_sum(ex) / static_cast<double>(ex.size());
        const double bound = c0 * std::exp(0.5 * c1 * t_minus_s * lam * lam);
        worst = std::max(worst, emp / bound);
    }
    TestReport r;
    r.statistic = worst;
    r.threshold = 1.0;
    r.pass = worst <= 1.0;
    r.n = static_cast<int>(rescaled_samples.size());
    return r;
}

} // namespace levyarea
