#include "levyarea/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "levyarea/parallel.hpp"
#include "levyarea/rng.hpp"
#include "levyarea/special_functions.hpp"

namespace levyarea {

static_assert(std::endian::native == std::endian::little,
              "ensemble cache assumes a little-endian host");

TimeGrid TimeGrid::uniform(double t0, double t1, double step) {
    if (!(t1 > t0) || !(step > 0.0))
        throw PreconditionError("TimeGrid: need t1 > t0 and step > 0");
    TimeGrid g;
    g.step = step;
    const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / step));
    if (std::abs(t0 + static_cast<double>(n) * step - t1) > 1e-9 * std::max(1.0, std::abs(t1)))
        throw GridError("TimeGrid: interval length is not a multiple of step");
    g.points.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.points[i] = t0 + static_cast<double>(i) * step;
    g.points.back() = t1;
    return g;
}

std::size_t TimeGrid::index_of(double t) const {
    const double rel = (t - points.front()) / step;
    const auto i = static_cast<long long>(std::llround(rel));
    if (i < 0 || i >= static_cast<long long>(points.size()) ||
        std::abs(points[static_cast<std::size_t>(i)] - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw GridError("TimeGrid: time " + std::to_string(t) + " is not on the grid");
    return static_cast<std::size_t>(i);
}

namespace {

Eigen::MatrixXd covariance_matrix(const ModelParams& p, const std::vector<double>& x,
                                  int workers) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd c(n, n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i; j < static_cast<std::size_t>(n); ++j)
                c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    k_real(p, x[i], x[j]);
        }
    });
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) c(i, j) = c(j, i);
    return c;
}

Eigen::MatrixXd cholesky_factor(Eigen::MatrixXd cov) {
    const double scale = cov.diagonal().maxCoeff();
    for (double jitter : {1e-12, 1e-10, 1e-8}) {
        Eigen::MatrixXd work = cov;
        work.diagonal().array() += jitter * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(work);
        if (llt.info() == Eigen::Success)
            return llt.matrixL();
    }
    throw CholeskyError("sample_paths: covariance not factorizable even with "
                        "relative jitter 1e-8");
}

void sample_cholesky(PathEnsemble& e, int workers) {
    const auto& x = e.grid.points;
    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::MatrixXd L = cholesky_factor(covariance_matrix(e.params, x, workers));
    for (int component = 1; component <= 2; ++component) {
        Eigen::MatrixXd& b = component == 1 ? e.b1 : e.b2;
        b.resize(n, e.n_paths);
        parallel_for(static_cast<std::size_t>(e.n_paths), workers,
                     [&](std::size_t lo, std::size_t hi) {
                         Eigen::VectorXd z(n);
                         for (std::size_t path = lo; path < hi; ++path) {
                             for (Eigen::Index i = 0; i < n; ++i)
                                 z(i) = gaussian_draw(e.seed, path,
                                                      static_cast<std::uint32_t>(component),
                                                      static_cast<std::uint64_t>(i));
                             b.col(static_cast<Eigen::Index>(path)).noalias() =
                                 L.triangularView<Eigen::Lower>() * z;
                         }
                     });
    }
}

// Antiderivative of the basis through the Cayley variable w = (z-i)/(z+i):
//   int_0^z f_k = 2i c_k int_{-1}^{w(z)} t^k (1-t)^{-2 alpha} dt,
// with the Euler-form primitive J_k(w) = w^{k+1}/(k+1) 2F1(2a, k+1; k+2; w).
// The plain Maclaurin sum converges for every |w| < 1 and avoids the
// large-parameter gamma coefficients of the transformed expansions.
Complex fk_primitive(double alpha, int k, Complex w) {
    Complex wk{1.0, 0.0};
    for (int j = 0; j <= k; ++j) wk *= w;
    return wk / static_cast<double>(k + 1) *
           detail::hyp2f1_maclaurin(2.0 * alpha, k + 1.0, k + 2.0, w);
}

void sample_series(PathEnsemble& e, int workers) {
    const double alpha = e.params.alpha;
    const double eta = e.params.eta;
    const auto& x = e.grid.points;
    const auto n = static_cast<Eigen::Index>(x.size());
    const Complex zi{0.0, 1.0};

    std::vector<Complex> w(n);
    double rho = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex z{x[j], eta / 2.0};
        w[j] = (z - zi) / (z + zi);
        rho = std::max(rho, std::abs(w[j]));
    }

    const double scale = std::pow(2.0, alpha - 1.0) *
                         std::sqrt(alpha * (1.0 - 2.0 * alpha) /
                                   (2.0 * std::cos(M_PI * alpha)));
    constexpr int kTermCap = 20000;
    constexpr double kTailTol = 1e-8;

    // basis columns F_k(x_j + i eta/2) - F_k(x_0 + i eta/2)
    std::vector<std::vector<Complex>> cols;
    double sqrt_ratio = 1.0;
    int K = -1;
    for (int k = 0; k < kTermCap; ++k) {
        if (k > 0) sqrt_ratio *= std::sqrt((1.0 - 2.0 * alpha + k) / static_cast<double>(k));
        const double ck = scale * sqrt_ratio;
        const double bound =
            2.0 * ck * std::pow(rho, k + 1) / ((k + 1) * (1.0 - rho));
        if (bound < kTailTol && k > 8) {
            K = k;
            break;
        }
        std::vector<Complex> col(n);
        const Complex base = fk_primitive(alpha, k, w[0]);
        for (Eigen::Index j = 0; j < n; ++j)
            col[static_cast<std::size_t>(j)] =
                2.0 * zi * ck * (fk_primitive(alpha, k, w[j]) - base);
        cols.push_back(std::move(col));
    }
    if (K < 0)
        throw ConvergenceError("sample_paths(series): basis tail bound not met within " +
                               std::to_string(kTermCap) + " terms (eta too small)");

    const auto nk = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd fre(n, nk), fim(n, nk);
    for (Eigen::Index k = 0; k < nk; ++k)
        for (Eigen::Index j = 0; j < n; ++j) {
            fre(j, k) = cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].real();
            fim(j, k) = cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].imag();
        }

    for (int component = 1; component <= 2; ++component) {
        Eigen::MatrixXd& b = component == 1 ? e.b1 : e.b2;
        b.resize(n, e.n_paths);
        parallel_for(static_cast<std::size_t>(e.n_paths), workers,
                     [&](std::size_t lo, std::size_t hi) {
                         Eigen::VectorXd xre(nk), xim(nk);
                         for (std::size_t path = lo; path < hi; ++path) {
                             for (Eigen::Index k = 0; k < nk; ++k) {
                                 const Complex xi = complex_gaussian_draw(
                                     e.seed, path, static_cast<std::uint32_t>(component),
                                     static_cast<std::uint64_t>(k));
                                 xre(k) = xi.real();
                                 xim(k) = xi.imag();
                             }
                             // B = 2 Re(F xi)
                             b.col(static_cast<Eigen::Index>(path)).noalias() =
                                 2.0 * (fre * xre - fim * xim);
                         }
                     });
    }
}

} // namespace

PathEnsemble sample_paths(const ModelParams& p, const TimeGrid& grid, int n_paths,
                          std::uint64_t seed, SampleMethod method, int workers) {
    p.validate();
    if (!(p.eta > 0.0))
        throw PreconditionError("sample_paths: eta must be strictly positive");
    if (grid.points.size() < 2)
        throw PreconditionError("sample_paths: grid needs at least two points");
    if (grid.step > p.eta / 10.0 * (1.0 + 1e-12))
        throw PreconditionError("sample_paths: grid step must be <= eta/10 (paths are "
                                "smooth only at scale eta)");
    if (n_paths < 0) throw PreconditionError("sample_paths: n_paths must be >= 0");

    PathEnsemble e;
    e.params = p;
    e.grid = grid;
    e.seed = seed;
    e.n_paths = n_paths;
    e.method = method;
    if (n_paths == 0) {
        e.b1.resize(static_cast<Eigen::Index>(grid.points.size()), 0);
        e.b2.resize(static_cast<Eigen::Index>(grid.points.size()), 0);
        return e;
    }
    if (method == SampleMethod::cholesky)
        sample_cholesky(e, workers);
    else
        sample_series(e, workers);
    return e;
}

std::vector<AreaSample> levy_area(const PathEnsemble& e, double s, double t) {
    if (!(s <= t)) throw PreconditionError("levy_area: requires s <= t");
    const std::size_t is = e.grid.index_of(s);
    const std::size_t it = e.grid.index_of(t);
    const double resc = std::pow(e.params.eta, 0.5 * (1.0 - 4.0 * e.params.alpha));
    std::vector<AreaSample> out(static_cast<std::size_t>(e.n_paths));
    for (int p = 0; p < e.n_paths; ++p) {
        double acc = 0.0;
        const double b1s = e.b1(static_cast<Eigen::Index>(is), p);
        for (std::size_t i = is; i < it; ++i) {
            const double mid1 = 0.5 * (e.b1(static_cast<Eigen::Index>(i), p) +
                                       e.b1(static_cast<Eigen::Index>(i + 1), p));
            const double db2 = e.b2(static_cast<Eigen::Index>(i + 1), p) -
                               e.b2(static_cast<Eigen::Index>(i), p);
            acc += (mid1 - b1s) * db2;
        }
        out[static_cast<std::size_t>(p)] = AreaSample{s, t, acc, resc * acc};
    }
    return out;
}

double overlap_covariance(const PathEnsemble& e, double s1, double t1, double s2,
                          double t2) {
    const auto a1 = levy_area(e, s1, t1);
    const auto a2 = levy_area(e, s2, t2);
    const auto n = a1.size();
    if (n < 2) throw PreconditionError("overlap_covariance: need at least 2 paths");
    std::vector<double> v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        v1[i] = a1[i].rescaled;
        v2[i] = a2[i].rescaled;
    }
    const double m1 = tree_sum(v1) / static_cast<double>(n);
    const double m2 = tree_sum(v2) / static_cast<double>(n);
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = (v1[i] - m1) * (v2[i] - m2);
    return tree_sum(prod) / static_cast<double>(n - 1);
}

namespace {

constexpr char kMagic[4] = {'F', 'B', 'L', 'E'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void get(std::ifstream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

} // namespace

void save_ensemble(const PathEnsemble& e, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("save_ensemble: cannot open " + path);
    os.write(kMagic, 4);
    put(os, kCacheVersion);
    put(os, e.params.alpha);
    put(os, e.params.eta);
    put(os, e.seed);
    put(os, static_cast<std::uint32_t>(e.n_paths));
    put(os, static_cast<std::uint32_t>(e.grid.points.size()));
    put(os, static_cast<std::uint8_t>(e.method == SampleMethod::cholesky ? 0 : 1));
    const std::uint8_t pad[7] = {};
    os.write(reinterpret_cast<const char*>(pad), 7);
    put(os, e.grid.step);
    os.write(reinterpret_cast<const char*>(e.grid.points.data()),
             static_cast<std::streamsize>(e.grid.points.size() * sizeof(double)));
    // row-major: per path, all grid values
    for (int comp = 1; comp <= 2; ++comp) {
        const Eigen::MatrixXd& b = comp == 1 ? e.b1 : e.b2;
        for (int p = 0; p < e.n_paths; ++p)
            for (Eigen::Index i = 0; i < b.rows(); ++i) {
                const double v = b(i, p);
                put(os, v);
            }
    }
    if (!os) throw Error("save_ensemble: write failed for " + path);
}

PathEnsemble load_ensemble(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("load_ensemble: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw Error("load_ensemble: bad magic in " + path);
    std::uint32_t version = 0;
    get(is, version);
    if (version != kCacheVersion)
        throw Error("load_ensemble: unsupported cache version");
    PathEnsemble e;
    std::uint32_t n_paths = 0, n_grid = 0;
    std::uint8_t method = 0;
    get(is, e.params.alpha);
    get(is, e.params.eta);
    get(is, e.seed);
    get(is, n_paths);
    get(is, n_grid);
    get(is, method);
    std::uint8_t pad[7];
    is.read(reinterpret_cast<char*>(pad), 7);
    get(is, e.grid.step);
    e.grid.points.resize(n_grid);
    is.read(reinterpret_cast<char*>(e.grid.points.data()),
            static_cast<std::streamsize>(n_grid * sizeof(double)));
    e.n_paths = static_cast<int>(n_paths);
    e.method = method == 0 ? SampleMethod::cholesky : SampleMethod::series;
    e.b1.resize(n_grid, n_paths);
    e.b2.resize(n_grid, n_paths);
    for (int comp = 1; comp <= 2; ++comp) {
        Eigen::MatrixXd& b = comp == 1 ? e.b1 : e.b2;
        for (std::uint32_t p = 0; p < n_paths; ++p)
            for (std::uint32_t i = 0; i < n_grid; ++i) {
                double v;
                get(is, v);
                b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = v;
            }
    }
    if (!is) throw Error("load_ensemble: truncated file " + path);
    return e;
}

} // namespace levyarea
