#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "levyarea/analysis.hpp"
#include "levyarea/quadrature.hpp"
#include "levyarea/rng.hpp"
#include "levyarea/simulate.hpp"

using namespace levyarea;

TEST_CASE("philox block is a pure deterministic function") {
    const auto a = Philox4x32::block({1, 2, 3, 4}, {5, 6});
    const auto b = Philox4x32::block({1, 2, 3, 4}, {5, 6});
    CHECK(a == b);
    CHECK(a != Philox4x32::block({1, 2, 3, 5}, {5, 6}));
    CHECK(a != Philox4x32::block({1, 2, 3, 4}, {5, 7}));
}

TEST_CASE("gaussian draws have the right moments") {
    const int n = 200000;
    double m1 = 0, m2 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double g = gaussian_draw(99, 0, 0, static_cast<std::uint64_t>(i));
        m1 += g;
        m2 += g * g;
        m4 += g * g * g * g;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.05));
    // complex gaussians: E xi conj xi = 1, E xi^2 = 0
    Complex s2{0.0, 0.0};
    double sabs = 0.0;
    for (int i = 0; i < n / 4; ++i) {
        const Complex xi = complex_gaussian_draw(99, 1, 1, static_cast<std::uint64_t>(i));
        s2 += xi * xi;
        sabs += std::norm(xi);
    }
    CHECK(sabs / (n / 4) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::abs(s2) / (n / 4) < 0.03);
}

TEST_CASE("time grid") {
    auto g = TimeGrid::uniform(0.0, 1.0, 0.01);
    CHECK(g.points.size() == 101);
    CHECK(g.index_of(0.37) == 37);
    CHECK_THROWS_AS(g.index_of(0.375), GridError);
    CHECK_THROWS_AS(g.index_of(1.25), GridError);
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0.013), GridError);
}

TEST_CASE("sample_paths validation and empty ensembles") {
    ModelParams p{0.2, 0.1};
    auto grid = TimeGrid::uniform(0.0, 1.0, 0.01);
    auto e = sample_paths(p, grid, 0, 1, SampleMethod::cholesky);
    CHECK(e.n_paths == 0);
    CHECK(e.b1.cols() == 0);
    // grid step above eta/10 violates the smoothness precondition
    auto coarse = TimeGrid::uniform(0.0, 1.0, 0.05);
    CHECK_THROWS_AS(sample_paths(p, coarse, 4, 1, SampleMethod::cholesky),
                    PreconditionError);
}

TEST_CASE("cholesky ensembles match the covariance model") {
    ModelParams p{0.2, 0.05};
    auto grid = TimeGrid::uniform(0.0, 1.0, 0.005);
    const int n_paths = 10000;
    auto e = sample_paths(p, grid, n_paths, 4245, SampleMethod::cholesky);
    // sample variance of B at t = 1 vs k_real(1, 1) within 3 standard errors
    const auto it = grid.index_of(1.0);
    double m2 = 0.0, m4 = 0.0;
    for (int path = 0; path < n_paths; ++path) {
        const double v = e.value(1, path, it);
        m2 += v * v;
        m4 += v * v * v * v;
    }
    m2 /= n_paths;
    m4 /= n_paths;
    const double want = k_real(p, 1.0, 1.0);
    const double se = std::sqrt((m4 - m2 * m2) / n_paths);
    CHECK(std::abs(m2 - want) <= 3.0 * se);
    // gaussian marginal: m4/m2^2 = 3 within 5/sqrt(n)
    CHECK(std::abs(m4 / (m2 * m2) - 3.0) <= 5.0 / std::sqrt(static_cast<double>(n_paths)));
    // components are independent: cross-covariance at t=1 near zero
    double cross = 0.0;
    for (int path = 0; path < n_paths; ++path)
        cross += e.value(1, path, it) * e.value(2, path, it);
    cross /= n_paths;
    CHECK(std::abs(cross) <= 3.0 * want / std::sqrt(static_cast<double>(n_paths)));
}

TEST_CASE("stationary increments within sampling error") {
    ModelParams p{0.2, 0.05};
    auto grid = TimeGrid::uniform(0.0, 1.5, 0.005);
    auto e = sample_paths(p, grid, 8000, 7, SampleMethod::cholesky);
    auto var_increment = [&](double s, double t) {
        const auto is = grid.index_of(s), it = grid.index_of(t);
        double acc = 0.0;
        for (int path = 0; path < e.n_paths; ++path) {
            const double d = e.value(1, path, it) - e.value(1, path, is);
            acc += d * d;
        }
        return acc / e.n_paths;
    };
    const double v1 = var_increment(0.0, 0.5);
    const double v2 = var_increment(0.8, 1.3);
    CHECK(v1 == doctest::Approx(v2).epsilon(0.1));
}

TEST_CASE("same seed gives bit-identical ensembles across worker budgets") {
    ModelParams p{0.2, 0.1};
    auto grid = TimeGrid::uniform(0.0, 0.5, 0.01);
    auto e1 = sample_paths(p, grid, 64, 99, SampleMethod::cholesky, 1);
    auto e4 = sample_paths(p, grid, 64, 99, SampleMethod::cholesky, 4);
    CHECK((e1.b1 - e4.b1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((e1.b2 - e4.b2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("levy area identities") {
    ModelParams p{0.2, 0.1};
    auto grid = TimeGrid::uniform(0.0, 1.0, 0.01);
    auto e = sample_paths(p, grid, 32, 11, SampleMethod::cholesky);
    auto a_full = levy_area(e, 0.0, 1.0);
    // s = t gives zero
    for (const auto& a : levy_area(e, 0.4, 0.4)) CHECK(a.value == 0.0);
    // splitting identity with the cross increment, exact per path
    auto a_left = levy_area(e, 0.0, 0.6);
    auto a_right = levy_area(e, 0.6, 1.0);
    const auto iu = grid.index_of(0.6), is = grid.index_of(0.0), it = grid.index_of(1.0);
    for (int path = 0; path < e.n_paths; ++path) {
        const double cross = (e.value(1, path, iu) - e.value(1, path, is)) *
                             (e.value(2, path, it) - e.value(2, path, iu));
        const double lhs = a_full[static_cast<std::size_t>(path)].value;
        const double rhs = a_left[static_cast<std::size_t>(path)].value +
                           a_right[static_cast<std::size_t>(path)].value + cross;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    // rescaling factor
    const double resc = std::pow(p.eta, 0.5 * (1.0 - 4.0 * p.alpha));
    CHECK(a_full[0].rescaled == doctest::Approx(resc * a_full[0].value));
    CHECK_THROWS_AS(levy_area(e, 0.05, 1.23), GridError);
}

TEST_CASE("ensemble area second moment matches quadrature") {
    ModelParams p{0.2, 0.05};
    auto grid = TimeGrid::uniform(0.0, 1.0, 0.005);
    const int n_paths = 20000;
    auto e = sample_paths(p, grid, n_paths, 314, SampleMethod::cholesky);
    auto areas = levy_area(e, 0.0, 1.0);
    double m2 = 0.0, m4 = 0.0;
    for (const auto& a : areas) {
        m2 += a.value * a.value;
        m4 += std::pow(a.value, 4);
    }
    m2 /= n_paths;
    m4 /= n_paths;
    const double want = second_moment_direct(p, 0.0, 1.0, 768);
    const double se = std::sqrt((m4 - m2 * m2) / n_paths);
    CHECK(std::abs(m2 - want) <= 3.0 * se + 2e-3 * want);
}

TEST_CASE("grid refinement changes areas marginally") {
    ModelParams p{0.2, 0.05};
    auto g1 = TimeGrid::uniform(0.0, 1.0, 0.005);
    auto g2 = TimeGrid::uniform(0.0, 1.0, 0.0025);
    auto e1 = sample_paths(p, g1, 200, 5, SampleMethod::cholesky);
    auto e2 = sample_paths(p, g2, 200, 5, SampleMethod::cholesky);
    // different grids resample, so compare second moments, not paths
    auto a1 = levy_area(e1, 0.0, 1.0);
    auto a2 = levy_area(e2, 0.0, 1.0);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < 200; ++i) {
        m1 += a1[static_cast<std::size_t>(i)].value * a1[static_cast<std::size_t>(i)].value;
        m2 += a2[static_cast<std::size_t>(i)].value * a2[static_cast<std::size_t>(i)].value;
    }
    CHECK(m1 / 200 == doctest::Approx(m2 / 200).epsilon(0.25));
}

TEST_CASE("series method agrees with cholesky on area moments") {
    ModelParams p{0.2, 0.25};
    auto grid = TimeGrid::uniform(0.0, 1.0, 0.025);
    const int n_paths = 8000;
    auto ec = sample_paths(p, grid, n_paths, 21, SampleMethod::cholesky);
    auto es = sample_paths(p, grid, n_paths, 22, SampleMethod::series);
    auto mc = [&](const PathEnsemble& e) {
        auto areas = levy_area(e, 0.0, 1.0);
        double m2 = 0.0, v = 0.0;
        for (const auto& a : areas) m2 += a.value * a.value;
        m2 /= e.n_paths;
        for (const auto& a : areas) v += std::pow(a.value * a.value - m2, 2);
        return std::make_pair(m2, std::sqrt(v / e.n_paths / e.n_paths));
    };
    auto [m2c, sec] = mc(ec);
    auto [m2s, ses] = mc(es);
    CHECK(std::abs(m2c - m2s) <= 3.5 * std::hypot(sec, ses));
    // series increments also reproduce the increment covariance
    const auto i0 = grid.index_of(0.0), i1 = grid.index_of(1.0);
    double v2 = 0.0;
    for (int path = 0; path < n_paths; ++path) {
        const double d = es.value(1, path, i1) - es.value(1, path, i0);
        v2 += d * d;
    }
    v2 /= n_paths;
    CHECK(v2 == doctest::Approx(increment_covariance(p, 0.0, 1.0, 1.0)).epsilon(0.06));
}

TEST_CASE("overlap covariance basics") {
    ModelParams p{0.2, 0.1};
    auto grid = TimeGrid::uniform(0.0, 1.5, 0.01);
    auto e = sample_paths(p, grid, 4000, 33, SampleMethod::cholesky);
    // identical intervals reduce to the second moment of the rescaled area
    const double cov_self = overlap_covariance(e, 0.0, 1.0, 0.0, 1.0);
    auto areas = levy_area(e, 0.0, 1.0);
    double m2 = 0.0;
    for (const auto& a : areas) m2 += a.rescaled * a.rescaled;
    m2 /= e.n_paths;
    CHECK(cov_self == doctest::Approx(m2).epsilon(0.01));
    // disjoint intervals: correlation near zero
    const double cov_disjoint = overlap_covariance(e, 0.0, 0.5, 1.0, 1.5);
    CHECK(std::abs(cov_disjoint) <= 3.0 * m2 / std::sqrt(static_cast<double>(e.n_paths)));
}

TEST_CASE("ensemble cache round-trip") {
    ModelParams p{0.2, 0.1};
    auto grid = TimeGrid::uniform(0.0, 0.3, 0.01);
    auto e = sample_paths(p, grid, 16, 77, SampleMethod::cholesky);
    const std::string path = "test_ensemble_cache.bin";
    save_ensemble(e, path);
    auto r = load_ensemble(path);
    CHECK(r.params.alpha == e.params.alpha);
    CHECK(r.params.eta == e.params.eta);
    CHECK(r.seed == e.seed);
    CHECK(r.n_paths == e.n_paths);
    CHECK(r.grid.points == e.grid.points);
    CHECK((r.b1 - e.b1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.b2 - e.b2).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
}
