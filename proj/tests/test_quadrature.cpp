#include <doctest.h>

#include <cmath>

#include "levyarea/analysis.hpp"
#include "levyarea/quadrature.hpp"
#include "levyarea/rng.hpp"

using namespace levyarea;

TEST_CASE("gauss-legendre rule invariants") {
    for (int n : {4, 8, 16, 64, 256}) {
        const auto& rule = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // exactness up to degree 2n-1: int_{-1}^1 x^k dx
        for (int k = 0; k <= std::min(2 * n - 1, 25); ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double want = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            CHECK(acc == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("degree-15 polynomial integrated exactly by an 8-node rule") {
    const auto& rule = gauss_legendre(8);
    // p(x) = 3x^15 - 2x^8 + x^3 - 5x^2 + 7
    auto poly = [](double x) {
        return 3 * std::pow(x, 15) - 2 * std::pow(x, 8) + std::pow(x, 3) -
               5 * x * x + 7;
    };
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += rule.weights[i] * poly(rule.nodes[i]);
    const double want = -2.0 * 2.0 / 9.0 - 5.0 * 2.0 / 3.0 + 7.0 * 2.0;
    CHECK(acc == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("integrate_1d endpoint singularities") {
    // int_0^1 u^{-1/2} du = 2
    auto f = [](double u) { return u == 0.0 ? 0.0 : 1.0 / std::sqrt(u); };
    EndpointExponents ee;
    ee.left = -0.5;
    auto r = integrate_1d(f, 0.0, 1.0, 1e-10, ee);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(r.value - 2.0) <= std::max(1e-10, r.error_estimate));
}

TEST_CASE("integrate_1d complex antiderivative oracle") {
    // int_0^1 (-i(u - b))^{-0.6} du with its closed-form antiderivative
    const Complex b{0.5, -0.1};
    const Complex kI{0.0, 1.0};
    auto f = [&](double u) { return principal_power(-kI * (u - b), -0.6); };
    auto r = integrate_1d_complex(f, 0.0, 1.0, 1e-10);
    auto anti = [&](double u) {
        return principal_power(-kI * (u - b), 0.4) / (0.4 * -kI);
    };
    const Complex want = anti(1.0) - anti(0.0);
    CHECK(std::abs(r.value - want) < 1e-9);
    // frozen extended-precision value of the same integral
    CHECK(std::abs(r.value - Complex{1.9941283564725686153, 0.0}) < 1e-9);
}

TEST_CASE("integrate_1d error estimates are conservative on a corpus") {
    int conservative = 0, total = 0;
    // mix of smooth, oscillatory and endpoint-singular integrands with known values
    struct Case {
        std::function<double(double)> f;
        double a, b, exact;
        std::optional<EndpointExponents> ee;
    };
    std::vector<Case> corpus;
    corpus.push_back({[](double x) { return std::exp(x); }, 0.0, 1.0, std::exp(1.0) - 1.0, {}});
    corpus.push_back({[](double x) { return std::sin(20.0 * x); }, 0.0, 1.0,
                      (1.0 - std::cos(20.0)) / 20.0, {}});
    corpus.push_back({[](double x) { return std::cos(3.0 * x) * std::exp(-x); }, 0.0,
                      2.0,
                      (std::exp(-2.0) * (3.0 * std::sin(6.0) - std::cos(6.0)) + 1.0) /
                          10.0,
                      {}});
    for (double p : {-0.3, -0.5, -0.7, -0.85}) {
        EndpointExponents ee;
        ee.left = p;
        corpus.push_back({[p](double x) { return x == 0.0 ? 0.0 : std::pow(x, p); },
                          0.0, 1.0, 1.0 / (p + 1.0), ee});
    }
    for (double p : {-0.4, -0.6}) {
        // Beta integrand split at 1/2 with the right half substituted so each
        // singular distance is measured from 0 (full double resolution there)
        EndpointExponents ee;
        ee.left = p;
        const double half_beta = 0.5 * gamma_real(p + 1.0) * gamma_real(p + 1.0) /
                                 gamma_real(2.0 * p + 2.0);
        corpus.push_back({[p](double x) {
                              if (x == 0.0) return 0.0;
                              return std::pow(x, p) * std::pow(1.0 - x, p);
                          },
                          0.0, 0.5, half_beta, ee});
    }
    {
        // right-endpoint grading exercised where the endpoint is 0 itself
        EndpointExponents ee;
        ee.right = -0.5;
        corpus.push_back({[](double x) { return x == 0.0 ? 0.0 : 1.0 / std::sqrt(-x); },
                          -1.0, 0.0, 2.0, ee});
    }
    for (const auto& c : corpus) {
        auto r = integrate_1d(c.f, c.a, c.b, 1e-9, c.ee);
        const double err = std::abs(r.value - c.exact);
        CHECK(err <= std::max(1e-9, 10 * r.error_estimate));
        conservative += err <= std::max(r.error_estimate, 1e-9) ? 1 : 0;
        ++total;
    }
    CHECK(conservative >= (95 * total) / 100);
}

TEST_CASE("integrate_1d rejects bad input") {
    auto f = [](double) { return 1.0; };
    CHECK_THROWS_AS(integrate_1d(f, 1.0, 0.0, 1e-8), PreconditionError);
    EndpointExponents ee;
    ee.left = -1.2;
    CHECK_THROWS_AS(integrate_1d(f, 0.0, 1.0, 1e-8, ee), PreconditionError);
}

TEST_CASE("nystrom operator symmetry") {
    ModelParams p{0.2, 0.1};
    auto op = NystromOperator::build(
        [&](double x, double y) { return kprime_real(p, x, y); }, 1.0, 64, true);
    CHECK((op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    double wsum = 0.0;
    for (double w : op.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("connected moment trace against 2-d tensor quadrature at N=1") {
    ModelParams p{0.2, 0.1};
    const double got = connected_moment_trace(p, 1.0, 1, 512);
    // independent route: direct 2-d tensor quadrature of K K'
    const auto& rule = gauss_legendre(400);
    double acc = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double x = 0.5 * (rule.nodes[i] + 1.0);
        for (int j = 0; j < 400; ++j) {
            const double y = 0.5 * (rule.nodes[j] + 1.0);
            acc += 0.25 * rule.weights[i] * rule.weights[j] * k_real(p, x, y) *
                   kprime_real(p, x, y);
        }
    }
    CHECK(got == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("trace invariance under grid permutation") {
    // permutation similarity cannot change the trace; verified by comparing
    // the trace computed from a shuffled kernel ordering
    ModelParams p{0.2, 0.1};
    auto K = NystromOperator::build(
        [&](double x, double y) { return k_real(p, x, y); }, 1.0, 48, true);
    auto Kp = NystromOperator::build(
        [&](double x, double y) { return kprime_real(p, x, y); }, 1.0, 48, true);
    Eigen::VectorXi perm(48);
    for (int i = 0; i < 48; ++i) perm(i) = (7 * i + 3) % 48;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(48, 48);
    for (int i = 0; i < 48; ++i) P(perm(i), i) = 1.0;
    const Eigen::MatrixXd M = K.matrix * Kp.matrix;
    const Eigen::MatrixXd Mp = (P * K.matrix * P.transpose()) *
                               (P * Kp.matrix * P.transpose());
    CHECK(M.trace() == doctest::Approx(Mp.trace()).epsilon(1e-12));
}

TEST_CASE("nystrom refinement is monotone in the resolved regime") {
    ModelParams p{0.2, 0.05};
    double prev_gap = 1e300;
    double prev = connected_moment_trace(p, 1.0, 1, 64);
    for (int n : {128, 256, 512}) {
        const double cur = connected_moment_trace(p, 1.0, 1, n);
        const double gap = std::abs(cur - prev);
        CHECK(gap <= prev_gap * 1.05);
        prev_gap = gap;
        prev = cur;
    }
}

TEST_CASE("connected_moment_trace_checked flags unresolved traces") {
    ModelParams p{0.2, 0.01};
    CHECK_THROWS_AS(connected_moment_trace_checked(p, 1.0, 1, 16, 1e-10),
                    ResolutionError);
    CHECK_NOTHROW(connected_moment_trace_checked(p, 1.0, 1, 1024, 1e-4));
}

TEST_CASE("eta scaling of the second connected moment") {
    // log-log slope of the singular part over eta in {0.04, 0.02, 0.01}
    // within 0.05 of 4 alpha - 1 = -0.2
    ModelParams base{0.2, 1.0};
    std::vector<std::pair<double, double>> pairs;
    for (double eta : {0.04, 0.02, 0.01}) {
        ModelParams p{base.alpha, eta};
        pairs.emplace_back(eta, connected_moment_trace(p, 1.0, 1, 1024));
    }
    auto [r, s] = estimate_regular_part(pairs, 4.0 * base.alpha - 1.0);
    (void)s;
    ScalingFit fit = fit_scaling(pairs, r);
    CHECK(std::abs(fit.slope - (-0.2)) < 0.05);
}

TEST_CASE("second moment direct basics") {
    ModelParams p{0.2, 0.1};
    CHECK(second_moment_direct(p, 0.7, 0.7) == 0.0);
    // translation invariance: the value depends only on t - s
    const double v1 = second_moment_direct(p, 0.0, 1.0, 512);
    const double v2 = second_moment_direct(p, 0.3, 1.3, 512);
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-8));
}

TEST_CASE("deterministic across worker budgets") {
    ModelParams p{0.2, 0.05};
    const double w1 = connected_moment_trace(p, 1.0, 2, 256, 1);
    const double w2 = connected_moment_trace(p, 1.0, 2, 256, 2);
    const double w8 = connected_moment_trace(p, 1.0, 2, 256, 8);
    CHECK(w1 == w2);
    CHECK(w1 == w8);
    const double s1 = second_moment_direct(p, 0.0, 1.0, 256, 1);
    const double s3 = second_moment_direct(p, 0.0, 1.0, 256, 3);
    CHECK(s1 == s3);
}
