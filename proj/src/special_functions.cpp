#include "levyarea/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "levyarea/quadrature.hpp"

namespace levyarea {

Complex principal_power(Complex z, double beta) {
    if (z.imag() == 0.0) {
        if (z.real() < 0.0)
            throw BranchCutError("principal_power: base on the negative real axis");
        if (z.real() == 0.0) {
            if (beta > 0.0) return {0.0, 0.0};
            if (beta == 0.0) return {1.0, 0.0};
            throw BranchCutError("principal_power: zero base with negative exponent");
        }
    }
    if (beta == 0.0) return {1.0, 0.0};
    return std::exp(beta * std::log(z));
}

namespace {

// Lanczos g = 7, n = 9 coefficients (Godfrey's set); relative accuracy is
// a few 1e-15 across [0.5, 20].
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
    // valid for x >= 0.5
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i)
        acc += kLanczos[i] / (x - 1.0 + static_cast<double>(i));
    double t = x - 0.5 + kLanczosG;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * acc;
}

bool near_nonpositive_integer(double x, double tol) {
    if (x > 0.5) return false;
    return std::abs(x - std::round(x)) < tol;
}

} // namespace

double gamma_real(double x) {
    if (near_nonpositive_integer(x, 1e-12))
        throw PoleError("gamma_real: pole at x = " + std::to_string(x));
    if (x >= 0.5) return lanczos_gamma(x);
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1.0 - x));
}

double reciprocal_gamma(double x) {
    if (near_nonpositive_integer(x, 1e-12)) return 0.0;
    return 1.0 / gamma_real(x);
}

namespace detail {

double integer_distance(double x) { return std::abs(x - std::round(x)); }

} // namespace detail

namespace {

using detail::Hyp2F1Route;
using detail::integer_distance;

bool is_nonpositive_integer(double x, double tol) {
    return x <= 0.5 && integer_distance(x) < tol;
}

// Maclaurin series of 2F1 at argument w, |w| < 1 (terminating when a or b
// is a non-positive integer, in which case any w works).
Complex hyp2f1_series(double a, double b, double c, Complex w) {
    Complex sum{1.0, 0.0};
    Complex term{1.0, 0.0};
    const double aw = std::abs(w);
    constexpr int kMaxTerms = 10000;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double dk = static_cast<double>(k);
        term *= w * ((a + dk) * (b + dk)) / ((c + dk) * (dk + 1.0));
        sum += term;
        if (term == Complex{0.0, 0.0}) return sum; // terminated polynomial
        // geometric tail bound once the coefficient ratio has settled
        if (aw < 1.0) {
            const double tail = std::abs(term) * aw / (1.0 - aw);
            if (tail <= 1e-14 * std::abs(sum) && k > 2) return sum;
        }
    }
    throw ConvergenceError("hyp2f1: series cap of 10000 terms exceeded (|w| = " +
                           std::to_string(aw) + ")");
}

void require_guard(double q, double tol, const char* what) {
    if (integer_distance(q) < tol)
        throw DegenerateParameterError(std::string("hyp2f1: ") + what +
                                       " within tolerance of an integer; connection formula degenerate");
}

// sign of Gamma at a non-pole argument
int gamma_sign(double x) {
    if (x > 0.0) return 1;
    return static_cast<long long>(-std::floor(x)) % 2 == 1 ? -1 : 1;
}

// products of gamma ratios in log space; a pole in the denominator yields 0
double gamma_ratio(std::initializer_list<double> numer,
                   std::initializer_list<double> denom) {
    double log_acc = 0.0;
    int sign = 1;
    for (double x : numer) {
        if (near_nonpositive_integer(x, 1e-12))
            throw PoleError("hyp2f1: gamma pole in a connection-formula coefficient");
        log_acc += std::lgamma(x);
        sign *= gamma_sign(x);
    }
    for (double x : denom) {
        if (near_nonpositive_integer(x, 1e-12)) return 0.0;
        log_acc -= std::lgamma(x);
        sign *= gamma_sign(x);
    }
    return sign * std::exp(log_acc);
}

Complex via_one_minus_z(const Hyp2F1Params& p, Complex z) {
    const double a = p.a, b = p.b, c = p.c;
    require_guard(a + b - c, p.degeneracy_tol, "a+b-c");
    const Complex w = 1.0 - z;
    const double g1 = gamma_ratio({c, c - a - b}, {c - a, c - b});
    const double g2 = gamma_ratio({c, a + b - c}, {a, b});
    Complex t1 = (g1 == 0.0) ? Complex{0.0, 0.0}
                             : g1 * hyp2f1_series(a, b, a + b - c + 1.0, w);
    Complex t2 = (g2 == 0.0) ? Complex{0.0, 0.0}
                             : g2 * principal_power(w, c - a - b) *
                                   hyp2f1_series(c - a, c - b, c - a - b + 1.0, w);
    return t1 + t2;
}

Complex via_inv_z(const Hyp2F1Params& p, Complex z) {
    const double a = p.a, b = p.b, c = p.c;
    require_guard(b - a, p.degeneracy_tol, "b-a");
    const Complex w = 1.0 / z;
    const double g1 = gamma_ratio({c, b - a}, {b, c - a});
    const double g2 = gamma_ratio({c, a - b}, {a, c - b});
    Complex t1 = (g1 == 0.0) ? Complex{0.0, 0.0}
                             : g1 * principal_power(-z, -a) *
                                   hyp2f1_series(a, 1.0 - c + a, 1.0 - b + a, w);
    Complex t2 = (g2 == 0.0) ? Complex{0.0, 0.0}
                             : g2 * principal_power(-z, -b) *
                                   hyp2f1_series(b, 1.0 - c + b, 1.0 - a + b, w);
    return t1 + t2;
}

Complex via_inv_one_minus_z(const Hyp2F1Params& p, Complex z) {
    const double a = p.a, b = p.b, c = p.c;
    require_guard(b - a, p.degeneracy_tol, "b-a");
    const Complex u = 1.0 - z;
    const Complex w = 1.0 / u;
    const double g1 = gamma_ratio({c, b - a}, {b, c - a});
    const double g2 = gamma_ratio({c, a - b}, {a, c - b});
    Complex t1 = (g1 == 0.0) ? Complex{0.0, 0.0}
                             : g1 * principal_power(u, -a) *
                                   hyp2f1_series(a, c - b, a - b + 1.0, w);
    Complex t2 = (g2 == 0.0) ? Complex{0.0, 0.0}
                             : g2 * principal_power(u, -b) *
                                   hyp2f1_series(b, c - a, b - a + 1.0, w);
    return t1 + t2;
}

void validate_common(const Hyp2F1Params& p, Complex z) {
    if (z.imag() == 0.0 && z.real() >= 1.0)
        throw BranchCutError("hyp2f1: argument on the cut [1, inf)");
    if (is_nonpositive_integer(p.c, 1e-12) &&
        !(is_nonpositive_integer(p.a, 1e-12) || is_nonpositive_integer(p.b, 1e-12)))
        throw DegenerateParameterError("hyp2f1: c is a non-positive integer");
}

} // namespace

Complex hyp2f1(const Hyp2F1Params& p, Complex z) {
    if (p.a == 0.0 || p.b == 0.0) return {1.0, 0.0};
    validate_common(p, z);
    if (z == Complex{0.0, 0.0}) return {1.0, 0.0};

    // terminating polynomial: any argument is fine
    if ((is_nonpositive_integer(p.a, 0.0) || is_nonpositive_integer(p.b, 0.0)))
        return hyp2f1_series(p.a, p.b, p.c, z);

    const double az = std::abs(z);
    const double a1z = std::abs(1.0 - z);
    constexpr double r0 = 0.7;

    if (az <= r0) return hyp2f1_series(p.a, p.b, p.c, z);
    if (a1z <= r0) return via_one_minus_z(p, z);
    if (az >= 1.0 / r0) return via_inv_z(p, z);

    // Band near the unit circle where the nominal three-region rule has no
    // convergent series: take the transform with the smallest argument
    // modulus (the 1/(1-z) transform is the remaining connection
    // formula). A guard failure falls through to the next candidate.
    struct Cand {
        double mod;
        Hyp2F1Route route;
    };
    std::array<Cand, 4> cands = {Cand{az, Hyp2F1Route::direct},
                                 Cand{a1z, Hyp2F1Route::one_minus_z},
                                 Cand{1.0 / az, Hyp2F1Route::inv_z},
                                 Cand{1.0 / a1z, Hyp2F1Route::inv_one_minus_z}};
    std::sort(cands.begin(), cands.end(),
              [](const Cand& l, const Cand& r) { return l.mod < r.mod; });
    bool guard_blocked = false;
    for (const auto& c : cands) {
        if (c.mod >= 1.0) break;
        try {
            return detail::hyp2f1_via(c.route, p, z);
        } catch (const DegenerateParameterError&) {
            guard_blocked = true;
            continue;
        }
    }
    if (guard_blocked)
        throw DegenerateParameterError(
            "hyp2f1: every convergent connection formula at this argument has a "
            "degenerate gamma prefactor");
    throw ConvergenceError("hyp2f1: argument too close to exp(+-i pi/3); no convergent expansion");
}

Complex hyp2f1_integral_oracle(const Hyp2F1Params& p, Complex z, double tol) {
    if (!(p.c > p.b && p.b > 0.0))
        throw PreconditionError("hyp2f1_integral_oracle: requires c > b > 0");
    if (z.imag() == 0.0 && z.real() >= 1.0)
        throw BranchCutError("hyp2f1_integral_oracle: argument on the cut [1, inf)");
    const double a = p.a, b = p.b, c = p.c;
    // split at 1/2 and substitute u = 1 - t on the right half, so each
    // algebraic endpoint factor is evaluated as a distance from 0 (the
    // subtraction 1 - t cannot resolve distances below one ulp of 1)
    auto edge_pow = [](double base, double expo) -> double {
        if (base <= 0.0) return expo > 0.0 ? 0.0 : (expo == 0.0 ? 1.0 : 0.0);
        return std::pow(base, expo);
    };
    auto f_left = [&](double t) -> Complex {
        return edge_pow(t, b - 1.0) * std::pow(1.0 - t, c - b - 1.0) *
               principal_power(1.0 - t * z, -a);
    };
    auto f_right = [&](double u) -> Complex {
        return edge_pow(u, c - b - 1.0) * std::pow(1.0 - u, b - 1.0) *
               principal_power((1.0 - z) + u * z, -a);
    };
    EndpointExponents left_ee{b - 1.0, 0.0};
    left_ee.right.reset();
    EndpointExponents right_ee{c - b - 1.0, 0.0};
    right_ee.right.reset();
    auto r1 = integrate_1d_complex(f_left, 0.0, 0.5, tol / 2.0, left_ee);
    auto r2 = integrate_1d_complex(f_right, 0.0, 0.5, tol / 2.0, right_ee);
    const double norm = gamma_real(c) * reciprocal_gamma(b) * reciprocal_gamma(c - b);
    return norm * (r1.value + r2.value);
}

namespace detail {

Complex hyp2f1_maclaurin(double a, double b, double c, Complex z) {
    if (a == 0.0 || b == 0.0) return {1.0, 0.0};
    return hyp2f1_series(a, b, c, z);
}

Complex hyp2f1_via(Hyp2F1Route route, const Hyp2F1Params& p, Complex z) {
    if (p.a == 0.0 || p.b == 0.0) return {1.0, 0.0};
    validate_common(p, z);
    switch (route) {
        case Hyp2F1Route::direct:
            return hyp2f1_series(p.a, p.b, p.c, z);
        case Hyp2F1Route::one_minus_z:
            return via_one_minus_z(p, z);
        case Hyp2F1Route::inv_z:
            return via_inv_z(p, z);
        case Hyp2F1Route::inv_one_minus_z:
            return via_inv_one_minus_z(p, z);
    }
    throw Error("hyp2f1_via: unknown route");
}

} // namespace detail

} // namespace levyarea
