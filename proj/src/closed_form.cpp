#include "levyarea/closed_form.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace levyarea {

namespace {

constexpr Complex kI{0.0, 1.0};

void validate_args(const PowerPair& pp, const IntegralArgs& args) {
    if (!(pp.beta2 > -1.0))
        throw PreconditionError("closed_form: beta2 must be > -1");
    if (!(args.t > 0.0)) throw PreconditionError("closed_form: t must be > 0");
    if (!(args.a.real() > 0.0 && args.a.real() < args.t))
        throw PreconditionError("closed_form: Re a must lie in (0, t)");
    if (!(args.b.real() > 0.0 && args.b.real() < args.t))
        throw PreconditionError("closed_form: Re b must lie in (0, t)");
    if (!(args.b.imag() <= 0.0))
        throw PreconditionError("closed_form: Im b must be <= 0");
}

void validate_sum(const PowerPair& pp) {
    if (std::abs(pp.beta1 + pp.beta2 + 1.0) < 1e-8)
        throw PreconditionError(
            "closed_form: beta1 + beta2 + 1 within 1e-8 of zero (removable "
            "degeneracy not supported)");
}

// expression (i), valid away from the small/large ratio regimes
Complex phi_primary(const PowerPair& pp, double s, const IntegralArgs& args) {
    const double b1 = pp.beta1, b2 = pp.beta2;
    const Complex sb = Complex{s, 0.0} - args.b;
    const Complex arg = (args.a - args.b) / sb;
    Hyp2F1Params h{-b1, -b1 - b2 - 1.0, -b1 - b2};
    return principal_power(-kI * sb, b1 + b2 + 1.0) * hyp2f1(h, arg);
}

// expansions around a/b (s = 0) resp. (t-a)/(t-b) (s = t); `small` picks the
// |ratio| < 1 branch.
Complex phi_regional(const PowerPair& pp, double s, const IntegralArgs& args,
                     bool small) {
    const double b1 = pp.beta1, b2 = pp.beta2;
    const double sum1 = b1 + b2 + 1.0;
    Complex pref, r_small; // prefactor (+-i(s-b))^{b1+b2+1}-style and the small ratio
    if (s == 0.0) {
        pref = principal_power(kI * args.b, sum1);
        r_small = args.a / args.b;
    } else {
        pref = principal_power(-kI * (Complex{s, 0.0} - args.b), sum1);
        r_small = (Complex{s, 0.0} - args.a) / (Complex{s, 0.0} - args.b);
    }
    if (small) {
        const double g = gamma_real(-b1 - b2) * gamma_real(1.0 + b1) *
                         reciprocal_gamma(-b2);
        Complex head;
        if (s == 0.0) {
            head = g * principal_power(1.0 - args.a / args.b, sum1);
        } else {
            head = g * principal_power((args.a - args.b) / (Complex{s, 0.0} - args.b),
                                       sum1);
        }
        Hyp2F1Params h{-b2, 1.0, b1 + 2.0};
        Complex tail = (sum1 / (b1 + 1.0)) * principal_power(r_small, 1.0 + b1) *
                       hyp2f1(h, r_small);
        return pref * (head + tail);
    }
    const Complex r = 1.0 / r_small; // b/a resp. (t-b)/(t-a)
    const double g = gamma_real(-b1 - b2) * gamma_real(1.0 + b2) *
                     reciprocal_gamma(-b1);
    Complex head;
    if (s == 0.0) {
        head = g * principal_power(r, -sum1) * principal_power(1.0 - r, sum1);
    } else {
        head = g * principal_power(r, -sum1) *
               principal_power((args.b - args.a) / (Complex{s, 0.0} - args.a), sum1);
    }
    Hyp2F1Params h{-b1, 1.0, b2 + 2.0};
    Complex tail = (sum1 / (b2 + 1.0)) * principal_power(r, -b1) * hyp2f1(h, r);
    return pref * (head + tail);
}

} // namespace

Complex phi_block(const PowerPair& pp, double s, const IntegralArgs& args) {
    validate_args(pp, args);
    if (s != 0.0 && s != args.t)
        throw PreconditionError("phi_block: s must be 0 or t");
    if (pp.beta1 == 0.0) {
        // 2F1 has a zero first parameter; only the power prefactor survives
        return principal_power(-kI * (Complex{s, 0.0} - args.b),
                               pp.beta1 + pp.beta2 + 1.0);
    }
    const Complex ratio = (s == 0.0)
                              ? args.a / args.b
                              : (Complex{s, 0.0} - args.a) / (Complex{s, 0.0} - args.b);
    const double r = std::abs(ratio);
    constexpr double kSmall = 0.9, kLarge = 1.1;

    Complex value;
    if (r < kSmall)
        value = phi_regional(pp, s, args, true);
    else if (r > kLarge)
        value = phi_regional(pp, s, args, false);
    else
        value = phi_primary(pp, s, args);

#ifndef NDEBUG
    // overlap cross-check near the thresholds
    if ((r >= 0.8 && r < kSmall) || (r > kLarge && r <= 1.25)) {
        const Complex other = phi_primary(pp, s, args);
        assert(std::abs(value - other) <= 1e-8 * std::max(1.0, std::abs(other)) &&
               "phi_block: regional/primary expressions disagree in overlap band");
    }
#endif
    return value;
}

Complex i_minus(const PowerPair& pp, const IntegralArgs& args) {
    validate_args(pp, args);
    validate_sum(pp);
    if (!(args.a.imag() < args.b.imag()))
        throw PreconditionError("i_minus: requires Im a < Im b (domain of the "
                                "minus-type integral)");
    const Complex diff = phi_block(pp, args.t, args) - phi_block(pp, 0.0, args);
    return kI / (pp.beta1 + pp.beta2 + 1.0) * diff;
}

Complex i_plus(const PowerPair& pp, const IntegralArgs& args) {
    validate_args(pp, args);
    validate_sum(pp);
    if (!(args.a.imag() > 0.0))
        throw PreconditionError("i_plus: requires Im a > 0");
    const double b1 = pp.beta1, b2 = pp.beta2;
    const Complex eip = std::exp(kI * M_PI * b1);
    const Complex main = kI / (b1 + b2 + 1.0) *
                         (eip * phi_block(pp, args.t, args) -
                          (1.0 / eip) * phi_block(pp, 0.0, args));
    const double s2 = std::sin(M_PI * b2);
    if (s2 == 0.0) return main; // sine zero kills the non-analytic term
    const double coeff =
        gamma_real(b2 + 1.0) * gamma_real(-b1 - b2 - 1.0) / gamma_real(-b1);
    const Complex extra = coeff * 2.0 * s2 *
                          principal_power(kI * (args.b - args.a), b1 + b2 + 1.0);
    return main - extra;
}

double c_n_coeff(int n, double alpha) {
    if (n < 0) throw PreconditionError("c_n_coeff: n must be >= 0");
    const double base = (M_PI / 2.0) /
                        (std::cos(M_PI * alpha) * gamma_real(-2.0 * alpha));
    return 1.0 / (2.0 * M_PI) * std::pow(base, 2.0 * n) * std::sin(M_PI * alpha) *
           gamma_real(2.0 * alpha + 1.0) * gamma_real(-2.0 * alpha - 4.0 * alpha * n);
}

Complex f_n_appendix(double alpha, double beta, int n, double t, Complex z) {
    if (!(beta > -1.0)) throw PreconditionError("f_n_appendix: beta must be > -1");
    if (n < 0) throw PreconditionError("f_n_appendix: n must be >= 0");
    if (!(t > 0.0)) throw PreconditionError("f_n_appendix: t must be > 0");
    if (detail::integer_distance(2.0 * alpha) < 1e-9)
        throw DegenerateParameterError("f_n_appendix: 2 alpha must not be an integer");
    if (detail::integer_distance(2.0 * alpha + beta) < 1e-9)
        throw DegenerateParameterError(
            "f_n_appendix: 2 alpha + beta too close to an integer");
    const double a2 = 2.0 * alpha;
    double nfact = 1.0;
    for (int j = 2; j <= n; ++j) nfact *= j;

    const bool on_lower_cut = (z.imag() == 0.0 && z.real() <= 0.0);
    const bool on_right_cut = (z.real() == t && z.imag() <= 0.0);
    if (on_lower_cut || on_right_cut)
        throw DomainError("f_n_appendix: z on a branch cut of the extension");

    if (std::abs(z / t) < 0.95) {
        // |z| < t form
        const Complex t1 = std::exp(kI * M_PI * alpha) * gamma_real(a2 + beta - 1.0) *
                           reciprocal_gamma(a2 + beta + n) *
                           std::pow(t, a2 - 2.0) *
                           hyp2f1({2.0 - a2, 1.0 - a2 - beta - n, 2.0 - a2 - beta},
                                  z / t);
        const Complex t2 = gamma_real(1.0 + beta) * gamma_real(1.0 - a2 - beta) *
                           reciprocal_gamma(2.0 - a2) / nfact *
                           std::exp(-kI * M_PI * (alpha + beta + 1.0)) *
                           std::pow(t, -1.0 - beta) *
                           principal_power(z, a2 + beta - 1.0) *
                           hyp2f1({1.0 + beta, static_cast<double>(-n), a2 + beta},
                                  z / t);
        return -std::pow(t, beta + n + 1.0) * (t1 + t2);
    }

    // exterior form
    const Complex w = 1.0 - t / z;
    Complex wn{1.0, 0.0};
    for (int j = 0; j < n; ++j) wn *= w;
    const Complex t1 = gamma_real(1.0 + beta) * gamma_real(n - 1.0 + a2) /
                       (nfact * gamma_real(n + a2 + beta)) * kI *
                       std::exp(-kI * M_PI * alpha) *
                       principal_power(z, a2 - 1.0) *
                       hyp2f1({2.0 - a2, 1.0 + beta, -n + 2.0 - a2}, w);
    const Complex t2 = gamma_real(-n + 1.0 - a2) * reciprocal_gamma(2.0 - a2) *
                       principal_power(-kI * (z - t), a2 - 1.0) * wn *
                       hyp2f1({n + a2 + beta, n + 1.0, n + a2}, w);
    return kI / z * std::pow(t, beta + n + 1.0) * (t1 + t2);
}

} // namespace levyarea
