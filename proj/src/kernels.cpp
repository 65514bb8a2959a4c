#include "levyarea/kernels.hpp"

#include <cmath>
#include <string>

namespace levyarea {

void ModelParams::validate(double min_eta) const {
    if (!(alpha > 0.0 && alpha < 0.25))
        throw PreconditionError("ModelParams: alpha must be in (0, 1/4), got " +
                                std::to_string(alpha));
    if (!(eta >= min_eta) || (min_eta == 0.0 && eta < 0.0))
        throw PreconditionError("ModelParams: eta = " + std::to_string(eta) +
                                " below required minimum " + std::to_string(min_eta));
}

namespace {

void check_sign(int sign) {
    if (sign != 1 && sign != -1)
        throw PreconditionError("kernel sign must be +1 or -1");
}

} // namespace

Complex kprime_pm(const ModelParams& p, int sign, double x, double y) {
    check_sign(sign);
    p.validate();
    if (!(p.eta > 0.0))
        throw PreconditionError("kprime_pm: eta must be strictly positive");
    const double coeff =
        p.alpha * (1.0 - 2.0 * p.alpha) / (2.0 * std::cos(M_PI * p.alpha));
    return coeff *
           principal_power(Complex{p.eta, sign * (x - y)}, 2.0 * p.alpha - 2.0);
}

double kprime_real(const ModelParams& p, double x, double y) {
    return 2.0 * kprime_pm(p, +1, x, y).real();
}

Complex k_pm(const ModelParams& p, int sign, double x, double y) {
    check_sign(sign);
    p.validate();
    const double b = 2.0 * p.alpha;
    const double coeff = 1.0 / (4.0 * std::cos(M_PI * p.alpha));
    const Complex t1 = principal_power(Complex{p.eta, sign * x}, b);
    const Complex t2 = principal_power(Complex{p.eta, -sign * y}, b);
    const Complex t3 = principal_power(Complex{p.eta, sign * (x - y)}, b);
    return coeff * (t1 + t2 - t3);
}

double k_real(const ModelParams& p, double x, double y) {
    return 2.0 * k_pm(p, +1, x, y).real();
}

Complex kstar_pm(const ModelParams& p, int sign, double x, double y) {
    check_sign(sign);
    p.validate();
    const double coeff = -1.0 / (4.0 * std::cos(M_PI * p.alpha));
    return coeff * principal_power(Complex{p.eta, sign * (x - y)}, 2.0 * p.alpha);
}

double kstar_real(const ModelParams& p, double x, double y) {
    return 2.0 * kstar_pm(p, +1, x, y).real();
}

double increment_covariance(const ModelParams& p, double s, double x, double y) {
    return k_real(p, x, y) - k_real(p, s, y) - k_real(p, x, s) + k_real(p, s, s);
}

namespace {

double fk_scale(double alpha) {
    return std::pow(2.0, alpha - 1.0) *
           std::sqrt(alpha * (1.0 - 2.0 * alpha) / (2.0 * std::cos(M_PI * alpha)));
}

// sqrt((2-2a)_k / k!) by recurrence
double fk_sqrt_ratio(double alpha, int k) {
    double s = 1.0;
    for (int j = 1; j <= k; ++j)
        s *= std::sqrt((1.0 - 2.0 * alpha + j) / static_cast<double>(j));
    return s;
}

} // namespace

Complex basis_fk(double alpha, int k, Complex z) {
    if (!(z.imag() > 0.0))
        throw DomainError("basis_fk: z must lie in the upper half-plane");
    if (k < 0) throw PreconditionError("basis_fk: k must be >= 0");
    const Complex zi{0.0, 1.0};
    const Complex base = principal_power((z + zi) / (2.0 * zi), 2.0 * alpha - 2.0);
    const Complex cay = (z - zi) / (z + zi);
    Complex cayk{1.0, 0.0};
    for (int j = 0; j < k; ++j) cayk *= cay;
    return fk_scale(alpha) * fk_sqrt_ratio(alpha, k) * base * cayk;
}

Complex basis_fk_partial_sum(double alpha, double eta, double x, double y, int K) {
    const Complex zi{0.0, 1.0};
    const Complex zx{x, eta / 2.0};
    const Complex zy{y, eta / 2.0};
    const Complex bx = principal_power((zx + zi) / (2.0 * zi), 2.0 * alpha - 2.0);
    const Complex by = principal_power((zy + zi) / (2.0 * zi), 2.0 * alpha - 2.0);
    const Complex cx = (zx - zi) / (zx + zi);
    const Complex cy = (zy - zi) / (zy + zi);
    const double s2 = fk_scale(alpha) * fk_scale(alpha);
    Complex prod = cx * std::conj(cy);
    Complex power{1.0, 0.0};
    double ratio = 1.0; // (2-2a)_k / k!
    Complex sum{0.0, 0.0};
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            ratio *= (1.0 - 2.0 * alpha + k) / static_cast<double>(k);
            power *= prod;
        }
        sum += ratio * power;
    }
    return s2 * bx * std::conj(by) * sum;
}

double fbm_covariance(double alpha, double s, double t) {
    const double b = 2.0 * alpha;
    return 0.5 * (std::pow(std::abs(s), b) + std::pow(std::abs(t), b) -
                  std::pow(std::abs(t - s), b));
}

} // namespace levyarea
