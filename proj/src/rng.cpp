#include "levyarea/rng.hpp"

#include <cmath>

namespace levyarea {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

namespace {

std::array<std::uint32_t, 4> draw_block(std::uint64_t seed, std::uint64_t path,
                                        std::uint32_t component, std::uint64_t index) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(path),
        (static_cast<std::uint32_t>(path >> 32) << 2) | (component & 3u)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    return Philox4x32::block(ctr, key);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t v = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // (v + 1) / 2^64 in (0, 1]
    return (static_cast<double>(v) + 1.0) * 0x1p-64;
}

} // namespace

double gaussian_draw(std::uint64_t seed, std::uint64_t path, std::uint32_t component,
                     std::uint64_t index) {
    const auto b = draw_block(seed, path, component, index);
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double uniform_draw(std::uint64_t seed, std::uint64_t path, std::uint32_t component,
                    std::uint64_t index) {
    const auto b = draw_block(seed, path, component, index);
    return to_unit(b[0], b[1]);
}

std::complex<double> complex_gaussian_draw(std::uint64_t seed, std::uint64_t path,
                                           std::uint32_t component,
                                           std::uint64_t index) {
    const auto b = draw_block(seed, path, component, index);
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double g1 = r * std::cos(2.0 * M_PI * u2);
    const double g2 = r * std::sin(2.0 * M_PI * u2);
    return {g1 / std::sqrt(2.0), g2 / std::sqrt(2.0)};
}

} // namespace levyarea
