#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace levyarea {

/// Philox4x32-10 counter-based generator (Salmon et al.). A block is a pure
/// function of (counter, key), so streams indexed by (seed, path, component,
/// index) are reproducible independently of evaluation order.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);
};

/// Standard normal draw keyed by (seed, path, component, index); Box-Muller
/// on one Philox block.
double gaussian_draw(std::uint64_t seed, std::uint64_t path, std::uint32_t component,
                     std::uint64_t index);

/// Standard complex normal (E xi conj(xi) = 1, E xi^2 = 0) from the same block.
std::complex<double> complex_gaussian_draw(std::uint64_t seed, std::uint64_t path,
                                           std::uint32_t component,
                                           std::uint64_t index);

/// Uniform draw in (0, 1], same keying scheme.
double uniform_draw(std::uint64_t seed, std::uint64_t path, std::uint32_t component,
                    std::uint64_t index);

/// Name recorded in experiment metadata.
inline constexpr const char* kRngAlgorithm = "philox4x32-10";

} // namespace levyarea
