#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "levyarea/errors.hpp"

namespace levyarea {

/// Perfect matching of {0, ..., 2N-1}; pairs stored as (lo, hi), sorted
/// lexicographically (the canonical order used everywhere).
using Pairing = std::vector<std::pair<int, int>>;

/// All (n2-1)!! pairings of n2 indices in canonical order. n2 <= 12.
std::vector<Pairing> enumerate_pairings(int n2);

/// A closed Wick diagram: one pairing carries the derivative-kernel edges,
/// the other the integrated-kernel edges. Their union decomposes the index
/// set into even cycles alternating the two edge types.
struct Diagram {
    Pairing kprime_pairing;
    Pairing k_pairing;
};

/// Cycle decomposition of the diagram (each cycle listed by its vertices in
/// traversal order, starting from its smallest vertex, first step along a
/// kprime edge).
std::vector<std::vector<int>> diagram_cycles(const Diagram& d);

/// Even-order cumulants kappa_{2n}; odd cumulants are implicitly zero.
struct CumulantVector {
    std::map<int, double> kappa; // key = 2n
};

/// Moment of the given even order reconstructed from cumulants by the
/// partition sum (2N)! / ((2!)^{N1} (4!)^{N2} ...) / (N1! N2! ...)
/// kappa_2^{N1} kappa_4^{N2} ...
double moments_from_cumulants(const CumulantVector& c, int order);

/// Brute-force Gaussian moment: sum over pairings of products of covariance
/// entries. monomial lists variable indices (repetitions allowed), size
/// even and <= 10.
double isserlis_oracle(const Eigen::MatrixXd& cov, const std::vector<int>& monomial);

/// Wick sum for the 2N-th moment of the discrete bilinear model
/// X = sum_i w_i U_i V_i with U ~ N(0, Kp), V ~ N(0, K) independent:
/// the sum over pairing pairs of products of alternating cycle traces.
double wick_moment_discrete(const Eigen::MatrixXd& kprime, const Eigen::MatrixXd& k,
                            const std::vector<double>& weights, int N);

} // namespace levyarea
