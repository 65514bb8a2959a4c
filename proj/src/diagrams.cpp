#include "levyarea/diagrams.hpp"

#include <algorithm>
#include <string>

namespace levyarea {

namespace {

void enumerate_rec(std::vector<int>& free_idx, Pairing& current,
                   std::vector<Pairing>& out) {
    if (free_idx.empty()) {
        out.push_back(current);
        return;
    }
    const int first = free_idx.front();
    for (std::size_t j = 1; j < free_idx.size(); ++j) {
        const int partner = free_idx[j];
        std::vector<int> rest;
        rest.reserve(free_idx.size() - 2);
        for (std::size_t k = 1; k < free_idx.size(); ++k)
            if (k != j) rest.push_back(free_idx[k]);
        current.emplace_back(first, partner);
        enumerate_rec(rest, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Pairing> enumerate_pairings(int n2) {
    if (n2 <= 0 || n2 % 2 != 0)
        throw PreconditionError("enumerate_pairings: order must be a positive even integer");
    if (n2 > 12)
        throw BudgetError("enumerate_pairings: order " + std::to_string(n2) +
                          " exceeds the combinatorial budget of 12");
    std::vector<int> idx(n2);
    for (int i = 0; i < n2; ++i) idx[i] = i;
    std::vector<Pairing> out;
    Pairing current;
    enumerate_rec(idx, current, out);
    // pairing the smallest free index first yields lexicographic order already
    return out;
}

std::vector<std::vector<int>> diagram_cycles(const Diagram& d) {
    const std::size_t n = 2 * d.kprime_pairing.size();
    if (d.k_pairing.size() != d.kprime_pairing.size())
        throw PreconditionError("diagram_cycles: pairings of different order");
    std::vector<int> next_kp(n, -1), next_k(n, -1);
    for (auto [u, v] : d.kprime_pairing) {
        next_kp[u] = v;
        next_kp[v] = u;
    }
    for (auto [u, v] : d.k_pairing) {
        next_k[u] = v;
        next_k[v] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (next_kp[i] < 0 || next_k[i] < 0)
            throw PreconditionError("diagram_cycles: pairings do not cover all indices");

    std::vector<bool> seen(n, false);
    std::vector<std::vector<int>> cycles;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<int> cyc;
        int v = static_cast<int>(start);
        bool use_kp = true;
        do {
            cyc.push_back(v);
            seen[v] = true;
            v = use_kp ? next_kp[v] : next_k[v];
            use_kp = !use_kp;
        } while (v != static_cast<int>(start));
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

namespace {

// partitions of m into parts >= 1 (part j meaning a connected block of 2j
// vertices), accumulated as multiplicity maps
void partitions_rec(int m, int max_part, std::map<int, int>& counts,
                    const std::function<void(const std::map<int, int>&)>& emit) {
    if (m == 0) {
        emit(counts);
        return;
    }
    for (int part = std::min(m, max_part); part >= 1; --part) {
        ++counts[part];
        partitions_rec(m - part, part, counts, emit);
        if (--counts[part] == 0) counts.erase(part);
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double moments_from_cumulants(const CumulantVector& c, int order) {
    if (order <= 0 || order % 2 != 0)
        throw PreconditionError("moments_from_cumulants: order must be positive even");
    const int N = order / 2;
    double moment = 0.0;
    std::map<int, int> counts;
    partitions_rec(N, N, counts, [&](const std::map<int, int>& parts) {
        double multiplicity = factorial(order);
        double cumul = 1.0;
        for (auto [j, nj] : parts) {
            auto it = c.kappa.find(2 * j);
            if (it == c.kappa.end())
                throw MissingCumulantError("moments_from_cumulants: kappa_" +
                                           std::to_string(2 * j) + " missing");
            multiplicity /= std::pow(factorial(2 * j), nj) * factorial(nj);
            cumul *= std::pow(it->second, nj);
        }
        moment += multiplicity * cumul;
    });
    return moment;
}

double isserlis_oracle(const Eigen::MatrixXd& cov, const std::vector<int>& monomial) {
    if (monomial.size() % 2 != 0)
        throw PreconditionError("isserlis_oracle: monomial must have even length");
    if (monomial.size() > 10)
        throw BudgetError("isserlis_oracle: monomial length exceeds budget of 10");
    if (monomial.empty()) return 1.0;
    for (int v : monomial)
        if (v < 0 || v >= cov.rows())
            throw PreconditionError("isserlis_oracle: variable index out of range");
    double sum = 0.0;
    for (const auto& pairing : enumerate_pairings(static_cast<int>(monomial.size()))) {
        double prod = 1.0;
        for (auto [u, v] : pairing) prod *= cov(monomial[u], monomial[v]);
        sum += prod;
    }
    return sum;
}

double wick_moment_discrete(const Eigen::MatrixXd& kprime, const Eigen::MatrixXd& k,
                            const std::vector<double>& weights, int N) {
    if (N < 1 || 2 * N > 12)
        throw BudgetError("wick_moment_discrete: N out of supported range");
    const auto n = static_cast<Eigen::Index>(weights.size());
    if (kprime.rows() != n || k.rows() != n)
        throw PreconditionError("wick_moment_discrete: dimension mismatch");
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), n);
    const Eigen::MatrixXd M =
        w.cwiseSqrt().asDiagonal() * k * w.cwiseSqrt().asDiagonal() *
        (w.cwiseSqrt().asDiagonal() * kprime * w.cwiseSqrt().asDiagonal());
    // traces of alternating chains, T_r = trace((W K W Kp)^r)
    std::vector<double> traces(N + 1, 0.0);
    Eigen::MatrixXd Mp = Eigen::MatrixXd::Identity(n, n);
    for (int r = 1; r <= N; ++r) {
        Mp = Mp * M;
        traces[r] = Mp.trace();
    }
    const auto pairings = enumerate_pairings(2 * N);
    double total = 0.0;
    for (const auto& P : pairings) {
        for (const auto& Q : pairings) {
            double prod = 1.0;
            for (const auto& cyc : diagram_cycles({P, Q}))
                prod *= traces[static_cast<int>(cyc.size() / 2)];
            total += prod;
        }
    }
    return total;
}

} // namespace levyarea
