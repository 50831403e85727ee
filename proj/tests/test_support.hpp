#pragma once

#include <complex>
#include <random>
#include <vector>

#include "specpol/linalg.hpp"

namespace specpol::testing {

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937& rng) {
    auto a = random_matrix(n, rng);
    auto h = a + a.adjoint();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) h(j, i) = std::conj(h(i, j));
    for (std::size_t i = 0; i < n; ++i) h(i, i) = h(i, i).real();
    return h;
}

inline UnitVector random_unit(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(g(rng), g(rng));
    return UnitVector::normalize(std::move(v));
}

/// Minimal-cost matching of two multisets (exhaustive greedy on sorted
/// distances is enough for the small, well-separated sets used in tests).
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (cplx x : a) {
        std::size_t best = b.size();
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && (best == b.size() || std::abs(b[j] - x) < std::abs(b[best] - x))) best = j;
        used[best] = true;
        worst = std::max(worst, std::abs(b[best] - x));
    }
    return worst;
}

}  // namespace specpol::testing
