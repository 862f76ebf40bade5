#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "liouville/jet.hpp"
#include "liouville/matrix.hpp"

inline Catch::Approx approx(double v, double eps = 1e-12, double margin = 1e-13) {
    return Catch::Approx(v).epsilon(eps).margin(margin);
}

inline liouville::Jet random_jet(std::mt19937& rng, double t0, int order) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    liouville::Jet j(t0, order);
    for (int i = 0; i <= order; ++i) j.set_coeff(i, dist(rng));
    return j;
}

inline liouville::JetMatrix random_jet_matrix(std::mt19937& rng, int n, double t0, int order) {
    liouville::JetMatrix m(n, n, liouville::Jet(t0, order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = random_jet(rng, t0, order);
    return m;
}

/// Independent determinant oracle: the full signed permutation expansion.
/// Deliberately separate from the library's cofactor/elimination routes.
template <typename T>
T det_permutation_expansion(const liouville::Matrix<T>& m) {
    const int n = m.rows();
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    T acc = liouville::detail::zero_like(m.at(0, 0));
    // iterate permutations in lexicographic order, tracking parity by
    // counting inversions each time (n is tiny in tests)
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
        T prod = liouville::detail::one_like(m.at(0, 0));
        for (int i = 0; i < n; ++i) prod = prod * m.at(i, perm[static_cast<std::size_t>(i)]);
        if (inversions % 2 == 0)
            acc += prod;
        else
            acc -= prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}
