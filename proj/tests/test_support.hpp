#pragma once

#include <complex>
#include <random>
#include <vector>

#include "qwipe/qwipe.hpp"

namespace qwipe::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Complex random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return {dist(rng), dist(rng)};
}

inline ComplexMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = random_complex(rng);
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64 &rng, std::size_t n) {
    const ComplexMatrix a = random_matrix(rng, n, n);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

inline ComplexMatrix random_unitary(std::mt19937_64 &rng, std::size_t n) {
    return hermitian_propagator(random_hermitian(rng, n), 1.0);
}

// rho = B B^dagger / tr(B B^dagger): Hermitian, unit trace, PSD by construction.
inline ComplexMatrix random_density_matrix(std::mt19937_64 &rng, std::size_t n) {
    const ComplexMatrix b = random_matrix(rng, n, n);
    ComplexMatrix rho = b * b.adjoint();
    rho *= Complex(1.0, 0.0) / rho.trace();
    return rho;
}

inline double max_entry_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix d = a;
    d -= b;
    return d.max_abs();
}

} // namespace qwipe::testing
