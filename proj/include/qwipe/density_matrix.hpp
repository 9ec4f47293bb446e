#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "qwipe/complex_matrix.hpp"
#include "qwipe/errors.hpp"

namespace qwipe {

// Default tolerances: 1e-9 on hermiticity/trace, 1e-8 on the minimum
// eigenvalue. These leave headroom above double-precision accumulation
// over ~1e6 evolution steps.
inline constexpr double kDensityTolerance = 1e-9;

/// A ComplexMatrix checked to be Hermitian, unit-trace, and positive
/// semidefinite within its validation tolerance. Construct via validate_density.
class DensityMatrix {
  public:
    const ComplexMatrix &matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }
    double validation_tolerance() const { return tolerance_; }
    double psd_tolerance() const { return psd_tolerance_; }

    const Complex &operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

  private:
    DensityMatrix(ComplexMatrix m, double tol, double psd_tol)
        : matrix_(std::move(m)), tolerance_(tol), psd_tolerance_(psd_tol) {}

    friend DensityMatrix validate_density(ComplexMatrix m, double tol, double psd_tol);

    ComplexMatrix matrix_;
    double tolerance_;
    double psd_tolerance_;
};

/// Checks the three density-matrix invariants and wraps the matrix.
/// psd_tol < 0 means "10x the hermiticity/trace tolerance" (1e-8 at default).
inline DensityMatrix validate_density(ComplexMatrix m, double tol = kDensityTolerance,
                                      double psd_tol = -1.0) {
    if (!m.is_square())
        throw DimensionError("validate_density: matrix must be square");
    if (tol < 0.0)
        throw DomainError("validate_density: tolerance must be non-negative");
    if (psd_tol < 0.0)
        psd_tol = 10.0 * tol;

    if (!m.all_finite())
        throw ValidationError("validate_density: non-finite entries");

    const double herm = m.hermiticity_defect();
    if (herm > tol)
        throw HermiticityError("density matrix not Hermitian: defect " + std::to_string(herm) +
                               " > " + std::to_string(tol));

    const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_err > tol)
        throw TraceError("density matrix trace deviates from 1 by " + std::to_string(trace_err) +
                         " > " + std::to_string(tol));

    const double min_eig = min_hermitian_eigenvalue(m, tol);
    if (min_eig < -psd_tol)
        throw PositivityError("density matrix not positive semidefinite: min eigenvalue " +
                              std::to_string(min_eig) + " < -" + std::to_string(psd_tol));

    return DensityMatrix(std::move(m), tol, psd_tol);
}

} // namespace qwipe
