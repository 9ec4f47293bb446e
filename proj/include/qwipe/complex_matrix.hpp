#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "qwipe/errors.hpp"

namespace qwipe {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage. All dimensions in this library
/// are tiny (<= 16), so no attempt is made at blocked or sparse formats.
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionError("entry count " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<Complex> &diag) {
        ComplexMatrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i)
            m(i, i) = diag[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex> &entries() const { return data_; }

    ComplexMatrix &operator+=(const ComplexMatrix &other) {
        require_same_shape(other, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] += other.data_[k];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &other) {
        require_same_shape(other, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] -= other.data_[k];
        return *this;
    }

    ComplexMatrix &operator*=(Complex scalar) {
        for (auto &v : data_)
            v *= scalar;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        if (a.cols_ != b.rows_)
            throw DimensionError("matrix product: " + std::to_string(a.rows_) + "x" +
                                 std::to_string(a.cols_) + " times " + std::to_string(b.rows_) +
                                 "x" + std::to_string(b.cols_));
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0, 0.0))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Complex trace() const {
        if (!is_square())
            throw DimensionError("trace of non-square matrix");
        Complex t(0.0, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            t += (*this)(i, i);
        return t;
    }

    /// Largest entry magnitude.
    double max_abs() const {
        double m = 0.0;
        for (const auto &v : data_)
            m = std::max(m, std::abs(v));
        return m;
    }

    /// Largest |M[i][j] - conj(M[j][i])|.
    double hermiticity_defect() const {
        if (!is_square())
            throw DimensionError("hermiticity defect of non-square matrix");
        double d = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const Complex &v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        });
    }

  private:
    void require_same_shape(const ComplexMatrix &other, const char *op) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw DimensionError(std::string(op) + ": shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

/// Kronecker product: result[(i*p+k)][(j*q+l)] = a[i][j] * b[k][l] for b of shape p x q.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0))
                continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

/// Trace out the second factor of a bipartite (dim1*dim2) x (dim1*dim2) matrix:
/// result[i][j] = sum_k m[i*dim2+k][j*dim2+k].
inline ComplexMatrix partial_trace_second(const ComplexMatrix &m, std::size_t dim1,
                                          std::size_t dim2) {
    if (!m.is_square() || m.rows() != dim1 * dim2)
        throw DimensionError("partial_trace_second: expected " + std::to_string(dim1 * dim2) +
                             "x" + std::to_string(dim1 * dim2) + " matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    ComplexMatrix r(dim1, dim1);
    for (std::size_t i = 0; i < dim1; ++i)
        for (std::size_t j = 0; j < dim1; ++j) {
            Complex s(0.0, 0.0);
            for (std::size_t k = 0; k < dim2; ++k)
                s += m(i * dim2 + k, j * dim2 + k);
            r(i, j) = s;
        }
    return r;
}

/// Unitary conjugation u * rho * u^dagger.
inline ComplexMatrix conjugate(const ComplexMatrix &u, const ComplexMatrix &rho) {
    if (!u.is_square() || !rho.is_square() || u.rows() != rho.rows())
        throw DimensionError("conjugate: operands must be square with matching dimension");
    return u * rho * u.adjoint();
}

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations; converges quadratically once the off-diagonals are small.
inline EigenDecomposition hermitian_eigensystem(const ComplexMatrix &h, double herm_tol = 1e-9) {
    if (!h.is_square())
        throw DimensionError("hermitian_eigensystem: matrix must be square");
    if (h.hermiticity_defect() > herm_tol)
        throw HermiticityError("hermitian_eigensystem: hermiticity defect " +
                               std::to_string(h.hermiticity_defect()) + " exceeds tolerance");

    const std::size_t n = h.rows();
    // Work on the exactly Hermitian part; the defect is below tolerance.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-15 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off = std::max(off, std::abs(a(p, q)));
        if (off <= stop)
            break;

        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = std::abs(a(p, q));
                if (apq <= stop)
                    continue;
                const Complex phase = a(p, q) / apq;
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex se = s * phase;

                // A <- R^dagger A R with R = I except
                // R[p][p]=c, R[p][q]=s*phase, R[q][p]=-s*conj(phase), R[q][q]=c.
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - std::conj(se) * akq;
                    a(k, q) = se * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - se * aqk;
                    a(q, k) = std::conj(se) * apk + c * aqk;
                }
                a(p, q) = Complex(0.0, 0.0);
                a(q, p) = Complex(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(se) * vkq;
                    v(k, q) = se * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition result;
    result.values.resize(n);
    result.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i)
            result.vectors(i, k) = v(i, order[k]);
    }
    return result;
}

/// Smallest eigenvalue of a Hermitian matrix. Closed form for dim <= 2.
inline double min_hermitian_eigenvalue(const ComplexMatrix &m, double herm_tol = 1e-9) {
    if (!m.is_square())
        throw DimensionError("min_hermitian_eigenvalue: matrix must be square");
    if (m.rows() == 1)
        return m(0, 0).real();
    if (m.rows() == 2) {
        const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
        const double half_gap = 0.5 * (m(0, 0).real() - m(1, 1).real());
        const double off = 0.5 * std::abs(m(0, 1) + std::conj(m(1, 0)));
        return mean - std::hypot(half_gap, off);
    }
    return hermitian_eigensystem(m, herm_tol).values.front();
}

/// Propagator U = exp(-i h dt) for Hermitian h. Diagonal inputs get exact
/// entrywise phases; anything else goes through the eigendecomposition.
inline ComplexMatrix hermitian_propagator(const ComplexMatrix &h, double dt,
                                          double herm_tol = 1e-9) {
    if (!h.is_square())
        throw DimensionError("hermitian_propagator: matrix must be square");
    if (h.hermiticity_defect() > herm_tol)
        throw HermiticityError("hermitian_propagator: hermiticity defect " +
                               std::to_string(h.hermiticity_defect()) + " exceeds tolerance");

    const std::size_t n = h.rows();
    double max_off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                max_off = std::max(max_off, std::abs(h(i, j)));

    if (max_off <= 1e-14) {
        ComplexMatrix u(n, n);
        for (std::size_t k = 0; k < n; ++k)
            u(k, k) = std::exp(Complex(0.0, -h(k, k).real() * dt));
        return u;
    }

    const EigenDecomposition eig = hermitian_eigensystem(h, herm_tol);
    ComplexMatrix phases(n, n);
    for (std::size_t k = 0; k < n; ++k)
        phases(k, k) = std::exp(Complex(0.0, -eig.values[k] * dt));
    return eig.vectors * phases * eig.vectors.adjoint();
}

} // namespace qwipe
