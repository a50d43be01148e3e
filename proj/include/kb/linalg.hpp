#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

namespace kb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

/// Point on the unit circle for x in [0,1).
inline Complex unit_circle(double x) { return std::polar(1.0, 2.0 * kPi * x); }

template<typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    if (m.size() == 0) { return 0.0; }
    return m.cwiseAbs().maxCoeff();
}

/// max |A - A*| entrywise.
inline double hermitian_defect(const Matrix &a) {
    if (a.rows() != a.cols()) { return INFINITY; }
    return max_abs(a - a.adjoint());
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianSpectrum {
    RealVector values;
    Matrix vectors;

    [[nodiscard]] double min() const { return values.size() ? values(0) : 0.0; }
    [[nodiscard]] double max() const { return values.size() ? values(values.size() - 1) : 0.0; }
};

inline HermitianSpectrum hermitian_spectrum(const Matrix &a) {
    if (a.rows() == 0) { return {RealVector(0), Matrix(0, 0)}; }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Default relative rank threshold for an n-dimensional spectrum.
inline double default_rank_tol(Index n) { return 1e-12 * static_cast<double>(std::max<Index>(n, 1)); }

/// Moore-Penrose inverse of a Hermitian PSD matrix; eigenvalues at or below
/// rank_tol * lambda_max are treated as zero.
inline Matrix hermitian_pinv(const Matrix &a, double rank_tol) {
    const auto spec = hermitian_spectrum(a);
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    const double cut = rank_tol * std::max(spec.max(), 0.0);
    for (Index k = 0; k < spec.values.size(); ++k) {
        const double lambda = spec.values(k);
        if (lambda > cut && lambda > 0.0) {
            out += (spec.vectors.col(k) * spec.vectors.col(k).adjoint()) / lambda;
        }
    }
    return out;
}

/// Numerical rank from singular values, threshold rel_tol * sigma_max.
/// A rel_tol <= 0 selects max(rows, cols) * epsilon.
template<typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived> &m, double rel_tol = 0.0) {
    if (m.size() == 0) { return 0; }
    Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m.eval());
    const auto &sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) { return 0; }
    const double tol = rel_tol > 0.0
                           ? rel_tol * sv(0)
                           : static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon() * sv(0);
    Index r = 0;
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > tol) { ++r; }
    }
    return r;
}

/// Copy the upper triangle's conjugate into the lower triangle and zero the
/// imaginary part of the diagonal, giving bit-exact Hermitian symmetry.
inline void mirror_upper(Matrix &a) {
    for (Index i = 0; i < a.rows(); ++i) {
        a(i, i) = Complex(a(i, i).real(), 0.0);
        for (Index j = i + 1; j < a.cols(); ++j) { a(j, i) = std::conj(a(i, j)); }
    }
}

}  // namespace kb
