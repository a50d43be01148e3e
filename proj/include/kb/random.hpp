#pragma once

#include "clark.hpp"
#include "gaussian.hpp"

#include <random>

namespace kb::random {

using Engine = std::mt19937_64;

inline Engine engine(std::uint64_t seed) { return Engine(mix64(seed)); }

inline double uniform(Engine &e, double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(e); }

inline std::size_t uniform_int(Engine &e, std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(e); }

inline Complex complex_normal(Engine &e) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double a = n(e);
    const double b = n(e);
    return Complex(a, b) * std::sqrt(0.5);
}

inline Matrix complex_normal(Engine &e, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) { m(i, j) = complex_normal(e); }
    }
    return m;
}

inline Vector complex_normal_vector(Engine &e, Index n) { return complex_normal(e, n, 1).col(0); }

/// A A^* / rank with A complex Gaussian n x rank; exact Hermitian symmetry.
inline Matrix psd_matrix(Engine &e, Index n, Index rank) {
    const Matrix a = complex_normal(e, n, rank);
    Matrix g = a * a.adjoint() / static_cast<double>(std::max<Index>(rank, 1));
    mirror_upper(g);
    return g;
}

/// Haar-distributed unitary from the QR of a complex Gaussian matrix.
inline Matrix unitary(Engine &e, Index n) {
    const Matrix z = complex_normal(e, n, n);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) { q.col(j) *= d / std::abs(d); }
    }
    return q;
}

/// Uniform by area in the disk of the given radius.
inline Complex disk_point(Engine &e, double radius) {
    const double r = radius * std::sqrt(uniform(e));
    return std::polar(r, 2.0 * kPi * uniform(e));
}

inline PointSet disk_points(Engine &e, std::size_t n, double radius) {
    std::vector<Complex> zs;
    for (std::size_t i = 0; i < n; ++i) { zs.push_back(disk_point(e, radius)); }
    return PointSet::on_disk(zs);
}

/// Positive weights summing to one exactly enough for the 1e-12 check; each
/// weight is at least min_share / m before normalization.
inline std::vector<double> probability_weights(Engine &e, std::size_t m, double min_share = 0.05) {
    std::vector<double> w(m);
    double total = 0.0;
    for (auto &x : w) {
        x = uniform(e, min_share, 1.0);
        total += x;
    }
    for (auto &x : w) { x /= total; }
    return w;
}

/// Up to max_atoms atoms in [0,1), pairwise at least min_gap apart on the circle.
inline CircleMeasure circle_measure(Engine &e, std::size_t max_atoms, double min_share = 0.05, double min_gap = 0.05) {
    const std::size_t m = uniform_int(e, 1, max_atoms);
    std::vector<double> atoms;
    while (atoms.size() < m) {
        const double x = uniform(e);
        bool distinct = true;
        for (double y : atoms) { distinct = distinct && circle_distance(x, y) >= min_gap; }
        if (distinct) { atoms.push_back(x); }
    }
    return {atoms, probability_weights(e, m, min_share)};
}

inline TorusMeasure torus_measure(Engine &e, std::size_t k, std::size_t m) {
    std::vector<std::vector<double>> atoms;
    while (atoms.size() < m) {
        std::vector<double> a(k);
        for (auto &x : a) { x = uniform(e); }
        if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) { atoms.push_back(a); }
    }
    return {atoms, probability_weights(e, m)};
}

/// Random features over a random probability measure; the kernel is whatever
/// the features realize, so the factorization is exact.
inline BoundaryFactorization factorization(Engine &e, std::size_t n, std::size_t m) {
    DiscreteMeasure mu = DiscreteMeasure::indexed(probability_weights(e, m));
    return factorization_from_features(PointSet::indexed(n), std::move(mu), complex_normal(e, static_cast<Index>(n), static_cast<Index>(m)));
}

/// Like factorization(), with every feature shifted by a random offset of
/// modulus in [0.5, 1] so its mean is typically bounded away from zero.
inline BoundaryFactorization offset_factorization(Engine &e, std::size_t n, std::size_t m) {
    Matrix phi = 0.5 * complex_normal(e, static_cast<Index>(n), static_cast<Index>(m));
    for (Index i = 0; i < phi.rows(); ++i) { phi.row(i).array() += std::polar(uniform(e, 0.5, 1.0), 2.0 * kPi * uniform(e)); }
    DiscreteMeasure mu = DiscreteMeasure::indexed(probability_weights(e, m));
    return factorization_from_features(PointSet::indexed(n), std::move(mu), std::move(phi));
}

}  // namespace kb::random
