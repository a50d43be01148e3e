#pragma once

#include "factorization.hpp"

namespace kb {

/// k_z^(b)(x_j) = (1 - b(z) conj(b(e(x_j)))) / (1 - z conj(e(x_j))), with
/// b(e(x_j)) = 1 (radial limit at an atom).
inline Complex kb_feature(const InnerFunctionB &b, Complex z, std::size_t atom) {
    require_in_disk(z, "kb_feature");
    if (atom >= b.measure().size()) { raise(ErrorKind::IndexOutOfRange, "atom index " + std::to_string(atom)); }
    const Complex at_atom = b.at_atom();
    const Complex e = b.measure().circle_points()[atom];
    // With b(e) = 1 the numerator is exactly 1 - b(z) = 1/C(z).
    const Complex numerator = at_atom == Complex(1.0) ? b.one_minus(z) : 1.0 - b(z) * std::conj(at_atom);
    return numerator / (1.0 - z * std::conj(e));
}

/// K^(b) over `points` factored through the Clark measure of b.
inline BoundaryFactorization build_kb_factorization(const InnerFunctionB &b, const PointSet &points) {
    auto kernel = share(assemble_gram(DeBrangesRovnyakKernel{b}, points));
    const auto n = static_cast<Index>(points.size());
    const auto m = static_cast<Index>(b.measure().size());
    Matrix phi(n, m);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) { phi(i, j) = kb_feature(b, points.z(static_cast<std::size_t>(i)), static_cast<std::size_t>(j)); }
    }
    return {std::move(kernel), DiscreteMeasure::from_circle(b.measure()), std::move(phi)};
}

/// Features 1 / (1 - z conj(e(x))) of the Szego kernel restricted to an atomic
/// mu. The realized kernel is their Gram matrix.
inline BoundaryFactorization szego_boundary_factorization(const CircleMeasure &mu, const PointSet &points) {
    const auto n = static_cast<Index>(points.size());
    const auto m = static_cast<Index>(mu.size());
    Matrix phi(n, m);
    for (Index i = 0; i < n; ++i) {
        const Complex z = points.z(static_cast<std::size_t>(i));
        require_in_disk(z, "szego_boundary_factorization");
        for (Index j = 0; j < m; ++j) { phi(i, j) = 1.0 / (1.0 - z * std::conj(mu.circle_points()[static_cast<std::size_t>(j)])); }
    }
    return factorization_from_features(points, DiscreteMeasure::from_circle(mu), std::move(phi));
}

/// Circular distance between x and y in [0,1).
inline double circle_distance(double x, double y) {
    const double d = std::abs(x - y);
    return std::min(d, 1.0 - d);
}

inline constexpr double kAtomMargin = 1e-3;

/// `count` equally spaced angles in [0,1), minus those within `margin` of an atom.
inline std::vector<double> non_atom_grid(const CircleMeasure &mu, std::size_t count, double margin = kAtomMargin) {
    std::vector<double> grid;
    for (std::size_t k = 0; k < count; ++k) {
        const double theta = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
        bool clear = true;
        for (double x : mu.atoms()) { clear = clear && circle_distance(theta, x) >= margin; }
        if (clear) { grid.push_back(theta); }
    }
    return grid;
}

/// max over the grid of |1 - |b(r e(theta))||.
inline double inner_modulus_check(const InnerFunctionB &b, const std::vector<double> &thetas, double r) {
    if (!(r > 0.0 && r < 1.0)) { raise(ErrorKind::DomainViolation, "radius must lie in (0,1)"); }
    double worst = 0.0;
    for (double theta : thetas) {
        for (double x : b.measure().atoms()) {
            if (circle_distance(theta, x) < kAtomMargin) { raise(ErrorKind::DomainViolation, "grid angle " + std::to_string(theta) + " is too close to an atom"); }
        }
        worst = std::max(worst, std::abs(1.0 - std::abs(b(r * unit_circle(theta)))));
    }
    return worst;
}

/// Zeros of b = 1 - 1/C: roots of prod_k (1 - z conj(e_k)) - sum_j w_j prod_{k != j} (1 - z conj(e_k)),
/// a polynomial of degree #atoms. z = 0 is always among them.
inline std::vector<Complex> inner_zeros(const InnerFunctionB &b) {
    if (b.form() != BForm::reciprocal) { raise(ErrorKind::DomainViolation, "zeros are computed for the reciprocal form only"); }
    const auto &mu = b.measure();
    const std::size_t m = mu.size();
    // Ascending coefficients.
    auto times_factor = [](const std::vector<Complex> &p, Complex e) {
        std::vector<Complex> out(p.size() + 1, 0.0);
        for (std::size_t d = 0; d < p.size(); ++d) {
            out[d] += p[d];
            out[d + 1] -= p[d] * std::conj(e);
        }
        return out;
    };
    std::vector<Complex> poly{1.0};
    for (const Complex e : mu.circle_points()) { poly = times_factor(poly, e); }
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Complex> q{1.0};
        for (std::size_t k = 0; k < m; ++k) {
            if (k != j) { q = times_factor(q, mu.circle_points()[k]); }
        }
        for (std::size_t d = 0; d < q.size(); ++d) { poly[d] -= mu.weights()[j] * q[d]; }
    }
    const Complex lead = poly[m];
    Matrix companion = Matrix::Zero(static_cast<Index>(m), static_cast<Index>(m));
    for (Index i = 1; i < static_cast<Index>(m); ++i) { companion(i, i - 1) = 1.0; }
    for (std::size_t d = 0; d < m; ++d) { companion(static_cast<Index>(d), static_cast<Index>(m) - 1) = -poly[d] / lead; }
    const Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
    std::vector<Complex> zeros(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    return zeros;
}

struct HerglotzReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_error = 0.0;
};

/// Re[(1 + b(z)) / (1 - b(z))] against the Poisson integral of mu.
inline HerglotzReport herglotz_poisson_check(const InnerFunctionB &b, Complex z) {
    require_in_disk(z, "herglotz_poisson_check");
    const Complex bz = b(z);
    if (std::abs(1.0 - bz) < 1e-14) { raise(ErrorKind::BAtOne, "b(z) = 1"); }
    HerglotzReport r;
    r.lhs = ((1.0 + bz) / (1.0 - bz)).real();
    const auto &mu = b.measure();
    const double one_minus_r2 = 1.0 - std::norm(z);
    for (std::size_t j = 0; j < mu.size(); ++j) { r.rhs += mu.weights()[j] * one_minus_r2 / std::norm(mu.circle_points()[j] - z); }
    r.abs_error = std::abs(r.lhs - r.rhs);
    return r;
}

/// E_i = sum_x k_{s_i}(x) mu(x).
inline Vector expectation_vector(const BoundaryFactorization &f) { return f.features * f.measure.weight_vector().cast<Complex>(); }

inline constexpr double kZeroExpectationTol = 1e-12;

/// Kernel and features divided by the feature means.
struct RenormContext {
    BoundaryFactorization factorization;
    Vector expectations;
    Matrix kren_gram;
    Matrix kren_features;
    PsdReport kren_psd;

    /// The renormalized pair as a factorization in its own right.
    [[nodiscard]] BoundaryFactorization renormalized() const {
        return {share(FiniteKernel(factorization.kernel->points(), kren_gram)), factorization.measure, kren_features};
    }

    /// max |Kren - sum_x kren_k conj(kren_k) mu| scaled by max(1, max |Kren|).
    [[nodiscard]] double identity_residual() const {
        const double scale = std::max(1.0, max_abs(kren_gram));
        return max_abs(feature_gram(factorization.measure, kren_features) - kren_gram) / scale;
    }
};

inline RenormContext renormalize(const BoundaryFactorization &f, double psd_tol = kDefaultPsdTol) {
    const Vector e = expectation_vector(f);
    for (Index i = 0; i < e.size(); ++i) {
        if (std::abs(e(i)) <= kZeroExpectationTol) {
            raise(ErrorKind::ZeroExpectation, "feature of point '" + f.kernel->points().labels()[static_cast<std::size_t>(i)] + "' has zero mean");
        }
    }
    const Vector inv = e.cwiseInverse();
    Matrix kren = inv.asDiagonal() * f.kernel->gram() * inv.conjugate().asDiagonal();
    mirror_upper(kren);
    Matrix features = inv.asDiagonal() * f.features;
    const auto psd = check_positive_definite(kren, psd_tol);
    return {f, e, std::move(kren), std::move(features), psd};
}

/// (V_mu g)(s_i) = (1 / conj(E_i)) sum_x g(x) conj(k_{s_i}(x)) mu(x).
inline Vector normalized_transform_V(const RenormContext &ctx, const Vector &g) {
    return ctx.expectations.conjugate().cwiseInverse().asDiagonal() * apply_V(ctx.factorization, g);
}

struct DensityReport {
    bool is_dense = false;
    Index rank = 0;
    Index deficiency = 0;
};

/// Features span L^2(mu) (equivalently V_mu is injective, hence unitary).
inline DensityReport density_criterion(const BoundaryFactorization &f, double rank_tol = 0.0) {
    const auto m = minimality_test(f, rank_tol);
    return {m.is_minimal, m.feature_rank, static_cast<Index>(f.atoms()) - m.feature_rank};
}

inline DensityReport density_criterion(const RenormContext &ctx, double rank_tol = 0.0) { return density_criterion(ctx.factorization, rank_tol); }

/// Finite atomic probability measure on the k-torus, coordinates in [0,1)^k.
class TorusMeasure {
public:
    TorusMeasure(std::vector<std::vector<double>> atoms, std::vector<double> weights) : atoms_(std::move(atoms)), weights_(std::move(weights)) {
        if (atoms_.empty()) { raise(ErrorKind::InvalidMeasure, "torus measure needs at least one atom"); }
        if (atoms_.size() != weights_.size()) { raise(ErrorKind::ShapeMismatch, "atoms and weights differ in length"); }
        const std::size_t k = atoms_.front().size();
        if (k == 0) { raise(ErrorKind::DimensionMismatch, "torus atoms need at least one coordinate"); }
        for (const auto &a : atoms_) {
            if (a.size() != k) { raise(ErrorKind::DimensionMismatch, "torus atoms have mixed dimensions"); }
            for (double x : a) {
                if (!(x >= 0.0 && x < 1.0)) { raise(ErrorKind::InvalidMeasure, "torus coordinate outside [0,1)"); }
            }
        }
        std::vector<std::vector<double>> sorted = atoms_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) { raise(ErrorKind::InvalidMeasure, "torus atoms must be pairwise distinct"); }
        for (double w : weights_) {
            if (!(w > 0.0)) { raise(ErrorKind::InvalidMeasure, "torus weights must be positive"); }
        }
        const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-12) { raise(ErrorKind::InvalidMeasure, "torus weights must sum to 1"); }
    }

    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] std::size_t dimension() const { return atoms_.front().size(); }
    [[nodiscard]] const std::vector<std::vector<double>> &atoms() const { return atoms_; }
    [[nodiscard]] const std::vector<double> &weights() const { return weights_; }

private:
    std::vector<std::vector<double>> atoms_;
    std::vector<double> weights_;
};

/// Rows: atoms. Columns: monomials e(n . x) for n in {0..degree}^k,
/// scaled by sqrt(mu(x)).
inline Matrix monomial_matrix(const TorusMeasure &mu, std::size_t degree) {
    const std::size_t k = mu.dimension();
    std::size_t count = 1;
    for (std::size_t j = 0; j < k; ++j) { count *= degree + 1; }
    Matrix a(static_cast<Index>(mu.size()), static_cast<Index>(count));
    std::vector<std::size_t> n(k, 0);
    for (std::size_t col = 0; col < count; ++col) {
        std::size_t rest = col;
        for (std::size_t j = 0; j < k; ++j) {
            n[j] = rest % (degree + 1);
            rest /= degree + 1;
        }
        for (std::size_t x = 0; x < mu.size(); ++x) {
            double phase = 0.0;
            for (std::size_t j = 0; j < k; ++j) { phase += static_cast<double>(n[j]) * mu.atoms()[x][j]; }
            // Reduce before scaling by 2 pi to keep the angle small.
            phase -= std::floor(phase);
            a(static_cast<Index>(x), static_cast<Index>(col)) = std::sqrt(mu.weights()[x]) * unit_circle(phase);
        }
    }
    return a;
}

struct PolydiskDensityReport {
    std::vector<Index> rank_sequence;
    bool saturated = false;
    /// Smallest degree reaching full rank; -1 if none.
    long saturation_degree = -1;
};

/// Rank of the monomial matrix for degrees 0..max_degree; saturated once the
/// monomials span L^2(mu).
inline PolydiskDensityReport polydisk_density_test(const TorusMeasure &mu, std::size_t max_degree) {
    PolydiskDensityReport r;
    for (std::size_t d = 0; d <= max_degree; ++d) {
        const Index rank = numerical_rank(monomial_matrix(mu, d), 1e-10);
        r.rank_sequence.push_back(rank);
        if (rank == static_cast<Index>(mu.size()) && !r.saturated) {
            r.saturated = true;
            r.saturation_degree = static_cast<long>(d);
        }
    }
    return r;
}

inline std::size_t default_max_degree(const TorusMeasure &mu) { return mu.size(); }

}  // namespace kb
