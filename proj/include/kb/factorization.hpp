#pragma once

#include "rkhs.hpp"

#include <map>
#include <numeric>
#include <optional>

namespace kb {

/// Finite atomic measure. The sigma-algebra is the power set of the atoms.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;

    DiscreteMeasure(std::vector<std::string> labels, std::vector<double> weights, bool normalized = true,
                    std::vector<std::vector<double>> coords = {})
        : labels_(std::move(labels)), weights_(std::move(weights)), coords_(std::move(coords)), normalized_(normalized) {
        if (labels_.size() != weights_.size()) { raise(ErrorKind::ShapeMismatch, "atom labels and weights differ in length"); }
        if (!coords_.empty() && coords_.size() != labels_.size()) { raise(ErrorKind::ShapeMismatch, "atom coords and labels differ in length"); }
        std::set<std::string> seen;
        for (const auto &l : labels_) {
            if (!seen.insert(l).second) { raise(ErrorKind::LabelMismatch, "duplicate atom label '" + l + "'"); }
        }
        for (double w : weights_) {
            if (!(w > 0.0)) { raise(ErrorKind::InvalidMeasure, "atom weights must be positive"); }
        }
        if (normalized_) {
            const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
            if (std::abs(total - 1.0) > 1e-12) { raise(ErrorKind::InvalidMeasure, "probability weights sum to " + std::to_string(total)); }
        }
    }

    /// Atoms "0".."m-1" with the given weights.
    static DiscreteMeasure indexed(std::vector<double> weights, bool normalized = true) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < weights.size(); ++i) { labels.push_back(std::to_string(i)); }
        return {std::move(labels), std::move(weights), normalized};
    }

    static DiscreteMeasure counting(std::size_t m) { return indexed(std::vector<double>(m, 1.0), false); }

    static DiscreteMeasure uniform(std::size_t m) { return indexed(std::vector<double>(m, 1.0 / static_cast<double>(m)), false); }

    static DiscreteMeasure from_circle(const CircleMeasure &mu) {
        std::vector<std::vector<double>> coords;
        for (double x : mu.atoms()) { coords.push_back({x}); }
        DiscreteMeasure out = indexed(mu.weights());
        out.coords_ = std::move(coords);
        return out;
    }

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string> &labels() const { return labels_; }
    [[nodiscard]] const std::vector<double> &weights() const { return weights_; }
    [[nodiscard]] const std::vector<std::vector<double>> &coords() const { return coords_; }
    [[nodiscard]] bool normalized() const { return normalized_; }

    [[nodiscard]] RealVector weight_vector() const { return Eigen::Map<const RealVector>(weights_.data(), static_cast<Index>(weights_.size())); }

    [[nodiscard]] std::optional<std::size_t> find(const std::string &label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == label) { return i; }
        }
        return std::nullopt;
    }

    bool operator==(const DiscreteMeasure &) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<double> weights_;
    std::vector<std::vector<double>> coords_;
    bool normalized_ = true;
};

/// <g, h> in L^2(mu) = sum_x g(x) conj(h(x)) mu(x).
inline Complex l2_inner(const DiscreteMeasure &mu, const Vector &g, const Vector &h) {
    if (static_cast<std::size_t>(g.size()) != mu.size() || static_cast<std::size_t>(h.size()) != mu.size()) {
        raise(ErrorKind::ShapeMismatch, "L2 vector length differs from atom count");
    }
    return h.dot(mu.weight_vector().cast<Complex>().cwiseProduct(g));
}

inline double l2_norm2(const DiscreteMeasure &mu, const Vector &g) { return l2_inner(mu, g, g).real(); }

/// Element of M(K): features(i, x) = k_{s_i}(x).
struct BoundaryFactorization {
    KernelRef kernel;
    DiscreteMeasure measure;
    Matrix features;

    BoundaryFactorization(KernelRef k, DiscreteMeasure mu, Matrix phi) : kernel(std::move(k)), measure(std::move(mu)), features(std::move(phi)) {
        if (!kernel) { raise(ErrorKind::BaseMismatch, "factorization has no kernel"); }
        if (static_cast<std::size_t>(features.rows()) != kernel->size() || static_cast<std::size_t>(features.cols()) != measure.size()) {
            raise(ErrorKind::ShapeMismatch, "features are " + std::to_string(features.rows()) + "x" + std::to_string(features.cols()) + ", expected " +
                                                std::to_string(kernel->size()) + "x" + std::to_string(measure.size()));
        }
    }

    [[nodiscard]] std::size_t points() const { return kernel->size(); }
    [[nodiscard]] std::size_t atoms() const { return measure.size(); }
};

/// Phi D_mu Phi*, the Gram matrix the features actually realize.
inline Matrix feature_gram(const DiscreteMeasure &mu, const Matrix &features) {
    Matrix g = features * mu.weight_vector().cast<Complex>().asDiagonal() * features.adjoint();
    mirror_upper(g);
    return g;
}

/// Kernel whose gram is realized by the given features; the factorization is exact by construction.
inline BoundaryFactorization factorization_from_features(PointSet points, DiscreteMeasure mu, Matrix features) {
    Matrix g = feature_gram(mu, features);
    return {share(FiniteKernel(std::move(points), std::move(g))), std::move(mu), std::move(features)};
}

/// A Parseval frame as an element of M(K): atoms are frame rows, counting measure.
inline BoundaryFactorization counting_factorization(const ParsevalFrame &frame) {
    return {frame.base, DiscreteMeasure::counting(static_cast<std::size_t>(frame.frame.rows())), frame.frame.transpose()};
}

inline constexpr double kDefaultFactTol = 1e-9;

struct FactorizationCheck {
    double residual = 0.0;
    bool holds = false;
};

/// max |Phi D Phi* - G|; membership in M(K) iff residual <= tol.
inline FactorizationCheck verify_factorization(const BoundaryFactorization &f, double tol = kDefaultFactTol) {
    const double r = max_abs(feature_gram(f.measure, f.features) - f.kernel->gram());
    return {r, r <= tol};
}

struct MinimalityReport {
    bool is_minimal = false;
    Index feature_rank = 0;
};

/// Minimal (tight) iff the features span L^2(mu), i.e. the weighted feature
/// matrix Phi D^{1/2} has rank equal to the atom count.
inline MinimalityReport minimality_test(const BoundaryFactorization &f, double rank_tol = 0.0) {
    const Matrix weighted = f.features * f.measure.weight_vector().cwiseSqrt().cast<Complex>().asDiagonal();
    const Index r = numerical_rank(weighted, rank_tol);
    return {r == static_cast<Index>(f.atoms()), r};
}

// The transform pair below follows W(K(., s)) = k_s and
// (V g)(s) = sum_x g(x) conj(k_s(x)) mu(x). With these formulas W is isometric
// for the pairing <f, h> = sum_ij xi_i conj(eta_j) K(s_i, s_j), and V W sends
// the generator at t to s -> K(t, s). For real kernels both agree with
// rkhs_inner and with the gram column.

/// sum_ij xi_i conj(eta_j) G(i,j).
inline Complex kernel_pairing(const Matrix &gram, const Vector &xi, const Vector &eta) { return (xi.transpose() * gram * eta.conjugate())(0, 0); }

inline void require_factorization(const BoundaryFactorization &f, double tol) {
    const auto check = verify_factorization(f, tol);
    if (!check.holds) { raise(ErrorKind::NotAFactorization, "factorization residual " + std::to_string(check.residual) + " exceeds " + std::to_string(tol)); }
}

/// W(sum xi_i K(., s_i)) = sum xi_i k_{s_i}.
inline Vector apply_W(const BoundaryFactorization &f, const RkhsElement &elem, double tol = kDefaultFactTol) {
    require_same_base(f.kernel, elem.base);
    require_factorization(f, tol);
    return f.features.transpose() * elem.coeffs;
}

/// Values of V g at every base point.
inline Vector apply_V(const BoundaryFactorization &f, const Vector &g) {
    if (static_cast<std::size_t>(g.size()) != f.atoms()) { raise(ErrorKind::ShapeMismatch, "L2 vector length differs from atom count"); }
    return f.features.conjugate() * f.measure.weight_vector().cast<Complex>().asDiagonal() * g;
}

/// W V on L^2(mu), assembled through the pseudo-inverse of the kernel:
/// P = Phi^T (G^T)^+ conj(Phi) D.
inline Matrix projection_matrix(const BoundaryFactorization &f, double rank_tol = -1.0) {
    if (rank_tol < 0.0) { rank_tol = default_rank_tol(static_cast<Index>(f.points())); }
    const Matrix pinv_t = hermitian_pinv(f.kernel->gram(), rank_tol).conjugate();
    return f.features.transpose() * pinv_t * f.features.conjugate() * f.measure.weight_vector().cast<Complex>().asDiagonal();
}

struct IsometryReport {
    /// Equal to the factorization residual: <W K_i, W K_j> = (Phi D Phi*)_ij
    /// against the pairing value G_ij.
    double wstar_w_residual = 0.0;
    /// max of |P^2 - P| and |P^dagger - P|, adjoint taken in L^2(mu).
    double projection_residual = 0.0;
    /// max distance of an eigenvalue of P to {0, 1}.
    double spectrum_defect = 0.0;
    double trace = 0.0;
    Index rank = 0;
};

inline IsometryReport check_isometry(const BoundaryFactorization &f, double tol = kDefaultFactTol, double rank_tol = -1.0) {
    IsometryReport r;
    r.wstar_w_residual = verify_factorization(f, tol).residual;
    if (r.wstar_w_residual > tol) {
        raise(ErrorKind::NotAFactorization, "factorization residual " + std::to_string(r.wstar_w_residual) + " exceeds " + std::to_string(tol));
    }
    const Matrix p = projection_matrix(f, rank_tol);
    const RealVector w = f.measure.weight_vector();
    const Matrix d = w.cast<Complex>().asDiagonal();
    const Matrix d_inv = w.cwiseInverse().cast<Complex>().asDiagonal();
    const Matrix p_dagger = d_inv * p.adjoint() * d;
    r.projection_residual = std::max(max_abs(p * p - p), max_abs(p_dagger - p));
    r.trace = p.trace().real();

    // D^{1/2} P D^{-1/2} is Hermitian when P is mu-self-adjoint.
    const RealVector sw = w.cwiseSqrt();
    Matrix h = sw.cast<Complex>().asDiagonal() * p * sw.cwiseInverse().cast<Complex>().asDiagonal();
    h = 0.5 * (h + h.adjoint()).eval();
    const auto spec = hermitian_spectrum(h);
    for (Index k = 0; k < spec.values.size(); ++k) {
        const double lam = spec.values(k);
        r.spectrum_defect = std::max(r.spectrum_defect, std::min(std::abs(lam), std::abs(lam - 1.0)));
        if (std::abs(lam - 1.0) < 0.5) { ++r.rank; }
    }
    return r;
}

/// | ||W f||^2_mu - pairing(xi, xi) | for one element.
inline double isometry_defect(const BoundaryFactorization &f, const RkhsElement &elem, double tol = kDefaultFactTol) {
    const Vector wf = apply_W(f, elem, tol);
    return std::abs(l2_norm2(f.measure, wf) - kernel_pairing(f.kernel->gram(), elem.coeffs, elem.coeffs).real());
}

/// max over generators t and points s of |(V W K_t)(s) - K(t, s)|.
inline double vw_generator_residual(const BoundaryFactorization &f, double tol = kDefaultFactTol) {
    double worst = 0.0;
    for (std::size_t t = 0; t < f.points(); ++t) {
        const Vector vw = apply_V(f, apply_W(f, RkhsElement::generator(f.kernel, t), tol));
        worst = std::max(worst, max_abs(vw - f.kernel->gram().row(static_cast<Index>(t)).transpose()));
    }
    return worst;
}

struct SchwarzReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

inline constexpr double kSchwarzSlack = 1e-9;

/// |sum_i xi_i (V g)(s_i)|^2 <= ||g||^2 xi* G xi. Equality when g is parallel to sum_i conj(xi_i) k_{s_i}.
inline SchwarzReport schwarz_bound_check(const BoundaryFactorization &f, const Vector &g, const Vector &xi) {
    if (static_cast<std::size_t>(xi.size()) != f.points()) { raise(ErrorKind::ShapeMismatch, "xi length differs from point count"); }
    const Vector vg = apply_V(f, g);
    SchwarzReport r;
    r.lhs = std::norm(xi.cwiseProduct(vg).sum());
    r.rhs = l2_norm2(f.measure, g) * xi.dot(f.kernel->gram() * xi).real();
    r.holds = r.lhs <= r.rhs * (1.0 + kSchwarzSlack);
    return r;
}

/// phi: B2 -> B1 given as a target atom index per source atom.
class MeasureMorphism {
public:
    MeasureMorphism(DiscreteMeasure source, DiscreteMeasure target, const std::vector<std::string> &target_of_source)
        : source_(std::move(source)), target_(std::move(target)) {
        if (target_of_source.size() != source_.size()) { raise(ErrorKind::LabelMismatch, "morphism must map every source atom"); }
        for (const auto &label : target_of_source) {
            const auto idx = target_.find(label);
            if (!idx) { raise(ErrorKind::LabelMismatch, "morphism target '" + label + "' is not an atom of the target"); }
            map_.push_back(*idx);
        }
    }

    MeasureMorphism(DiscreteMeasure source, DiscreteMeasure target, std::vector<std::size_t> map)
        : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
        if (map_.size() != source_.size()) { raise(ErrorKind::LabelMismatch, "morphism must map every source atom"); }
        for (auto a : map_) {
            if (a >= target_.size()) { raise(ErrorKind::LabelMismatch, "morphism target index out of range"); }
        }
    }

    [[nodiscard]] const DiscreteMeasure &source() const { return source_; }
    [[nodiscard]] const DiscreteMeasure &target() const { return target_; }
    [[nodiscard]] const std::vector<std::size_t> &map() const { return map_; }

private:
    DiscreteMeasure source_;
    DiscreteMeasure target_;
    std::vector<std::size_t> map_;
};

struct MorphismReport {
    bool pushforward_ok = false;
    bool sigma_ok = false;
    bool diagram_ok = false;
};

inline constexpr double kMorphismTol = 1e-12;

/// f1 lives on B1 (target), f2 on B2 (source).
inline MorphismReport check_morphism(const MeasureMorphism &m, const BoundaryFactorization &f1, const BoundaryFactorization &f2) {
    if (m.source().labels() != f2.measure.labels() || m.target().labels() != f1.measure.labels()) {
        raise(ErrorKind::LabelMismatch, "morphism endpoints do not match the factorizations' measures");
    }
    require_same_base(f1.kernel, f2.kernel);

    MorphismReport r;
    std::vector<double> pushed(m.target().size(), 0.0);
    for (std::size_t x = 0; x < m.source().size(); ++x) { pushed[m.map()[x]] += f2.measure.weights()[x]; }
    r.pushforward_ok = true;
    for (std::size_t a = 0; a < pushed.size(); ++a) {
        if (std::abs(pushed[a] - f1.measure.weights()[a]) > kMorphismTol) { r.pushforward_ok = false; }
    }

    std::set<std::size_t> image(m.map().begin(), m.map().end());
    r.sigma_ok = image.size() == m.map().size();

    r.diagram_ok = true;
    for (Index i = 0; i < f1.features.rows(); ++i) {
        for (std::size_t x = 0; x < m.source().size(); ++x) {
            if (std::abs(f2.features(i, static_cast<Index>(x)) - f1.features(i, static_cast<Index>(m.map()[x]))) > kMorphismTol) { r.diagram_ok = false; }
        }
    }
    return r;
}

/// W21 f = f o phi.
inline Vector pullback(const MeasureMorphism &m, const Vector &f) {
    if (static_cast<std::size_t>(f.size()) != m.target().size()) { raise(ErrorKind::ShapeMismatch, "function length differs from target atom count"); }
    Vector out(static_cast<Index>(m.source().size()));
    for (std::size_t x = 0; x < m.source().size(); ++x) { out(static_cast<Index>(x)) = f(static_cast<Index>(m.map()[x])); }
    return out;
}

inline double pullback_isometry_defect(const MeasureMorphism &m, const Vector &f) {
    return std::abs(l2_norm2(m.source(), pullback(m, f)) - l2_norm2(m.target(), f));
}

}  // namespace kb
