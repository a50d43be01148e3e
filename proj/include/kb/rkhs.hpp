#pragma once

#include "kernel.hpp"

namespace kb {

/// f = sum_i coeffs_i K(., s_i) over the points of `base`. When the gram is
/// singular the coefficients are not unique; everything below goes through G.
struct RkhsElement {
    KernelRef base;
    Vector coeffs;

    RkhsElement(KernelRef k, Vector xi) : base(std::move(k)), coeffs(std::move(xi)) {
        if (!base) { raise(ErrorKind::BaseMismatch, "element has no base kernel"); }
        if (static_cast<std::size_t>(coeffs.size()) != base->size()) {
            raise(ErrorKind::ShapeMismatch, "coefficient vector of length " + std::to_string(coeffs.size()) + " for " + std::to_string(base->size()) + " points");
        }
    }

    static RkhsElement zero(KernelRef k) {
        const auto n = static_cast<Index>(k->size());
        return {std::move(k), Vector::Zero(n)};
    }

    /// K(., s_i).
    static RkhsElement generator(KernelRef k, std::size_t i) {
        if (i >= k->size()) { raise(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(i)); }
        Vector xi = Vector::Zero(static_cast<Index>(k->size()));
        xi(static_cast<Index>(i)) = 1.0;
        return {std::move(k), std::move(xi)};
    }
};

inline bool same_base(const KernelRef &a, const KernelRef &b) { return a == b || (a && b && *a == *b); }

inline void require_same_base(const KernelRef &a, const KernelRef &b) {
    if (!same_base(a, b)) { raise(ErrorKind::BaseMismatch, "elements live over different kernels"); }
}

/// <f, g> = eta* G xi; linear in f, conjugate-linear in g.
inline Complex rkhs_inner(const RkhsElement &f, const RkhsElement &g) {
    require_same_base(f.base, g.base);
    return g.coeffs.dot(f.base->gram() * f.coeffs);
}

inline double rkhs_norm2(const RkhsElement &f) { return rkhs_inner(f, f).real(); }

/// Values f(s_i) = sum_j xi_j K(s_i, s_j) at every point.
inline Vector evaluate_all(const RkhsElement &f) { return f.base->gram() * f.coeffs; }

inline Complex evaluate(const RkhsElement &f, std::size_t i) {
    if (i >= f.base->size()) { raise(ErrorKind::IndexOutOfRange, "point index " + std::to_string(i)); }
    return f.base->gram().row(static_cast<Index>(i)).transpose().cwiseProduct(f.coeffs).sum();
}

inline Complex evaluate(const RkhsElement &f, const std::string &label) { return evaluate(f, f.base->points().index_of(label)); }

/// frame(n, i) = beta_n(s_i); the rows satisfy
/// sum_n frame(n,i) conj(frame(n,j)) = G(i,j).
struct ParsevalFrame {
    KernelRef base;
    Matrix frame;

    ParsevalFrame(KernelRef k, Matrix rows) : base(std::move(k)), frame(std::move(rows)) {
        if (!base) { raise(ErrorKind::BaseMismatch, "frame has no base kernel"); }
        if (static_cast<std::size_t>(frame.cols()) != base->size()) {
            raise(ErrorKind::ShapeMismatch, "frame has " + std::to_string(frame.cols()) + " columns for " + std::to_string(base->size()) + " points");
        }
    }

    [[nodiscard]] Index rank() const { return frame.rows(); }
};

/// Spectral frame: rows sqrt(lambda_n) v_n^T for lambda_n > rank_tol * lambda_max.
/// A negative rank_tol selects default_rank_tol(n).
inline ParsevalFrame parseval_factorize(const KernelRef &k, double rank_tol = -1.0, double psd_tol = kDefaultPsdTol) {
    const auto n = static_cast<Index>(k->size());
    if (rank_tol < 0.0) { rank_tol = default_rank_tol(n); }
    const double scale = std::max(1.0, max_abs(k->gram()));
    if (hermitian_defect(k->gram()) > kHermitianTol * scale) { raise(ErrorKind::NotHermitian, "gram matrix is not Hermitian"); }
    const auto spec = hermitian_spectrum(k->gram());
    if (n > 0 && spec.min() < -psd_tol * std::max(1.0, spec.max())) {
        raise(ErrorKind::NotPsd, "gram has eigenvalue " + std::to_string(spec.min()));
    }
    const double cut = rank_tol * std::max(spec.max(), 0.0);
    std::vector<Index> kept;
    // Descending order so row 0 carries the largest eigenvalue.
    for (Index q = n - 1; q >= 0; --q) {
        if (spec.values(q) > cut && spec.values(q) > 0.0) { kept.push_back(q); }
    }
    Matrix rows(static_cast<Index>(kept.size()), n);
    for (Index r = 0; r < static_cast<Index>(kept.size()); ++r) {
        const Index q = kept[static_cast<std::size_t>(r)];
        rows.row(r) = std::sqrt(spec.values(q)) * spec.vectors.col(q).transpose();
    }
    return {k, std::move(rows)};
}

/// max |sum_n frame(n,i) conj(frame(n,j)) - G(i,j)|.
inline double verify_parseval(const ParsevalFrame &f) {
    if (f.frame.rows() == 0) { return max_abs(f.base->gram()); }
    const Matrix recon = f.frame.transpose() * f.frame.conjugate();
    return max_abs(recon - f.base->gram());
}

/// c_n = <f, beta_n>. Independent of how beta_n is written in kernel
/// coordinates: <f, beta_n> = sum_i xi_i conj(beta_n(s_i)).
inline Vector frame_expand(const RkhsElement &f, const ParsevalFrame &frame) {
    require_same_base(f.base, frame.base);
    return frame.frame.conjugate() * f.coeffs;
}

/// Point values of sum_n c_n beta_n.
inline Vector frame_synthesize(const Vector &c, const ParsevalFrame &frame) {
    if (c.size() != frame.frame.rows()) { raise(ErrorKind::ShapeMismatch, "coefficient count differs from frame size"); }
    return frame.frame.transpose() * c;
}

/// | ||f||^2 - sum_n |<f, beta_n>|^2 |.
inline double frame_norm_defect(const RkhsElement &f, const ParsevalFrame &frame) {
    return std::abs(rkhs_norm2(f) - frame_expand(f, frame).squaredNorm());
}

/// Full row rank: the features k_s(n) = beta_n(s) span l^2 of the frame index set.
inline bool tightness_test(const ParsevalFrame &frame) {
    if (frame.frame.rows() == 0) { return true; }
    return numerical_rank(frame.frame) == frame.frame.rows();
}

}  // namespace kb
