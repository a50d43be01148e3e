#pragma once

#include "circle.hpp"
#include "error.hpp"
#include "linalg.hpp"

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kb {

/// Labeled finite point set. Labels are unique and every point has the same
/// number of complex coordinates.
class PointSet {
public:
    PointSet() = default;

    PointSet(std::vector<std::string> labels, std::vector<std::vector<Complex>> coords)
        : labels_(std::move(labels)), coords_(std::move(coords)) {
        if (labels_.size() != coords_.size()) { raise(ErrorKind::ShapeMismatch, "labels and coords differ in length"); }
        std::set<std::string> seen;
        for (const auto &l : labels_) {
            if (!seen.insert(l).second) { raise(ErrorKind::LabelMismatch, "duplicate point label '" + l + "'"); }
        }
        for (const auto &c : coords_) {
            if (c.empty()) { raise(ErrorKind::DimensionMismatch, "points need at least one coordinate"); }
            if (c.size() != coords_.front().size()) { raise(ErrorKind::DimensionMismatch, "points have mixed coordinate dimensions"); }
        }
    }

    /// One-coordinate points labeled "0", "1", ...
    static PointSet on_disk(const std::vector<Complex> &zs) {
        std::vector<std::string> labels;
        std::vector<std::vector<Complex>> coords;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            labels.push_back(std::to_string(i));
            coords.push_back({zs[i]});
        }
        return {std::move(labels), std::move(coords)};
    }

    /// Points labeled "0", "1", ... with no geometry; used by table kernels.
    static PointSet indexed(std::size_t n) { return on_disk(std::vector<Complex>(n, Complex(0.0))); }

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] std::size_t dimension() const { return coords_.empty() ? 0 : coords_.front().size(); }
    [[nodiscard]] const std::vector<std::string> &labels() const { return labels_; }
    [[nodiscard]] const std::vector<Complex> &coords(std::size_t i) const { return coords_.at(i); }
    [[nodiscard]] Complex z(std::size_t i) const { return coords_.at(i).front(); }

    [[nodiscard]] std::size_t index_of(const std::string &label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == label) { return i; }
        }
        raise(ErrorKind::UnknownLabel, "no point labeled '" + label + "'");
    }

    [[nodiscard]] PointSet subset(const std::vector<std::size_t> &idx) const {
        std::vector<std::string> labels;
        std::vector<std::vector<Complex>> coords;
        for (auto i : idx) {
            if (i >= size()) { raise(ErrorKind::IndexOutOfRange, "subset index " + std::to_string(i)); }
            labels.push_back(labels_[i]);
            coords.push_back(coords_[i]);
        }
        return {std::move(labels), std::move(coords)};
    }

    bool operator==(const PointSet &) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<Complex>> coords_;
};

// Kernel variants.
struct SzegoKernel {};
struct PolydiskSzegoKernel {
    std::size_t dimension = 1;
};
struct DeBrangesRovnyakKernel {
    InnerFunctionB b;
};
struct TableKernel {
    Matrix values;
};

using KernelSpec = std::variant<SzegoKernel, PolydiskSzegoKernel, DeBrangesRovnyakKernel, TableKernel>;

inline std::string kernel_name(const KernelSpec &spec) {
    return std::visit(
        [](const auto &k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SzegoKernel>) {
                return "szego";
            } else if constexpr (std::is_same_v<T, PolydiskSzegoKernel>) {
                return "polydisk-szego";
            } else if constexpr (std::is_same_v<T, DeBrangesRovnyakKernel>) {
                return "debranges-rovnyak";
            } else {
                return "table";
            }
        },
        spec);
}

/// 1 / (1 - z conj(w)) on the open disk.
inline Complex szego_eval(Complex z, Complex w) {
    require_in_disk(z, "szego_eval");
    require_in_disk(w, "szego_eval");
    return 1.0 / (1.0 - z * std::conj(w));
}

/// Product of one-dimensional Szego kernels over coordinates.
inline Complex polydisk_szego_eval(const std::vector<Complex> &z, const std::vector<Complex> &w) {
    if (z.size() != w.size()) {
        raise(ErrorKind::DimensionMismatch, "polydisk points of dimension " + std::to_string(z.size()) + " and " + std::to_string(w.size()));
    }
    Complex prod = 1.0;
    for (std::size_t j = 0; j < z.size(); ++j) { prod *= szego_eval(z[j], w[j]); }
    return prod;
}

enum class FieldTag { real, complex };

/// Gram matrix of a kernel over a labeled point set.
class FiniteKernel {
public:
    FiniteKernel(PointSet points, Matrix gram) : points_(std::move(points)), gram_(std::move(gram)) {
        if (gram_.rows() != gram_.cols() || static_cast<std::size_t>(gram_.rows()) != points_.size()) {
            raise(ErrorKind::ShapeMismatch, "gram is " + std::to_string(gram_.rows()) + "x" + std::to_string(gram_.cols()) + " for " +
                                                std::to_string(points_.size()) + " points");
        }
        field_ = gram_.imag().isZero(0.0) ? FieldTag::real : FieldTag::complex;
    }

    [[nodiscard]] const PointSet &points() const { return points_; }
    [[nodiscard]] const Matrix &gram() const { return gram_; }
    [[nodiscard]] FieldTag field() const { return field_; }
    [[nodiscard]] std::size_t size() const { return points_.size(); }

    bool operator==(const FiniteKernel &other) const { return points_ == other.points_ && gram_ == other.gram_; }

private:
    PointSet points_;
    Matrix gram_;
    FieldTag field_;
};

using KernelRef = std::shared_ptr<const FiniteKernel>;

inline KernelRef share(FiniteKernel k) { return std::make_shared<const FiniteKernel>(std::move(k)); }

/// Relative Hermitian tolerance applied to user-supplied tables.
inline constexpr double kHermitianTol = 1e-12;

inline FiniteKernel table_kernel(PointSet points, const Matrix &values) {
    if (values.rows() != values.cols() || static_cast<std::size_t>(values.rows()) != points.size()) {
        raise(ErrorKind::ShapeMismatch, "table kernel is " + std::to_string(values.rows()) + "x" + std::to_string(values.cols()) + " for " +
                                            std::to_string(points.size()) + " points");
    }
    const double scale = std::max(1.0, max_abs(values));
    if (hermitian_defect(values) > kHermitianTol * scale) { raise(ErrorKind::NotHermitian, "table kernel is not Hermitian"); }
    Matrix g = values;
    mirror_upper(g);
    return {std::move(points), std::move(g)};
}

inline FiniteKernel table_kernel(const Matrix &values) { return table_kernel(PointSet::indexed(static_cast<std::size_t>(values.rows())), values); }

/// Evaluates the kernel on each upper-triangle pair once and mirrors the
/// conjugate into the lower triangle.
inline FiniteKernel assemble_gram(const KernelSpec &spec, const PointSet &points) {
    if (const auto *t = std::get_if<TableKernel>(&spec)) { return table_kernel(points, t->values); }

    const auto n = static_cast<Index>(points.size());
    const std::size_t dim = points.dimension();
    std::visit(
        [&](const auto &k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SzegoKernel> || std::is_same_v<T, DeBrangesRovnyakKernel>) {
                if (n > 0 && dim != 1) { raise(ErrorKind::DimensionMismatch, kernel_name(spec) + " kernel needs one coordinate per point"); }
            } else if constexpr (std::is_same_v<T, PolydiskSzegoKernel>) {
                if (n > 0 && dim != k.dimension) {
                    raise(ErrorKind::DimensionMismatch, "polydisk-szego(" + std::to_string(k.dimension) + ") given points of dimension " + std::to_string(dim));
                }
            }
        },
        spec);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (Complex c : points.coords(i)) { require_in_disk(c, "assemble_gram"); }
    }

    Matrix g(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const auto &zi = points.coords(static_cast<std::size_t>(i));
            const auto &zj = points.coords(static_cast<std::size_t>(j));
            g(i, j) = std::visit(
                [&](const auto &k) -> Complex {
                    using T = std::decay_t<decltype(k)>;
                    if constexpr (std::is_same_v<T, SzegoKernel>) {
                        return szego_eval(zi[0], zj[0]);
                    } else if constexpr (std::is_same_v<T, PolydiskSzegoKernel>) {
                        return polydisk_szego_eval(zi, zj);
                    } else if constexpr (std::is_same_v<T, DeBrangesRovnyakKernel>) {
                        return kb_eval(k.b, zi[0], zj[0]);
                    } else {
                        return 0.0;
                    }
                },
                spec);
        }
    }
    mirror_upper(g);
    return {points, std::move(g)};
}

/// Principal submatrix over the given point indices.
inline FiniteKernel restrict(const FiniteKernel &k, const std::vector<std::size_t> &idx) {
    PointSet pts = k.points().subset(idx);
    const auto m = static_cast<Index>(idx.size());
    Matrix g(m, m);
    for (Index a = 0; a < m; ++a) {
        for (Index b = 0; b < m; ++b) { g(a, b) = k.gram()(static_cast<Index>(idx[static_cast<std::size_t>(a)]), static_cast<Index>(idx[static_cast<std::size_t>(b)])); }
    }
    return {std::move(pts), std::move(g)};
}

/// Entrywise real part; Re of a Hermitian PSD matrix is a real symmetric PSD matrix.
inline FiniteKernel real_part(const FiniteKernel &k) { return {k.points(), Matrix(k.gram().real().cast<Complex>())}; }

struct PsdReport {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    bool is_psd = true;
};

inline constexpr double kDefaultPsdTol = 1e-10;

/// PSD iff lambda_min >= -tol * max(1, lambda_max).
inline PsdReport check_positive_definite(const Matrix &gram, double tol = kDefaultPsdTol) {
    const double scale = std::max(1.0, max_abs(gram));
    if (hermitian_defect(gram) > kHermitianTol * scale) { raise(ErrorKind::NotHermitian, "gram matrix is not Hermitian"); }
    if (gram.rows() == 0) { return {}; }
    const auto spec = hermitian_spectrum(gram);
    PsdReport r;
    r.min_eigenvalue = spec.min();
    r.max_eigenvalue = spec.max();
    r.is_psd = r.min_eigenvalue >= -tol * std::max(1.0, r.max_eigenvalue);
    return r;
}

inline PsdReport check_positive_definite(const FiniteKernel &k, double tol = kDefaultPsdTol) { return check_positive_definite(k.gram(), tol); }

}  // namespace kb
