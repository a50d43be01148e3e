#pragma once

#include "error.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace kb {

/// |z| must stay below this for disk kernels.
inline constexpr double kDiskRadiusGuard = 1.0 - 1e-15;

inline void require_in_disk(Complex z, const char *what) {
    if (!(std::abs(z) < kDiskRadiusGuard)) {
        raise(ErrorKind::DomainViolation, std::string(what) + ": |z| = " + std::to_string(std::abs(z)) + " is not inside the open unit disk");
    }
}

/// Finite atomic probability measure on the circle, atoms stored as x in [0,1)
/// with e(x) = exp(2 pi i x). Finite atomic measures are singular with respect
/// to arc length, so every instance is an admissible Clark measure.
class CircleMeasure {
public:
    CircleMeasure(std::vector<double> atoms, std::vector<double> weights)
        : atoms_(std::move(atoms)), weights_(std::move(weights)) {
        if (atoms_.empty()) { raise(ErrorKind::InvalidMeasure, "circle measure needs at least one atom"); }
        if (atoms_.size() != weights_.size()) { raise(ErrorKind::ShapeMismatch, "atoms and weights differ in length"); }
        for (double x : atoms_) {
            if (!(x >= 0.0 && x < 1.0)) { raise(ErrorKind::InvalidMeasure, "circle atom outside [0,1): " + std::to_string(x)); }
        }
        for (double w : weights_) {
            if (!(w > 0.0)) { raise(ErrorKind::InvalidMeasure, "circle weights must be positive"); }
        }
        std::vector<double> sorted = atoms_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            raise(ErrorKind::InvalidMeasure, "circle atoms must be pairwise distinct");
        }
        const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-12) { raise(ErrorKind::InvalidMeasure, "circle weights must sum to 1, got " + std::to_string(total)); }
        points_.reserve(atoms_.size());
        for (double x : atoms_) { points_.push_back(unit_circle(x)); }
    }

    static CircleMeasure dirac(double x) { return CircleMeasure({x}, {1.0}); }

    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] const std::vector<double> &atoms() const { return atoms_; }
    [[nodiscard]] const std::vector<double> &weights() const { return weights_; }
    /// e(x_j) for each atom.
    [[nodiscard]] const std::vector<Complex> &circle_points() const { return points_; }

    bool operator==(const CircleMeasure &other) const { return atoms_ == other.atoms_ && weights_ == other.weights_; }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
    std::vector<Complex> points_;
};

/// C(z) = sum_j w_j / (1 - z conj(e(x_j))).
inline Complex cauchy_transform(const CircleMeasure &mu, Complex z) {
    require_in_disk(z, "cauchy_transform");
    Complex sum = 0.0;
    const auto &pts = mu.circle_points();
    for (std::size_t j = 0; j < mu.size(); ++j) { sum += mu.weights()[j] / (1.0 - z * std::conj(pts[j])); }
    return sum;
}

/// Which closed form b is built from. `reciprocal` (b = 1 - 1/C) is the inner
/// function paired with mu; `printed` (b = 1 - C) is kept only for comparison
/// and is not inner in general (for mu = delta_0 it is -z/(1-z)).
enum class BForm { reciprocal, printed };

inline constexpr double kCauchyZeroTol = 1e-14;

class InnerFunctionB {
public:
    explicit InnerFunctionB(CircleMeasure mu, BForm form = BForm::reciprocal) : mu_(std::move(mu)), form_(form) {}

    [[nodiscard]] const CircleMeasure &measure() const { return mu_; }
    [[nodiscard]] BForm form() const { return form_; }

    /// 1 - b(z), computed without the cancellation in 1 - (1 - 1/C).
    [[nodiscard]] Complex one_minus(Complex z) const {
        const Complex c = cauchy_transform(mu_, z);
        if (form_ == BForm::printed) { return c; }
        if (std::abs(c) < kCauchyZeroTol) { raise(ErrorKind::CauchyZero, "Cauchy transform vanishes at z"); }
        return 1.0 / c;
    }

    [[nodiscard]] Complex operator()(Complex z) const { return 1.0 - one_minus(z); }

    /// Radial limit of b at an atom of mu. For the reciprocal form C has a pole
    /// there, so b -> 1; the printed form has no finite limit.
    [[nodiscard]] Complex at_atom() const {
        if (form_ == BForm::printed) { raise(ErrorKind::DomainViolation, "printed b form has no boundary value at atoms"); }
        return 1.0;
    }

private:
    CircleMeasure mu_;
    BForm form_;
};

inline Complex b_eval(const InnerFunctionB &b, Complex z) { return b(z); }

/// K^(b)(z, w) = (1 - b(z) conj(b(w))) / (1 - z conj(w)).
inline Complex kb_eval(const InnerFunctionB &b, Complex z, Complex w) {
    require_in_disk(z, "kb_eval");
    require_in_disk(w, "kb_eval");
    return (1.0 - b(z) * std::conj(b(w))) / (1.0 - z * std::conj(w));
}

}  // namespace kb
