#pragma once

#include "random.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace kb::acceptance {

/// One exit criterion. `value` is the worst observed statistic, compared
/// against `threshold` (smaller is better unless noted in `detail`).
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
    /// Wall time; excluded from determinism comparisons.
    double seconds = 0.0;
};

namespace detail {

inline random::Engine engine_for(std::uint64_t seed, int id) { return random::engine(mix64(seed) ^ static_cast<std::uint64_t>(id)); }

/// Worst-of accumulator keyed by sub-check name.
class Tally {
public:
    void add(const std::string &name, double value, double threshold) {
        auto &[worst, limit] = items_[name];
        worst = std::max(worst, value);
        limit = threshold;
    }

    void flag(const std::string &name, bool ok) { add(name, ok ? 0.0 : 1.0, 0.5); }

    [[nodiscard]] bool pass() const {
        for (const auto &[name, item] : items_) {
            if (!(item.first <= item.second)) { return false; }
        }
        return true;
    }

    /// Largest value / threshold ratio, reported as the headline value.
    [[nodiscard]] std::pair<double, double> headline() const {
        double best_ratio = -1.0;
        std::pair<double, double> out{0.0, 0.0};
        for (const auto &[name, item] : items_) {
            const double ratio = item.second > 0.0 ? item.first / item.second : item.first;
            if (ratio > best_ratio) {
                best_ratio = ratio;
                out = item;
            }
        }
        return out;
    }

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        os.precision(3);
        bool first = true;
        for (const auto &[name, item] : items_) {
            if (!first) { os << "; "; }
            first = false;
            os << name << "=" << item.first << (item.first <= item.second ? "<=" : ">") << item.second;
        }
        return os.str();
    }

    [[nodiscard]] CriterionResult result(int id, std::string name) const {
        const auto [value, threshold] = headline();
        return {id, std::move(name), pass(), value, threshold, describe()};
    }

private:
    std::map<std::string, std::pair<double, double>> items_;
};

/// Random Hermitian PSD corpus: n in [1, 20], rank in [1, n].
inline std::vector<KernelRef> psd_corpus(random::Engine &e, std::size_t count) {
    std::vector<KernelRef> out;
    for (std::size_t t = 0; t < count; ++t) {
        const auto n = static_cast<Index>(random::uniform_int(e, 1, 20));
        const auto r = static_cast<Index>(random::uniform_int(e, 1, static_cast<std::size_t>(n)));
        out.push_back(share(table_kernel(random::psd_matrix(e, n, r))));
    }
    return out;
}

}  // namespace detail

inline constexpr std::size_t kCorpusSize = 200;

/// Parseval factorization reconstructs the gram.
inline CriterionResult factorization_reconstruction(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 1);
    detail::Tally tally;
    for (const auto &k : detail::psd_corpus(e, kCorpusSize)) { tally.add("reconstruction", verify_parseval(parseval_factorize(k)), 1e-10); }
    return tally.result(1, "factorization reconstruction");
}

/// W/V pair on counting-measure factorizations built from Parseval frames.
inline CriterionResult transform_pair(std::uint64_t seed) {
    // Same corpus as criterion 1.
    auto e = detail::engine_for(seed, 1);
    const auto corpus = detail::psd_corpus(e, kCorpusSize);
    auto probe = detail::engine_for(seed, 2);
    detail::Tally tally;
    for (const auto &k : corpus) {
        const auto f = counting_factorization(parseval_factorize(k));
        for (int trial = 0; trial < 5; ++trial) {
            const RkhsElement elem(k, random::complex_normal_vector(probe, static_cast<Index>(k->size())));
            tally.add("W isometry", isometry_defect(f, elem), 1e-9);
        }
        tally.add("VW generators", vw_generator_residual(f), 1e-9);
        const auto iso = check_isometry(f);
        tally.add("projection", iso.projection_residual, 1e-9);
        tally.add("P spectrum", iso.spectrum_defect, 1e-7);
    }
    return tally.result(2, "transform pair");
}

/// Schwarz bound on random factorizations, plus its equality case.
inline CriterionResult schwarz_bound(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 3);
    detail::Tally tally;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = random::uniform_int(e, 1, 8);
        const std::size_t m = random::uniform_int(e, 1, 10);
        const auto f = random::factorization(e, n, m);
        const Vector g = random::complex_normal_vector(e, static_cast<Index>(m));
        const Vector xi = random::complex_normal_vector(e, static_cast<Index>(n));
        const auto r = schwarz_bound_check(f, g, xi);
        tally.add("lhs/rhs - 1", r.rhs > 0.0 ? r.lhs / r.rhs - 1.0 : (r.lhs > 0.0 ? INFINITY : 0.0), kSchwarzSlack);

        const Vector parallel = f.features.transpose() * xi.conjugate();
        const auto eq = schwarz_bound_check(f, parallel, xi);
        tally.add("equality gap", std::abs(eq.lhs - eq.rhs) / std::max(1.0, eq.rhs), 1e-9);
    }
    return tally.result(3, "Schwarz bound");
}

namespace detail {

/// K(z, w) = 1 + z conj(w) at two points, mu = 1/2 delta_0 + 1/2 delta_{1/2},
/// k_z(x) = 1 + z conj(e(x)).
inline BoundaryFactorization two_atom_clark(const DiscreteMeasure &mu, const std::vector<Complex> &zs, const std::vector<Complex> &es) {
    const auto n = static_cast<Index>(zs.size());
    Matrix phi(n, static_cast<Index>(es.size()));
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index x = 0; x < phi.cols(); ++x) { phi(i, x) = 1.0 + zs[static_cast<std::size_t>(i)] * std::conj(es[static_cast<std::size_t>(x)]); }
        for (Index j = 0; j < n; ++j) { g(i, j) = 1.0 + zs[static_cast<std::size_t>(i)] * std::conj(zs[static_cast<std::size_t>(j)]); }
    }
    return {share(FiniteKernel(PointSet::on_disk(zs), g)), mu, phi};
}

}  // namespace detail

struct MorphismExample {
    std::string name;
    MeasureMorphism morphism;
    BoundaryFactorization target;
    BoundaryFactorization source;
    MorphismReport expected;
};

/// Identity, collapsing map, and wrong weights.
inline std::vector<MorphismExample> morphism_examples() {
    const std::vector<Complex> zs{Complex(0.3, 0.1), Complex(-0.2, 0.4)};
    const DiscreteMeasure clark({"0", "1/2"}, {0.5, 0.5});
    const auto f_clark = detail::two_atom_clark(clark, zs, {1.0, -1.0});

    std::vector<MorphismExample> out;
    out.push_back({"identity", MeasureMorphism(clark, clark, std::vector<std::string>{"0", "1/2"}), f_clark, f_clark, {true, true, true}});

    // B2 = {0,1,2} with (1/4, 1/4, 1/2) collapsing onto B1 = {a, b}.
    const DiscreteMeasure b1({"a", "b"}, {0.5, 0.5});
    const DiscreteMeasure b2({"0", "1", "2"}, {0.25, 0.25, 0.5});
    const BoundaryFactorization f1(f_clark.kernel, b1, f_clark.features);
    Matrix pulled(2, 3);
    pulled << f1.features(0, 0), f1.features(0, 0), f1.features(0, 1), f1.features(1, 0), f1.features(1, 0), f1.features(1, 1);
    const BoundaryFactorization f2(f_clark.kernel, b2, pulled);
    out.push_back({"collapse", MeasureMorphism(b2, b1, std::vector<std::string>{"a", "a", "b"}), f1, f2, {true, false, true}});

    // Constant features k_s = 1 factor K = 1 under any probability weights.
    auto one = share(FiniteKernel(PointSet::on_disk({0.1, 0.2}), Matrix::Ones(2, 2)));
    const DiscreteMeasure t({"a", "b"}, {0.6, 0.4});
    const DiscreteMeasure s({"x", "y"}, {0.5, 0.5});
    const BoundaryFactorization ft(one, t, Matrix::Ones(2, 2));
    const BoundaryFactorization fs(one, s, Matrix::Ones(2, 2));
    out.push_back({"wrong weights", MeasureMorphism(s, t, std::vector<std::string>{"a", "b"}), ft, fs, {false, true, true}});
    return out;
}

inline CriterionResult morphism_checker(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 4);
    detail::Tally tally;
    for (const auto &ex : morphism_examples()) {
        const auto got = check_morphism(ex.morphism, ex.target, ex.source);
        tally.flag(ex.name + " verdict",
                   got.pushforward_ok == ex.expected.pushforward_ok && got.sigma_ok == ex.expected.sigma_ok && got.diagram_ok == ex.expected.diagram_ok);
        if (got.pushforward_ok) {
            for (int t = 0; t < 100; ++t) {
                const Vector f = random::complex_normal_vector(e, static_cast<Index>(ex.morphism.target().size()));
                tally.add("W21 isometry", pullback_isometry_defect(ex.morphism, f), 1e-12);
            }
        }
    }
    return tally.result(4, "morphism checker");
}

inline constexpr std::size_t kGaussianDraws = 200000;

/// Real part of the Szego gram on four interior points.
inline KernelRef szego_real_part_kernel() {
    const auto pts = PointSet::on_disk({Complex(0.0, 0.0), Complex(0.2, 0.0), Complex(0.0, 0.2), Complex(-0.2, 0.1)});
    return share(real_part(assemble_gram(SzegoKernel{}, pts)));
}

inline CriterionResult gaussian_realization(std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    detail::Tally tally;
    const std::vector<std::pair<KernelRef, std::vector<std::size_t>>> cases{
        {szego_real_part_kernel(), {0, 2}},
        {share(table_kernel(Matrix::Identity(2, 2))), {1}},
    };
    for (const auto &[k, subset] : cases) {
        const auto r = realize(k, seed);
        const auto batch = sample(r, kGaussianDraws);
        tally.add("covariance", max_abs(empirical_covariance(batch) - k->gram()), 0.02);
        tally.add("means", max_abs(sample_means(batch)), 0.012);
        tally.add("consistency", consistency_check(k, subset, kGaussianDraws, seed).empirical_deviation, 0.03);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    tally.flag("runtime <= 10 s", seconds <= 10.0);
    auto out = tally.result(5, "Gaussian realization");
    out.seconds = seconds;
    return out;
}

inline CriterionResult clark_exactness(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 6);
    detail::Tally tally;
    const auto pts = random::disk_points(e, 100, 0.95);
    const InnerFunctionB dirac(CircleMeasure::dirac(0.0));
    const InnerFunctionB two(CircleMeasure({0.0, 0.5}, {0.5, 0.5}));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Complex z = pts.z(i);
        const Complex w = pts.z((i + 1) % pts.size());
        tally.add("b = z", std::abs(dirac(z) - z), 1e-12);
        tally.add("K^b = 1", std::abs(kb_eval(dirac, z, w) - 1.0), 1e-12);
        tally.add("b = z^2", std::abs(two(z) - z * z), 1e-12);
        tally.add("K^b = 1 + z conj(w)", std::abs(kb_eval(two, z, w) - (1.0 + z * std::conj(w))), 1e-12);
    }
    for (const auto *b : {&dirac, &two}) {
        const auto f = build_kb_factorization(*b, pts);
        tally.add("factorization residual", verify_factorization(f).residual, 1e-10);
        const auto m = minimality_test(f);
        tally.flag("rank = atoms", m.is_minimal && m.feature_rank == static_cast<Index>(b->measure().size()));
    }
    return tally.result(6, "Clark exactness");
}

inline CriterionResult poisson_herglotz(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 7);
    detail::Tally tally;
    for (int t = 0; t < 20; ++t) {
        const InnerFunctionB b(random::circle_measure(e, 6));
        for (int k = 0; k < 100; ++k) { tally.add("abs error", herglotz_poisson_check(b, random::disk_point(e, 0.95)).abs_error, 1e-10); }
    }
    return tally.result(7, "Poisson-Herglotz identity");
}

inline constexpr double kBoundaryRadius = 1.0 - 1e-6;

inline CriterionResult inner_modulus(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 8);
    detail::Tally tally;
    for (int t = 0; t < 20; ++t) {
        const InnerFunctionB b(random::circle_measure(e, 6));
        tally.add("random |1-|b||", inner_modulus_check(b, non_atom_grid(b.measure(), 1000), kBoundaryRadius), 1e-3);
    }
    const InnerFunctionB dirac(CircleMeasure::dirac(0.0));
    const InnerFunctionB two(CircleMeasure({0.0, 0.5}, {0.5, 0.5}));
    const double r = kBoundaryRadius;
    tally.add("delta_0 = 1-r", std::abs(inner_modulus_check(dirac, non_atom_grid(dirac.measure(), 1000), r) - (1.0 - r)), 1e-12);
    tally.add("two atoms = 1-r^2", std::abs(inner_modulus_check(two, non_atom_grid(two.measure(), 1000), r) - (1.0 - r * r)), 1e-12);
    return tally.result(8, "inner modulus");
}

/// B = {0,1}, mu = (3/4, 1/4), k_a = (1,1), k_b = (1,-1).
inline BoundaryFactorization renorm_worked_example() {
    Matrix phi(2, 2);
    phi << 1.0, 1.0, 1.0, -1.0;
    return factorization_from_features(PointSet::on_disk({0.0, 0.5}), DiscreteMeasure::indexed({0.75, 0.25}), phi);
}

inline CriterionResult renormalization(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 9);
    detail::Tally tally;
    Matrix expected(2, 2);
    expected << 1.0, 1.0, 1.0, 4.0;
    tally.add("worked example", max_abs(renormalize(renorm_worked_example()).kren_gram - expected), 1e-12);

    int accepted = 0;
    while (accepted < 100) {
        const auto f = random::offset_factorization(e, random::uniform_int(e, 1, 8), random::uniform_int(e, 1, 10));
        if (expectation_vector(f).cwiseAbs().minCoeff() < 1e-3) { continue; }
        ++accepted;
        tally.add("identity residual", renormalize(f).identity_residual(), 1e-10);
    }

    for (int t = 0; t < 20; ++t) {
        const auto mu = random::circle_measure(e, 6);
        const InnerFunctionB b(mu);
        const auto pts = random::disk_points(e, 10, 0.95);
        const Vector ex = expectation_vector(szego_boundary_factorization(mu, pts));
        for (std::size_t i = 0; i < pts.size(); ++i) { tally.add("1/E = 1-b", std::abs(1.0 / ex(static_cast<Index>(i)) - (1.0 - b(pts.z(i)))), 1e-12); }
    }
    return tally.result(9, "renormalization");
}

inline CriterionResult polydisk_density(std::uint64_t seed) {
    auto e = detail::engine_for(seed, 10);
    detail::Tally tally;
    for (std::size_t m = 1; m <= 8; ++m) {
        for (int t = 0; t < 20; ++t) {
            const auto mu = random::torus_measure(e, 1, m);
            const auto r = polydisk_density_test(mu, m);
            tally.flag("k=1 saturates at m-1", r.saturated && r.saturation_degree == static_cast<long>(m) - 1);
        }
    }
    for (int t = 0; t < 50; ++t) {
        const auto mu = random::torus_measure(e, 2, random::uniform_int(e, 1, 8));
        tally.flag("k=2 saturates by m", polydisk_density_test(mu, default_max_degree(mu)).saturated);
    }
    return tally.result(10, "polydisk density");
}

/// Criteria 1-10. Determinism (11) is checked by the caller, which owns the
/// serialized form.
inline std::vector<CriterionResult> run_all(std::uint64_t seed) {
    const std::vector<std::function<CriterionResult(std::uint64_t)>> criteria{
        factorization_reconstruction, transform_pair, schwarz_bound, morphism_checker, gaussian_realization,
        clark_exactness,              poisson_herglotz, inner_modulus, renormalization, polydisk_density,
    };
    std::vector<CriterionResult> out;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        try {
            out.push_back(c(seed));
            out.back().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        } catch (const std::exception &ex) {
            out.push_back({static_cast<int>(out.size()) + 1, "criterion " + std::to_string(out.size() + 1), false, 0.0, 0.0, ex.what()});
        }
    }
    return out;
}

}  // namespace kb::acceptance
