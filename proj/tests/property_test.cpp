#include "support.hpp"

#include <numeric>

using namespace kbtest;

namespace {

constexpr std::uint64_t kBaseSeed = 0x5eed;

random::Engine trial(std::uint64_t k) { return random::engine(kBaseSeed + k); }

KernelRef random_psd(random::Engine &e, Index max_n = 20) {
    const Index n = static_cast<Index>(random::uniform_int(e, 1, static_cast<std::size_t>(max_n)));
    const Index r = static_cast<Index>(random::uniform_int(e, 1, static_cast<std::size_t>(n)));
    return table(random::psd_matrix(e, n, r));
}

KernelSpec random_spec(random::Engine &e, std::size_t &dim) {
    switch (random::uniform_int(e, 0, 2)) {
    case 0: dim = 1; return SzegoKernel{};
    case 1: dim = random::uniform_int(e, 2, 3); return PolydiskSzegoKernel{dim};
    default: dim = 1; return DeBrangesRovnyakKernel{InnerFunctionB(random::circle_measure(e, 6))};
    }
}

PointSet random_points(random::Engine &e, std::size_t n, std::size_t dim, double radius) {
    std::vector<std::string> labels;
    std::vector<std::vector<Complex>> coords;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Complex> c;
        for (std::size_t d = 0; d < dim; ++d) { c.push_back(random::disk_point(e, radius)); }
        labels.push_back("s" + std::to_string(i));
        coords.push_back(std::move(c));
    }
    return {std::move(labels), std::move(coords)};
}

std::vector<std::size_t> random_subset(random::Engine &e, std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), e);
    idx.resize(random::uniform_int(e, 1, n));
    return idx;
}

}  // namespace

TEST(KernelProperty, AssembledGramsArePsdAndExactlyHermitian) {
    for (std::uint64_t t = 0; t < 150; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(t);
        std::size_t dim = 1;
        const auto spec = random_spec(e, dim);
        const auto k = assemble_gram(spec, random_points(e, random::uniform_int(e, 1, 20), dim, 0.9));
        EXPECT_TRUE(check_positive_definite(k).is_psd) << kernel_name(spec);
        for (Index i = 0; i < k.gram().rows(); ++i) {
            for (Index j = 0; j < k.gram().cols(); ++j) { ASSERT_EQ(k.gram()(i, j), std::conj(k.gram()(j, i))); }
        }
    }
}

TEST(KernelProperty, RestrictionMonotonicity) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(1000 + t);
        const auto k = random_psd(e);
        EXPECT_TRUE(check_positive_definite(restrict(*k, random_subset(e, k->size()))).is_psd);
    }
}

TEST(RkhsProperty, ReproducingIdentityIsExact) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto e = trial(2000 + t);
        const auto k = random_psd(e, 8);
        for (std::size_t i = 0; i < k->size(); ++i) {
            for (std::size_t j = 0; j < k->size(); ++j) { ASSERT_EQ(evaluate(RkhsElement::generator(k, j), i), k->gram()(static_cast<Index>(i), static_cast<Index>(j))); }
        }
    }
}

TEST(RkhsProperty, FactorizeReconstruct) {
    for (std::uint64_t t = 0; t < 200; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(3000 + t);
        const auto frame = parseval_factorize(random_psd(e));
        EXPECT_LE(verify_parseval(frame), 1e-10);
        EXPECT_TRUE(tightness_test(frame));
    }
}

TEST(RkhsProperty, NormConsistency) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(4000 + t);
        const auto k = random_psd(e);
        const RkhsElement f{k, random::complex_normal_vector(e, static_cast<Index>(k->size()))};
        EXPECT_LE(frame_norm_defect(f, parseval_factorize(k)), 1e-9 * std::max(1.0, rkhs_norm2(f)));
    }
}

TEST(RkhsProperty, RankStableUnderUnitaryConjugation) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(5000 + t);
        const auto k = random_psd(e, 12);
        const Matrix u = random::unitary(e, static_cast<Index>(k->size()));
        Matrix rotated = u * k->gram() * u.adjoint();
        mirror_upper(rotated);
        EXPECT_EQ(parseval_factorize(table(rotated)).rank(), parseval_factorize(k).rank());
    }
}

TEST(FactorizationProperty, TransformPair) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(6000 + t);
        const auto f = random::factorization(e, random::uniform_int(e, 1, 8), random::uniform_int(e, 1, 10));
        const double scale = std::max(1.0, max_abs(f.kernel->gram()));
        const RkhsElement elem{f.kernel, random::complex_normal_vector(e, static_cast<Index>(f.points()))};
        const double norm = std::max(1.0, kernel_pairing(f.kernel->gram(), elem.coeffs, elem.coeffs).real());
        EXPECT_LE(isometry_defect(f, elem), 1e-9 * norm);
        EXPECT_LE(vw_generator_residual(f), 1e-9 * scale);
        const auto iso = check_isometry(f);
        EXPECT_LE(iso.spectrum_defect, 1e-7);
    }
}

TEST(FactorizationProperty, CountingParsevalIsMinimal) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(7000 + t);
        const auto k = random_psd(e);
        const auto f = counting_factorization(parseval_factorize(k));
        EXPECT_LE(verify_factorization(f).residual, 1e-10 * std::max(1.0, max_abs(k->gram())));
        EXPECT_TRUE(minimality_test(f).is_minimal);
    }
}

TEST(FactorizationProperty, SchwarzBound) {
    for (std::uint64_t t = 0; t < 500; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(8000 + t);
        const auto f = random::factorization(e, random::uniform_int(e, 1, 6), random::uniform_int(e, 1, 8));
        const auto r = schwarz_bound_check(f, random::complex_normal_vector(e, static_cast<Index>(f.atoms())),
                                           random::complex_normal_vector(e, static_cast<Index>(f.points())));
        EXPECT_TRUE(r.holds) << r.lhs << " > " << r.rhs;
    }
}

TEST(FactorizationProperty, PullbackUnderPassingMorphism) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(9000 + t);
        const auto f1 = random::factorization(e, 3, random::uniform_int(e, 1, 8));
        std::vector<std::size_t> perm(f1.atoms());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), e);
        std::vector<double> w2(perm.size());
        Matrix phi2(f1.features.rows(), static_cast<Index>(perm.size()));
        for (std::size_t x = 0; x < perm.size(); ++x) {
            w2[x] = f1.measure.weights()[perm[x]];
            phi2.col(static_cast<Index>(x)) = f1.features.col(static_cast<Index>(perm[x]));
        }
        const BoundaryFactorization f2{f1.kernel, DiscreteMeasure::indexed(w2), phi2};
        const MeasureMorphism m(f2.measure, f1.measure, perm);
        const auto r = check_morphism(m, f1, f2);
        ASSERT_TRUE(r.pushforward_ok && r.sigma_ok && r.diagram_ok);
        EXPECT_LE(pullback_isometry_defect(m, random::complex_normal_vector(e, static_cast<Index>(f1.atoms()))), 1e-12);
    }
}

TEST(GaussianProperty, MeansWithinFiveSigma) {
    for (std::uint64_t t = 0; t < 20; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(10000 + t);
        const auto k = random_psd(e, 6);
        const std::size_t n = 20000;
        const Vector m = sample_means(sample(realize(k, t), n));
        for (Index i = 0; i < m.size(); ++i) { EXPECT_LE(std::abs(m(i)), 5.0 * std::sqrt(k->gram()(i, i).real() / static_cast<double>(n))); }
    }
}

TEST(GaussianProperty, CovarianceAndMarginalization) {
    for (std::uint64_t t = 0; t < 10; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(11000 + t);
        const auto k = random_psd(e, 5);
        const std::size_t n = 50000;
        const double bound = 4.0 * k->gram().diagonal().real().maxCoeff() / std::sqrt(static_cast<double>(n));
        EXPECT_LE(max_abs(empirical_covariance(sample(realize(k, t), n)) - k->gram()), bound);
        const auto r = consistency_check(k, random_subset(e, k->size()), n, t);
        EXPECT_TRUE(r.exact_ok);
        EXPECT_LE(r.empirical_deviation, 2.0 * r.statistical_bound);
    }
}

TEST(GaussianProperty, SampledFactorizationNotMinimal) {
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto e = trial(12000 + t);
        const auto k = random_psd(e, 5);
        const auto f = sample_factorization(sample(realize(k, t), 200), k->points());
        EXPECT_FALSE(minimality_test(f).is_minimal);
        EXPECT_LE(verify_factorization(f).residual, 1e-12 * std::max(1.0, max_abs(f.kernel->gram())));
    }
}

TEST(ClarkProperty, HerglotzRoundTrip) {
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto e = trial(13000 + t);
        const InnerFunctionB b(random::circle_measure(e, 6));
        for (int k = 0; k < 100; ++k) { ASSERT_LE(herglotz_poisson_check(b, random::disk_point(e, 0.95)).abs_error, 1e-10); }
    }
}

TEST(ClarkProperty, ExactFactorizationAndMinimality) {
    int minimal = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(14000 + static_cast<std::uint64_t>(t));
        const InnerFunctionB b(random::circle_measure(e, 6));
        const auto f = build_kb_factorization(b, random::disk_points(e, b.measure().size() + random::uniform_int(e, 0, 4), 0.9));
        EXPECT_LE(verify_factorization(f).residual, 1e-10 * std::max(1.0, max_abs(f.kernel->gram())));
        minimal += minimality_test(f).feature_rank == static_cast<Index>(b.measure().size());
    }
    EXPECT_GE(minimal, trials * 99 / 100);
}

TEST(ClarkProperty, RenormalizationIdentity) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(15000 + t);
        const auto f = random::offset_factorization(e, random::uniform_int(e, 1, 6), random::uniform_int(e, 1, 8));
        ASSERT_TRUE(verify_factorization(f).holds);
        if (expectation_vector(f).cwiseAbs().minCoeff() < 1e-6) { continue; }
        const auto ctx = renormalize(f);
        EXPECT_LE(ctx.identity_residual(), 1e-10);
        EXPECT_TRUE(ctx.kren_psd.is_psd);
    }
}

TEST(ClarkProperty, SzegoExpectationIsOneMinusB) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto e = trial(16000 + t);
        const auto mu = random::circle_measure(e, 6);
        const auto pts = random::disk_points(e, 10, 0.95);
        const Vector ex = expectation_vector(szego_boundary_factorization(mu, pts));
        const InnerFunctionB b(mu);
        for (std::size_t i = 0; i < pts.size(); ++i) { ASSERT_LE(std::abs(1.0 / ex(static_cast<Index>(i)) - (1.0 - b(pts.z(i)))), 1e-12); }
    }
}

TEST(ClarkProperty, ModulusNondecreasingBeyondZeros) {
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto e = trial(17000 + t);
        const InnerFunctionB b(random::circle_measure(e, 6));
        double rho = 0.0;
        for (Complex z : inner_zeros(b)) {
            ASSERT_LT(std::abs(z), 1.0);
            rho = std::max(rho, std::abs(z));
        }
        const double r0 = std::max(0.9, rho);
        for (double theta : non_atom_grid(b.measure(), 50)) {
            double prev = 0.0;
            for (int k = 0; k <= 100; ++k) {
                const double r = r0 + (0.9999 - r0) * k / 100.0;
                const double m = std::abs(b(r * unit_circle(theta)));
                ASSERT_GE(m, prev - 1e-12) << "theta " << theta << " r " << r;
                prev = m;
            }
        }
    }
}

TEST(ClarkProperty, ModulusCanDipInsideOutermostZero) {
    // A zero of b at radius 0.95 on the ray theta = 0.25: |b| falls to 0 there.
    const InnerFunctionB b(CircleMeasure({0.2, 0.3}, {0.5, 0.5}));
    double rho = 0.0;
    Complex outer;
    for (Complex z : inner_zeros(b)) {
        EXPECT_LT(std::abs(b(z)), 1e-12);
        if (std::abs(z) > rho) {
            rho = std::abs(z);
            outer = z;
        }
    }
    ASSERT_GT(rho, 0.9);
    const double theta = std::arg(outer) / (2.0 * kPi) + (std::arg(outer) < 0 ? 1.0 : 0.0);
    EXPECT_GT(std::abs(b(0.9 * unit_circle(theta))), std::abs(b(rho * unit_circle(theta))) + 1e-3);
}

TEST(PolydiskProperty, SaturationDegrees) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        SCOPED_TRACE(t);
        auto e = trial(18000 + t);
        const std::size_t m = random::uniform_int(e, 1, 8);
        const auto one = polydisk_density_test(random::torus_measure(e, 1, m), m);
        EXPECT_EQ(one.saturation_degree, static_cast<long>(m) - 1);
        const auto mu2 = random::torus_measure(e, 2, random::uniform_int(e, 1, 8));
        EXPECT_TRUE(polydisk_density_test(mu2, default_max_degree(mu2)).saturated);
    }
}
