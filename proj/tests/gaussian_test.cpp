#include "support.hpp"

using namespace kbtest;

TEST(Realize, IdentityAndTwoByTwo) {
    const auto id = realize(table(Matrix::Identity(2, 2)), 1);
    EXPECT_EQ(id.rank(), 2);
    EXPECT_LE(factor_residual(id), 1e-15);
    EXPECT_EQ(id.field, FieldTag::real);

    const auto g = realize(table(mat({{2, 1}, {1, 2}})), 1);
    EXPECT_LE(factor_residual(g), 1e-12);
}

TEST(Realize, RankOne) {
    const auto r = realize(table(mat({{1, 1}, {1, 1}})), 1);
    ASSERT_EQ(r.rank(), 1);
    EXPECT_NEAR(std::abs(r.factor(0, 0)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(r.factor(0, 0) - r.factor(1, 0)), 0.0, 1e-14);
}

TEST(Realize, RejectsIndefinite) { EXPECT_KB_ERROR(NotPsd, realize(table(mat({{1, 2}, {2, 1}})), 1)); }

TEST(Sample, ZeroKernelGivesZeroDraws) {
    const auto batch = sample(realize(table(Matrix::Zero(2, 2)), 3), 100);
    EXPECT_EQ(batch.draws.rows(), 100);
    EXPECT_EQ(max_abs(batch.draws), 0.0);
    EXPECT_EQ(max_abs(empirical_covariance(batch)), 0.0);
}

TEST(Sample, StandardNormalMean) {
    const std::size_t n = 1000000;
    const auto batch = sample(realize(table(mat({{1}})), 99), n);
    EXPECT_LE(std::abs(sample_means(batch)(0)), 5.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_EQ(batch.draws.imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Sample, Deterministic) {
    auto e = random::engine(8);
    const auto r = realize(table(random::psd_matrix(e, 4, 4)), 1234);
    const auto a = sample(r, 5000, 512, 1);
    const auto b = sample(r, 5000, 512, 4);
    EXPECT_EQ(a.draws, b.draws);
    const auto c = sample(realize(r.kernel, 1235), 5000, 512);
    EXPECT_NE(a.draws, c.draws);
}

TEST(Sample, RejectsEmptyBatch) { EXPECT_KB_ERROR(ShapeMismatch, sample(realize(table(mat({{1}})), 1), 0)); }

TEST(Covariance, IdentityWithinBound) {
    const auto batch = sample(realize(table(Matrix::Identity(2, 2)), 42), 200000);
    EXPECT_LE(max_abs(empirical_covariance(batch) - Matrix::Identity(2, 2)), 0.02);
}

TEST(Covariance, SzegoRealPart) {
    const auto k = share(real_part(assemble_gram(SzegoKernel{}, PointSet::on_disk({0.0, 0.4, 0.4 * I, Complex(-0.3, -0.3)}))));
    const std::size_t n = 200000;
    const auto batch = sample(realize(k, 9), n);
    const double bound = 4.0 * k->gram().diagonal().real().maxCoeff() / std::sqrt(static_cast<double>(n));
    EXPECT_LE(max_abs(empirical_covariance(batch) - k->gram()), bound);
}

TEST(LogDensity, ClosedForms) {
    const double log2pi = std::log(2.0 * kPi);
    const FiniteKernel one = table_kernel(mat({{1}}));
    EXPECT_NEAR(log_density(one, vec({0})), -0.5 * log2pi, 1e-15);
    EXPECT_NEAR(log_density(one, vec({1})), -0.5 * log2pi - 0.5, 1e-15);
    EXPECT_NEAR(log_density(one, vec({0}), FieldTag::complex), -std::log(kPi), 1e-15);
    // |z|^2 = 1 costs exactly 1 in the circular density.
    EXPECT_NEAR(log_density(one, vec({I}), FieldTag::complex), -std::log(kPi) - 1.0, 1e-15);
}

TEST(LogDensity, ComplexCovariance) {
    const FiniteKernel c = table_kernel(mat({{1, 0.5 * I}, {-0.5 * I, 1}}));
    EXPECT_EQ(c.field(), FieldTag::complex);
    // det = 3/4; at the mode the circular density is 1 / (pi^2 det).
    EXPECT_NEAR(log_density(c, vec({0, 0})), -2.0 * std::log(kPi) - std::log(0.75), 1e-14);
    EXPECT_KB_ERROR(DomainViolation, log_density(c, vec({0, 0}), FieldTag::real));
}

TEST(LogDensity, IntegratesToOne) {
    const FiniteKernel m = table_kernel(mat({{0.7}}));
    const int steps = 20000;
    const double a = -10.0;
    const double h = 20.0 / steps;
    double sum = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * std::exp(log_density(m, vec({a + i * h})));
    }
    EXPECT_NEAR(sum * h / 3.0, 1.0, 1e-6);
}

TEST(LogDensity, SingularCovariance) { EXPECT_KB_ERROR(SingularCovariance, log_density(table_kernel(mat({{1, 1}, {1, 1}})), vec({0, 0}))); }

TEST(Consistency, IdentitySubset) {
    const auto r = consistency_check(table(Matrix::Identity(3, 3)), {0, 2}, 20000, 5);
    EXPECT_TRUE(r.exact_ok);
    EXPECT_EQ(r.exact_residual, 0.0);
    EXPECT_LE(r.empirical_deviation, 2.0 * r.statistical_bound);
}

TEST(Consistency, SzegoGrid) {
    const auto k = share(assemble_gram(SzegoKernel{}, PointSet::on_disk({0.0, 0.3, -0.3, 0.3 * I, -0.3 * I})));
    const auto r = consistency_check(k, {1, 3}, 100000, 77);
    EXPECT_TRUE(r.exact_ok);
    EXPECT_LE(r.empirical_deviation, 0.03);
    const auto full = consistency_check(k, {0, 1, 2, 3, 4}, 100000, 77);
    EXPECT_TRUE(full.exact_ok);
    EXPECT_LE(full.empirical_deviation, 2.0 * full.statistical_bound);
}

TEST(Consistency, IndexChecked) { EXPECT_KB_ERROR(IndexOutOfRange, consistency_check(table(Matrix::Identity(2, 2)), {2}, 10, 1)); }
