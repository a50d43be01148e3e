#include "support.hpp"

using namespace kbtest;

TEST(Szego, ClosedFormValues) {
    EXPECT_EQ(szego_eval(0.0, Complex(0.3, -0.7)), Complex(1.0));
    EXPECT_NEAR(std::abs(szego_eval(0.5, 0.5) - 4.0 / 3.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(szego_eval(0.5 * I, 0.5 * I) - 4.0 / 3.0), 0.0, 1e-15);
}

TEST(Szego, GramOfTwoPoints) {
    const auto k = assemble_gram(SzegoKernel{}, PointSet::on_disk({0.0, 0.5}));
    EXPECT_LT(max_abs(k.gram() - mat({{1, 1}, {1, 4.0 / 3.0}})), 1e-15);
    EXPECT_EQ(k.field(), FieldTag::real);
    EXPECT_EQ(assemble_gram(SzegoKernel{}, PointSet::on_disk({0.0})).gram()(0, 0), Complex(1.0));
}

TEST(Szego, RejectsBoundaryPoints) {
    EXPECT_KB_ERROR(DomainViolation, assemble_gram(SzegoKernel{}, PointSet::on_disk({0.0, 1.0})));
    EXPECT_KB_ERROR(DomainViolation, assemble_gram(SzegoKernel{}, PointSet::on_disk({Complex(0.8, 0.8)})));
    EXPECT_KB_ERROR(DomainViolation, szego_eval(1.0 - 1e-16, 0.0));
}

TEST(Polydisk, ProductOfFactors) {
    EXPECT_EQ(polydisk_szego_eval({0.0, 0.0}, {0.4, Complex(0.1, 0.2)}), Complex(1.0));
    EXPECT_NEAR(std::abs(polydisk_szego_eval({0.5, 0.5}, {0.5, 0.5}) - 16.0 / 9.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(polydisk_szego_eval({0.5, 0.0}, {0.5, 0.0}) - 4.0 / 3.0), 0.0, 1e-15);
    const PointSet p({"p"}, {{0.5, 0.5}});
    EXPECT_NEAR(std::abs(assemble_gram(PolydiskSzegoKernel{2}, p).gram()(0, 0) - 16.0 / 9.0), 0.0, 1e-15);
}

TEST(Polydisk, DimensionChecked) {
    EXPECT_KB_ERROR(DimensionMismatch, polydisk_szego_eval({0.1}, {0.1, 0.2}));
    const PointSet p({"p"}, {{0.5, 0.5}});
    EXPECT_KB_ERROR(DimensionMismatch, assemble_gram(PolydiskSzegoKernel{3}, p));
    EXPECT_KB_ERROR(DimensionMismatch, assemble_gram(SzegoKernel{}, p));
}

TEST(PointSetTest, LabelsAreUnique) {
    EXPECT_KB_ERROR(LabelMismatch, PointSet({"a", "a"}, {{0.0}, {0.1}}));
    EXPECT_KB_ERROR(DimensionMismatch, PointSet({"a", "b"}, {{0.0}, {0.1, 0.2}}));
    const PointSet p({"a", "b"}, {{0.0}, {0.1}});
    EXPECT_EQ(p.index_of("b"), 1u);
    EXPECT_KB_ERROR(UnknownLabel, p.index_of("c"));
}

TEST(Table, ShapeAndSymmetry) {
    EXPECT_KB_ERROR(ShapeMismatch, table_kernel(PointSet::indexed(3), Matrix::Identity(2, 2)));
    EXPECT_KB_ERROR(NotHermitian, table_kernel(mat({{1, 2}, {0, 1}})));
    const auto k = table_kernel(mat({{1, I}, {-I, 2}}));
    EXPECT_EQ(k.field(), FieldTag::complex);
    EXPECT_EQ(k.gram()(1, 0), std::conj(k.gram()(0, 1)));
}

TEST(Psd, WorkedExamples) {
    const auto a = check_positive_definite(mat({{1, 1}, {1, 4.0 / 3.0}}));
    EXPECT_TRUE(a.is_psd);
    // det = 1/3, trace = 7/3: eigenvalues are the roots of x^2 - 7/3 x + 1/3.
    const double disc = std::sqrt(49.0 / 9.0 - 4.0 / 3.0);
    EXPECT_NEAR(a.min_eigenvalue, (7.0 / 3.0 - disc) / 2.0, 1e-14);
    EXPECT_NEAR(a.min_eigenvalue * a.max_eigenvalue, 1.0 / 3.0, 1e-14);

    const auto id = check_positive_definite(Matrix::Identity(2, 2));
    EXPECT_NEAR(id.min_eigenvalue, 1.0, 1e-15);
    EXPECT_TRUE(id.is_psd);

    const auto bad = check_positive_definite(mat({{1, 2}, {2, 1}}));
    EXPECT_NEAR(bad.min_eigenvalue, -1.0, 1e-14);
    EXPECT_NEAR(bad.max_eigenvalue, 3.0, 1e-14);
    EXPECT_FALSE(bad.is_psd);
}

TEST(Psd, RelativeTolerance) {
    Matrix g = 1e6 * Matrix::Identity(2, 2);
    g(1, 1) = -1e-5;
    EXPECT_TRUE(check_positive_definite(g).is_psd);
    g(1, 1) = -1e-3;
    EXPECT_FALSE(check_positive_definite(g).is_psd);
    EXPECT_KB_ERROR(NotHermitian, check_positive_definite(mat({{1, 1}, {0, 1}})));
}

TEST(Restrict, PrincipalSubmatrix) {
    const auto k = assemble_gram(SzegoKernel{}, PointSet::on_disk({0.0, 0.5, 0.5 * I}));
    const auto r = restrict(k, {2, 0});
    EXPECT_EQ(r.points().labels(), (std::vector<std::string>{"2", "0"}));
    EXPECT_EQ(r.gram()(0, 1), k.gram()(2, 0));
    EXPECT_KB_ERROR(IndexOutOfRange, restrict(k, {3}));
}

TEST(RealPart, IsRealSymmetric) {
    const auto k = assemble_gram(SzegoKernel{}, PointSet::on_disk({0.3 * I, 0.5, Complex(-0.2, 0.4)}));
    const auto re = real_part(k);
    EXPECT_EQ(re.field(), FieldTag::real);
    EXPECT_TRUE(check_positive_definite(re).is_psd);
}
