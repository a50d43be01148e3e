#pragma once

#include "factorization.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <thread>

namespace kb {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for one chunk of a seeded computation.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) { return std::mt19937_64(mix64(mix64(seed) ^ mix64(chunk + 0x632be59bd9b4e019ULL))); }

/// Zero-mean Gaussian process on the points of `kernel`: draws are
/// factor * w with w standard (real or circular complex) of length rank.
struct GaussianRealization {
    KernelRef kernel;
    Matrix factor;
    FieldTag field = FieldTag::complex;
    std::uint64_t seed = 0;

    [[nodiscard]] Index rank() const { return factor.cols(); }
};

/// Rank-r spectral square root L with L L* = G. Eigenvalues below the rank
/// threshold (including small negative ones) are dropped.
inline GaussianRealization realize(const KernelRef &k, std::uint64_t seed, double psd_tol = kDefaultPsdTol, double rank_tol = -1.0) {
    const auto n = static_cast<Index>(k->size());
    if (rank_tol < 0.0) { rank_tol = default_rank_tol(n); }
    const auto psd = check_positive_definite(*k, psd_tol);
    if (!psd.is_psd) { raise(ErrorKind::NotPsd, "covariance has eigenvalue " + std::to_string(psd.min_eigenvalue)); }

    GaussianRealization out{k, Matrix(n, 0), k->field(), seed};
    if (n == 0) { return out; }
    const double cut = rank_tol * std::max(psd.max_eigenvalue, 0.0);
    std::vector<Matrix> cols;
    if (k->field() == FieldTag::real) {
        // Real symmetric solver keeps the factor real so real draws stay real.
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(k->gram().real());
        for (Index q = n - 1; q >= 0; --q) {
            const double lam = solver.eigenvalues()(q);
            if (lam > cut && lam > 0.0) { cols.emplace_back((std::sqrt(lam) * solver.eigenvectors().col(q)).cast<Complex>()); }
        }
    } else {
        const auto spec = hermitian_spectrum(k->gram());
        for (Index q = n - 1; q >= 0; --q) {
            const double lam = spec.values(q);
            if (lam > cut && lam > 0.0) { cols.emplace_back(std::sqrt(lam) * spec.vectors.col(q)); }
        }
    }
    out.factor.resize(n, static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) { out.factor.col(static_cast<Index>(c)) = cols[c]; }
    return out;
}

inline double factor_residual(const GaussianRealization &r) { return max_abs(r.factor * r.factor.adjoint() - r.kernel->gram()); }

struct SampleBatch {
    /// One draw per row, one point per column.
    Matrix draws;
    std::uint64_t seed = 0;
    std::size_t chunk_size = 0;
};

inline constexpr std::size_t kDefaultChunkSize = 1 << 16;

/// N draws, generated in chunks of `chunk_size` rows. Chunk c uses its own
/// engine keyed by (seed, c), so the batch depends only on (seed,
/// chunk_size, N) and not on how chunks are spread over threads.
inline SampleBatch sample(const GaussianRealization &r, std::size_t count, std::size_t chunk_size = kDefaultChunkSize, unsigned threads = 0) {
    if (count == 0) { raise(ErrorKind::ShapeMismatch, "sample count must be at least 1"); }
    if (chunk_size == 0) { raise(ErrorKind::ShapeMismatch, "chunk size must be positive"); }
    const auto n = static_cast<Index>(r.kernel->size());
    const Index rank = r.rank();
    SampleBatch batch{Matrix::Zero(static_cast<Index>(count), n), r.seed, chunk_size};
    if (rank == 0) { return batch; }

    const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
    const bool real = r.field == FieldTag::real;
    const Matrix factor_t = r.factor.transpose();
    auto run_chunk = [&](std::size_t c) {
        auto engine = chunk_engine(r.seed, c);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t begin = c * chunk_size;
        const std::size_t end = std::min(count, begin + chunk_size);
        Eigen::RowVectorXcd w(rank);
        for (std::size_t d = begin; d < end; ++d) {
            for (Index k = 0; k < rank; ++k) {
                if (real) {
                    w(k) = Complex(normal(engine), 0.0);
                } else {
                    const double a = normal(engine);
                    const double b = normal(engine);
                    w(k) = Complex(a, b) * std::sqrt(0.5);
                }
            }
            batch.draws.row(static_cast<Index>(d)) = w * factor_t;
        }
    };

    if (threads == 0) { threads = std::max(1u, std::thread::hardware_concurrency()); }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
    if (threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) { run_chunk(c); }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t c = t; c < chunks; c += threads) { run_chunk(c); }
            });
        }
    }
    return batch;
}

/// (1/N) sum_d x_d x_d^*; the process mean is known to be zero.
inline Matrix empirical_covariance(const SampleBatch &batch) {
    if (batch.draws.rows() < 2) { raise(ErrorKind::ShapeMismatch, "empirical covariance needs at least two draws"); }
    Matrix c = batch.draws.transpose() * batch.draws.conjugate() / static_cast<double>(batch.draws.rows());
    mirror_upper(c);
    return c;
}

inline Vector sample_means(const SampleBatch &batch) { return batch.draws.colwise().mean().transpose(); }

/// Gaussian log-density at z: real  -1/2 [n log 2pi + log det M + z^T M^-1 z],
/// circular complex  -[n log pi + log det M + z^* M^-1 z].
inline double log_density(const FiniteKernel &m, const Vector &z, FieldTag field, double tol = kDefaultPsdTol) {
    const auto n = static_cast<Index>(m.size());
    if (z.size() != n) { raise(ErrorKind::ShapeMismatch, "point length differs from covariance size"); }
    const auto psd = check_positive_definite(m, tol);
    if (n == 0 || !(psd.min_eigenvalue > tol * std::max(1.0, psd.max_eigenvalue))) {
        raise(ErrorKind::SingularCovariance, "covariance is not strictly positive definite");
    }
    Eigen::LLT<Matrix> llt(m.gram());
    if (llt.info() != Eigen::Success) { raise(ErrorKind::SingularCovariance, "Cholesky factorization failed"); }
    double log_det = 0.0;
    for (Index i = 0; i < n; ++i) { log_det += 2.0 * std::log(llt.matrixL()(i, i).real()); }
    const double quad = z.dot(llt.solve(z)).real();
    const double dim = static_cast<double>(n);
    if (field == FieldTag::real) {
        if (m.field() != FieldTag::real || !z.imag().isZero(0.0)) { raise(ErrorKind::DomainViolation, "real density needs a real covariance and a real point"); }
        return -0.5 * (dim * std::log(2.0 * kPi) + log_det + quad);
    }
    return -(dim * std::log(kPi) + log_det + quad);
}

/// Field taken from the covariance: real Gram matrices get the real density.
inline double log_density(const FiniteKernel &m, const Vector &z, double tol = kDefaultPsdTol) { return log_density(m, z, m.field(), tol); }

struct ConsistencyReport {
    bool exact_ok = false;
    double exact_residual = 0.0;
    double empirical_deviation = 0.0;
    /// 4 max_i G_ii / sqrt(N).
    double statistical_bound = 0.0;
};

inline constexpr double kConsistencyExactTol = 1e-12;

/// Restricting the full process to a subset must give the process realized on
/// the subset directly. Structurally: rows of the factor reproduce G[F,F].
/// Empirically: covariance of projected full-process samples against samples
/// of an independently realized subset process (seed + 1).
inline ConsistencyReport consistency_check(const KernelRef &k, const std::vector<std::size_t> &subset, std::size_t count, std::uint64_t seed,
                                           std::size_t chunk_size = kDefaultChunkSize) {
    for (auto i : subset) {
        if (i >= k->size()) { raise(ErrorKind::IndexOutOfRange, "subset index " + std::to_string(i)); }
    }
    const auto full = realize(k, seed);
    const auto sub_kernel = share(restrict(*k, subset));
    const auto m = static_cast<Index>(subset.size());

    Matrix rows(m, full.rank());
    for (Index a = 0; a < m; ++a) { rows.row(a) = full.factor.row(static_cast<Index>(subset[static_cast<std::size_t>(a)])); }
    ConsistencyReport r;
    r.exact_residual = max_abs(rows * rows.adjoint() - sub_kernel->gram());
    r.exact_ok = r.exact_residual <= kConsistencyExactTol * std::max(1.0, max_abs(k->gram()));

    const auto full_batch = sample(full, count, chunk_size);
    SampleBatch projected{Matrix(full_batch.draws.rows(), m), seed, chunk_size};
    for (Index a = 0; a < m; ++a) { projected.draws.col(a) = full_batch.draws.col(static_cast<Index>(subset[static_cast<std::size_t>(a)])); }
    const auto direct = sample(realize(sub_kernel, seed + 1), count, chunk_size);
    r.empirical_deviation = max_abs(empirical_covariance(projected) - empirical_covariance(direct));
    r.statistical_bound = 4.0 * k->gram().diagonal().real().maxCoeff() / std::sqrt(static_cast<double>(count));
    return r;
}

/// The sampled process as an element of M(K_emp): atoms are draws with
/// weight 1/N, features(i, d) = draw_d(s_i).
inline BoundaryFactorization sample_factorization(const SampleBatch &batch, const PointSet &points) {
    DiscreteMeasure mu = DiscreteMeasure::uniform(static_cast<std::size_t>(batch.draws.rows()));
    return factorization_from_features(points, std::move(mu), batch.draws.transpose());
}

}  // namespace kb
