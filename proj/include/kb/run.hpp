#pragma once

#include "acceptance.hpp"
#include "job.hpp"
#include "report.hpp"

#include <chrono>
#include <iostream>

namespace kb {

enum class LogLevel { quiet, error, info, debug };

inline LogLevel &log_level() {
    static LogLevel level = LogLevel::error;
    return level;
}

/// KB_LOG=quiet|error|info|debug; anything else keeps the default.
inline LogLevel parse_log_level(const char *value) {
    const std::string_view v = value ? value : "";
    if (v == "quiet") { return LogLevel::quiet; }
    if (v == "info") { return LogLevel::info; }
    if (v == "debug") { return LogLevel::debug; }
    return LogLevel::error;
}

inline void log(LogLevel level, const std::string &msg) {
    if (level != LogLevel::quiet && level <= log_level()) { std::cerr << "kb: " << msg << "\n"; }
}

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailure = 2;

inline int exit_code(const Report &r) { return r.passed() ? kExitPass : kExitCheckFailure; }

namespace pipeline {

[[noreturn]] inline void missing(const std::string &command, const std::string &field) {
    raise(ErrorKind::ConfigError, command + " needs '" + field + "'");
}

inline PointSet resolve_points(const JobConfig &c, const std::string &command) {
    if (c.points) { return *c.points; }
    if (!c.random_points) { missing(command, "points' or 'random_points"); }
    auto e = random::engine(c.seed);
    std::vector<std::string> labels;
    std::vector<std::vector<Complex>> coords;
    for (std::size_t i = 0; i < c.random_points->count; ++i) {
        std::vector<Complex> z;
        for (std::size_t d = 0; d < c.random_points->dimension; ++d) { z.push_back(random::disk_point(e, c.random_points->radius)); }
        labels.push_back(std::to_string(i));
        coords.push_back(std::move(z));
    }
    return {std::move(labels), std::move(coords)};
}

inline CircleMeasure circle_measure(const MeasureConfig &m) {
    std::vector<double> atoms;
    if (m.coords.empty()) { raise(ErrorKind::ConfigError, "circle measure needs 'atoms'"); }
    for (const auto &a : m.coords) {
        if (a.size() != 1) { raise(ErrorKind::ConfigError, "circle atoms are single numbers in [0,1)"); }
        atoms.push_back(a.front());
    }
    return {atoms, m.weights};
}

inline DiscreteMeasure discrete_measure(const MeasureConfig &m) { return {m.labels, m.weights, m.normalized, m.coords}; }

inline KernelSpec kernel_spec(const KernelConfig &k) {
    if (k.type == "szego") { return SzegoKernel{}; }
    if (k.type == "polydisk-szego") { return PolydiskSzegoKernel{k.dimension}; }
    if (k.type == "debranges-rovnyak") { return DeBrangesRovnyakKernel{InnerFunctionB(circle_measure(*k.measure), k.b_form)}; }
    return TableKernel{*k.matrix};
}

/// Table kernels may omit points; they are then labeled "0".."n-1".
inline KernelRef resolve_kernel(const JobConfig &c, const std::string &command) {
    if (!c.kernel) { missing(command, "kernel"); }
    if (c.kernel->type == "table" && !c.points && !c.random_points) { return share(table_kernel(*c.kernel->matrix)); }
    auto k = assemble_gram(kernel_spec(*c.kernel), resolve_points(c, command));
    if (c.real_part) { k = real_part(k); }
    return share(std::move(k));
}

inline Index rank_of(const Matrix &gram, double rank_tol) {
    if (gram.rows() == 0) { return 0; }
    if (rank_tol < 0.0) { rank_tol = default_rank_tol(gram.rows()); }
    const auto spec = hermitian_spectrum(gram);
    const double cut = rank_tol * std::max(spec.max(), 0.0);
    return static_cast<Index>((spec.values.array() > cut).count());
}

inline double scale_of(const Matrix &gram) { return std::max(1.0, max_abs(gram)); }

inline void add_psd(Report &r, const PsdReport &psd, double tol, const std::string &prefix = "") {
    r.check(prefix + "psd", -psd.min_eigenvalue, tol * std::max(1.0, psd.max_eigenvalue));
    r.metrics[prefix + "min_eigenvalue"] = psd.min_eigenvalue;
    r.metrics[prefix + "max_eigenvalue"] = psd.max_eigenvalue;
}

inline void add_isometry(Report &r, const BoundaryFactorization &f, const Tolerances &t, const std::string &prefix) {
    const auto iso = check_isometry(f, t.fact_tol, t.rank_tol);
    r.check(prefix + "projection_idempotent_selfadjoint", iso.projection_residual, 1e-8);
    r.check(prefix + "projection_spectrum", iso.spectrum_defect, 1e-8);
    r.check(prefix + "vw_generators", vw_generator_residual(f, t.fact_tol), t.fact_tol * scale_of(f.kernel->gram()));
    r.metrics[prefix + "projection_trace"] = iso.trace;
    r.metrics[prefix + "projection_rank"] = static_cast<double>(iso.rank);
}

inline Report validate(const JobConfig &c) {
    Report r;
    const auto k = resolve_kernel(c, "validate");
    add_psd(r, check_positive_definite(*k, c.tolerances.psd_tol), c.tolerances.psd_tol);
    r.metrics["points"] = static_cast<double>(k->size());
    r.metrics["rank"] = static_cast<double>(rank_of(k->gram(), c.tolerances.rank_tol));
    r.notes["kernel"] = c.kernel->type;
    r.notes["field"] = k->field() == FieldTag::real ? "real" : "complex";
    r.matrices["gram"] = k->gram();
    return r;
}

inline Report factorize(const JobConfig &c) {
    Report r;
    const auto k = resolve_kernel(c, "factorize");
    const double scale = scale_of(k->gram());
    const auto frame = parseval_factorize(k, c.tolerances.rank_tol, c.tolerances.psd_tol);
    r.check("parseval_reconstruction", verify_parseval(frame), c.tolerances.fact_tol * scale);

    auto e = random::engine(c.seed);
    double norm_defect = 0.0;
    for (int t = 0; t < 16; ++t) {
        const RkhsElement f{k, random::complex_normal_vector(e, static_cast<Index>(k->size()))};
        norm_defect = std::max(norm_defect, frame_norm_defect(f, frame) / std::max(1.0, rkhs_norm2(f)));
    }
    r.check("frame_norm_identity", norm_defect, 1e-9);

    const auto counting = counting_factorization(frame);
    add_isometry(r, counting, c.tolerances, "frame_");
    r.metrics["frame_rank"] = static_cast<double>(frame.rank());
    r.metrics["frame_tight"] = tightness_test(frame) ? 1.0 : 0.0;
    r.matrices["frame"] = frame.frame;

    if (c.features) {
        if (!c.measure) { missing("factorize", "measure"); }
        const BoundaryFactorization f{k, discrete_measure(*c.measure), *c.features};
        const auto fc = verify_factorization(f, c.tolerances.fact_tol * scale);
        r.check("boundary_factorization", fc.residual, c.tolerances.fact_tol * scale);
        const double rank_tol = c.tolerances.rank_tol < 0.0 ? 0.0 : c.tolerances.rank_tol;
        const auto m = minimality_test(f, rank_tol);
        r.metrics["feature_rank"] = static_cast<double>(m.feature_rank);
        r.metrics["minimal"] = m.is_minimal ? 1.0 : 0.0;
        if (fc.holds) { add_isometry(r, f, {c.tolerances.psd_tol, c.tolerances.fact_tol * scale, c.tolerances.rank_tol}, "boundary_"); }
    } else if (c.measure) {
        missing("factorize", "features");
    }
    r.notes["kernel"] = c.kernel->type;
    return r;
}

inline Report gaussian_sample(const JobConfig &c) {
    Report r;
    if (!c.sample_count) { missing("gaussian-sample", "sample_count"); }
    const std::size_t n = *c.sample_count;
    const auto k = resolve_kernel(c, "gaussian-sample");
    const double scale = scale_of(k->gram());
    const auto real = realize(k, c.seed, c.tolerances.psd_tol, c.tolerances.rank_tol);
    r.check("factor_reconstruction", factor_residual(real), c.tolerances.fact_tol * scale);
    r.metrics["rank"] = static_cast<double>(real.rank());
    r.metrics["sample_count"] = static_cast<double>(n);
    r.notes["field"] = real.field == FieldTag::real ? "real" : "complex";

    const auto batch = sample(real, n, c.chunk_size);
    const double max_diag = k->gram().diagonal().real().maxCoeff();
    const double root_n = std::sqrt(static_cast<double>(n));
    if (n >= 2) {
        const Matrix cov = empirical_covariance(batch);
        r.check("covariance", max_abs(cov - k->gram()), 4.0 * max_diag / root_n);
        r.matrices["empirical_covariance"] = cov;
    }
    const Vector means = sample_means(batch);
    double worst = 0.0;
    for (Index i = 0; i < means.size(); ++i) {
        const double sigma = std::sqrt(std::max(k->gram()(i, i).real(), 0.0) / static_cast<double>(n));
        worst = std::max(worst, sigma > 0.0 ? std::abs(means(i)) / sigma : (std::abs(means(i)) > 0.0 ? INFINITY : 0.0));
    }
    r.check("means_in_sigma", worst, 5.0);
    r.matrices["means"] = means;

    if (!c.subset.empty()) {
        const auto cons = consistency_check(k, c.subset, n, c.seed, c.chunk_size);
        r.check("consistency_exact", cons.exact_residual, kConsistencyExactTol * scale);
        r.check("consistency_empirical", cons.empirical_deviation, cons.statistical_bound);
    }
    r.chunk_size = c.chunk_size;
    return r;
}

inline InnerFunctionB clark_function(const JobConfig &c, const std::string &command) {
    if (c.kernel && c.kernel->type == "debranges-rovnyak") { return InnerFunctionB(circle_measure(*c.kernel->measure), c.kernel->b_form); }
    if (c.kernel) { raise(ErrorKind::ConfigError, command + " needs a debranges-rovnyak kernel or a top-level measure"); }
    if (!c.measure) { missing(command, "measure"); }
    return InnerFunctionB(circle_measure(*c.measure));
}

inline Report clark(const JobConfig &c) {
    Report r;
    const auto b = clark_function(c, "clark");
    const auto points = resolve_points(c, "clark");
    const bool printed = b.form() == BForm::printed;
    r.notes["b_form"] = printed ? "printed" : "reciprocal";
    r.check("b_at_zero", std::abs(b(0.0)), 1e-12);

    if (printed) {
        r.notes["factorization"] = "unavailable: b has no radial limit 1 at the atoms";
    } else {
        const auto f = build_kb_factorization(b, points);
        const double scale = scale_of(f.kernel->gram());
        r.check("factorization", verify_factorization(f).residual, c.tolerances.fact_tol * scale);
        const auto m = minimality_test(f, c.tolerances.rank_tol < 0.0 ? 0.0 : c.tolerances.rank_tol);
        r.metrics["feature_rank"] = static_cast<double>(m.feature_rank);
        if (points.size() >= b.measure().size()) {
            r.flag("minimal", m.is_minimal);
        } else {
            r.notes["minimal"] = "not tested: fewer points than atoms";
        }
        add_psd(r, check_positive_definite(*f.kernel, c.tolerances.psd_tol), c.tolerances.psd_tol);
        r.matrices["kernel"] = f.kernel->gram();
    }

    double herglotz = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto h = herglotz_poisson_check(b, points.z(i));
        herglotz = std::max(herglotz, h.abs_error / std::max(1.0, std::abs(h.rhs)));
    }
    r.check("poisson_herglotz", herglotz, 1e-10);
    const auto grid = non_atom_grid(b.measure(), c.grid);
    if (!grid.empty()) { r.check("inner_modulus", inner_modulus_check(b, grid, c.radius), 1e-3); }
    r.metrics["radius"] = c.radius;
    r.metrics["atoms"] = static_cast<double>(b.measure().size());
    return r;
}

inline BoundaryFactorization renorm_input(const JobConfig &c) {
    if (c.features) {
        if (!c.measure) { missing("renorm", "measure"); }
        DiscreteMeasure mu = discrete_measure(*c.measure);
        if (c.kernel) { return {resolve_kernel(c, "renorm"), std::move(mu), *c.features}; }
        const PointSet pts = c.points ? *c.points : PointSet::indexed(static_cast<std::size_t>(c.features->rows()));
        return factorization_from_features(pts, std::move(mu), *c.features);
    }
    const auto b = clark_function(c, "renorm");
    return build_kb_factorization(b, resolve_points(c, "renorm"));
}

inline Report renorm(const JobConfig &c) {
    Report r;
    const auto f = renorm_input(c);
    const double scale = scale_of(f.kernel->gram());
    r.check("input_factorization", verify_factorization(f).residual, c.tolerances.fact_tol * scale);
    const auto ctx = renormalize(f, c.tolerances.psd_tol);
    r.check("renormalized_identity", ctx.identity_residual(), 1e-10);
    add_psd(r, ctx.kren_psd, c.tolerances.psd_tol, "renormalized_");
    const auto d = density_criterion(ctx, c.tolerances.rank_tol < 0.0 ? 0.0 : c.tolerances.rank_tol);
    r.metrics["dense"] = d.is_dense ? 1.0 : 0.0;
    r.metrics["feature_rank"] = static_cast<double>(d.rank);
    r.metrics["deficiency"] = static_cast<double>(d.deficiency);
    r.matrices["renormalized_kernel"] = ctx.kren_gram;
    r.matrices["expectations"] = ctx.expectations;
    return r;
}

inline Report morphism_check(const JobConfig &c) {
    Report r;
    if (!c.morphism) { missing("morphism-check", "morphism"); }
    const auto &mc = *c.morphism;
    DiscreteMeasure target = discrete_measure(mc.target.measure);
    DiscreteMeasure source = discrete_measure(mc.source.measure);
    const auto n = static_cast<std::size_t>(mc.target.features.rows());
    const PointSet pts = c.points ? *c.points : PointSet::indexed(n);
    const auto f1 = factorization_from_features(pts, target, mc.target.features);
    const BoundaryFactorization f2{f1.kernel, source, mc.source.features};

    std::vector<std::string> image;
    for (const auto &label : source.labels()) {
        const auto it = mc.map.find(label);
        if (it == mc.map.end()) { raise(ErrorKind::LabelMismatch, "morphism does not map source atom '" + label + "'"); }
        image.push_back(it->second);
    }
    for (const auto &[from, to] : mc.map) {
        if (!source.find(from)) { raise(ErrorKind::LabelMismatch, "morphism maps unknown source atom '" + from + "'"); }
    }
    const MeasureMorphism m(source, target, image);
    const auto rep = check_morphism(m, f1, f2);
    r.flag("pushforward", rep.pushforward_ok);
    r.flag("sigma_algebra", rep.sigma_ok);
    r.flag("diagram", rep.diagram_ok);
    r.metrics["source_factorization_residual"] = verify_factorization(f2).residual;
    r.matrices["kernel"] = f1.kernel->gram();
    return r;
}

inline Report acceptance_report(std::uint64_t seed) {
    Report r;
    r.seed = seed;
    for (const auto &res : acceptance::run_all(seed)) {
        const std::string key = "criterion_" + std::to_string(res.id);
        r.checks.push_back({key, res.pass, res.value, res.threshold});
        r.notes[key] = res.name + ": " + res.detail;
        log(LogLevel::info, key + " " + (res.pass ? "pass" : "FAIL") + " in " + std::to_string(res.seconds) + " s");
    }
    return r;
}

/// Criteria 1-10, plus 11: a second run with the same seed serializes
/// identically once timing is removed.
inline Report verify_all(const JobConfig &c) {
    Report first = acceptance_report(c.seed);
    const Report second = acceptance_report(c.seed);
    const bool same = emit_json(first, false) == emit_json(second, false);
    first.flag("criterion_11", same);
    first.notes["criterion_11"] = "determinism: repeated run with the same seed serializes identically";
    return first;
}

}  // namespace pipeline

/// Dispatches to the pipeline named by the config. Errors propagate.
inline Report run(const JobConfig &c) {
    if (!c.command) { raise(ErrorKind::ConfigError, "no command given"); }
    const auto start = std::chrono::steady_clock::now();
    log(LogLevel::debug, "running " + std::string(to_string(*c.command)));
    Report r;
    switch (*c.command) {
    case Command::validate: r = pipeline::validate(c); break;
    case Command::factorize: r = pipeline::factorize(c); break;
    case Command::gaussian_sample: r = pipeline::gaussian_sample(c); break;
    case Command::clark: r = pipeline::clark(c); break;
    case Command::renorm: r = pipeline::renorm(c); break;
    case Command::morphism_check: r = pipeline::morphism_check(c); break;
    case Command::verify_all: r = pipeline::verify_all(c); break;
    }
    r.command = std::string(to_string(*c.command));
    r.seed = c.seed;
    if (r.chunk_size == 0) { r.chunk_size = c.chunk_size; }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace kb
