#pragma once

#include "clark.hpp"
#include "kernel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>

namespace kb {

enum class Command { validate, factorize, gaussian_sample, clark, renorm, morphism_check, verify_all };

inline constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::validate, "validate"},   {Command::factorize, "factorize"},           {Command::gaussian_sample, "gaussian-sample"},
    {Command::clark, "clark"},         {Command::renorm, "renorm"},                 {Command::morphism_check, "morphism-check"},
    {Command::verify_all, "verify-all"},
};

inline std::string_view to_string(Command c) {
    for (const auto &[cmd, name] : kCommandNames) {
        if (cmd == c) { return name; }
    }
    return "?";
}

inline std::optional<Command> parse_command(std::string_view name) {
    for (const auto &[cmd, n] : kCommandNames) {
        if (n == name) { return cmd; }
    }
    return std::nullopt;
}

enum class OutputFormat { json, csv };

struct Tolerances {
    double psd_tol = kDefaultPsdTol;
    double fact_tol = kDefaultFactTol;
    /// Negative selects default_rank_tol(n).
    double rank_tol = -1.0;
};

struct RandomPoints {
    std::size_t count = 0;
    double radius = 0.9;
    std::size_t dimension = 1;
};

/// Atoms + weights as written in the config. Circle and torus measures use
/// numeric coordinates; generic measures use labels.
struct MeasureConfig {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> coords;
    std::vector<double> weights;
    bool normalized = true;
};

struct FactorizationConfig {
    MeasureConfig measure;
    Matrix features;
};

struct MorphismConfig {
    FactorizationConfig source;
    FactorizationConfig target;
    /// source label -> target label
    std::map<std::string, std::string> map;
};

struct KernelConfig {
    std::string type = "szego";
    std::size_t dimension = 1;
    std::optional<MeasureConfig> measure;
    BForm b_form = BForm::reciprocal;
    std::optional<Matrix> matrix;
};

struct JobConfig {
    std::optional<Command> command;
    std::optional<KernelConfig> kernel;
    std::optional<PointSet> points;
    std::optional<RandomPoints> random_points;
    std::optional<MeasureConfig> measure;
    std::optional<Matrix> features;
    std::optional<MorphismConfig> morphism;
    Tolerances tolerances;
    std::uint64_t seed = 0;
    std::optional<std::size_t> sample_count;
    std::size_t chunk_size = 1 << 16;
    bool real_part = false;
    std::vector<std::size_t> subset;
    double radius = 1.0 - 1e-6;
    std::size_t grid = 1000;
    std::optional<std::size_t> max_degree;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::json;
};

namespace config_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string &where, const std::string &what) { raise(ErrorKind::ConfigError, where + ": " + what); }

inline void expect_object(const json &j, const std::string &where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) { fail(where, "expected an object"); }
    for (const auto &[key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) { fail(where, "unknown field '" + key + "'"); }
    }
}

inline double number(const json &j, const std::string &where) {
    if (!j.is_number()) { fail(where, "expected a number"); }
    return j.get<double>();
}

inline double nonneg(const json &j, const std::string &where) {
    const double v = number(j, where);
    if (!(v >= 0.0)) { fail(where, "must be nonnegative"); }
    return v;
}

inline std::size_t count(const json &j, const std::string &where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) { fail(where, "expected a nonnegative integer"); }
    return j.get<std::size_t>();
}

inline std::string text(const json &j, const std::string &where) {
    if (!j.is_string()) { fail(where, "expected a string"); }
    return j.get<std::string>();
}

/// {"re": x, "im": y}, or a bare real number.
inline Complex complex(const json &j, const std::string &where) {
    if (j.is_number()) { return {j.get<double>(), 0.0}; }
    expect_object(j, where, {"re", "im"});
    if (!j.contains("re") || !j.contains("im")) { fail(where, "complex numbers need both 're' and 'im'"); }
    return {number(j["re"], where + ".re"), number(j["im"], where + ".im")};
}

inline Matrix matrix(const json &j, const std::string &where) {
    if (!j.is_array()) { fail(where, "expected an array of rows"); }
    const auto rows = static_cast<Index>(j.size());
    const Index cols = rows ? static_cast<Index>(j[0].is_array() ? j[0].size() : 0) : 0;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) { fail(where, "rows must be arrays of equal length"); }
        for (Index c = 0; c < cols; ++c) { m(i, c) = complex(row[static_cast<std::size_t>(c)], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]"); }
    }
    return m;
}

inline MeasureConfig measure(const json &j, const std::string &where) {
    expect_object(j, where, {"atoms", "labels", "weights", "normalized"});
    MeasureConfig m;
    if (!j.contains("weights") || !j["weights"].is_array()) { fail(where, "'weights' array is required"); }
    for (std::size_t k = 0; k < j["weights"].size(); ++k) { m.weights.push_back(number(j["weights"][k], where + ".weights")); }
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) { fail(where + ".atoms", "expected an array"); }
        for (const auto &a : j["atoms"]) {
            if (a.is_number()) {
                m.coords.push_back({a.get<double>()});
            } else if (a.is_array()) {
                std::vector<double> c;
                for (const auto &x : a) { c.push_back(number(x, where + ".atoms")); }
                m.coords.push_back(std::move(c));
            } else {
                fail(where + ".atoms", "atoms are numbers or coordinate arrays");
            }
        }
        if (m.coords.size() != m.weights.size()) { fail(where, "atoms and weights differ in length"); }
    }
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) { fail(where + ".labels", "expected an array"); }
        for (const auto &l : j["labels"]) { m.labels.push_back(text(l, where + ".labels")); }
        if (m.labels.size() != m.weights.size()) { fail(where, "labels and weights differ in length"); }
    }
    if (m.labels.empty()) {
        for (std::size_t k = 0; k < m.weights.size(); ++k) { m.labels.push_back(std::to_string(k)); }
    }
    if (j.contains("normalized")) {
        if (!j["normalized"].is_boolean()) { fail(where + ".normalized", "expected a boolean"); }
        m.normalized = j["normalized"].get<bool>();
    }
    return m;
}

inline FactorizationConfig factorization(const json &j, const std::string &where) {
    expect_object(j, where, {"measure", "features"});
    if (!j.contains("measure") || !j.contains("features")) { fail(where, "'measure' and 'features' are required"); }
    return {measure(j["measure"], where + ".measure"), matrix(j["features"], where + ".features")};
}

inline KernelConfig kernel(const json &j, const std::string &where) {
    expect_object(j, where, {"type", "dimension", "measure", "b_form", "matrix"});
    KernelConfig k;
    if (!j.contains("type")) { fail(where, "'type' is required"); }
    k.type = text(j["type"], where + ".type");
    if (k.type == "szego") {
        k.dimension = 1;
    } else if (k.type == "polydisk-szego") {
        if (!j.contains("dimension")) { fail(where, "polydisk-szego needs 'dimension'"); }
        k.dimension = count(j["dimension"], where + ".dimension");
        if (k.dimension == 0) { fail(where + ".dimension", "must be at least 1"); }
    } else if (k.type == "debranges-rovnyak") {
        if (!j.contains("measure")) { fail(where, "debranges-rovnyak needs 'measure'"); }
        k.measure = measure(j["measure"], where + ".measure");
    } else if (k.type == "table") {
        if (!j.contains("matrix")) { fail(where, "table kernel needs 'matrix'"); }
        k.matrix = matrix(j["matrix"], where + ".matrix");
    } else {
        fail(where + ".type", "unknown kernel type '" + k.type + "'");
    }
    if (j.contains("b_form")) {
        const auto form = text(j["b_form"], where + ".b_form");
        if (form == "reciprocal") {
            k.b_form = BForm::reciprocal;
        } else if (form == "printed") {
            k.b_form = BForm::printed;
        } else {
            fail(where + ".b_form", "expected 'reciprocal' or 'printed'");
        }
    }
    return k;
}

inline PointSet points(const json &j, const std::string &where) {
    if (!j.is_array()) { fail(where, "expected an array of points"); }
    std::vector<std::string> labels;
    std::vector<std::vector<Complex>> coords;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto &p = j[i];
        const std::string at = where + "[" + std::to_string(i) + "]";
        expect_object(p, at, {"label", "coords"});
        labels.push_back(p.contains("label") ? text(p["label"], at + ".label") : std::to_string(i));
        if (!p.contains("coords") || !p["coords"].is_array()) { fail(at, "'coords' array is required"); }
        std::vector<Complex> c;
        for (const auto &x : p["coords"]) { c.push_back(complex(x, at + ".coords")); }
        coords.push_back(std::move(c));
    }
    try {
        return {std::move(labels), std::move(coords)};
    } catch (const Error &e) {
        fail(where, e.what());
    }
}

}  // namespace config_detail

/// Strict parse: unknown fields anywhere are rejected with ConfigError.
inline JobConfig parse_job(const nlohmann::json &j) {
    using namespace config_detail;
    expect_object(j, "config",
                  {"command", "kernel", "points", "random_points", "measure", "features", "morphism", "tolerances", "seed", "sample_count", "chunk_size",
                   "real_part", "subset", "radius", "grid", "max_degree", "output"});
    JobConfig c;
    if (j.contains("command")) {
        const auto name = text(j["command"], "command");
        c.command = parse_command(name);
        if (!c.command) { fail("command", "unknown command '" + name + "'"); }
    }
    if (j.contains("kernel")) { c.kernel = kernel(j["kernel"], "kernel"); }
    if (j.contains("points")) { c.points = points(j["points"], "points"); }
    if (j.contains("random_points")) {
        const auto &r = j["random_points"];
        expect_object(r, "random_points", {"count", "radius", "dimension"});
        RandomPoints rp;
        if (!r.contains("count")) { fail("random_points", "'count' is required"); }
        rp.count = count(r["count"], "random_points.count");
        if (r.contains("radius")) { rp.radius = number(r["radius"], "random_points.radius"); }
        if (!(rp.radius > 0.0 && rp.radius < 1.0)) { fail("random_points.radius", "must lie in (0,1)"); }
        if (r.contains("dimension")) { rp.dimension = count(r["dimension"], "random_points.dimension"); }
        if (rp.dimension == 0) { fail("random_points.dimension", "must be at least 1"); }
        c.random_points = rp;
    }
    if (c.points && c.random_points) { fail("config", "give either 'points' or 'random_points', not both"); }
    if (j.contains("measure")) { c.measure = measure(j["measure"], "measure"); }
    if (j.contains("features")) { c.features = matrix(j["features"], "features"); }
    if (j.contains("morphism")) {
        const auto &m = j["morphism"];
        expect_object(m, "morphism", {"source", "target", "map"});
        if (!m.contains("source") || !m.contains("target") || !m.contains("map")) { fail("morphism", "'source', 'target' and 'map' are required"); }
        MorphismConfig mc{factorization(m["source"], "morphism.source"), factorization(m["target"], "morphism.target"), {}};
        if (!m["map"].is_object()) { fail("morphism.map", "expected an object of source label -> target label"); }
        for (const auto &[from, to] : m["map"].items()) { mc.map[from] = text(to, "morphism.map." + from); }
        c.morphism = std::move(mc);
    }
    if (j.contains("tolerances")) {
        const auto &t = j["tolerances"];
        expect_object(t, "tolerances", {"psd_tol", "fact_tol", "rank_tol"});
        if (t.contains("psd_tol")) { c.tolerances.psd_tol = nonneg(t["psd_tol"], "tolerances.psd_tol"); }
        if (t.contains("fact_tol")) { c.tolerances.fact_tol = nonneg(t["fact_tol"], "tolerances.fact_tol"); }
        if (t.contains("rank_tol")) { c.tolerances.rank_tol = nonneg(t["rank_tol"], "tolerances.rank_tol"); }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) { fail("seed", "expected an unsigned integer"); }
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("sample_count")) {
        c.sample_count = count(j["sample_count"], "sample_count");
        if (*c.sample_count < 1) { fail("sample_count", "must be at least 1"); }
    }
    if (j.contains("chunk_size")) {
        c.chunk_size = count(j["chunk_size"], "chunk_size");
        if (c.chunk_size < 1) { fail("chunk_size", "must be at least 1"); }
    }
    if (j.contains("real_part")) {
        if (!j["real_part"].is_boolean()) { fail("real_part", "expected a boolean"); }
        c.real_part = j["real_part"].get<bool>();
    }
    if (j.contains("subset")) {
        if (!j["subset"].is_array()) { fail("subset", "expected an array of indices"); }
        for (const auto &i : j["subset"]) { c.subset.push_back(count(i, "subset")); }
    }
    if (j.contains("radius")) {
        c.radius = number(j["radius"], "radius");
        if (!(c.radius > 0.0 && c.radius < 1.0)) { fail("radius", "must lie in (0,1)"); }
    }
    if (j.contains("grid")) { c.grid = count(j["grid"], "grid"); }
    if (j.contains("max_degree")) { c.max_degree = count(j["max_degree"], "max_degree"); }
    if (j.contains("output")) {
        const auto &o = j["output"];
        expect_object(o, "output", {"path", "format"});
        if (o.contains("path")) { c.output_path = text(o["path"], "output.path"); }
        if (o.contains("format")) {
            const auto f = text(o["format"], "output.format");
            if (f == "json") {
                c.format = OutputFormat::json;
            } else if (f == "csv") {
                c.format = OutputFormat::csv;
            } else {
                fail("output.format", "expected 'json' or 'csv'");
            }
        }
    }
    return c;
}

inline JobConfig parse_job_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        raise(ErrorKind::ConfigError, std::string("malformed JSON: ") + e.what());
    }
    return parse_job(j);
}

inline JobConfig load_job(const std::string &path) {
    std::ifstream in(path);
    if (!in) { raise(ErrorKind::ConfigError, "cannot read config '" + path + "'"); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_job_text(ss.str());
}

}  // namespace kb
