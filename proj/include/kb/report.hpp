#pragma once

#include "linalg.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace kb {

inline constexpr std::string_view kToolName = "kb";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Passes iff value <= threshold.
struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;

    bool operator==(const Check &) const = default;
};

struct Report {
    std::string command;
    std::string tool_version{kToolVersion};
    std::uint64_t seed = 0;
    std::size_t chunk_size = 0;
    std::vector<Check> checks;
    std::map<std::string, double> metrics;
    std::map<std::string, std::string> notes;
    std::map<std::string, Matrix> matrices;
    double elapsed_ms = 0.0;

    void check(std::string name, double value, double threshold) { checks.push_back({std::move(name), value <= threshold, value, threshold}); }
    void flag(std::string name, bool ok) { checks.push_back({std::move(name), ok, ok ? 0.0 : 1.0, 0.5}); }

    [[nodiscard]] bool passed() const {
        for (const auto &c : checks) {
            if (!c.pass) { return false; }
        }
        return true;
    }

    bool operator==(const Report &other) const {
        return command == other.command && tool_version == other.tool_version && seed == other.seed && chunk_size == other.chunk_size &&
               checks == other.checks && metrics == other.metrics && notes == other.notes && matrices == other.matrices && elapsed_ms == other.elapsed_ms;
    }
};

namespace report_detail {

using nlohmann::json;

/// Non-finite values have no JSON form; they are written as null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline double number(const json &j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

inline json complex(Complex c) { return {{"re", number(c.real())}, {"im", number(c.imag())}}; }

inline json matrix(const Matrix &m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) { row.push_back(complex(m(i, j))); }
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

inline Matrix matrix(const json &j) {
    Matrix m(j.at("rows").get<Index>(), j.at("cols").get<Index>());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index c = 0; c < m.cols(); ++c) {
            const auto &e = j.at("data").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c));
            m(i, c) = {number(e.at("re")), number(e.at("im"))};
        }
    }
    return m;
}

inline std::string shortest(double x) {
    if (!std::isfinite(x)) { return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"); }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

}  // namespace report_detail

inline nlohmann::json to_json(const Report &r, bool include_timing = true) {
    using namespace report_detail;
    json checks = json::array();
    for (const auto &c : r.checks) { checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", number(c.value)}, {"threshold", number(c.threshold)}}); }
    json metrics = json::object();
    for (const auto &[k, v] : r.metrics) { metrics[k] = number(v); }
    json matrices = json::object();
    for (const auto &[k, m] : r.matrices) { matrices[k] = matrix(m); }
    json j = {
        {"command", r.command},
        {"tool", {{"name", kToolName}, {"version", r.tool_version}}},
        {"seed_record", {{"seed", r.seed}, {"chunk_size", r.chunk_size}}},
        {"checks", std::move(checks)},
        {"metrics", std::move(metrics)},
        {"notes", r.notes},
        {"matrices", std::move(matrices)},
        {"passed", r.passed()},
    };
    if (include_timing) { j["timing"] = {{"elapsed_ms", number(r.elapsed_ms)}}; }
    return j;
}

inline Report report_from_json(const nlohmann::json &j) {
    using namespace report_detail;
    Report r;
    r.command = j.at("command").get<std::string>();
    r.tool_version = j.at("tool").at("version").get<std::string>();
    r.seed = j.at("seed_record").at("seed").get<std::uint64_t>();
    r.chunk_size = j.at("seed_record").at("chunk_size").get<std::size_t>();
    for (const auto &c : j.at("checks")) {
        r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), number(c.at("value")), number(c.at("threshold"))});
    }
    for (const auto &[k, v] : j.at("metrics").items()) { r.metrics[k] = number(v); }
    for (const auto &[k, v] : j.at("notes").items()) { r.notes[k] = v.get<std::string>(); }
    for (const auto &[k, v] : j.at("matrices").items()) { r.matrices[k] = matrix(v); }
    if (j.contains("timing")) { r.elapsed_ms = number(j["timing"].at("elapsed_ms")); }
    return r;
}

/// Keys sorted, floats in shortest round-trip form.
inline std::string emit_json(const Report &r, bool include_timing = true) { return to_json(r, include_timing).dump(2) + "\n"; }

/// One block per matrix: "# name rows x cols", header "i,j,re,im", rows in
/// row-major order.
inline std::string emit_csv(const Report &r) {
    using report_detail::shortest;
    std::string out = "# command " + r.command + (r.passed() ? " passed\n" : " failed\n");
    for (const auto &[name, m] : r.matrices) {
        out += "# " + name + " " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + "\n";
        out += "i,j,re,im\n";
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                out += std::to_string(i) + "," + std::to_string(j) + "," + shortest(m(i, j).real()) + "," + shortest(m(i, j).imag()) + "\n";
            }
        }
    }
    return out;
}

}  // namespace kb
