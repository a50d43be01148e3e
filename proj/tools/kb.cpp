#include <kb/run.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

int run_job(const std::string &command, const std::string &config_path, std::optional<std::uint64_t> seed, std::optional<std::string> out,
            std::optional<std::string> format) {
    kb::JobConfig job = kb::load_job(config_path);
    const auto cmd = kb::parse_command(command);
    if (!cmd) { kb::raise(kb::ErrorKind::ConfigError, "unknown command '" + command + "'"); }
    if (job.command && *job.command != *cmd) {
        kb::raise(kb::ErrorKind::ConfigError, "config names command '" + std::string(kb::to_string(*job.command)) + "' but '" + command + "' was requested");
    }
    job.command = cmd;
    if (seed) { job.seed = *seed; }
    if (out) { job.output_path = *out; }
    if (format) { job.format = *format == "csv" ? kb::OutputFormat::csv : kb::OutputFormat::json; }

    const kb::Report report = kb::run(job);
    const std::string text = job.format == kb::OutputFormat::csv ? kb::emit_csv(report) : kb::emit_json(report);
    if (job.output_path) {
        std::ofstream file(*job.output_path, std::ios::binary);
        if (!file || !(file << text)) { kb::raise(kb::ErrorKind::IoError, "cannot write '" + *job.output_path + "'"); }
    } else {
        std::cout << text;
    }
    for (const auto &c : report.checks) {
        kb::log(c.pass ? kb::LogLevel::info : kb::LogLevel::error, c.name + (c.pass ? " pass" : " FAIL") + " (" + kb::report_detail::shortest(c.value) + " vs " +
                                                                         kb::report_detail::shortest(c.threshold) + ")");
    }
    return kb::exit_code(report);
}

}  // namespace

int main(int argc, char **argv) {
    kb::log_level() = kb::parse_log_level(std::getenv("KB_LOG"));

    CLI::App app{"Positive definite kernel factorization and verification"};
    app.name("kb");
    std::string command;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    app.add_option("command", command, "validate | factorize | gaussian-sample | clark | renorm | morphism-check | verify-all")->required();
    app.add_option("--config", config, "job config (JSON)")->required();
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--out", out, "write the report here instead of stdout");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kb::kExitError;
    }

    try {
        return run_job(command, config, seed, out, format);
    } catch (const kb::Error &e) {
        kb::log(kb::LogLevel::error, std::string(kb::to_string(e.kind())) + ": " + e.what());
        return kb::kExitError;
    } catch (const std::exception &e) {
        kb::log(kb::LogLevel::error, e.what());
        return kb::kExitError;
    }
}
