// Scenario runner: validate scenario files, execute seeded simulation runs
// or parallel seed sweeps, and emit metrics files.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "meshloc/meshloc.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << data;
    return out.good();
}

void print_issues(const meshloc::ValidationResult& res) {
    for (const auto& e : res.errors) std::cerr << "error: " << e << "\n";
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
}

std::optional<meshloc::Scenario> load_scenario(const std::string& path, bool quiet_warnings) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read scenario file '" << path << "'\n";
        return std::nullopt;
    }
    auto res = meshloc::validate_scenario(*text);
    if (!res.ok()) {
        print_issues(res);
        return std::nullopt;
    }
    if (!quiet_warnings)
        for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    return res.scenario;
}

struct RunOutputs {
    std::string metrics;
    std::string metrics_ext;
    std::string summary;
};

RunOutputs render(const meshloc::MetricsReport& report, const std::string& format) {
    RunOutputs out;
    if (format == "json") {
        out.metrics = report.series_to_json().dump(2) + "\n";
        out.metrics_ext = ".json";
    } else {
        out.metrics = report.to_csv();
        out.metrics_ext = ".csv";
    }
    out.summary = report.summary_to_json().dump(2) + "\n";
    return out;
}

int run_command(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                std::optional<double> duration, const std::string& out_dir,
                const std::string& format, int parallel) {
    auto sc = load_scenario(scenario_path, false);
    if (!sc) return 1;
    if (seed) sc->seed = *seed;
    if (duration) sc->duration = *duration;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory '" << out_dir << "'\n";
        return 2;
    }

    try {
        if (parallel <= 1) {
            auto report = meshloc::run(*sc);
            auto files = render(report, format);
            std::filesystem::path dir(out_dir);
            if (!write_file(dir / ("metrics" + files.metrics_ext), files.metrics) ||
                !write_file(dir / "summary.json", files.summary)) {
                std::cerr << "error: cannot write output files\n";
                return 2;
            }
            std::cout << "rmse_last_quarter_m="
                      << report.summary_to_json()["rmse_last_quarter_m"].dump() << "\n";
            return 0;
        }

        // Seed sweep: K independent runs, one thread each, per-seed suffixed
        // output files.
        std::vector<std::thread> threads;
        std::mutex io_mutex;
        bool failed = false;
        for (int k = 0; k < parallel; ++k) {
            threads.emplace_back([&, k] {
                try {
                    meshloc::Scenario local = *sc;
                    local.seed = sc->seed + static_cast<std::uint64_t>(k);
                    auto report = meshloc::run(local);
                    auto files = render(report, format);
                    std::filesystem::path dir(out_dir);
                    std::string tag = ".seed" + std::to_string(local.seed);
                    std::lock_guard<std::mutex> lock(io_mutex);
                    if (!write_file(dir / ("metrics" + tag + files.metrics_ext), files.metrics) ||
                        !write_file(dir / ("summary" + tag + ".json"), files.summary))
                        failed = true;
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(io_mutex);
                    std::cerr << "error: seed " << (sc->seed + k) << ": " << e.what() << "\n";
                    failed = true;
                }
            });
        }
        for (auto& t : threads) t.join();
        if (failed) {
            std::cerr << "error: cannot write output files\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    meshloc::log::level() = meshloc::log::parse_level(std::getenv("MESHLOC_LOG"));

    CLI::App app{"meshloc: deterministic swarm mesh/UWB localization simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Execute a scenario and write metrics files");
    std::string scenario_path;
    std::string out_dir = ".";
    std::string format = "csv";
    std::uint64_t seed_value = 0;
    double duration_value = 0.0;
    int parallel = 1;
    run_cmd->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_value, "Override the scenario seed");
    auto* dur_opt =
        run_cmd->add_option("--duration", duration_value, "Override the scenario duration (s)");
    run_cmd->add_option("--out", out_dir, "Output directory (default: current)");
    run_cmd->add_option("--format", format, "Time-series format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--parallel", parallel, "Run K consecutive seeds concurrently")
        ->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file and report issues");
    std::string validate_path;
    validate_cmd->add_option("--scenario", validate_path, "Scenario file (JSON)")->required();

    auto* example_cmd =
        app.add_subcommand("example", "Write a documented sample scenario to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (run_cmd->parsed()) {
        std::optional<std::uint64_t> seed;
        std::optional<double> duration;
        if (seed_opt->count() > 0) seed = seed_value;
        if (dur_opt->count() > 0) duration = duration_value;
        return run_command(scenario_path, seed, duration, out_dir, format, parallel);
    }
    if (validate_cmd->parsed()) {
        auto text = read_file(validate_path);
        if (!text) {
            std::cerr << "error: cannot read scenario file '" << validate_path << "'\n";
            return 1;
        }
        auto res = meshloc::validate_scenario(*text);
        print_issues(res);
        if (res.ok()) {
            std::cout << "ok: " << res.scenario->nodes.size() << " nodes, "
                      << res.scenario->topics.size() << " topics, duration "
                      << res.scenario->duration << " s\n";
            return 0;
        }
        return 1;
    }
    if (example_cmd->parsed()) {
        std::cout << meshloc::example_scenario_text();
        return 0;
    }
    return 2;
}
