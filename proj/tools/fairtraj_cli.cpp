// Command-line front end: loads a scenario, runs a weighted / max-min /
// sweep solve and writes plot-ready CSV + JSON result files.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairtraj/errors.hpp"
#include "fairtraj/optimizer.hpp"
#include "fairtraj/report_io.hpp"
#include "fairtraj/scenario.hpp"

namespace {

struct RunManifest {
    std::string scenario_path;
    std::string mode = "weighted";
    std::optional<double> alpha;
    std::vector<double> alphas;
    bool include_maxmin = false;
    double eps = 1e-4;
    int max_iters = 50;
    std::string out_dir;
    bool quiet = false;
    std::optional<unsigned> seed;  // reserved for sampling utilities
};

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

double parse_alpha(const std::string& text) {
    if (text == "inf" || text == "INF" || text == "infinity") return fairtraj::kAlphaMaxMin;
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("bad alpha '" + text + "'");
    if (v < 0.0) throw std::invalid_argument("alpha must be >= 0");
    return v;
}

std::string alpha_dir_name(double alpha) {
    if (fairtraj::is_maxmin(alpha)) return "maxmin";
    return "alpha_" + fairtraj::format_double(alpha);
}

int run(const RunManifest& manifest) {
    fairtraj::Scenario scenario;
    try {
        scenario = fairtraj::load_scenario(manifest.scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (manifest.mode == "sweep") {
            const auto entries = fairtraj::alpha_sweep(scenario, manifest.alphas, manifest.eps,
                                                       manifest.max_iters,
                                                       manifest.include_maxmin);
            for (const auto& entry : entries) {
                if (entry.report) {
                    fairtraj::emit_report(*entry.report,
                                          (std::filesystem::path(manifest.out_dir) /
                                           alpha_dir_name(entry.alpha))
                                              .string());
                } else if (!manifest.quiet) {
                    std::cerr << "warning: run alpha=" << alpha_dir_name(entry.alpha)
                              << " failed: " << *entry.error << "\n";
                }
            }
            fairtraj::emit_sweep(entries, manifest.out_dir);
            bool any_failed = false;
            for (const auto& entry : entries) any_failed |= entry.error.has_value();
            if (!manifest.quiet) {
                std::cout << "sweep complete: " << entries.size() << " runs, results in "
                          << manifest.out_dir << "\n";
            }
            return any_failed ? kExitSolver : 0;
        }

        fairtraj::SolveReport report;
        if (manifest.mode == "maxmin" || fairtraj::is_maxmin(*manifest.alpha)) {
            report = fairtraj::run_maxmin(scenario, manifest.eps, manifest.max_iters);
        } else {
            report = fairtraj::run_algorithm1(scenario, *manifest.alpha, manifest.eps,
                                              manifest.max_iters);
        }
        fairtraj::emit_report(report, manifest.out_dir);
        if (!manifest.quiet) {
            std::cout << "system throughput: "
                      << fairtraj::format_double(report.system_throughput) << " bps/Hz in "
                      << report.iterations << " rounds ("
                      << (report.termination == fairtraj::Termination::Tolerance ? "tolerance"
                                                                                 : "iter limit")
                      << ")\n";
            if (!report.condition1_held) {
                std::cout << "warning: alpha*R exceeds 1 at the solution; the concavity "
                             "certificate does not apply\n";
            }
        }
        return 0;
    } catch (const fairtraj::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunManifest manifest;
    std::string alpha_text;
    std::string alphas_text;

    CLI::App app{"Joint bandwidth/power allocation and UAV trajectory optimization with a "
                 "tunable throughput-fairness trade-off"};
    app.add_option("--scenario", manifest.scenario_path, "Scenario file path")->required();
    app.add_option("--mode", manifest.mode, "weighted | maxmin | sweep")
        ->check(CLI::IsMember({"weighted", "maxmin", "sweep"}))
        ->capture_default_str();
    app.add_option("--alpha", alpha_text, "Fairness factor (weighted mode; 'inf' for max-min)");
    app.add_option("--alphas", alphas_text, "Comma-separated alpha list (sweep mode)");
    app.add_flag("--include-maxmin", manifest.include_maxmin,
                 "Append a max-min run to the sweep");
    app.add_option("--eps", manifest.eps, "Convergence tolerance on the objective")
        ->capture_default_str();
    app.add_option("--max-iters", manifest.max_iters, "Maximum alternation rounds")
        ->capture_default_str();
    app.add_option("--out", manifest.out_dir, "Output directory (default ./out)");
    app.add_flag("--quiet", manifest.quiet, "Suppress progress output");
    unsigned seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed for sampling utilities");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) manifest.seed = seed_value;

    if (manifest.out_dir.empty()) {
        const char* env = std::getenv("FAIRTRAJ_OUT");
        manifest.out_dir = env && *env ? env : "./out";
    }

    try {
        if (!alpha_text.empty()) manifest.alpha = parse_alpha(alpha_text);
        if (!alphas_text.empty()) {
            std::istringstream stream(alphas_text);
            std::string item;
            while (std::getline(stream, item, ',')) {
                manifest.alphas.push_back(parse_alpha(item));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (manifest.mode == "weighted" && !manifest.alpha) {
        std::cerr << "error: --mode weighted requires --alpha\n";
        return kExitConfig;
    }
    if (manifest.mode == "sweep") {
        if (manifest.alphas.empty()) {
            std::cerr << "error: --mode sweep requires --alphas\n";
            return kExitConfig;
        }
        for (double a : manifest.alphas) {
            if (fairtraj::is_maxmin(a)) {
                std::cerr << "error: --alphas must be finite; use --include-maxmin\n";
                return kExitConfig;
            }
        }
    }
    return run(manifest);
}
