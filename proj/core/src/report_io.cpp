#include "fairtraj/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fairtraj/errors.hpp"

namespace fairtraj {

namespace {

namespace fs = std::filesystem;

// All emitted floats carry 12 significant digits.
double round12(double value) { return std::strtod(format_double(value).c_str(), nullptr); }

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string summary_json(const SolveReport& report) {
    nlohmann::ordered_json j;
    if (is_maxmin(report.alpha)) {
        j["alpha"] = "inf";
    } else {
        j["alpha"] = round12(report.alpha);
    }
    j["system_throughput"] = round12(report.system_throughput);
    auto per_user = nlohmann::ordered_json::array();
    for (int k = 0; k < report.per_user_throughput.size(); ++k) {
        per_user.push_back(round12(report.per_user_throughput[k]));
    }
    j["per_user_throughput"] = per_user;
    j["variance"] = round12(report.metrics.variance);
    j["jain"] = round12(report.metrics.jain_index);
    j["iterations"] = report.iterations;
    j["termination"] = report.termination == Termination::Tolerance ? "Tolerance" : "IterLimit";
    j["condition1_held"] = report.condition1_held;
    auto trace = nlohmann::ordered_json::array();
    for (double v : report.objective_trace) trace.push_back(round12(v));
    j["objective_trace"] = trace;
    return j.dump(2) + "\n";
}

void emit_report(const SolveReport& report, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    const fs::path base(dir);

    {
        const fs::path path = base / "trajectory.csv";
        auto out = open_out(path);
        out << "n,x_m,y_m\n";
        for (int n = 0; n < report.trajectory.num_slots(); ++n) {
            out << (n + 1) << ',' << format_double(report.trajectory.q[n].x()) << ','
                << format_double(report.trajectory.q[n].y()) << '\n';
        }
        close_checked(out, path);
    }
    {
        const fs::path path = base / "allocation.csv";
        auto out = open_out(path);
        out << "n,k,b,p\n";
        for (int n = 0; n < report.allocation.b.cols(); ++n) {
            for (int k = 0; k < report.allocation.b.rows(); ++k) {
                out << (n + 1) << ',' << (k + 1) << ','
                    << format_double(report.allocation.b(k, n)) << ','
                    << format_double(report.allocation.p(k, n)) << '\n';
            }
        }
        close_checked(out, path);
    }
    {
        const fs::path path = base / "rates.csv";
        auto out = open_out(path);
        out << "n,k,rate_bps_hz\n";
        for (int n = 0; n < report.rates.cols(); ++n) {
            for (int k = 0; k < report.rates.rows(); ++k) {
                const double r = report.rates(k, n);
                out << (n + 1) << ',' << (k + 1) << ','
                    << format_double(r < kRateReportFloor ? 0.0 : r) << '\n';
            }
        }
        close_checked(out, path);
    }
    {
        const fs::path path = base / "summary.json";
        auto out = open_out(path);
        out << summary_json(report);
        close_checked(out, path);
    }
}

void emit_sweep(const std::vector<SweepEntry>& entries, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    const fs::path path = fs::path(dir) / "sweep.csv";
    auto out = open_out(path);
    out << "alpha,system_throughput,variance,jain_index,iterations,status\n";
    for (const auto& entry : entries) {
        out << (is_maxmin(entry.alpha) ? std::string("inf") : format_double(entry.alpha)) << ',';
        if (entry.report) {
            out << format_double(entry.report->system_throughput) << ','
                << format_double(entry.report->metrics.variance) << ','
                << format_double(entry.report->metrics.jain_index) << ','
                << entry.report->iterations << ",ok\n";
        } else {
            out << ",,,,error\n";
        }
    }
    close_checked(out, path);
}

}  // namespace fairtraj
