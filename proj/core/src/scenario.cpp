#include "fairtraj/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fairtraj/errors.hpp"

namespace fairtraj {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_per_hz_to_w_per_hz(double dbm_per_hz) {
    return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0);
}

double w_per_hz_to_dbm_per_hz(double w_per_hz) {
    return 10.0 * std::log10(w_per_hz) + 30.0;
}

double compute_gamma0(double power_w, double ref_gain_linear, double bandwidth_hz,
                      double noise_psd_w_hz) {
    if (power_w <= 0.0 || ref_gain_linear <= 0.0 || bandwidth_hz <= 0.0 ||
        noise_psd_w_hz <= 0.0) {
        throw NonPositiveConstant("compute_gamma0: all inputs must be strictly positive");
    }
    return power_w * ref_gain_linear / (bandwidth_hz * noise_psd_w_hz);
}

double Scenario::gamma0() const {
    return compute_gamma0(power_total, ref_gain, bandwidth_total, noise_psd);
}

void Scenario::validate() const {
    if (users.empty()) throw MalformedConfig("scenario: at least one user required");
    if (slots < 2) throw MalformedConfig("scenario: slots must be >= 2");
    const struct {
        const char* name;
        double value;
    } positives[] = {
        {"altitude", altitude},       {"v_max", v_max},
        {"horizon", horizon},         {"bandwidth_total", bandwidth_total},
        {"power_total", power_total}, {"noise_psd", noise_psd},
        {"ref_gain", ref_gain},
    };
    for (const auto& entry : positives) {
        if (!(entry.value > 0.0)) {
            throw NonPositiveConstant(std::string("scenario: ") + entry.name +
                                      " must be strictly positive");
        }
    }
    const double reach = (slots - 1) * v_max * slot_length();
    const double dist = (q_final - q_initial).norm();
    if (dist > reach) {
        std::ostringstream msg;
        msg << "scenario: endpoints " << dist << " m apart exceed reachable distance " << reach
            << " m";
        throw InfeasibleEndpoints(msg.str());
    }
}

namespace {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& text, const std::string& key) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw MalformedConfig("scenario: cannot parse number '" + text + "' for key '" + key +
                              "'");
    }
    if (trim(text.substr(pos)) != "") {
        throw MalformedConfig("scenario: trailing characters in value '" + text + "' for key '" +
                              key + "'");
    }
    return value;
}

Eigen::Vector2d parse_pair(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
        throw MalformedConfig("scenario: expected [x, y] for key '" + key + "', got '" + text +
                              "'");
    }
    const std::string inner = t.substr(1, t.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) {
        throw MalformedConfig("scenario: expected two comma-separated values for key '" + key +
                              "'");
    }
    return {parse_number(trim(inner.substr(0, comma)), key),
            parse_number(trim(inner.substr(comma + 1)), key)};
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    std::map<std::string, std::string> scalars;
    Scenario s;
    bool have_q_initial = false;
    bool have_q_final = false;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw MalformedConfig("scenario: line " + std::to_string(line_no) +
                                  " is not 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "user") {
            s.users.push_back(parse_pair(value, key));
        } else if (key == "q_initial") {
            s.q_initial = parse_pair(value, key);
            have_q_initial = true;
        } else if (key == "q_final") {
            s.q_final = parse_pair(value, key);
            have_q_final = true;
        } else {
            if (scalars.count(key)) {
                throw MalformedConfig("scenario: duplicate key '" + key + "'");
            }
            scalars[key] = value;
        }
    }

    auto take = [&](const char* key) {
        auto it = scalars.find(key);
        if (it == scalars.end()) {
            throw MalformedConfig(std::string("scenario: missing key '") + key + "'");
        }
        const double v = parse_number(it->second, key);
        scalars.erase(it);
        return v;
    };

    s.altitude = take("altitude");
    s.v_max = take("v_max");
    s.horizon = take("horizon");
    const double slots_raw = take("slots");
    s.slots = static_cast<int>(slots_raw);
    if (s.slots != slots_raw) throw MalformedConfig("scenario: slots must be an integer");
    s.bandwidth_total = take("bandwidth_total");
    s.power_total = take("power_total");
    s.noise_psd = dbm_per_hz_to_w_per_hz(take("noise_psd_dbm_hz"));
    s.ref_gain = db_to_linear(take("ref_gain_db"));
    s.rician.c1 = take("rician_c1");
    s.rician.c2 = take("rician_c2");
    s.rician.b1 = take("rician_b1");
    s.rician.b2 = take("rician_b2");

    if (!scalars.empty()) {
        throw MalformedConfig("scenario: unknown key '" + scalars.begin()->first + "'");
    }
    if (!have_q_initial || !have_q_final) {
        throw MalformedConfig("scenario: q_initial and q_final are required");
    }
    if (s.users.empty()) {
        throw MalformedConfig("scenario: at least one 'user = [x, y]' line required");
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedConfig("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string Scenario::serialize() const {
    std::ostringstream out;
    out << "altitude = " << fmt_full(altitude) << "\n";
    out << "v_max = " << fmt_full(v_max) << "\n";
    out << "horizon = " << fmt_full(horizon) << "\n";
    out << "slots = " << slots << "\n";
    out << "bandwidth_total = " << fmt_full(bandwidth_total) << "\n";
    out << "power_total = " << fmt_full(power_total) << "\n";
    out << "noise_psd_dbm_hz = " << fmt_full(w_per_hz_to_dbm_per_hz(noise_psd)) << "\n";
    out << "ref_gain_db = " << fmt_full(linear_to_db(ref_gain)) << "\n";
    out << "rician_c1 = " << fmt_full(rician.c1) << "\n";
    out << "rician_c2 = " << fmt_full(rician.c2) << "\n";
    out << "rician_b1 = " << fmt_full(rician.b1) << "\n";
    out << "rician_b2 = " << fmt_full(rician.b2) << "\n";
    out << "q_initial = [" << fmt_full(q_initial.x()) << ", " << fmt_full(q_initial.y()) << "]\n";
    out << "q_final = [" << fmt_full(q_final.x()) << ", " << fmt_full(q_final.y()) << "]\n";
    for (const auto& w : users) {
        out << "user = [" << fmt_full(w.x()) << ", " << fmt_full(w.y()) << "]\n";
    }
    return out.str();
}

}  // namespace fairtraj
