#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace fairtraj {

/// Logistic approximation constants of the elevation-dependent Rician
/// fading power: f(theta) = c1 + c2 / (1 + exp(-(b1 + b2*theta))).
struct RicianParams {
    double c1 = 0.0;
    double c2 = 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

/// Immutable problem instance: user geometry, flight limits, radio
/// constants and horizon discretization. All stored values are linear
/// (dB/dBm inputs are converted on load).
struct Scenario {
    std::vector<Eigen::Vector2d> users;  // ground positions w_k [m]
    Eigen::Vector2d q_initial{0.0, 0.0};
    Eigen::Vector2d q_final{0.0, 0.0};
    double altitude = 0.0;         // H [m]
    double v_max = 0.0;            // max horizontal speed [m/s]
    double horizon = 0.0;          // T [s]
    int slots = 0;                 // N
    double bandwidth_total = 0.0;  // B [Hz]
    double power_total = 0.0;      // P [W]
    double noise_psd = 0.0;        // N0 [W/Hz]
    double ref_gain = 0.0;         // h0, channel power gain at d0 = 1 m
    RicianParams rician;

    int num_users() const { return static_cast<int>(users.size()); }
    double slot_length() const { return horizon / slots; }
    double gamma0() const;

    /// Throws MalformedConfig / NonPositiveConstant / InfeasibleEndpoints.
    void validate() const;

    std::string serialize() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);
/// dBm/Hz -> W/Hz.
double dbm_per_hz_to_w_per_hz(double dbm_per_hz);
double w_per_hz_to_dbm_per_hz(double w_per_hz);

/// P*h0/(B*N0); throws NonPositiveConstant on any input <= 0.
double compute_gamma0(double power_w, double ref_gain_linear, double bandwidth_hz,
                      double noise_psd_w_hz);

/// Parses the key-value scenario format (see README) and validates.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace fairtraj
