#include "test_scenarios.hpp"

namespace fairtraj::testing {

Scenario base_scenario() {
    Scenario s;
    s.altitude = 500.0;
    s.v_max = 40.0;
    s.horizon = 50.0;
    s.slots = 50;
    s.bandwidth_total = 1e7;
    s.power_total = 0.1;
    s.noise_psd = dbm_per_hz_to_w_per_hz(-169.0);
    s.ref_gain = db_to_linear(-50.0);
    s.rician = {0.0, 1.0, -4.3221, 6.0750};
    s.q_initial = {0.0, 0.0};
    s.q_final = {0.0, 0.0};
    return s;
}

Scenario single_user_scenario(int slots) {
    Scenario s = base_scenario();
    s.slots = slots;
    s.horizon = slots;
    s.users = {{0.0, 0.0}};
    s.validate();
    return s;
}

Scenario nine_user_scenario() {
    Scenario s = base_scenario();
    s.users = {{-800, -600}, {-650, 400}, {-300, 850}, {-150, -300}, {100, 150},
               {350, -750},  {600, 500},  {850, -150}, {0, -100}};
    s.validate();
    return s;
}

Scenario small_scenario(int users, int slots) {
    Scenario s = base_scenario();
    s.slots = slots;
    s.horizon = slots;
    for (int k = 0; k < users; ++k) {
        const double angle = 6.283185307179586 * k / users;
        s.users.push_back({700.0 * std::cos(angle), 700.0 * std::sin(angle)});
    }
    s.validate();
    return s;
}

}  // namespace fairtraj::testing
