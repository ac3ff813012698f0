#pragma once

#include <vector>

#include "mecsched/scenario.hpp"

namespace mecsched::fixtures {

struct UserSpec {
    double data_bits;
    double deadline_s;
    std::vector<double> gains;
};

/// Hand-built scenario with the reference device and energy constants.
inline Scenario make_scenario(const std::vector<UserSpec>& users, double cloudlet_freq_hz = 600e6,
                              double bandwidth_hz = 18750.0, double max_power_w = 1.0, double circuit_power_w = 0.05) {
    Scenario s;
    s.energy_model = EnergyModel{1e-24, 18000.0};
    s.cloudlet_freq_hz = cloudlet_freq_hz;
    s.subcarrier_bandwidth_hz = bandwidth_hz;
    const std::size_t n = users.empty() ? 0 : users.front().gains.size();
    Matrix<double> gains(users.size(), n);
    for (std::size_t i = 0; i < users.size(); ++i) {
        s.jobs.push_back(Job{users[i].data_bits, users[i].deadline_s});
        s.devices.push_back(Device{1e9, max_power_w, circuit_power_w});
        for (std::size_t j = 0; j < n; ++j) gains(i, j) = users[i].gains.at(j);
    }
    s.channel = ChannelMatrix(std::move(gains));
    return s;
}

inline ScenarioConfig small_config(std::size_t users, std::size_t subcarriers, std::uint64_t seed) {
    ScenarioConfig c;
    c.num_users = users;
    c.num_subcarriers = subcarriers;
    c.rng_seed = seed;
    return c;
}

}  // namespace mecsched::fixtures
