#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mecsched/matrix.hpp"

namespace mecsched {

struct Job {
    double data_size_bits = 0.0;
    double deadline_s = 0.0;

    friend bool operator==(const Job&, const Job&) = default;
};

struct Device {
    double max_local_freq_hz = 0.0;
    double max_tx_power_w = 0.0;
    double circuit_power_w = 0.0;

    friend bool operator==(const Device&, const Device&) = default;
};

/// Local CPU energy per cycle is kappa * f^2; a job of D bits needs cycles_per_bit * D cycles.
struct EnergyModel {
    double kappa = 1e-24;
    double cycles_per_bit = 18000.0;

    friend bool operator==(const EnergyModel&, const EnergyModel&) = default;
};

/// Linear channel-gain-to-noise ratio per (user, subcarrier).
class ChannelMatrix {
public:
    ChannelMatrix() = default;
    ChannelMatrix(std::size_t users, std::size_t subcarriers) : gains_(users, subcarriers, 0.0) {}
    explicit ChannelMatrix(Matrix<double> gains);

    [[nodiscard]] std::size_t users() const noexcept { return gains_.rows(); }
    [[nodiscard]] std::size_t subcarriers() const noexcept { return gains_.cols(); }

    double operator()(std::size_t user, std::size_t subcarrier) const { return gains_(user, subcarrier); }
    double& operator()(std::size_t user, std::size_t subcarrier) { return gains_(user, subcarrier); }
    std::span<const double> row(std::size_t user) const { return gains_.row(user); }

    friend bool operator==(const ChannelMatrix&, const ChannelMatrix&) = default;

private:
    Matrix<double> gains_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Defaults reproduce the simulation setting used for the reference figures.
struct ScenarioConfig {
    std::size_t num_users = 4;
    std::size_t num_subcarriers = 4;
    double subcarrier_bandwidth_hz = 18750.0;
    double band_low_khz = 1850.0;
    double band_high_khz = 1960.0;
    double cell_radius_km = 0.2;
    double cloudlet_freq_hz = 600e6;
    Interval data_size_range_bits{900.0, 1100.0};
    Interval deadline_range_s{0.05, 0.15};
    double kappa = 1e-24;
    double cycles_per_bit = 18000.0;
    double circuit_power_w = 0.05;
    double max_tx_power_w = 1.0;
    double noise_psd_dbm_hz = -174.0;
    std::uint64_t rng_seed = 1;
    /// Test hook: when false every small-scale fading factor is exactly 1.
    bool fading_enabled = true;

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct Scenario {
    std::vector<Job> jobs;
    std::vector<Device> devices;
    ChannelMatrix channel;
    EnergyModel energy_model;
    double cloudlet_freq_hz = 0.0;
    double subcarrier_bandwidth_hz = 0.0;

    [[nodiscard]] std::size_t num_users() const noexcept { return jobs.size(); }
    [[nodiscard]] std::size_t num_subcarriers() const noexcept { return channel.subcarriers(); }

    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Portable random source; all draws go through the helpers below so that a
/// seed yields the same instance on every standard library.
using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) with 53 bits of precision.
double uniform01(Rng& rng);
double uniform(Rng& rng, Interval range);
/// Unit-mean exponential power factor (squared Rayleigh envelope).
double rayleigh_power(Rng& rng);

/// 20 log10(d) + 20 log10(f) + 32.45, d in km and f in kHz.
double path_loss_db(double distance_km, double carrier_khz);

double noise_power_w(double noise_psd_dbm_hz, double bandwidth_hz);

/// Gain-to-noise ratio for one link: 10^(-PL/10) * fading / noise.
double channel_gain(double distance_km, double carrier_khz, double fading, double noise_w);

/// Centers of num_subcarriers equal slots spanning [band_low_khz, band_high_khz].
std::vector<double> subcarrier_centers_khz(const ScenarioConfig& config);

/// One user's row of gains. Draws one fading factor per carrier when fading is enabled.
std::vector<double> channel_row(double distance_km, std::span<const double> carriers_khz, double noise_w,
                                bool fading_enabled, Rng& rng);

/// Distance of a point uniform over the disk of the given radius.
double sample_distance_km(Rng& rng, double radius_km);

ChannelMatrix generate_channel(const ScenarioConfig& config, Rng& rng);
Scenario generate_scenario(const ScenarioConfig& config, Rng& rng);
/// Seeds a fresh Rng from config.rng_seed.
Scenario generate_scenario(const ScenarioConfig& config);

// Flat "key = value" configuration files. Intervals are written "lo, hi".
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string format_config(const ScenarioConfig& config);

/// Deterministic text dump, round-trippable doubles.
std::string snapshot(const Scenario& scenario);

/// Shortest round-trip representation of a double.
std::string format_double(double value);

}  // namespace mecsched
