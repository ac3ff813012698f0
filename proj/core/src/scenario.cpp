#include "mecsched/scenario.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mecsched {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

bool valid_range(Interval r) { return positive_finite(r.lo) && positive_finite(r.hi) && r.lo <= r.hi; }

}  // namespace

ChannelMatrix::ChannelMatrix(Matrix<double> gains) : gains_(std::move(gains)) {
    for (double g : gains_.data()) {
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("channel gains must be finite and >= 0");
    }
}

void ScenarioConfig::validate() const {
    require(num_users > 0, "num_users must be positive");
    require(num_subcarriers > 0, "num_subcarriers must be positive");
    require(positive_finite(subcarrier_bandwidth_hz), "subcarrier_bandwidth_hz must be positive");
    require(positive_finite(band_low_khz) && positive_finite(band_high_khz) && band_low_khz <= band_high_khz,
            "band_low_khz/band_high_khz must be positive with low <= high");
    // Band edges are in kHz, bandwidth in Hz.
    require(static_cast<double>(num_subcarriers) * subcarrier_bandwidth_hz <=
                (band_high_khz - band_low_khz) * 1e3 * (1.0 + 1e-12),
            "num_subcarriers * subcarrier_bandwidth_hz exceeds the band span");
    require(positive_finite(cell_radius_km), "cell_radius_km must be positive");
    require(positive_finite(cloudlet_freq_hz), "cloudlet_freq_hz must be positive");
    require(valid_range(data_size_range_bits), "data_size_range_bits must be a nonempty positive interval");
    require(valid_range(deadline_range_s), "deadline_range_s must be a nonempty positive interval");
    require(positive_finite(kappa), "kappa must be positive");
    require(positive_finite(cycles_per_bit), "cycles_per_bit must be positive");
    require(std::isfinite(circuit_power_w) && circuit_power_w >= 0.0, "circuit_power_w must be >= 0");
    require(positive_finite(max_tx_power_w), "max_tx_power_w must be positive");
    require(std::isfinite(noise_psd_dbm_hz), "noise_psd_dbm_hz must be finite");
}

void Scenario::validate() const {
    const std::size_t m = jobs.size();
    require(m > 0, "scenario has no users");
    require(devices.size() == m, "devices/jobs length mismatch");
    require(channel.users() == m, "channel rows must equal the number of users");
    require(channel.subcarriers() > 0, "channel has no subcarriers");
    require(positive_finite(cloudlet_freq_hz), "cloudlet_freq_hz must be positive");
    require(positive_finite(subcarrier_bandwidth_hz), "subcarrier_bandwidth_hz must be positive");
    require(positive_finite(energy_model.kappa) && positive_finite(energy_model.cycles_per_bit),
            "energy model constants must be positive");
    for (const Job& job : jobs) {
        require(std::isfinite(job.data_size_bits) && job.data_size_bits >= 0.0, "data_size_bits must be >= 0");
        require(positive_finite(job.deadline_s), "deadline_s must be positive");
    }
    for (const Device& dev : devices) {
        require(positive_finite(dev.max_tx_power_w), "max_tx_power_w must be positive");
        require(std::isfinite(dev.circuit_power_w) && dev.circuit_power_w >= 0.0, "circuit_power_w must be >= 0");
    }
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, Interval range) { return range.lo + (range.hi - range.lo) * uniform01(rng); }

double rayleigh_power(Rng& rng) { return -std::log1p(-uniform01(rng)); }

double path_loss_db(double distance_km, double carrier_khz) {
    if (!(distance_km > 0.0) || !(carrier_khz > 0.0)) {
        throw std::domain_error("path_loss_db: distance and frequency must be positive");
    }
    return 20.0 * std::log10(distance_km) + 20.0 * std::log10(carrier_khz) + 32.45;
}

double noise_power_w(double noise_psd_dbm_hz, double bandwidth_hz) {
    return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0) * bandwidth_hz;
}

double channel_gain(double distance_km, double carrier_khz, double fading, double noise_w) {
    return std::pow(10.0, -path_loss_db(distance_km, carrier_khz) / 10.0) * fading / noise_w;
}

std::vector<double> subcarrier_centers_khz(const ScenarioConfig& config) {
    const std::size_t n = config.num_subcarriers;
    const double slot = (config.band_high_khz - config.band_low_khz) / static_cast<double>(n);
    std::vector<double> centers(n);
    for (std::size_t j = 0; j < n; ++j) centers[j] = config.band_low_khz + (static_cast<double>(j) + 0.5) * slot;
    return centers;
}

std::vector<double> channel_row(double distance_km, std::span<const double> carriers_khz, double noise_w,
                                bool fading_enabled, Rng& rng) {
    std::vector<double> row(carriers_khz.size());
    for (std::size_t j = 0; j < carriers_khz.size(); ++j) {
        const double fading = fading_enabled ? rayleigh_power(rng) : 1.0;
        row[j] = channel_gain(distance_km, carriers_khz[j], fading, noise_w);
    }
    return row;
}

double sample_distance_km(Rng& rng, double radius_km) {
    // Reject the exact center so the path loss stays finite.
    double u = 0.0;
    do {
        u = uniform01(rng);
    } while (u == 0.0);
    return radius_km * std::sqrt(u);
}

namespace {

struct ChannelContext {
    std::vector<double> carriers_khz;
    double noise_w;
};

ChannelContext channel_context(const ScenarioConfig& config) {
    return {subcarrier_centers_khz(config), noise_power_w(config.noise_psd_dbm_hz, config.subcarrier_bandwidth_hz)};
}

void store_row(ChannelMatrix& channel, std::size_t user, const std::vector<double>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) channel(user, j) = row[j];
}

}  // namespace

ChannelMatrix generate_channel(const ScenarioConfig& config, Rng& rng) {
    config.validate();
    const ChannelContext ctx = channel_context(config);
    ChannelMatrix channel(config.num_users, config.num_subcarriers);
    for (std::size_t i = 0; i < config.num_users; ++i) {
        const double d = sample_distance_km(rng, config.cell_radius_km);
        store_row(channel, i, channel_row(d, ctx.carriers_khz, ctx.noise_w, config.fading_enabled, rng));
    }
    return channel;
}

Scenario generate_scenario(const ScenarioConfig& config, Rng& rng) {
    config.validate();
    const ChannelContext ctx = channel_context(config);
    // Worst-case deadline-exact frequency, so local execution is always feasible.
    const double local_freq =
        config.cycles_per_bit * config.data_size_range_bits.hi / config.deadline_range_s.lo;

    Scenario s;
    s.energy_model = EnergyModel{config.kappa, config.cycles_per_bit};
    s.cloudlet_freq_hz = config.cloudlet_freq_hz;
    s.subcarrier_bandwidth_hz = config.subcarrier_bandwidth_hz;
    s.channel = ChannelMatrix(config.num_users, config.num_subcarriers);
    s.jobs.reserve(config.num_users);
    s.devices.reserve(config.num_users);

    // Per-user draw order (position, job, fading row) keeps the first k users
    // identical when only num_users changes.
    for (std::size_t i = 0; i < config.num_users; ++i) {
        const double d = sample_distance_km(rng, config.cell_radius_km);
        Job job;
        job.data_size_bits = uniform(rng, config.data_size_range_bits);
        job.deadline_s = uniform(rng, config.deadline_range_s);
        s.jobs.push_back(job);
        s.devices.push_back(Device{local_freq, config.max_tx_power_w, config.circuit_power_w});
        store_row(s.channel, i, channel_row(d, ctx.carriers_khz, ctx.noise_w, config.fading_enabled, rng));
    }
    return s;
}

Scenario generate_scenario(const ScenarioConfig& config) {
    Rng rng(config.rng_seed);
    return generate_scenario(config, rng);
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string snapshot(const Scenario& scenario) {
    std::ostringstream out;
    out << "users " << scenario.num_users() << "\n";
    out << "subcarriers " << scenario.num_subcarriers() << "\n";
    out << "cloudlet_freq_hz " << format_double(scenario.cloudlet_freq_hz) << "\n";
    out << "subcarrier_bandwidth_hz " << format_double(scenario.subcarrier_bandwidth_hz) << "\n";
    out << "kappa " << format_double(scenario.energy_model.kappa) << "\n";
    out << "cycles_per_bit " << format_double(scenario.energy_model.cycles_per_bit) << "\n";
    for (std::size_t i = 0; i < scenario.num_users(); ++i) {
        const Job& job = scenario.jobs[i];
        const Device& dev = scenario.devices[i];
        out << "user " << i << " data_size_bits " << format_double(job.data_size_bits) << " deadline_s "
            << format_double(job.deadline_s) << " max_local_freq_hz " << format_double(dev.max_local_freq_hz)
            << " max_tx_power_w " << format_double(dev.max_tx_power_w) << " circuit_power_w "
            << format_double(dev.circuit_power_w) << "\n";
        out << "gains " << i;
        for (double g : scenario.channel.row(i)) out << ' ' << format_double(g);
        out << "\n";
    }
    return out.str();
}

}  // namespace mecsched
