#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mecsched/scenario.hpp"

namespace mecsched {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw std::invalid_argument("config: bad value for '" + std::string(key) + "': '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) bad_value(key, text);
    return v;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view text) {
    text = trim(text);
    Int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) bad_value(key, text);
    return v;
}

Interval to_interval(std::string_view key, std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) bad_value(key, text);
    return Interval{to_double(key, text.substr(0, comma)), to_double(key, text.substr(comma + 1))};
}

bool to_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    bad_value(key, text);
}

void assign(ScenarioConfig& c, std::string_view key, std::string_view value) {
    if (key == "num_users") c.num_users = to_integer<std::size_t>(key, value);
    else if (key == "num_subcarriers") c.num_subcarriers = to_integer<std::size_t>(key, value);
    else if (key == "subcarrier_bandwidth_hz") c.subcarrier_bandwidth_hz = to_double(key, value);
    else if (key == "band_low_khz") c.band_low_khz = to_double(key, value);
    else if (key == "band_high_khz") c.band_high_khz = to_double(key, value);
    else if (key == "cell_radius_km") c.cell_radius_km = to_double(key, value);
    else if (key == "cloudlet_freq_hz") c.cloudlet_freq_hz = to_double(key, value);
    else if (key == "data_size_range_bits") c.data_size_range_bits = to_interval(key, value);
    else if (key == "deadline_range_s") c.deadline_range_s = to_interval(key, value);
    else if (key == "kappa") c.kappa = to_double(key, value);
    else if (key == "cycles_per_bit") c.cycles_per_bit = to_double(key, value);
    else if (key == "circuit_power_w") c.circuit_power_w = to_double(key, value);
    else if (key == "max_tx_power_w") c.max_tx_power_w = to_double(key, value);
    else if (key == "noise_psd_dbm_hz") c.noise_psd_dbm_hz = to_double(key, value);
    else if (key == "rng_seed") c.rng_seed = to_integer<std::uint64_t>(key, value);
    else if (key == "fading_enabled") c.fading_enabled = to_bool(key, value);
    else throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not 'key = value'");
        }
        assign(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    return parse_config(in);
}

std::string format_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "num_users = " << c.num_users << "\n"
        << "num_subcarriers = " << c.num_subcarriers << "\n"
        << "subcarrier_bandwidth_hz = " << format_double(c.subcarrier_bandwidth_hz) << "\n"
        << "band_low_khz = " << format_double(c.band_low_khz) << "\n"
        << "band_high_khz = " << format_double(c.band_high_khz) << "\n"
        << "cell_radius_km = " << format_double(c.cell_radius_km) << "\n"
        << "cloudlet_freq_hz = " << format_double(c.cloudlet_freq_hz) << "\n"
        << "data_size_range_bits = " << format_double(c.data_size_range_bits.lo) << ", "
        << format_double(c.data_size_range_bits.hi) << "\n"
        << "deadline_range_s = " << format_double(c.deadline_range_s.lo) << ", "
        << format_double(c.deadline_range_s.hi) << "\n"
        << "kappa = " << format_double(c.kappa) << "\n"
        << "cycles_per_bit = " << format_double(c.cycles_per_bit) << "\n"
        << "circuit_power_w = " << format_double(c.circuit_power_w) << "\n"
        << "max_tx_power_w = " << format_double(c.max_tx_power_w) << "\n"
        << "noise_psd_dbm_hz = " << format_double(c.noise_psd_dbm_hz) << "\n"
        << "rng_seed = " << c.rng_seed << "\n"
        << "fading_enabled = " << (c.fading_enabled ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace mecsched
