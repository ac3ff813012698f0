#include "mecsched/energy_phy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mecsched {

SubcarrierGroup::SubcarrierGroup(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw std::invalid_argument("subcarrier group has duplicate indices");
    }
}

SubcarrierGroup SubcarrierGroup::all(std::size_t num_subcarriers) {
    std::vector<std::size_t> idx(num_subcarriers);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return SubcarrierGroup(std::move(idx));
}

SubcarrierGroup SubcarrierGroup::from_mask(std::uint64_t mask) {
    std::vector<std::size_t> idx;
    while (mask != 0) {
        idx.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return SubcarrierGroup(std::move(idx));
}

bool SubcarrierGroup::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

SubcarrierGroup SubcarrierGroup::with(std::size_t index) const {
    std::vector<std::size_t> idx = indices_;
    idx.push_back(index);
    return SubcarrierGroup(std::move(idx));
}

SubcarrierGroup SubcarrierGroup::without(const SubcarrierGroup& other) const {
    std::vector<std::size_t> idx;
    std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                        std::back_inserter(idx));
    return SubcarrierGroup(std::move(idx));
}

double PowerAllocation::total() const {
    return std::accumulate(per_subcarrier_w.begin(), per_subcarrier_w.end(), 0.0);
}

double local_energy(const Job& job, const EnergyModel& model) {
    const double cycles = model.cycles_per_bit * job.data_size_bits;
    const double freq = cycles / job.deadline_s;
    return model.kappa * freq * freq * cycles;
}

namespace {

void check_gains(std::span<const double> gains) {
    if (gains.empty()) throw std::domain_error("water_fill: empty gain list");
    for (double g : gains) {
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::domain_error("water_fill: gains must be finite and >= 0");
    }
}

// Active set is the prefix of channels sorted by decreasing gain; returns the
// water level and the number of active channels.
std::pair<double, std::size_t> solve_level(std::span<const double> gains, double total_power_w,
                                           std::vector<std::size_t>& order) {
    order.resize(gains.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

    double inv_sum = 0.0;
    double level = std::numeric_limits<double>::infinity();
    std::size_t active = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double g = gains[order[k]];
        if (!(g > 0.0)) break;
        const double inv = 1.0 / g;
        const double candidate = (total_power_w + inv_sum + inv) / static_cast<double>(k + 1);
        if (k > 0 && !(candidate > inv)) break;
        inv_sum += inv;
        level = candidate;
        active = k + 1;
    }
    return {level, active};
}

}  // namespace

PowerAllocation water_fill(std::span<const double> gains, double total_power_w) {
    check_gains(gains);
    if (!(total_power_w >= 0.0) || !std::isfinite(total_power_w)) {
        throw std::domain_error("water_fill: total power must be finite and >= 0");
    }
    PowerAllocation alloc;
    alloc.per_subcarrier_w.assign(gains.size(), 0.0);
    if (total_power_w == 0.0) return alloc;

    std::vector<std::size_t> order;
    const auto [level, active] = solve_level(gains, total_power_w, order);
    if (active == 0) {
        // No usable channel; the power is irrelevant to the rate.
        alloc.per_subcarrier_w[order.front()] = total_power_w;
        return alloc;
    }
    for (std::size_t k = 0; k < active; ++k) {
        const std::size_t j = order[k];
        alloc.per_subcarrier_w[j] = std::max(0.0, level - 1.0 / gains[j]);
    }
    return alloc;
}

double water_level(std::span<const double> gains, double total_power_w) {
    check_gains(gains);
    std::vector<std::size_t> order;
    return solve_level(gains, total_power_w, order).first;
}

double aggregate_rate(const PowerAllocation& powers, std::span<const double> gains, double bandwidth_hz) {
    if (powers.per_subcarrier_w.size() != gains.size()) {
        throw std::domain_error("aggregate_rate: powers and gains cover different subcarrier sets");
    }
    double bits_per_hz = 0.0;
    for (std::size_t j = 0; j < gains.size(); ++j) bits_per_hz += std::log2(1.0 + powers.per_subcarrier_w[j] * gains[j]);
    return bandwidth_hz * bits_per_hz;
}

double water_filled_rate(std::span<const double> gains, double total_power_w, double bandwidth_hz) {
    return aggregate_rate(water_fill(gains, total_power_w), gains, bandwidth_hz);
}

namespace {

bool has_positive_gain(std::span<const double> gains) {
    return std::any_of(gains.begin(), gains.end(), [](double g) { return g > 0.0; });
}

// Relative slack on rate comparisons so that exact-threshold cases are not
// lost to the last bit of a division.
constexpr double kRateSlack = 1e-12;

bool meets_rate(double rate, double required) { return rate >= required * (1.0 - kRateSlack); }

}  // namespace

std::optional<double> threshold_power(std::span<const double> gains, const LinkRequest& req) {
    if (!(req.deadline_s > 0.0)) throw std::domain_error("threshold_power: deadline must be positive");
    const double required = req.data_bits / req.deadline_s;
    if (required <= 0.0) return 0.0;
    if (gains.empty() || !has_positive_gain(gains)) return std::nullopt;
    if (!meets_rate(water_filled_rate(gains, req.max_power_w, req.bandwidth_hz), required)) return std::nullopt;

    double lo = 0.0;
    double hi = req.max_power_w;
    while (hi - lo > kPowerTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (meets_rate(water_filled_rate(gains, mid, req.bandwidth_hz), required)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double energy_efficient_power(std::span<const double> gains, const LinkRequest& req) {
    // Joules per bit up to the constant D; unimodal because the water-filled rate is concave in p.
    const auto cost = [&](double p) { return (p + req.circuit_power_w) / water_filled_rate(gains, p, req.bandwidth_hz); };

    constexpr double kInvPhi = 0.6180339887498949;
    double a = std::min(kMinSearchPower, req.max_power_w);
    double b = req.max_power_w;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = cost(c);
    double fd = cost(d);
    while (b - a > kPowerTolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = cost(d);
        }
    }
    // Check the interval ends too: the minimum may sit on a boundary.
    double best = 0.5 * (a + b);
    double best_cost = cost(best);
    for (double p : {std::min(kMinSearchPower, req.max_power_w), req.max_power_w}) {
        const double pc = cost(p);
        if (pc < best_cost) {
            best = p;
            best_cost = pc;
        }
    }
    return best;
}

std::optional<TransmissionPlan> optimal_transmit_power(std::span<const double> gains, const LinkRequest& req) {
    if (gains.empty()) return std::nullopt;
    const std::optional<double> threshold = threshold_power(gains, req);
    if (!threshold) return std::nullopt;

    TransmissionPlan plan;
    plan.group = SubcarrierGroup::all(gains.size());
    if (req.data_bits <= 0.0) {
        plan.powers.per_subcarrier_w.assign(gains.size(), 0.0);
        return plan;
    }
    const double efficient = energy_efficient_power(gains, req);
    const double total = std::max(efficient, *threshold);
    if (total > req.max_power_w) return std::nullopt;

    plan.powers = water_fill(gains, total);
    plan.total_power_w = total;
    plan.rate_bps = aggregate_rate(plan.powers, gains, req.bandwidth_hz);
    if (!(plan.rate_bps > 0.0)) return std::nullopt;
    plan.tx_time_s = req.data_bits / plan.rate_bps;
    plan.tx_energy_j = (total + req.circuit_power_w) * plan.tx_time_s;
    return plan;
}

LinkRequest link_request(const Scenario& scenario, std::size_t user) {
    const Job& job = scenario.jobs.at(user);
    const Device& dev = scenario.devices.at(user);
    return LinkRequest{scenario.subcarrier_bandwidth_hz, job.data_size_bits, job.deadline_s, dev.max_tx_power_w,
                       dev.circuit_power_w};
}

std::optional<TransmissionPlan> plan_transmission(const Scenario& scenario, std::size_t user,
                                                  const SubcarrierGroup& group) {
    std::vector<double> gains;
    gains.reserve(group.size());
    for (std::size_t j : group) gains.push_back(scenario.channel(user, j));
    auto plan = optimal_transmit_power(gains, link_request(scenario, user));
    if (plan) plan->group = group;
    return plan;
}

double remote_exec_time(const Job& job, double cloudlet_freq_hz, const EnergyModel& model) {
    if (!(cloudlet_freq_hz > 0.0)) throw std::domain_error("remote_exec_time: cloudlet frequency must be positive");
    return model.cycles_per_bit * job.data_size_bits / cloudlet_freq_hz;
}

double queuing_time(const ExecOrder& order, const std::vector<bool>& offload_flags,
                    std::span<const double> exec_times, std::size_t user) {
    if (order.size() != offload_flags.size() || order.size() != exec_times.size()) {
        throw std::domain_error("queuing_time: inconsistent lengths");
    }
    if (user >= order.size() || !offload_flags[user] || !order[user]) {
        throw std::domain_error("queuing_time: user is not offloaded");
    }
    const std::size_t rank = *order[user];
    double wait = 0.0;
    for (std::size_t j = 0; j < order.size(); ++j) {
        if (j != user && offload_flags[j] && order[j] && *order[j] < rank) wait += exec_times[j];
    }
    return wait;
}

std::vector<std::optional<double>> completion_times(const ExecOrder& order, std::span<const double> tx_times,
                                                    std::span<const double> exec_times) {
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i]) queue.push_back(i);
    }
    std::stable_sort(queue.begin(), queue.end(), [&](std::size_t a, std::size_t b) { return *order[a] < *order[b]; });

    std::vector<std::optional<double>> done(order.size());
    double busy_until = 0.0;
    for (std::size_t i : queue) {
        busy_until = std::max(tx_times[i], busy_until) + exec_times[i];
        done[i] = busy_until;
    }
    return done;
}

}  // namespace mecsched
