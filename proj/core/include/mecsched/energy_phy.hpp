#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mecsched/scenario.hpp"

namespace mecsched {

/// Absolute tolerance of the total-power searches, in watts.
inline constexpr double kPowerTolerance = 1e-9;
/// Lower end of the energy-per-bit search interval, in watts.
inline constexpr double kMinSearchPower = 1e-9;

/// Sorted, duplicate-free subcarrier indices assigned to one user.
class SubcarrierGroup {
public:
    SubcarrierGroup() = default;
    /// Sorts the indices; throws std::invalid_argument on duplicates.
    explicit SubcarrierGroup(std::vector<std::size_t> indices);

    static SubcarrierGroup all(std::size_t num_subcarriers);
    /// Group made of the set bits of `mask`.
    static SubcarrierGroup from_mask(std::uint64_t mask);

    [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] bool contains(std::size_t index) const;

    [[nodiscard]] SubcarrierGroup with(std::size_t index) const;
    [[nodiscard]] SubcarrierGroup without(const SubcarrierGroup& other) const;

    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    friend bool operator==(const SubcarrierGroup&, const SubcarrierGroup&) = default;

private:
    std::vector<std::size_t> indices_;
};

/// Per-subcarrier transmit powers, positionally aligned with the gains they were computed for.
struct PowerAllocation {
    std::vector<double> per_subcarrier_w;

    [[nodiscard]] double total() const;
    friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;
};

/// Link parameters of one offloading attempt.
struct LinkRequest {
    double bandwidth_hz = 0.0;
    double data_bits = 0.0;
    double deadline_s = 0.0;
    double max_power_w = 0.0;
    double circuit_power_w = 0.0;
};

struct TransmissionPlan {
    SubcarrierGroup group;
    PowerAllocation powers;  // aligned with group.indices()
    double total_power_w = 0.0;
    double rate_bps = 0.0;
    double tx_time_s = 0.0;
    double tx_energy_j = 0.0;
};

/// kappa * X^3 * D^3 / T^2: energy of running the job locally at the deadline-exact frequency.
double local_energy(const Job& job, const EnergyModel& model);

/// Rate-maximizing split of `total_power_w` over parallel channels:
/// p_j = max(0, mu - 1/g_j) with sum p_j = total_power_w. Zero gains never receive power.
/// Throws std::domain_error for empty or negative gains, or negative power.
PowerAllocation water_fill(std::span<const double> gains, double total_power_w);

/// Water level mu of the allocation computed by water_fill (infinite when no gain is positive).
double water_level(std::span<const double> gains, double total_power_w);

/// B * sum_j log2(1 + p_j g_j). Throws std::domain_error when sizes differ.
double aggregate_rate(const PowerAllocation& powers, std::span<const double> gains, double bandwidth_hz);

/// Rate achieved when `total_power_w` is water-filled over `gains`.
double water_filled_rate(std::span<const double> gains, double total_power_w, double bandwidth_hz);

/// Least total power whose water-filled rate carries data_bits within deadline_s.
/// std::nullopt when even max_power_w is too little.
std::optional<double> threshold_power(std::span<const double> gains, const LinkRequest& request);

/// Total power minimizing (p + p_c) / R(p), searched by golden section over [kMinSearchPower, max_power_w].
double energy_efficient_power(std::span<const double> gains, const LinkRequest& request);

/// Energy-minimal deadline-meeting transmission: total power max(p*, p_t), then water-filled.
/// The returned plan's group holds positions 0..gains.size()-1. std::nullopt when infeasible.
std::optional<TransmissionPlan> optimal_transmit_power(std::span<const double> gains, const LinkRequest& request);

/// Link request of `user` in `scenario`.
LinkRequest link_request(const Scenario& scenario, std::size_t user);

/// optimal_transmit_power over the user's gains on `group`; the plan carries real subcarrier indices.
std::optional<TransmissionPlan> plan_transmission(const Scenario& scenario, std::size_t user,
                                                  const SubcarrierGroup& group);

/// X * D / f_c.
double remote_exec_time(const Job& job, double cloudlet_freq_hz, const EnergyModel& model);

/// Execution ranks of a cloudlet queue. Entry i holds user i's 1-based rank, if offloaded.
using ExecOrder = std::vector<std::optional<std::size_t>>;

/// Sum of exec times of offloaded users ranked ahead of `user`.
/// Throws std::domain_error if `user` is not offloaded or has no rank.
double queuing_time(const ExecOrder& order, const std::vector<bool>& offload_flags,
                    std::span<const double> exec_times, std::size_t user);

/// Completion times with transmission overlapping the queue: jobs run in rank order and
/// each starts at max(its transmit time, previous completion). Unranked users get nullopt.
std::vector<std::optional<double>> completion_times(const ExecOrder& order, std::span<const double> tx_times,
                                                    std::span<const double> exec_times);

}  // namespace mecsched
