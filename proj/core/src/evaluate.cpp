#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "mecsched/schedulers.hpp"

namespace mecsched {

Assignment Assignment::all_local(std::size_t users, std::size_t subcarriers) {
    Assignment a;
    a.subcarrier_map = Matrix<std::uint8_t>(users, subcarriers, 0);
    a.power_map = Matrix<double>(users, subcarriers, 0.0);
    a.offload_flags.assign(users, false);
    a.exec_order.assign(users, std::nullopt);
    return a;
}

SubcarrierGroup Assignment::group_of(std::size_t user) const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < subcarrier_map.cols(); ++j) {
        if (subcarrier_map(user, j) != 0) idx.push_back(j);
    }
    return SubcarrierGroup(std::move(idx));
}

namespace {

// Slack for quantities that were produced by the same floating-point formulas.
constexpr double kPowerSlack = 1e-9;
constexpr double kTimeSlack = 1e-12;

void check_dimensions(const Assignment& a, const Scenario& s) {
    const std::size_t m = s.num_users();
    const std::size_t n = s.num_subcarriers();
    if (a.subcarrier_map.rows() != m || a.subcarrier_map.cols() != n || a.power_map.rows() != m ||
        a.power_map.cols() != n || a.offload_flags.size() != m || a.exec_order.size() != m) {
        throw std::domain_error("evaluate: assignment dimensions do not match the scenario");
    }
}

}  // namespace

ScheduleOutcome evaluate(const Assignment& a, const Scenario& s, CpuModel cpu) {
    check_dimensions(a, s);
    const std::size_t m = s.num_users();
    const std::size_t n = s.num_subcarriers();
    std::set<std::string> violated;

    for (std::size_t j = 0; j < n; ++j) {
        unsigned owners = 0;
        for (std::size_t i = 0; i < m; ++i) owners += a.subcarrier_map(i, j) != 0 ? 1U : 0U;
        if (owners > 1) violated.insert(kExclusiveSubcarrier);
    }

    std::vector<double> tx_time(m, 0.0);
    std::vector<double> exec_time(m, 0.0);
    ScheduleOutcome out;
    out.per_user_energy_j.resize(m);
    out.per_user_local_energy_j.resize(m);
    out.per_user_completion_s.assign(m, std::nullopt);
    out.per_user_additive_completion_s.assign(m, std::nullopt);

    for (std::size_t i = 0; i < m; ++i) {
        const Job& job = s.jobs[i];
        const Device& dev = s.devices[i];
        const double local = local_energy(job, s.energy_model);
        out.per_user_local_energy_j[i] = local;
        exec_time[i] = remote_exec_time(job, s.cloudlet_freq_hz, s.energy_model);

        double row_power = 0.0;
        double bits_per_hz = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = a.power_map(i, j);
            if (!(p >= 0.0) || (p > 0.0 && a.subcarrier_map(i, j) == 0)) {
                violated.insert(kPowerOutsideGroup);
                continue;
            }
            if (a.subcarrier_map(i, j) == 0) continue;
            row_power += p;
            bits_per_hz += std::log2(1.0 + p * s.channel(i, j));
        }
        if (row_power > dev.max_tx_power_w * (1.0 + kPowerSlack)) violated.insert(kPowerBudget);

        if (!a.offload_flags[i]) {
            out.per_user_energy_j[i] = local;
            continue;
        }
        ++out.offload_count;
        const double rate = s.subcarrier_bandwidth_hz * bits_per_hz;
        if (job.data_size_bits <= 0.0) {
            tx_time[i] = 0.0;
        } else if (rate > 0.0) {
            tx_time[i] = job.data_size_bits / rate;
        } else {
            tx_time[i] = std::numeric_limits<double>::infinity();
        }
        out.per_user_energy_j[i] = job.data_size_bits <= 0.0 ? 0.0 : (row_power + dev.circuit_power_w) * tx_time[i];
    }

    // Execution order: only offloaded users ranked, every offloaded user ranked, ranks distinct.
    ExecOrder queue(m, std::nullopt);
    std::set<std::size_t> ranks;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& rank = a.exec_order[i];
        if (a.offload_flags[i] != rank.has_value()) violated.insert(kDistinctOrder);
        if (!rank) continue;
        if (!ranks.insert(*rank).second) violated.insert(kDistinctOrder);
        if (a.offload_flags[i]) queue[i] = rank;
    }

    if (cpu == CpuModel::limited) {
        const auto done = completion_times(queue, tx_time, exec_time);
        for (std::size_t i = 0; i < m; ++i) {
            if (!a.offload_flags[i]) continue;
            if (!queue[i]) {
                out.per_user_completion_s[i] = std::numeric_limits<double>::infinity();
            } else {
                out.per_user_completion_s[i] = done[i];
                out.per_user_additive_completion_s[i] =
                    tx_time[i] + queuing_time(queue, a.offload_flags, exec_time, i) + exec_time[i];
            }
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            if (a.offload_flags[i]) {
                out.per_user_completion_s[i] = tx_time[i];
                out.per_user_additive_completion_s[i] = tx_time[i];
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& done = out.per_user_completion_s[i];
        if (done && !(*done <= s.jobs[i].deadline_s * (1.0 + kTimeSlack))) violated.insert(kDeadline);
    }

    double local_total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.total_energy_j += out.per_user_energy_j[i];
        local_total += out.per_user_local_energy_j[i];
    }
    out.total_saving_j = local_total - out.total_energy_j;
    out.violations.assign(violated.begin(), violated.end());
    out.feasible = out.violations.empty();
    return out;
}

}  // namespace mecsched
