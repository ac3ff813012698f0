#include <string>

#include "mecsched/schedulers.hpp"

namespace mecsched {

namespace {

struct GroupValue {
    bool computed = false;
    bool beneficial = false;
    double saving_j = 0.0;
    double tx_time_s = 0.0;
};

std::uint64_t count_maps(std::size_t users, std::size_t subcarriers, std::uint64_t limit) {
    std::uint64_t maps = 1;
    for (std::size_t j = 0; j < subcarriers; ++j) {
        if (maps > limit / (users + 1)) return limit + 1;
        maps *= users + 1;
    }
    return maps;
}

}  // namespace

Schedule exhaustive_optimal(const Scenario& s, bool cpu_constrained, const ExhaustiveLimits& limits) {
    s.validate();
    const std::size_t m = s.num_users();
    const std::size_t n = s.num_subcarriers();
    const std::uint64_t maps = count_maps(m, n, limits.max_maps);
    if (maps > limits.max_maps || n >= 63) {
        throw BudgetExceeded("exhaustive_optimal: (M+1)^N maps for M=" + std::to_string(m) + ", N=" +
                             std::to_string(n) + " exceed the budget of " + std::to_string(limits.max_maps));
    }

    std::vector<double> local(m);
    std::vector<double> exec(m);
    for (std::size_t i = 0; i < m; ++i) {
        local[i] = local_energy(s.jobs[i], s.energy_model);
        exec[i] = remote_exec_time(s.jobs[i], s.cloudlet_freq_hz, s.energy_model);
    }

    const std::size_t masks = std::size_t{1} << n;
    std::vector<GroupValue> cache(m * masks);
    const auto value = [&](std::size_t user, std::uint64_t mask) -> const GroupValue& {
        GroupValue& v = cache[user * masks + mask];
        if (!v.computed) {
            v.computed = true;
            if (mask != 0) {
                const auto plan = plan_transmission(s, user, SubcarrierGroup::from_mask(mask));
                if (plan && plan->tx_energy_j < local[user]) {
                    v.beneficial = true;
                    v.saving_j = local[user] - plan->tx_energy_j;
                    v.tx_time_s = plan->tx_time_s;
                }
            }
        }
        return v;
    };

    // digits[j] == 0: subcarrier j unused; digits[j] == i + 1: assigned to user i.
    std::vector<std::size_t> digits(n, 0);
    std::vector<std::uint64_t> user_mask(m);
    std::vector<std::size_t> offloaders;
    std::vector<DpCandidate> candidates;

    double best_saving = 0.0;
    std::vector<std::uint64_t> best_masks(m, 0);
    std::vector<std::size_t> best_order;  // offloaded users in execution order

    for (std::uint64_t count = 0; count < maps; ++count) {
        std::fill(user_mask.begin(), user_mask.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (digits[j] != 0) user_mask[digits[j] - 1] |= std::uint64_t{1} << j;
        }
        offloaders.clear();
        candidates.clear();
        for (std::size_t i = 0; i < m; ++i) {
            const GroupValue& v = value(i, user_mask[i]);
            if (!v.beneficial) continue;
            offloaders.push_back(i);
            candidates.push_back(DpCandidate{v.saving_j, v.tx_time_s, exec[i], s.jobs[i].deadline_s});
        }

        double saving = 0.0;
        std::vector<std::size_t> order;
        if (cpu_constrained) {
            const DpResult dp = dp_cpu_schedule(candidates, limits.dp_cap);
            saving = dp.total_saving_j;
            for (std::size_t k : dp.exec_order) order.push_back(offloaders[k]);
        } else {
            for (const DpCandidate& c : candidates) saving += c.saving_j;
            order = offloaders;
        }
        if (saving > best_saving) {
            best_saving = saving;
            best_masks = user_mask;
            best_order = std::move(order);
        }

        for (std::size_t j = 0; j < n; ++j) {
            if (++digits[j] <= m) break;
            digits[j] = 0;
        }
    }

    Assignment a = Assignment::all_local(m, n);
    for (std::size_t rank = 0; rank < best_order.size(); ++rank) {
        const std::size_t user = best_order[rank];
        const auto plan = plan_transmission(s, user, SubcarrierGroup::from_mask(best_masks[user]));
        const auto& idx = plan->group.indices();
        for (std::size_t k = 0; k < idx.size(); ++k) {
            a.subcarrier_map(user, idx[k]) = 1;
            a.power_map(user, idx[k]) = plan->powers.per_subcarrier_w[k];
        }
        a.offload_flags[user] = true;
        a.exec_order[user] = rank + 1;
    }
    ScheduleOutcome out = evaluate(a, s, cpu_constrained ? CpuModel::limited : CpuModel::unlimited);
    return Schedule{std::move(a), std::move(out)};
}

}  // namespace mecsched
