#include <algorithm>
#include <numeric>

#include "mecsched/schedulers.hpp"

namespace mecsched {

std::optional<MinimumGroup> find_minimum_group(const Scenario& scenario, std::size_t user,
                                               const SubcarrierGroup& available, double busy_until_s,
                                               bool include_exec_time) {
    if (available.empty()) return std::nullopt;
    const Job& job = scenario.jobs.at(user);
    const double local = local_energy(job, scenario.energy_model);
    const double exec = remote_exec_time(job, scenario.cloudlet_freq_hz, scenario.energy_model);

    std::vector<std::size_t> ranked = available.indices();
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        return scenario.channel(user, a) > scenario.channel(user, b);
    });

    for (std::size_t k = 1; k <= ranked.size(); ++k) {
        SubcarrierGroup group(std::vector<std::size_t>(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k)));
        auto plan = plan_transmission(scenario, user, group);
        if (!plan || !(plan->tx_energy_j < local)) continue;
        const double finish = include_exec_time ? std::max(plan->tx_time_s, busy_until_s) + exec : plan->tx_time_s;
        if (finish > job.deadline_s) continue;
        return MinimumGroup{std::move(group), std::move(*plan), local - plan->tx_energy_j, exec};
    }
    return std::nullopt;
}

namespace {

enum class GreedyMode {
    radio_only,    // deadline test T_t <= T, pick the largest saving
    per_resource,  // deadline test T_t + T_c <= T, pick the largest saving
    joint,         // deadline test max(T_t, busy) + T_c <= T, pick the largest saving per CPU second
};

struct Offload {
    std::size_t user = 0;
    TransmissionPlan plan;
    double exec_time_s = 0.0;
};

// True when every committed job, run in selection order, still meets its deadline.
bool timeline_holds(const Scenario& s, const std::vector<Offload>& offloads) {
    double busy = 0.0;
    for (const Offload& o : offloads) {
        busy = std::max(o.plan.tx_time_s, busy) + o.exec_time_s;
        if (busy > s.jobs[o.user].deadline_s) return false;
    }
    return true;
}

bool append_allowed(const Scenario& s, GreedyMode mode, std::vector<Offload>& offloads, std::size_t k,
                    const TransmissionPlan& candidate) {
    const Offload& o = offloads[k];
    switch (mode) {
        case GreedyMode::radio_only:
            return candidate.tx_time_s <= s.jobs[o.user].deadline_s;
        case GreedyMode::per_resource:
            return candidate.tx_time_s + o.exec_time_s <= s.jobs[o.user].deadline_s;
        case GreedyMode::joint: {
            TransmissionPlan saved = std::move(offloads[k].plan);
            offloads[k].plan = candidate;
            const bool ok = timeline_holds(s, offloads);
            offloads[k].plan = std::move(saved);
            return ok;
        }
    }
    return false;
}

// Offloads in selection order.
std::vector<Offload> greedy_allocate(const Scenario& s, GreedyMode mode) {
    s.validate();
    const std::size_t m = s.num_users();
    std::vector<bool> pending(m, true);
    SubcarrierGroup available = SubcarrierGroup::all(s.num_subcarriers());
    std::vector<Offload> offloads;
    double busy = 0.0;

    while (!available.empty() && offloads.size() < m) {
        std::optional<MinimumGroup> best;
        std::size_t best_user = 0;
        double best_score = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!pending[i]) continue;
            auto found = find_minimum_group(s, i, available, mode == GreedyMode::joint ? busy : 0.0,
                                            mode != GreedyMode::radio_only);
            if (!found) continue;
            const double score = mode == GreedyMode::joint ? found->saving_j / found->exec_time_s : found->saving_j;
            if (!best || score > best_score) {
                best = std::move(found);
                best_user = i;
                best_score = score;
            }
        }
        if (!best) break;
        available = available.without(best->group);
        pending[best_user] = false;
        if (mode == GreedyMode::joint) busy = std::max(best->plan.tx_time_s, busy) + best->exec_time_s;
        offloads.push_back(Offload{best_user, std::move(best->plan), best->exec_time_s});
    }

    // Leftover subcarriers go one at a time to the offloaded user whose energy drops most;
    // ties favour the lowest user index.
    std::vector<std::size_t> by_user(offloads.size());
    std::iota(by_user.begin(), by_user.end(), std::size_t{0});
    std::sort(by_user.begin(), by_user.end(),
              [&](std::size_t a, std::size_t b) { return offloads[a].user < offloads[b].user; });

    for (std::size_t j : available) {
        std::optional<TransmissionPlan> best;
        std::size_t best_k = 0;
        double best_drop = 0.0;
        for (std::size_t k : by_user) {
            const Offload& o = offloads[k];
            auto candidate = plan_transmission(s, o.user, o.plan.group.with(j));
            if (!candidate) continue;
            const double drop = o.plan.tx_energy_j - candidate->tx_energy_j;
            if (!(drop > 0.0) || (best && !(drop > best_drop))) continue;
            if (!append_allowed(s, mode, offloads, k, *candidate)) continue;
            best = std::move(candidate);
            best_k = k;
            best_drop = drop;
        }
        if (best) offloads[best_k].plan = std::move(*best);
    }
    return offloads;
}

void commit(Assignment& a, const TransmissionPlan& plan, std::size_t user, bool with_power) {
    const auto& idx = plan.group.indices();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        a.subcarrier_map(user, idx[k]) = 1;
        a.power_map(user, idx[k]) = with_power ? plan.powers.per_subcarrier_w[k] : 0.0;
    }
}

Assignment assignment_in_order(const Scenario& s, const std::vector<Offload>& offloads) {
    Assignment a = Assignment::all_local(s.num_users(), s.num_subcarriers());
    for (std::size_t k = 0; k < offloads.size(); ++k) {
        const Offload& o = offloads[k];
        commit(a, o.plan, o.user, true);
        a.offload_flags[o.user] = true;
        a.exec_order[o.user] = k + 1;
    }
    return a;
}

}  // namespace

Schedule local_only(const Scenario& scenario) {
    scenario.validate();
    Assignment a = Assignment::all_local(scenario.num_users(), scenario.num_subcarriers());
    ScheduleOutcome out = evaluate(a, scenario);
    return Schedule{std::move(a), std::move(out)};
}

Schedule min_group_allocate(const Scenario& scenario) {
    Assignment a = assignment_in_order(scenario, greedy_allocate(scenario, GreedyMode::radio_only));
    ScheduleOutcome out = evaluate(a, scenario, CpuModel::unlimited);
    return Schedule{std::move(a), std::move(out)};
}

Schedule joint_allocate(const Scenario& scenario) {
    Assignment a = assignment_in_order(scenario, greedy_allocate(scenario, GreedyMode::joint));
    ScheduleOutcome out = evaluate(a, scenario, CpuModel::limited);
    return Schedule{std::move(a), std::move(out)};
}

Schedule per_resource_allocate(const Scenario& scenario, std::size_t dp_cap) {
    const std::vector<Offload> offloads = greedy_allocate(scenario, GreedyMode::per_resource);

    std::vector<DpCandidate> candidates;
    candidates.reserve(offloads.size());
    for (const Offload& o : offloads) {
        const double local = local_energy(scenario.jobs[o.user], scenario.energy_model);
        candidates.push_back(
            DpCandidate{local - o.plan.tx_energy_j, o.plan.tx_time_s, o.exec_time_s, scenario.jobs[o.user].deadline_s});
    }
    const DpResult dp = dp_cpu_schedule(candidates, dp_cap);

    Assignment a = Assignment::all_local(scenario.num_users(), scenario.num_subcarriers());
    // Rejected users keep their subcarriers but transmit nothing.
    for (const Offload& o : offloads) commit(a, o.plan, o.user, false);
    for (std::size_t rank = 0; rank < dp.exec_order.size(); ++rank) {
        const Offload& o = offloads[dp.exec_order[rank]];
        commit(a, o.plan, o.user, true);
        a.offload_flags[o.user] = true;
        a.exec_order[o.user] = rank + 1;
    }
    ScheduleOutcome out = evaluate(a, scenario, CpuModel::limited);
    return Schedule{std::move(a), std::move(out)};
}

}  // namespace mecsched
