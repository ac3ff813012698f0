#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mecsched/energy_phy.hpp"
#include "mecsched/matrix.hpp"
#include "mecsched/scenario.hpp"

namespace mecsched {

/// Raised when an exponential search would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decision variables of one cell: subcarrier map W, power map P, offload flags alpha, execution order q.
struct Assignment {
    Matrix<std::uint8_t> subcarrier_map;
    Matrix<double> power_map;
    std::vector<bool> offload_flags;
    ExecOrder exec_order;

    static Assignment all_local(std::size_t users, std::size_t subcarriers);

    [[nodiscard]] std::size_t users() const noexcept { return offload_flags.size(); }
    [[nodiscard]] std::size_t subcarriers() const noexcept { return subcarrier_map.cols(); }
    /// Subcarriers marked for `user` in the subcarrier map.
    [[nodiscard]] SubcarrierGroup group_of(std::size_t user) const;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Constraint identifiers reported by evaluate().
inline constexpr const char* kExclusiveSubcarrier = "9a";  // a subcarrier serves at most one user
inline constexpr const char* kDistinctOrder = "9b";        // ranks distinct, only offloaded users ranked
inline constexpr const char* kPowerBudget = "9c";          // row power <= device maximum
inline constexpr const char* kPowerOutsideGroup = "9d";    // power only on assigned subcarriers
inline constexpr const char* kDeadline = "9g";             // offloaded job completes by its deadline

struct ScheduleOutcome {
    std::vector<double> per_user_energy_j;
    std::vector<double> per_user_local_energy_j;
    /// Completion under the overlapped timeline; nullopt for local users.
    std::vector<std::optional<double>> per_user_completion_s;
    /// Diagnostic: transmit + queue + exec, with no overlap of transmission and queuing.
    std::vector<std::optional<double>> per_user_additive_completion_s;
    double total_energy_j = 0.0;
    double total_saving_j = 0.0;
    std::size_t offload_count = 0;
    bool feasible = true;
    std::vector<std::string> violations;
};

struct Schedule {
    Assignment assignment;
    ScheduleOutcome outcome;
};

/// Which deadline rule applies to offloaded jobs.
enum class CpuModel {
    /// Jobs queue on the cloudlet CPU: completion = max(T_t, previous completion) + T_c.
    limited,
    /// Cloudlet capacity is unbounded and execution negligible: completion = T_t.
    unlimited,
};

/// Recomputes every energy and time of `assignment` from the scenario and
/// checks all constraints. Throws std::domain_error on dimension mismatch.
ScheduleOutcome evaluate(const Assignment& assignment, const Scenario& scenario, CpuModel cpu = CpuModel::limited);

struct MinimumGroup {
    SubcarrierGroup group;
    TransmissionPlan plan;
    double saving_j = 0.0;
    double exec_time_s = 0.0;
};

/// Grows a group from `available` in order of decreasing gain for `user` and
/// returns the first one whose plan saves energy and meets the deadline test:
/// T_t <= T without exec time, else max(T_t, busy_until) + T_c <= T.
std::optional<MinimumGroup> find_minimum_group(const Scenario& scenario, std::size_t user,
                                               const SubcarrierGroup& available, double busy_until_s,
                                               bool include_exec_time);

// ---------------------------------------------------------------------------
// Cloudlet CPU scheduling

struct DpCandidate {
    double saving_j = 0.0;
    double tx_time_s = 0.0;
    double exec_time_s = 0.0;
    double deadline_s = 0.0;
};

struct DpResult {
    std::vector<std::size_t> accepted;    // candidate indices, ascending
    std::vector<std::size_t> exec_order;  // accepted candidates in execution order
    double total_saving_j = 0.0;
    double completion_time_s = 0.0;
};

inline constexpr std::size_t kDefaultDpCap = 20;

/// Subset dynamic program over (saving, busy-until) pairs, one entry per subset,
/// choosing for each subset the best last-executed job. Throws BudgetExceeded
/// when there are more than `cap` candidates.
DpResult dp_cpu_schedule(std::span<const DpCandidate> candidates, std::size_t cap = kDefaultDpCap);

// ---------------------------------------------------------------------------
// Policies. Every policy returns its assignment together with evaluate()'s outcome,
// scored under the CPU model the policy plans for: min_group_allocate and the
// unconstrained exhaustive search use CpuModel::unlimited, the rest CpuModel::limited.

/// Every job runs locally.
Schedule local_only(const Scenario& scenario);

/// Radio-only greedy: offload the user with the largest saving on its minimum
/// group, repeat, then hand leftover subcarriers to the user they help most.
Schedule min_group_allocate(const Scenario& scenario);

/// Minimum-group subcarrier allocation (checking T_t + T_c) followed by the
/// CPU dynamic program; rejected users keep their subcarriers unused.
Schedule per_resource_allocate(const Scenario& scenario, std::size_t dp_cap = kDefaultDpCap);

/// Greedy on saving per second of cloudlet CPU, tracking the cloudlet's busy-until time.
Schedule joint_allocate(const Scenario& scenario);

struct ExhaustiveLimits {
    /// Upper bound on (M+1)^N enumerated subcarrier maps.
    std::uint64_t max_maps = 1'000'000;
    std::size_t dp_cap = kDefaultDpCap;
};

/// Best of all (M+1)^N subcarrier maps. Unconstrained: every beneficial user offloads
/// (Opt-I). Constrained: beneficial users go through dp_cpu_schedule (Opt-II).
Schedule exhaustive_optimal(const Scenario& scenario, bool cpu_constrained, const ExhaustiveLimits& limits = {});

}  // namespace mecsched
