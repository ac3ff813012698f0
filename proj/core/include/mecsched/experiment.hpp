#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mecsched/scenario.hpp"
#include "mecsched/schedulers.hpp"

namespace mecsched {

enum class SweepVariable { num_users, cell_radius_km, cloudlet_freq_hz };

enum class Policy { min_group, per_resource, joint, opt_unconstrained, opt_constrained, local_only };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Policy p);
std::optional<SweepVariable> parse_sweep_variable(std::string_view name);
std::optional<Policy> parse_policy(std::string_view name);
bool is_exhaustive(Policy p);

/// Largest instance the exhaustive baselines are allowed to run on.
struct ExhaustiveCap {
    std::size_t max_users = 4;
    std::size_t max_subcarriers = 4;
};

struct ExperimentSpec {
    std::string name = "experiment";
    ScenarioConfig base_config;
    SweepVariable sweep_variable = SweepVariable::num_users;
    std::vector<double> sweep_values;
    std::vector<Policy> policies;
    std::size_t trials = 200;
    std::uint64_t master_seed = 1;
    ExhaustiveCap cap;
    /// When set, exhaustive policies are silently dropped at sweep points beyond the cap
    /// instead of refusing the whole experiment.
    bool skip_exhaustive_beyond_cap = false;
    /// Wall time is nondeterministic; rows carry 0 unless this is set.
    bool record_wall_time = false;
    unsigned threads = 1;

    /// Throws std::invalid_argument with a diagnostic on any refusal.
    void validate() const;
};

struct ResultRow {
    double sweep_value = 0.0;
    Policy policy = Policy::local_only;
    std::size_t trial_index = 0;
    double total_energy_j = 0.0;
    double total_saving_j = 0.0;
    std::size_t offload_count = 0;
    double wall_time_s = 0.0;
    /// Position of sweep_value in ExperimentSpec::sweep_values, used for ordering.
    std::size_t sweep_index = 0;
};

struct SummaryRow {
    double sweep_value = 0.0;
    Policy policy = Policy::local_only;
    std::size_t trials = 0;
    double mean_total_energy_j = 0.0;
    double se_total_energy_j = 0.0;
    double mean_total_saving_j = 0.0;
    double se_total_saving_j = 0.0;
    double mean_offload_count = 0.0;
    double se_offload_count = 0.0;
};

/// Seed of one trial. The sweep point is deliberately not mixed in, so every
/// sweep value of a trial draws from the same random stream.
std::uint64_t child_seed(std::uint64_t master_seed, std::size_t trial_index);

/// Base config with the sweep variable set to `value`.
ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable variable, double value);

/// Runs one policy on one scenario.
Schedule run_policy(Policy policy, const Scenario& scenario);

/// One row per (sweep value, policy, trial), sorted by sweep index, policy, trial.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Per-(sweep value, policy) means and standard errors, in row order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

inline constexpr std::string_view kDetailHeader =
    "sweep_value,policy,trial,total_energy_j,total_saving_j,offload_count,wall_time_s";
inline constexpr std::string_view kSummaryHeader =
    "sweep_value,policy,trials,mean_total_energy_j,se_total_energy_j,mean_total_saving_j,se_total_saving_j,"
    "mean_offload_count,se_offload_count";

std::string format_detail_csv(const std::vector<ResultRow>& rows);
std::string format_summary_csv(const std::vector<SummaryRow>& rows);

struct EmittedFiles {
    std::filesystem::path detail;
    std::filesystem::path summary;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>_summary.csv. Refuses empty input
/// (std::invalid_argument); throws std::runtime_error when a file cannot be written.
EmittedFiles emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& dir,
                          const std::string& stem);

struct FigurePreset {
    std::string name;
    std::vector<ExperimentSpec> runs;
};

/// fig2 (energy vs users), fig3 (offload count vs users), fig4 (radius), fig5 (cloudlet frequency, M = 3 and 7).
/// Each preset starts from `base` and overrides only the settings its figure pins down.
std::vector<FigurePreset> figure_presets(const ScenarioConfig& base = ScenarioConfig{});
std::optional<FigurePreset> find_preset(std::string_view name, const ScenarioConfig& base = ScenarioConfig{});

}  // namespace mecsched
