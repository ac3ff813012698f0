#include "mecsched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mecsched {

namespace {

constexpr std::pair<SweepVariable, std::string_view> kSweepNames[] = {
    {SweepVariable::num_users, "num_users"},
    {SweepVariable::cell_radius_km, "cell_radius_km"},
    {SweepVariable::cloudlet_freq_hz, "cloudlet_freq_hz"},
};

constexpr std::pair<Policy, std::string_view> kPolicyNames[] = {
    {Policy::min_group, "min_group"},
    {Policy::per_resource, "per_resource"},
    {Policy::joint, "joint"},
    {Policy::opt_unconstrained, "opt_unconstrained"},
    {Policy::opt_constrained, "opt_constrained"},
    {Policy::local_only, "local_only"},
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool exhaustive_allowed(const ScenarioConfig& cfg, const ExhaustiveCap& cap) {
    return cfg.num_users <= cap.max_users && cfg.num_subcarriers <= cap.max_subcarriers;
}

}  // namespace

std::string_view to_string(SweepVariable v) {
    for (const auto& [key, name] : kSweepNames) {
        if (key == v) return name;
    }
    return "?";
}

std::string_view to_string(Policy p) {
    for (const auto& [key, name] : kPolicyNames) {
        if (key == p) return name;
    }
    return "?";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
    for (const auto& [key, n] : kSweepNames) {
        if (n == name) return key;
    }
    return std::nullopt;
}

std::optional<Policy> parse_policy(std::string_view name) {
    for (const auto& [key, n] : kPolicyNames) {
        if (n == name) return key;
    }
    return std::nullopt;
}

bool is_exhaustive(Policy p) { return p == Policy::opt_unconstrained || p == Policy::opt_constrained; }

ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable variable, double value) {
    ScenarioConfig cfg = base;
    switch (variable) {
        case SweepVariable::num_users:
            if (!(value >= 1.0) || value != std::floor(value)) {
                throw std::invalid_argument("num_users sweep values must be positive integers");
            }
            cfg.num_users = static_cast<std::size_t>(value);
            break;
        case SweepVariable::cell_radius_km:
            cfg.cell_radius_km = value;
            break;
        case SweepVariable::cloudlet_freq_hz:
            cfg.cloudlet_freq_hz = value;
            break;
    }
    return cfg;
}

void ExperimentSpec::validate() const {
    if (sweep_values.empty()) throw std::invalid_argument("experiment '" + name + "': no sweep values");
    if (trials == 0) throw std::invalid_argument("experiment '" + name + "': trials must be >= 1");
    if (policies.empty()) throw std::invalid_argument("experiment '" + name + "': no policies");
    for (std::size_t a = 0; a < policies.size(); ++a) {
        for (std::size_t b = a + 1; b < policies.size(); ++b) {
            if (policies[a] == policies[b]) {
                throw std::invalid_argument("experiment '" + name + "': duplicate policy " +
                                            std::string(to_string(policies[a])));
            }
        }
    }
    for (double v : sweep_values) {
        const ScenarioConfig cfg = apply_sweep(base_config, sweep_variable, v);
        cfg.validate();
        if (skip_exhaustive_beyond_cap || exhaustive_allowed(cfg, cap)) continue;
        for (Policy p : policies) {
            if (!is_exhaustive(p)) continue;
            throw std::invalid_argument("experiment '" + name + "': policy " + std::string(to_string(p)) +
                                        " needs M <= " + std::to_string(cap.max_users) + " and N <= " +
                                        std::to_string(cap.max_subcarriers) + ", but " +
                                        std::string(to_string(sweep_variable)) + "=" + format_double(v) +
                                        " gives M=" + std::to_string(cfg.num_users) +
                                        ", N=" + std::to_string(cfg.num_subcarriers));
        }
    }
}

std::uint64_t child_seed(std::uint64_t master_seed, std::size_t trial_index) {
    return splitmix64(splitmix64(master_seed) ^ static_cast<std::uint64_t>(trial_index));
}

Schedule run_policy(Policy policy, const Scenario& scenario) {
    switch (policy) {
        case Policy::min_group:
            return min_group_allocate(scenario);
        case Policy::per_resource:
            return per_resource_allocate(scenario);
        case Policy::joint:
            return joint_allocate(scenario);
        case Policy::opt_unconstrained:
            return exhaustive_optimal(scenario, false);
        case Policy::opt_constrained:
            return exhaustive_optimal(scenario, true);
        case Policy::local_only:
            return local_only(scenario);
    }
    throw std::invalid_argument("unknown policy");
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    struct Point {
        std::size_t sweep_index;
        std::size_t trial;
    };
    std::vector<ScenarioConfig> configs;
    std::vector<std::vector<Policy>> policies_at;
    for (double v : spec.sweep_values) {
        configs.push_back(apply_sweep(spec.base_config, spec.sweep_variable, v));
        std::vector<Policy> ps;
        for (Policy p : spec.policies) {
            if (!is_exhaustive(p) || exhaustive_allowed(configs.back(), spec.cap)) ps.push_back(p);
        }
        policies_at.push_back(std::move(ps));
    }
    std::vector<Point> points;
    for (std::size_t s = 0; s < configs.size(); ++s) {
        for (std::size_t t = 0; t < spec.trials; ++t) points.push_back(Point{s, t});
    }

    std::vector<std::vector<ResultRow>> per_point(points.size());
    const auto run_point = [&](std::size_t k) {
        const Point pt = points[k];
        ScenarioConfig cfg = configs[pt.sweep_index];
        cfg.rng_seed = child_seed(spec.master_seed, pt.trial);
        // All policies at this point see the same instance.
        const Scenario scenario = generate_scenario(cfg);
        for (Policy p : policies_at[pt.sweep_index]) {
            const auto start = std::chrono::steady_clock::now();
            const Schedule result = run_policy(p, scenario);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            ResultRow row;
            row.sweep_value = spec.sweep_values[pt.sweep_index];
            row.sweep_index = pt.sweep_index;
            row.policy = p;
            row.trial_index = pt.trial;
            row.total_energy_j = result.outcome.total_energy_j;
            row.total_saving_j = result.outcome.total_saving_j;
            row.offload_count = result.outcome.offload_count;
            row.wall_time_s = spec.record_wall_time ? elapsed.count() : 0.0;
            per_point[k].push_back(row);
        }
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(spec.threads, static_cast<unsigned>(points.size())));
    if (workers == 1) {
        for (std::size_t k = 0; k < points.size(); ++k) run_point(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t k = next++; k < points.size(); k = next++) run_point(k);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::vector<ResultRow> rows;
    for (auto& batch : per_point) rows.insert(rows.end(), batch.begin(), batch.end());
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.sweep_index != b.sweep_index) return a.sweep_index < b.sweep_index;
        if (a.policy != b.policy) return a.policy < b.policy;
        return a.trial_index < b.trial_index;
    });
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    std::size_t begin = 0;
    while (begin < rows.size()) {
        std::size_t end = begin;
        while (end < rows.size() && rows[end].sweep_index == rows[begin].sweep_index &&
               rows[end].policy == rows[begin].policy) {
            ++end;
        }
        const auto n = static_cast<double>(end - begin);
        const auto mean_se = [&](auto field) {
            double sum = 0.0;
            for (std::size_t k = begin; k < end; ++k) sum += field(rows[k]);
            const double mean = sum / n;
            double ss = 0.0;
            for (std::size_t k = begin; k < end; ++k) ss += (field(rows[k]) - mean) * (field(rows[k]) - mean);
            const double se = end - begin > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
            return std::pair{mean, se};
        };
        SummaryRow s;
        s.sweep_value = rows[begin].sweep_value;
        s.policy = rows[begin].policy;
        s.trials = end - begin;
        std::tie(s.mean_total_energy_j, s.se_total_energy_j) = mean_se([](const ResultRow& r) { return r.total_energy_j; });
        std::tie(s.mean_total_saving_j, s.se_total_saving_j) = mean_se([](const ResultRow& r) { return r.total_saving_j; });
        std::tie(s.mean_offload_count, s.se_offload_count) =
            mean_se([](const ResultRow& r) { return static_cast<double>(r.offload_count); });
        out.push_back(s);
        begin = end;
    }
    return out;
}

std::string format_detail_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kDetailHeader << '\n';
    for (const ResultRow& r : rows) {
        out << format_double(r.sweep_value) << ',' << to_string(r.policy) << ',' << r.trial_index << ','
            << format_double(r.total_energy_j) << ',' << format_double(r.total_saving_j) << ',' << r.offload_count
            << ',' << format_double(r.wall_time_s) << '\n';
    }
    return out.str();
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << kSummaryHeader << '\n';
    for (const SummaryRow& s : rows) {
        out << format_double(s.sweep_value) << ',' << to_string(s.policy) << ',' << s.trials << ','
            << format_double(s.mean_total_energy_j) << ',' << format_double(s.se_total_energy_j) << ','
            << format_double(s.mean_total_saving_j) << ',' << format_double(s.se_total_saving_j) << ','
            << format_double(s.mean_offload_count) << ',' << format_double(s.se_offload_count) << '\n';
    }
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

EmittedFiles emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& dir,
                          const std::string& stem) {
    if (rows.empty()) throw std::invalid_argument("emit_results: no rows to write");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    EmittedFiles files{dir / (stem + ".csv"), dir / (stem + "_summary.csv")};
    write_file(files.detail, format_detail_csv(rows));
    write_file(files.summary, format_summary_csv(summarize(rows)));
    return files;
}

namespace {

constexpr Policy kAllPolicies[] = {Policy::min_group,         Policy::per_resource,    Policy::joint,
                                   Policy::opt_unconstrained, Policy::opt_constrained, Policy::local_only};

ExperimentSpec preset_base(std::string name, const ScenarioConfig& base) {
    ExperimentSpec spec;
    spec.base_config = base;
    spec.name = std::move(name);
    spec.policies.assign(std::begin(kAllPolicies), std::end(kAllPolicies));
    spec.trials = 200;
    spec.master_seed = 2017;
    spec.skip_exhaustive_beyond_cap = true;
    spec.base_config.num_subcarriers = 4;
    spec.base_config.cell_radius_km = 0.2;
    spec.base_config.cloudlet_freq_hz = 600e6;
    return spec;
}

ExperimentSpec users_sweep(std::string name, const ScenarioConfig& base) {
    ExperimentSpec spec = preset_base(std::move(name), base);
    spec.sweep_variable = SweepVariable::num_users;
    spec.sweep_values = {1, 2, 3, 4, 5, 6, 7, 8};
    return spec;
}

}  // namespace

std::vector<FigurePreset> figure_presets(const ScenarioConfig& base) {
    std::vector<FigurePreset> presets;
    presets.push_back(FigurePreset{"fig2", {users_sweep("fig2", base)}});
    presets.push_back(FigurePreset{"fig3", {users_sweep("fig3", base)}});

    ExperimentSpec radius = preset_base("fig4", base);
    radius.base_config.num_users = 4;
    radius.sweep_variable = SweepVariable::cell_radius_km;
    radius.sweep_values = {0.1, 0.2, 0.3, 0.4};
    presets.push_back(FigurePreset{"fig4", {radius}});

    FigurePreset freq{"fig5", {}};
    for (std::size_t users : {std::size_t{3}, std::size_t{7}}) {
        ExperimentSpec spec = preset_base("fig5_m" + std::to_string(users), base);
        spec.base_config.num_users = users;
        spec.base_config.num_subcarriers = 3;
        spec.sweep_variable = SweepVariable::cloudlet_freq_hz;
        spec.sweep_values = {200e6, 400e6, 600e6, 800e6, 1000e6, 1200e6};
        freq.runs.push_back(spec);
    }
    presets.push_back(freq);
    return presets;
}

std::optional<FigurePreset> find_preset(std::string_view name, const ScenarioConfig& base) {
    for (FigurePreset& p : figure_presets(base)) {
        if (p.name == name) return p;
    }
    return std::nullopt;
}

}  // namespace mecsched
