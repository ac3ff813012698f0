// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.
//
//   acceptance [--only N] [--artifacts DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mecsched/experiment.hpp"
#include "mecsched/schedulers.hpp"
#include "oracles.hpp"

using namespace mecsched;
namespace fs = std::filesystem;

namespace {

// Floating-point sums of the same savings in different orders may differ in the last bits.
constexpr double kSavingMatchRel = 1e-12;
constexpr double kKktResidual = 1e-9;
// Grid points can coincide with the water-filling solution; P * k / 100 then differs from it by rounding only.
constexpr double kRateEqualityRel = 1e-12;
constexpr double kGridPowerTol = 1e-3;
constexpr double kEq3Tol = 1e-9;
constexpr double kNearOptimalRatio = 0.90;
constexpr double kJointOverPerResource = 1.30;
constexpr double kOffloadReduction = 0.25;
constexpr double kSaturationRatio = 0.20;

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Context {
    fs::path artifacts;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Means per (sweep value, policy).
std::map<std::pair<double, Policy>, SummaryRow> summary_index(const std::vector<ResultRow>& rows) {
    std::map<std::pair<double, Policy>, SummaryRow> out;
    for (const SummaryRow& s : summarize(rows)) out[{s.sweep_value, s.policy}] = s;
    return out;
}

Verdict dp_oracle(const Context& ctx) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(0xD1CE);
    std::size_t mismatches = 0;
    bool exceeded = false;
    for (int k = 0; k < 500; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 7.0);
        std::vector<DpCandidate> c(n);
        for (DpCandidate& x : c) {
            x.saving_j = uniform(rng, Interval{0.05, 2.0});
            x.tx_time_s = uniform(rng, Interval{0.0, 0.08});
            x.exec_time_s = uniform(rng, Interval{0.005, 0.05});
            x.deadline_s = uniform(rng, Interval{0.03, 0.2});
        }
        std::vector<oracle::CpuJob> jobs;
        for (const DpCandidate& x : c) jobs.push_back({x.saving_j, x.tx_time_s, x.exec_time_s, x.deadline_s});
        const double dp = dp_cpu_schedule(c).total_saving_j;
        const double best = oracle::best_cpu_schedule(jobs);
        const double tol = kSavingMatchRel * std::max(1.0, best);
        if (dp > best + tol) exceeded = true;
        if (std::abs(dp - best) > tol) {
            ++mismatches;
            fs::create_directories(ctx.artifacts);
            std::ofstream out(ctx.artifacts / ("dp_counterexample_" + std::to_string(k) + ".txt"));
            out.precision(17);
            out << "# saving tx_time exec_time deadline\n";
            for (const DpCandidate& x : c) {
                out << x.saving_j << ' ' << x.tx_time_s << ' ' << x.exec_time_s << ' ' << x.deadline_s << '\n';
            }
            out << "# dp " << dp << " oracle " << best << '\n';
        }
    }
    const double elapsed = seconds_since(start);
    return {!exceeded && elapsed < 60.0,
            "500 instances, " + std::to_string(mismatches) + " mismatches (documented), DP above oracle: " +
                (exceeded ? "yes" : "no") + ", " + fmt(elapsed, 3) + " s"};
}

Verdict water_filling_oracle(const Context&) {
    Rng rng(0xFA11);
    double worst_kkt = 0.0;
    std::size_t grid_beaten = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 2 + k % 2;
        std::vector<double> g(n);
        for (double& x : g) x = std::pow(10.0, uniform(rng, Interval{-1.0, 2.0}));
        const double total = uniform(rng, Interval{0.01, 1.0});
        const PowerAllocation alloc = water_fill(g, total);
        const auto& p = alloc.per_subcarrier_w;

        // Stationarity with a common level on active channels, complementary slackness on the rest.
        double level = 0.0;
        std::size_t active = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (p[j] > 0.0) {
                level += p[j] + 1.0 / g[j];
                ++active;
            }
        }
        level /= static_cast<double>(active);
        double residual = std::abs(alloc.total() - total) / total;
        for (std::size_t j = 0; j < n; ++j) {
            residual = std::max(residual, p[j] < 0.0 ? -p[j] : 0.0);
            if (p[j] > 0.0) {
                residual = std::max(residual, std::abs(p[j] + 1.0 / g[j] - level) / level);
            } else {
                residual = std::max(residual, std::max(0.0, level - 1.0 / g[j]) / level);
            }
        }
        worst_kkt = std::max(worst_kkt, residual);
        const double rate = aggregate_rate(alloc, g, 18750.0);
        if (rate < oracle::best_simplex_grid_rate(g, total, 18750.0) * (1.0 - kRateEqualityRel)) ++grid_beaten;
    }
    return {worst_kkt <= kKktResidual && grid_beaten == 0,
            "1000 groups, worst KKT residual " + fmt(worst_kkt, 3) + ", grid allocations beating water-fill: " +
                std::to_string(grid_beaten)};
}

Verdict bisection_power(const Context&) {
    Rng rng(0xB15E);
    double worst_grid = 0.0;
    double worst_eq3 = 0.0;
    std::size_t feasibility_disagreements = 0;
    std::size_t feasible = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 1 + k % 3;
        std::vector<double> g(n);
        for (double& x : g) x = std::pow(10.0, uniform(rng, Interval{-0.5, 2.5}));
        const LinkRequest req{18750.0, uniform(rng, Interval{900.0, 1100.0}), uniform(rng, Interval{0.02, 0.5}), 1.0,
                              0.05};
        const auto plan = optimal_transmit_power(g, req);
        const auto grid = oracle::grid_optimal_power(g, req.bandwidth_hz, req.data_bits, req.deadline_s,
                                                     req.max_power_w, req.circuit_power_w);
        if (plan.has_value() != grid.has_value()) {
            ++feasibility_disagreements;
            continue;
        }
        if (!plan) continue;
        ++feasible;
        worst_grid = std::max(worst_grid, std::abs(plan->total_power_w - grid->power_w));
        const double expected = std::max(energy_efficient_power(g, req), *threshold_power(g, req));
        worst_eq3 = std::max(worst_eq3, std::abs(plan->total_power_w - expected));
        if (plan->total_power_w > req.max_power_w + kEq3Tol) worst_eq3 = INFINITY;
    }
    return {worst_grid <= kGridPowerTol && worst_eq3 <= kEq3Tol && feasibility_disagreements == 0 && feasible > 0,
            std::to_string(feasible) + " feasible of 1000, worst |p - grid| " + fmt(worst_grid, 3) +
                " W, worst |p - max(p*, pt)| " + fmt(worst_eq3, 3) + " W, feasibility disagreements " +
                std::to_string(feasibility_disagreements)};
}

Verdict near_optimality(const Context&) {
    ExperimentSpec spec = find_preset("fig2")->runs.front();
    spec.sweep_values = {1, 2, 3, 4};
    spec.policies = {Policy::min_group, Policy::joint, Policy::opt_unconstrained, Policy::opt_constrained};
    spec.trials = 100;
    const auto idx = summary_index(run_experiment(spec));
    bool pass = true;
    std::string detail;
    for (double m : spec.sweep_values) {
        const double mga = idx.at({m, Policy::min_group}).mean_total_saving_j;
        const double opt1 = idx.at({m, Policy::opt_unconstrained}).mean_total_saving_j;
        const double joint = idx.at({m, Policy::joint}).mean_total_saving_j;
        const double opt2 = idx.at({m, Policy::opt_constrained}).mean_total_saving_j;
        const double r1 = opt1 > 0.0 ? mga / opt1 : 1.0;
        const double r2 = opt2 > 0.0 ? joint / opt2 : 1.0;
        pass = pass && r1 >= kNearOptimalRatio && r2 >= kNearOptimalRatio;
        detail += "M=" + fmt(m) + " mga/opt1 " + fmt(r1) + " joint/opt2 " + fmt(r2) + "; ";
    }
    return {pass, detail};
}

std::vector<ResultRow> fig2_at_eight_users(const std::vector<Policy>& policies) {
    ExperimentSpec spec = find_preset("fig2")->runs.front();
    spec.sweep_values = {8};
    spec.policies = policies;
    spec.trials = 200;
    return run_experiment(spec);
}

Verdict joint_vs_per_resource(const Context&) {
    const auto idx = summary_index(fig2_at_eight_users({Policy::per_resource, Policy::joint}));
    const double per = idx.at({8.0, Policy::per_resource}).mean_total_saving_j;
    const double joint = idx.at({8.0, Policy::joint}).mean_total_saving_j;
    const double ratio = joint / per;
    return {ratio >= kJointOverPerResource, "M=8, 200 trials: joint " + fmt(joint) + " J, per-resource " + fmt(per) +
                                                " J, ratio " + fmt(ratio) + " (need >= " +
                                                fmt(kJointOverPerResource) + ")"};
}

Verdict offload_reduction(const Context&) {
    const auto idx = summary_index(fig2_at_eight_users({Policy::min_group, Policy::per_resource, Policy::joint}));
    const double without = idx.at({8.0, Policy::min_group}).mean_offload_count;
    const double with = idx.at({8.0, Policy::joint}).mean_offload_count;
    const double per = idx.at({8.0, Policy::per_resource}).mean_offload_count;
    const double reduction = 1.0 - with / without;

    // Optimal pair for reference; the default cap stops at M = 4, so raise it for this diagnostic.
    ExperimentSpec opt = find_preset("fig2")->runs.front();
    opt.sweep_values = {8};
    opt.policies = {Policy::opt_unconstrained, Policy::opt_constrained};
    opt.trials = 200;
    opt.cap = ExhaustiveCap{8, 4};
    const auto oidx = summary_index(run_experiment(opt));

    return {with < without && reduction >= kOffloadReduction,
            "M=8, f_c=600 MHz: joint " + fmt(with) + " vs min-group " + fmt(without) + " offloads, reduction " +
                fmt(100.0 * reduction, 3) + "% (need >= " + fmt(100.0 * kOffloadReduction, 3) +
                "%); diagnostics: per-resource " + fmt(per) + ", opt-II " +
                fmt(oidx.at({8.0, Policy::opt_constrained}).mean_offload_count) + " vs opt-I " +
                fmt(oidx.at({8.0, Policy::opt_unconstrained}).mean_offload_count)};
}

Verdict radius_trend(const Context&) {
    ExperimentSpec spec = find_preset("fig4")->runs.front();
    spec.policies = {Policy::joint};
    spec.trials = 200;
    const auto idx = summary_index(run_experiment(spec));
    std::size_t violations = 0;
    bool within_se = true;
    std::string detail = "joint saving";
    for (std::size_t k = 0; k < spec.sweep_values.size(); ++k) {
        const SummaryRow& cur = idx.at({spec.sweep_values[k], Policy::joint});
        detail += " r=" + fmt(spec.sweep_values[k]) + ":" + fmt(cur.mean_total_saving_j, 5);
        if (k == 0) continue;
        const SummaryRow& prev = idx.at({spec.sweep_values[k - 1], Policy::joint});
        if (cur.mean_total_saving_j > prev.mean_total_saving_j) {
            ++violations;
            const double se = std::hypot(cur.se_total_saving_j, prev.se_total_saving_j);
            if (cur.mean_total_saving_j - prev.mean_total_saving_j > se) within_se = false;
        }
    }
    return {violations <= 1 && within_se, detail + ", increasing pairs " + std::to_string(violations)};
}

Verdict frequency_saturation(const Context&) {
    const auto runs = find_preset("fig5")->runs;
    std::map<std::size_t, std::map<double, double>> saving;
    for (ExperimentSpec spec : runs) {
        spec.policies = {Policy::joint};
        for (const SummaryRow& s : summarize(run_experiment(spec))) {
            saving[spec.base_config.num_users][s.sweep_value] = s.mean_total_saving_j;
        }
    }
    const auto& m3 = saving.at(3);
    bool monotone = true;
    for (auto it = std::next(m3.begin()); it != m3.end(); ++it) {
        if (it->second < std::prev(it)->second) monotone = false;
    }
    const double low = m3.at(800e6) - m3.at(200e6);
    const double high3 = m3.at(1200e6) - m3.at(800e6);
    const double high7 = saving.at(7).at(1200e6) - saving.at(7).at(800e6);
    std::string detail = "M=3 joint saving";
    for (const auto& [f, s] : m3) detail += " " + fmt(f / 1e6) + "MHz:" + fmt(s, 5);
    detail += "; M=3 increments 200-800 " + fmt(low) + ", 800-1200 " + fmt(high3) + "; M=7 800-1200 " + fmt(high7);
    return {monotone && high3 < kSaturationRatio * low && high7 > high3, detail};
}

Verdict feasibility_suite(const Context&) {
    const Policy policies[] = {Policy::local_only, Policy::min_group,          Policy::per_resource,
                               Policy::joint,      Policy::opt_unconstrained, Policy::opt_constrained};
    std::size_t runs = 0;
    std::size_t failures = 0;
    std::string first_failure;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        ScenarioConfig cfg;
        cfg.rng_seed = seed;
        cfg.num_users = 1 + seed % 8;
        cfg.num_subcarriers = 1 + (seed / 8) % 5;
        cfg.cell_radius_km = 0.1 * static_cast<double>(1 + (seed / 40) % 4);
        cfg.cloudlet_freq_hz = 200e6 * static_cast<double>(1 + (seed / 160) % 6);
        if (seed % 7 == 0) cfg.noise_psd_dbm_hz = -140.0;
        const Scenario s = generate_scenario(cfg);
        const bool small = cfg.num_users <= 4 && cfg.num_subcarriers <= 4;
        for (Policy p : policies) {
            if (is_exhaustive(p) && !small) continue;
            const Schedule r = run_policy(p, s);
            const CpuModel model =
                p == Policy::min_group || p == Policy::opt_unconstrained ? CpuModel::unlimited : CpuModel::limited;
            const ScheduleOutcome check = evaluate(r.assignment, s, model);
            ++runs;
            if (!check.feasible || !check.violations.empty() || check.total_saving_j < 0.0) {
                ++failures;
                if (first_failure.empty()) first_failure = std::string(to_string(p)) + " seed " + std::to_string(seed);
            }
        }
    }
    return {failures == 0, std::to_string(runs) + " policy runs over 1000 seeds, " + std::to_string(failures) +
                               " with violations" + (first_failure.empty() ? "" : " (first: " + first_failure + ")")};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict determinism(const Context& ctx) {
    std::size_t compared = 0;
    std::string differing;
    for (const FigurePreset& preset : figure_presets()) {
        for (const ExperimentSpec& base : preset.runs) {
            std::string reference;
            for (unsigned pass = 0; pass < 2; ++pass) {
                ExperimentSpec spec = base;
                spec.threads = pass == 0 ? 1 : 2;
                const fs::path dir = ctx.artifacts / ("determinism_run" + std::to_string(pass));
                const auto files = emit_results(run_experiment(spec), dir, spec.name);
                const std::string bytes = slurp(files.detail) + slurp(files.summary);
                if (pass == 0) {
                    reference = bytes;
                } else if (bytes != reference) {
                    differing += " " + spec.name;
                }
            }
            ++compared;
        }
    }
    return {differing.empty(), std::to_string(compared) + " preset runs compared byte for byte" +
                                   (differing.empty() ? "" : ", differing:" + differing)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Verdict(const Context&)> check;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    Context ctx{fs::temp_directory_path() / "mecsched_acceptance"};
    for (int k = 1; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--only" && k + 1 < argc) {
            only = std::atoi(argv[++k]);
        } else if (arg == "--artifacts" && k + 1 < argc) {
            ctx.artifacts = argv[++k];
        } else {
            std::cerr << "usage: acceptance [--only N] [--artifacts DIR]\n";
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "CPU dynamic program matches subset x permutation oracle", dp_oracle},
        {2, "water-filling meets KKT and beats the simplex grid", water_filling_oracle},
        {3, "transmit power matches grid search and max(p*, pt)", bisection_power},
        {4, "greedy policies within 90% of the exhaustive optima", near_optimality},
        {5, "joint saving exceeds per-resource by 30% at M=8", joint_vs_per_resource},
        {6, "CPU constraint cuts offloads by 25% at M=8", offload_reduction},
        {7, "saving non-increasing in cell radius", radius_trend},
        {8, "saving saturates in cloudlet frequency", frequency_saturation},
        {9, "every policy output is feasible", feasibility_suite},
        {10, "preset CSVs are byte-identical across runs", determinism},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check(ctx);
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s: %s [%s] (%.1f s)\n", c.id, v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
