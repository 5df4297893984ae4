// Command-line surface: environment generation, K-process simulation,
// verification suites, and regime classification.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kproc/analytics.hpp"
#include "kproc/clocks.hpp"
#include "kproc/environment.hpp"
#include "kproc/errors.hpp"
#include "kproc/kprocess.hpp"
#include "kproc/schedule.hpp"
#include "kproc/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
    std::string schedule_spec = "list:0.5,0.8,0.9";
    std::size_t family_count = 8;
    std::size_t depth = 2;
    std::size_t breadth = 30;
    double horizon = 10.0;
    std::size_t replicas = 2000;
    std::uint64_t seed = 20240817;
    std::size_t workers = 1;
    std::string out_dir = ".";
    std::string checks = "stable,env-laplace,martingale,conditional-laplace,subordinator,"
                         "adjusted,w-composition,occupation,cycles";
};

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest;
        std::getline(ls, rest);
        const auto start = rest.find_first_not_of(" \t");
        rest = start == std::string::npos ? "" : rest.substr(start);
        if (key == "schedule") cfg.schedule_spec = rest;
        else if (key == "family_count") cfg.family_count = std::stoul(rest);
        else if (key == "depth") cfg.depth = std::stoul(rest);
        else if (key == "breadth") cfg.breadth = std::stoul(rest);
        else if (key == "horizon") cfg.horizon = std::stod(rest);
        else if (key == "replicas") cfg.replicas = std::stoul(rest);
        else if (key == "seed") cfg.seed = std::stoull(rest);
        else if (key == "workers") cfg.workers = std::stoul(rest);
        else if (key == "out") cfg.out_dir = rest;
        else if (key == "checks") cfg.checks = rest;
        else throw std::invalid_argument("unknown config key " + key);
    }
}

kproc::AlphaSchedule schedule_from_spec(const RunConfig& cfg) {
    if (cfg.schedule_spec.rfind("list:", 0) == 0) {
        std::vector<double> alphas;
        std::istringstream in(cfg.schedule_spec.substr(5));
        std::string tok;
        while (std::getline(in, tok, ',')) alphas.push_back(std::stod(tok));
        return kproc::AlphaSchedule::from_alphas(alphas);
    }
    if (cfg.schedule_spec.rfind("family:", 0) == 0) {
        const auto family = kproc::parse_family(cfg.schedule_spec.substr(7));
        return kproc::schedule_from_family(family, cfg.family_count);
    }
    throw std::invalid_argument("schedule spec must start with list: or family:");
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) parts.push_back(tok);
    }
    return parts;
}

int cmd_env(const RunConfig& cfg) {
    const auto schedule = schedule_from_spec(cfg);
    const auto env = kproc::generate_environment(schedule, cfg.depth, cfg.breadth,
                                                 kproc::SeedPlan{cfg.seed});
    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = cfg.out_dir + "/environment.txt";
    kproc::save_environment(path, env);

    std::cout << "environment written to " << path << "\n";
    for (std::size_t k = 1; k <= env.depth(); ++k) {
        double tails = 0.0;
        for (std::uint64_t p = 0; p < env.nodes_at(k - 1); ++p)
            tails += env.tail_mass(k - 1, p);
        std::cout << "level " << k << " gbar_sum " << fmt17(env.level_gbar_sum(k))
                  << " tail_mass_total " << fmt17(tails) << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& env_file) {
    const auto env = kproc::load_environment(env_file);
    const std::size_t depth = std::min(cfg.depth, env.depth());
    const auto realization = kproc::simulate_k_process(env, depth, cfg.horizon,
                                                       kproc::SeedPlan{cfg.seed});
    std::filesystem::create_directories(cfg.out_dir);

    {
        std::ofstream out(cfg.out_dir + "/trajectory.txt", std::ios::binary);
        kproc::write_trajectory(out, realization.trajectory);
    }
    for (std::size_t j = 1; j <= depth; ++j) {
        std::ofstream out(cfg.out_dir + "/clock_level" + std::to_string(j) + ".txt",
                          std::ios::binary);
        const auto& path = realization.clocks[j - 1];
        out << "# level " << j << " horizon " << fmt17(path.horizon()) << " seed "
            << cfg.seed << "\n";
        for (std::size_t i = 0; i < path.jump_count(); ++i)
            out << fmt17(path.jump_time(i)) << ' ' << fmt17(path.cumulative(i)) << "\n";
    }
    {
        std::ofstream out(cfg.out_dir + "/occupation.txt", std::ios::binary);
        double covered = 0.0;
        for (std::uint32_t x = 1; x <= env.breadth() && cfg.horizon > 0.0; ++x) {
            const double f =
                kproc::occupation_fraction(realization.trajectory, kproc::NodePath{x});
            covered += f;
            out << x << ' ' << fmt17(f) << "\n";
            std::cout << "cylinder [" << x << "] fraction " << fmt17(f) << "\n";
        }
        std::cout << "depth-1 coverage " << fmt17(covered) << "\n";
    }
    return kExitOk;
}

int cmd_classify(const RunConfig& cfg, const std::string& family_spec, std::size_t horizon) {
    const auto family = kproc::parse_family(family_spec);
    const auto report = kproc::classify_schedule(family, horizon);
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/regime.txt", std::ios::binary);
    kproc::write_regime_report(out, report);
    std::cout << family.name << " -> " << kproc::to_string(report.classification) << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    const auto selected = split_list(cfg.checks);
    if (selected.empty()) {
        std::cerr << "verify: empty check selection\n";
        return kExitConfig;
    }
    const auto schedule = schedule_from_spec(cfg);
    kproc::HarnessConfig harness{kproc::SeedPlan{cfg.seed}, cfg.workers, 3.0};
    const std::vector<double> lambdas{0.5, 1.0, 2.0};

    std::vector<kproc::ComparisonResult> rows;
    std::vector<std::string> notes;
    bool all_ok = true;

    std::optional<kproc::Environment> env;
    auto fixed_env = [&]() -> const kproc::Environment& {
        if (!env)
            env = kproc::generate_environment(schedule, cfg.depth, cfg.breadth,
                                              kproc::SeedPlan{cfg.seed});
        return *env;
    };

    // renewal checks need the largest depth-1 cylinders and a horizon sized
    // in units of their cycle means
    auto top_cylinders = [&](std::size_t count) {
        const auto& e = fixed_env();
        std::vector<std::pair<double, std::uint32_t>> mass;
        for (std::uint32_t x = 1; x <= e.breadth(); ++x)
            mass.emplace_back(kproc::pi_formula(e, kproc::NodePath{x}, e.depth()), x);
        std::sort(mass.rbegin(), mass.rend());
        std::vector<kproc::NodePath> out;
        for (std::size_t i = 0; i < std::min(count, mass.size()); ++i)
            out.push_back({mass[i].second});
        return out;
    };
    auto cycle_horizon = [&](const std::vector<kproc::NodePath>& cylinders) {
        const auto& e = fixed_env();
        const double m = static_cast<double>(e.breadth());
        double sbar = 0.0;
        for (double g : e.child_marks(kproc::NodePath{})) sbar += 1.0 / (m * g + 1.0);
        double worst = 0.0;
        for (const auto& cyl : cylinders) {
            const double g_y = e.mark(cyl);
            const double w_y = m * g_y / (m * g_y + 1.0);
            const double rho = w_y + (1.0 - w_y) * w_y / (m - sbar);
            worst = std::max(worst,
                             e.level_gbar_sum(e.depth()) / (m * g_y * (1.0 - rho)));
        }
        return 260.0 * worst;
    };

    for (const auto& name : selected) {
        if (name == "stable") {
            auto r = kproc::check_stable_sampler(0.5, lambdas, 0.25, cfg.replicas, harness);
            rows.insert(rows.end(), r.begin(), r.end());
        } else if (name == "env-laplace") {
            auto r = kproc::check_environment_laplace(schedule, 0, 1, lambdas,
                                                      cfg.replicas, cfg.breadth, harness);
            rows.insert(rows.end(), r.begin(), r.end());
        } else if (name == "martingale") {
            std::vector<std::size_t> depths;
            for (std::size_t n = 1; n <= std::min<std::size_t>(cfg.depth, 4); ++n)
                depths.push_back(n);
            auto r = kproc::check_z_martingale(schedule, depths, cfg.replicas,
                                               cfg.breadth, harness);
            rows.insert(rows.end(), r.begin(), r.end());
        } else if (name == "conditional-laplace") {
            auto r = kproc::check_conditional_laplace(fixed_env(), 1, cfg.depth, 1.0,
                                                      lambdas, cfg.replicas, harness);
            rows.insert(rows.end(), r.begin(), r.end());
        } else if (name == "subordinator") {
            auto r = kproc::check_subordinator(fixed_env(), cfg.depth, cfg.replicas, harness);
            rows.push_back(r.mean_result);
            notes.push_back("subordinator increments KS p=" + std::to_string(r.ks_pvalue) +
                            (r.increments_stationary ? " (stationary)" : " (NOT stationary)"));
            all_ok = all_ok && r.increments_stationary;
        } else if (name == "adjusted") {
            kproc::WeightConfig w{kproc::WeightConfig::Mode::EstimateAtDepth, 0};
            const std::size_t n = cfg.depth >= 2 ? cfg.depth - 1 : 1;
            rows.push_back(kproc::check_adjusted_mean(fixed_env(), n, w, cfg.replicas, harness));
        } else if (name == "w-composition") {
            auto r = kproc::check_w_composition(schedule, 0, lambdas, cfg.replicas,
                                                std::max<std::size_t>(cfg.breadth, 50),
                                                harness);
            rows.insert(rows.end(), r.results.begin(), r.results.end());
            notes.push_back(std::string("w_composition discrepancy shrinks at 2M: ") +
                            (r.discrepancy_shrinks ? "yes" : "no"));
            all_ok = all_ok && r.discrepancy_shrinks;
        } else if (name == "occupation") {
            const auto cylinders = top_cylinders(3);
            auto r = kproc::check_occupation(fixed_env(), cfg.depth, cylinders,
                                             cycle_horizon(cylinders),
                                             std::min<std::size_t>(cfg.replicas, 64),
                                             harness);
            rows.insert(rows.end(), r.begin(), r.end());
        } else if (name == "cycles") {
            const auto cylinders = top_cylinders(1);
            auto r = kproc::check_cycles(fixed_env(), cfg.depth, cylinders[0],
                                         cycle_horizon(cylinders),
                                         std::min<std::size_t>(cfg.replicas, 32),
                                         harness);
            rows.push_back(r.sojourn_result);
            rows.push_back(r.gap_result);
            notes.push_back("cycles: min complete cycles per replica = " +
                            std::to_string(r.min_cycles));
        } else if (name == "w-laplace") {
            auto r = kproc::check_w_estimate_laplace(schedule, cfg.depth, lambdas,
                                                     cfg.replicas, cfg.breadth, harness);
            rows.insert(rows.end(), r.begin(), r.end());
        } else {
            std::cerr << "verify: unknown check '" << name << "'\n";
            return kExitConfig;
        }
    }

    for (const auto& r : rows) all_ok = all_ok && r.passed();

    std::filesystem::create_directories(cfg.out_dir);
    {
        std::ofstream out(cfg.out_dir + "/report.tsv", std::ios::binary);
        kproc::write_report_table(out, rows);
    }
    {
        std::ofstream out(cfg.out_dir + "/report.txt", std::ios::binary);
        for (const auto& r : rows)
            out << kproc::to_string(r.verdict) << ' ' << r.name << ": observed "
                << r.observed.mean << " +- " << r.observed.std_error << ", oracle "
                << r.expected << ", z " << r.z_score << ", halfwidth "
                << r.truncation_halfwidth << "\n";
        for (const auto& n : notes) out << n << "\n";
    }
    kproc::write_report_table(std::cout, rows);
    for (const auto& n : notes) std::cout << n << "\n";
    return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GREM-like K process simulator and verification harness"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file, env_file, family_spec = "geometric-gap r=0.5";
    std::size_t classify_horizon = 64;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "flat key-value config file");
        sub->add_option("--seed", cfg.seed, "base seed");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--workers", cfg.workers, "worker threads");
        sub->add_option("--schedule", cfg.schedule_spec, "list:a1,a2,... or family:<spec>");
        sub->add_option("--depth", cfg.depth, "tree depth");
        sub->add_option("--breadth", cfg.breadth, "retained marks per node");
        sub->add_option("--replicas", cfg.replicas, "Monte Carlo replicas");
        sub->add_option("--horizon", cfg.horizon, "simulation horizon");
    };

    auto* env_cmd = app.add_subcommand("env", "generate and write an environment");
    add_common(env_cmd);

    auto* sim_cmd = app.add_subcommand("simulate", "simulate a K process trajectory");
    add_common(sim_cmd);
    sim_cmd->add_option("--env", env_file, "environment file")->required();

    auto* verify_cmd = app.add_subcommand("verify", "run verification checks");
    add_common(verify_cmd);
    verify_cmd->add_option("--checks", cfg.checks, "comma-separated check selection");

    auto* classify_cmd = app.add_subcommand("classify", "classify a schedule family");
    add_common(classify_cmd);
    classify_cmd->add_option("--family", family_spec, "family spec");
    classify_cmd->add_option("--k-horizon", classify_horizon, "terms to examine");

    // config file loads first so explicit flags override it
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") load_config_file(argv[i + 1], cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (env_cmd->parsed()) return cmd_env(cfg);
        if (sim_cmd->parsed()) return cmd_simulate(cfg, env_file);
        if (verify_cmd->parsed()) return cmd_verify(cfg);
        if (classify_cmd->parsed()) return cmd_classify(cfg, family_spec, classify_horizon);
    } catch (const kproc::BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
