// pendulum: exact pendulum trajectories, error sweeps and convergence reports as CSV.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include <pendulum/commands.hpp>

namespace
{

void add_common(CLI::App *sub, pendulum::run_config &cfg, std::string &how, std::string &dir)
{
    sub->add_option("--energy", cfg.energies, "energy or comma separated list")->delimiter(',')->required();
    sub->add_option("--order", cfg.orders, "truncation order(s)")->delimiter(',');
    sub->add_option("--method", how, "raw|resummed|efficient|auto")
        ->check(CLI::IsMember({"raw", "resummed", "efficient", "auto"}));
    sub->add_option("--direction", dir, "cw|ccw")->check(CLI::IsMember({"cw", "ccw"}));
    sub->add_option("--periods", cfg.periods, "time span in periods")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "number of sample points")->check(CLI::Range(2, 100'000'000));
    sub->add_option("--oracle-dt", cfg.oracle_dt, "RK4 step of the reference solution")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output CSV path (default stdout)");
    sub->add_flag("--plot-script", cfg.plot_script, "also write a matplotlib script next to --out");
    sub->add_flag("--degrees", cfg.degrees, "print angles in degrees");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact pendulum trajectories from convergent power series"};
    app.set_version_flag("--version", pendulum::version_string);
    app.require_subcommand(1);

    pendulum::run_config cfg;
    std::string how = "auto";
    std::string dir = "ccw";
    std::string span = "tstar";
    std::string expansion = "top";

    auto *traj = app.add_subcommand("trajectory", "analytic vs RK4 trajectory");
    auto *sweep = app.add_subcommand("error-sweep", "sup errors over energies and orders");
    auto *surface = app.add_subcommand("surface", "theta(t) for several energies, long format");
    auto *roc = app.add_subcommand("roc", "radius of convergence report");
    for (auto *sub : {traj, sweep, surface, roc}) {
        add_common(sub, cfg, how, dir);
    }
    traj->add_option("--expansion", expansion, "top: convergent periodic solution; bottom: raw series about the bottom")
        ->check(CLI::IsMember({"top", "bottom"}));
    std::string k_series;
    traj->add_option("--k-series", k_series, "take T* from a truncated K series instead of the converged one")
        ->check(CLI::IsMember({"series", "resummed"}));
    traj->add_option("--k-order", cfg.period_terms, "terms of the --k-series truncation")
        ->check(CLI::Range(1, 100'000'000));
    sweep->add_flag("--period", cfg.period_sweep, "sweep the period error of the raw and resummed K series");
    sweep->add_option("--span", span, "tstar: error over [0, T*]; periods: over [0, periods T]")
        ->check(CLI::IsMember({"tstar", "periods"}));

    CLI11_PARSE(app, argc, argv);

    const std::map<std::string, pendulum::method_choice> methods{{"raw", pendulum::method_choice::raw},
                                                                 {"resummed", pendulum::method_choice::resummed},
                                                                 {"efficient", pendulum::method_choice::efficient},
                                                                 {"auto", pendulum::method_choice::auto_select}};
    cfg.how = methods.at(how);
    cfg.direction = dir == "cw" ? -1 : 1;
    cfg.span_in_periods = span == "periods";
    cfg.bottom_expansion = expansion == "bottom";
    if (!k_series.empty()) {
        cfg.period_series = k_series == "series" ? pendulum::k_method::series : pendulum::k_method::resummed;
    }
    if (traj->parsed()) {
        cfg.cmd = pendulum::command::trajectory;
    } else if (sweep->parsed()) {
        cfg.cmd = pendulum::command::error_sweep;
    } else if (surface->parsed()) {
        cfg.cmd = pendulum::command::surface;
    } else {
        cfg.cmd = pendulum::command::roc;
    }

    if (cfg.plot_script && cfg.out.empty()) {
        std::cerr << "error: --plot-script needs --out\n";
        return 2;
    }

    try {
        pendulum::command_result res;
        if (cfg.out.empty()) {
            res = pendulum::run(cfg, std::cout);
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot open " << cfg.out << '\n';
                return 1;
            }
            res = pendulum::run(cfg, f);
            if (cfg.plot_script) {
                std::ofstream py(cfg.out + ".py", std::ios::binary);
                py << pendulum::plot_script(cfg, cfg.out);
            }
        }
        for (const auto &s : res.skipped) {
            std::cerr << "skipped energy " << pendulum::csv::number(s.energy) << ": " << s.reason << '\n';
        }
        return res.exit_code();
    } catch (const pendulum::usage_error &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
