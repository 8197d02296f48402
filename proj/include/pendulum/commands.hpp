#pragma once

// Command implementations behind the pendulum CLI. Each command writes CSV to
// a stream and returns the rows it had to skip; the executable only parses
// flags and routes output.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <future>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <pendulum/convergence.hpp>
#include <pendulum/elliptic.hpp>
#include <pendulum/energy.hpp>
#include <pendulum/trajectory.hpp>
#include <pendulum/validation.hpp>

namespace pendulum
{

inline constexpr const char *version_string = "pendulum 1.0.0";

enum class command { trajectory, error_sweep, surface, roc };
enum class method_choice { raw, resummed, efficient, auto_select };

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct run_config {
    command cmd = command::trajectory;
    std::vector<double> energies;
    std::vector<std::size_t> orders; // empty: command default
    method_choice how = method_choice::auto_select;
    int direction = 1;
    int periods = 1;
    std::size_t grid = 1001;
    double oracle_dt = quick_oracle_dt;
    bool period_sweep = false;
    bool span_in_periods = false; // error-sweep over [0, periods T] instead of [0, T*]
    bool degrees = false;
    std::optional<k_method> period_series; // trajectory: T* from a truncated K series
    std::size_t period_terms = 10;
    bool bottom_expansion = false; // trajectory: raw series about the bottom, no periodic extension
    bool plot_script = false;
    std::string out; // empty: standard output
};

struct skipped_row {
    double energy;
    std::string reason;
};

struct command_result {
    std::vector<skipped_row> skipped;

    [[nodiscard]] int exit_code() const noexcept { return skipped.empty() ? 0 : 3; }
};

[[nodiscard]] inline const char *to_string(command c) noexcept
{
    switch (c) {
        case command::trajectory:
            return "trajectory";
        case command::error_sweep:
            return "error-sweep";
        case command::surface:
            return "surface";
        case command::roc:
            return "roc";
    }
    return "unknown";
}

[[nodiscard]] inline const char *to_string(method_choice m) noexcept
{
    switch (m) {
        case method_choice::raw:
            return "raw";
        case method_choice::resummed:
            return "resummed";
        case method_choice::efficient:
            return "efficient";
        case method_choice::auto_select:
            return "auto";
    }
    return "unknown";
}

namespace csv
{

[[nodiscard]] inline std::string number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

[[nodiscard]] inline std::string field(const std::string &s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') {
            q += '"';
        }
        q += c;
    }
    q += '"';
    return q;
}

inline void row(std::ostream &os, const std::vector<std::string> &fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        os << field(fields[i]);
    }
    os << '\n';
}

} // namespace csv

namespace detail
{

inline void validate(const run_config &cfg)
{
    if (cfg.energies.empty()) {
        throw usage_error("at least one energy is required");
    }
    for (double e : cfg.energies) {
        if (!std::isfinite(e) || e < 0.0) {
            throw usage_error("energies must be finite and nonnegative");
        }
    }
    for (std::size_t n : cfg.orders) {
        if (n < 2) {
            throw usage_error("series orders must be at least 2");
        }
    }
    if (cfg.direction != 1 && cfg.direction != -1) {
        throw usage_error("direction must be cw or ccw");
    }
    if (cfg.periods < 1) {
        throw usage_error("--periods must be at least 1");
    }
    if (cfg.grid < 2) {
        throw usage_error("--grid must be at least 2");
    }
    if (cfg.period_series && cfg.period_terms < 1) {
        throw usage_error("--k-order must be at least 1");
    }
    if (!(cfg.oracle_dt > 0.0)) {
        throw usage_error("--oracle-dt must be positive");
    }
}

[[nodiscard]] inline std::vector<std::size_t> orders_or(const run_config &cfg, std::vector<std::size_t> fallback)
{
    return cfg.orders.empty() ? fallback : cfg.orders;
}

[[nodiscard]] inline method to_method(method_choice m)
{
    switch (m) {
        case method_choice::raw:
            return method::raw_series;
        case method_choice::resummed:
            return method::resummed;
        case method_choice::efficient:
        case method_choice::auto_select:
            break;
    }
    return method::efficient_resummed;
}

[[nodiscard]] inline double angle_out(const run_config &cfg, double rad)
{
    return cfg.degrees ? rad * (180.0 / std::numbers::pi) : rad;
}

inline void metadata(std::ostream &os, const run_config &cfg)
{
    os << "# " << version_string << '\n';
    os << "# command=" << to_string(cfg.cmd) << '\n';
    os << "# energies=";
    for (std::size_t i = 0; i < cfg.energies.size(); ++i) {
        os << (i ? ";" : "") << csv::number(cfg.energies[i]);
    }
    os << '\n';
    os << "# method=" << to_string(cfg.how) << " direction=" << (cfg.direction == 1 ? "ccw" : "cw")
       << " periods=" << cfg.periods << " grid=" << cfg.grid << " oracle_dt=" << csv::number(cfg.oracle_dt)
       << " angles=" << (cfg.degrees ? "degrees" : "radians") << '\n';
}

// Raw partial sum about a crossing of the bottom, evaluated as is. Past the
// radius of convergence it blows up; that is the point of printing it.
inline command_result trajectory_from_bottom(const run_config &cfg, std::size_t N, std::ostream &os)
{
    if (cfg.how == method_choice::resummed || cfg.how == method_choice::efficient) {
        throw usage_error("--expansion bottom supports the raw series only");
    }
    const auto e = make_energy_state(cfg.energies.front(), cfg.direction);
    const double omega0 = cfg.direction * std::sqrt(2.0 * e.energy);
    double T = separatrix_span, t_star = separatrix_span;
    if (e.kind != regime::separatrix) {
        const auto p = period(e);
        T = p.period;
        t_star = p.t_star;
    }
    const auto a = pendulum_series(0.0, omega0, N, t_star);
    const auto grid = uniform_grid(T * cfg.periods, cfg.grid);
    const auto oracle = rk4_on_grid(0.0, omega0, grid, cfg.oracle_dt);

    metadata(os, cfg);
    os << "# energy=" << csv::number(e.energy) << " method=raw expansion=bottom N=" << N
       << " T=" << csv::number(T) << " T*=" << csv::number(t_star) << '\n';
    csv::row(os, {"t", "theta_analytic", "theta_rk4", "abs_error"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = eval_poly(a, grid[i]);
        const double r = oracle.theta[i];
        csv::row(os, {csv::number(grid[i]), csv::number(angle_out(cfg, v)), csv::number(angle_out(cfg, r)),
                      csv::number(angle_out(cfg, std::abs(v - r)))});
    }
    return {};
}

// Final time of a plot covering cfg.periods periods.
[[nodiscard]] inline double plot_span(const trajectory_solution &sol, int periods)
{
    const double one = sol.kind == method::separatrix_closed_form ? separatrix_span : sol.period.period;
    return one * periods;
}

// Parallel map over energies, results kept in input order.
template <class F>
[[nodiscard]] auto map_energies(const std::vector<double> &energies, F f)
{
    using R = decltype(f(0.0));
    std::vector<std::future<R>> jobs;
    jobs.reserve(energies.size());
    for (double e : energies) {
        jobs.push_back(std::async(std::launch::async, f, e));
    }
    std::vector<R> out;
    out.reserve(jobs.size());
    for (auto &j : jobs) {
        out.push_back(j.get());
    }
    return out;
}

struct chunk {
    std::string rows;
    std::vector<skipped_row> skipped;
};

} // namespace detail

// t, theta_analytic, theta_rk4, abs_error over [0, periods T] for one energy.
inline command_result cmd_trajectory(const run_config &cfg, std::ostream &os)
{
    detail::validate(cfg);
    if (cfg.energies.size() != 1) {
        throw usage_error("trajectory takes exactly one energy");
    }
    const auto N = detail::orders_or(cfg, {20}).front();
    if (cfg.bottom_expansion) {
        return detail::trajectory_from_bottom(cfg, N, os);
    }
    const auto e = make_energy_state(cfg.energies.front(), cfg.direction);
    std::optional<period_info> approx;
    if (cfg.period_series && e.kind != regime::separatrix) {
        approx = period(e, *cfg.period_series, cfg.period_terms);
    }
    auto sol = build_trajectory(e, N, detail::to_method(cfg.how), approx);
    command_result res;
    const double span = detail::plot_span(sol, cfg.periods);
    const auto grid = uniform_grid(span, cfg.grid);
    const auto ics = start_state(sol);
    const auto oracle = rk4_on_grid(ics.theta, ics.omega, grid, cfg.oracle_dt);

    detail::metadata(os, cfg);
    os << "# energy=" << csv::number(e.energy) << " method=" << to_string(sol.kind) << " N=" << sol.order
       << " T=" << csv::number(sol.period.period) << " T*=" << csv::number(sol.period.t_star);
    if (approx) {
        os << " period_series=" << (*cfg.period_series == k_method::series ? "series" : "resummed")
           << " period_terms=" << cfg.period_terms;
    }
    os << '\n';
    // auto picks the closed form silently; an explicit series request is told
    if (!sol.notice.empty() && cfg.how != method_choice::auto_select) {
        os << "# notice=" << sol.notice << '\n';
    }
    csv::row(os, {"t", "theta_analytic", "theta_rk4", "abs_error"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = theta_at(sol, grid[i]);
        const double r = oracle.theta[i];
        csv::row(os, {csv::number(grid[i]), csv::number(detail::angle_out(cfg, a)),
                      csv::number(detail::angle_out(cfg, r)), csv::number(detail::angle_out(cfg, std::abs(a - r)))});
    }
    return res;
}

// Trajectory sweep: energy, N, method, sup_error. Period sweep (--period):
// energy, N, method, t_star_error with the raw and resummed K series.
inline command_result cmd_error_sweep(const run_config &cfg, std::ostream &os)
{
    detail::validate(cfg);
    const auto orders = detail::orders_or(cfg, cfg.period_sweep ? std::vector<std::size_t>{10, 100}
                                                                : std::vector<std::size_t>{5, 10, 20});
    std::vector<method> methods;
    switch (cfg.how) {
        case method_choice::auto_select:
            methods = {method::raw_series, method::efficient_resummed};
            break;
        default:
            methods = {detail::to_method(cfg.how)};
    }

    const auto work = [&](double energy) {
        detail::chunk c;
        std::ostringstream rows;
        const auto e = make_energy_state(energy, cfg.direction);
        if (e.kind == regime::separatrix && cfg.period_sweep) {
            c.skipped.push_back({energy, "separatrix"});
            rows << csv::number(energy) << ",,,,skipped: separatrix\n";
            c.rows = rows.str();
            return c;
        }
        if (cfg.period_sweep) {
            const double exact = period(e).t_star;
            for (std::size_t N : orders) {
                for (k_method km : {k_method::series, k_method::resummed}) {
                    const double err = std::abs(period(e, km, N).t_star - exact);
                    csv::row(rows, {csv::number(energy), std::to_string(N),
                                    km == k_method::series ? "series" : "resummed", csv::number(err), "ok"});
                }
            }
            c.rows = rows.str();
            return c;
        }
        std::size_t top = 2;
        for (std::size_t N : orders) {
            top = std::max(top, N);
        }
        if (e.kind == regime::separatrix) {
            const auto sol = build_trajectory(e, top, method::separatrix_closed_form);
            const double span = separatrix_span * (cfg.span_in_periods ? cfg.periods : 1);
            const auto rep = sup_error(sol, 0, cfg.grid, cfg.oracle_dt, span);
            csv::row(rows, {csv::number(energy), "0", to_string(method::separatrix_closed_form),
                            csv::number(detail::angle_out(cfg, rep.sup_error)), "ok"});
            c.rows = rows.str();
            return c;
        }
        std::vector<trajectory_solution> sols;
        for (method m : methods) {
            sols.push_back(build_trajectory(e, top, m));
        }
        const double span = cfg.span_in_periods ? sols.front().period.period * cfg.periods : sols.front().period.t_star;
        const auto oracle = oracle_for(sols.front(), span, cfg.grid, cfg.oracle_dt);
        for (std::size_t N : orders) {
            for (const auto &sol : sols) {
                const auto rep = sup_error(sol, N, oracle);
                csv::row(rows, {csv::number(energy), std::to_string(N), to_string(sol.kind),
                                csv::number(detail::angle_out(cfg, rep.sup_error)), "ok"});
            }
        }
        c.rows = rows.str();
        return c;
    };

    detail::metadata(os, cfg);
    os << "# sweep=" << (cfg.period_sweep ? "period" : "trajectory") << " span="
       << (cfg.span_in_periods ? "periods" : "tstar") << '\n';
    csv::row(os, {"energy", "N", "method", cfg.period_sweep ? "t_star_error" : "sup_error", "status"});
    command_result res;
    for (auto &c : detail::map_energies(cfg.energies, work)) {
        os << c.rows;
        res.skipped.insert(res.skipped.end(), c.skipped.begin(), c.skipped.end());
    }
    return res;
}

// Long format energy, t, theta over [0, periods T] per energy with the
// resummed method (closed form on the separatrix).
inline command_result cmd_surface(const run_config &cfg, std::ostream &os)
{
    detail::validate(cfg);
    if (cfg.energies.size() == 1) {
        run_config single = cfg;
        single.cmd = command::trajectory;
        return cmd_trajectory(single, os);
    }
    const auto N = detail::orders_or(cfg, {20}).front();
    const auto m = detail::to_method(cfg.how);

    const auto work = [&](double energy) {
        detail::chunk c;
        std::ostringstream rows;
        const auto sol = build_trajectory(make_energy_state(energy, cfg.direction), N, m);
        const auto grid = uniform_grid(detail::plot_span(sol, cfg.periods), cfg.grid);
        for (double t : grid) {
            csv::row(rows, {csv::number(energy), csv::number(t),
                            csv::number(detail::angle_out(cfg, theta_at(sol, t)))});
        }
        c.rows = rows.str();
        return c;
    };

    detail::metadata(os, cfg);
    os << "# N=" << N << '\n';
    csv::row(os, {"energy", "t", "theta"});
    command_result res;
    for (auto &c : detail::map_energies(cfg.energies, work)) {
        os << c.rows;
    }
    return res;
}

// Radii of convergence for top and bottom initial conditions, with the
// root-test estimate and the nearest poles.
inline command_result cmd_roc(const run_config &cfg, std::ostream &os)
{
    detail::validate(cfg);
    const auto n_coeffs = detail::orders_or(cfg, {2000}).front();
    if (n_coeffs < 100) {
        throw usage_error("roc needs at least 100 coefficients for the root test");
    }

    const auto work = [&](double energy) {
        detail::chunk c;
        std::ostringstream rows;
        const auto e = make_energy_state(energy, cfg.direction);
        if (e.kind == regime::separatrix) {
            c.skipped.push_back({energy, "separatrix"});
            rows << csv::number(energy) << ",,,,,,,,skipped: separatrix\n";
            c.rows = rows.str();
            return c;
        }
        for (expansion_point p : {expansion_point::top, expansion_point::bottom}) {
            const auto rep = roc_with_estimate(e, p, n_coeffs);
            std::string poles;
            for (const auto &z : nearest_poles(e, p)) {
                if (!poles.empty()) {
                    poles += ';';
                }
                poles += csv::number(z.real()) + (z.imag() < 0 ? "" : "+") + csv::number(z.imag()) + "i";
            }
            const double est = rep.estimated_roc.value_or(std::nan(""));
            csv::row(rows, {csv::number(energy), p == expansion_point::top ? "top" : "bottom",
                            csv::number(rep.t_star), csv::number(rep.exact_roc), csv::number(rep.margin),
                            csv::number(est), csv::number(std::abs(est - rep.exact_roc) / rep.exact_roc), poles,
                            rep.margin > 0 ? "converges_to_tstar" : "diverges_before_tstar"});
        }
        c.rows = rows.str();
        return c;
    };

    detail::metadata(os, cfg);
    os << "# root_test_coefficients=" << n_coeffs << '\n';
    csv::row(os, {"energy", "expansion", "t_star", "roc_exact", "margin", "roc_estimate", "relative_gap",
                  "nearest_poles", "status"});
    command_result res;
    for (auto &c : detail::map_energies(cfg.energies, work)) {
        os << c.rows;
        res.skipped.insert(res.skipped.end(), c.skipped.begin(), c.skipped.end());
    }
    return res;
}

inline command_result run(const run_config &cfg, std::ostream &os)
{
    switch (cfg.cmd) {
        case command::trajectory:
            return cmd_trajectory(cfg, os);
        case command::error_sweep:
            return cmd_error_sweep(cfg, os);
        case command::surface:
            return cmd_surface(cfg, os);
        case command::roc:
            return cmd_roc(cfg, os);
    }
    throw usage_error("unknown command");
}

// Matplotlib script that plots the CSV written by cfg.
[[nodiscard]] inline std::string plot_script(const run_config &cfg, const std::string &csv_path)
{
    std::ostringstream s;
    s << "import sys\n"
         "import pandas as pd\n"
         "import matplotlib.pyplot as plt\n\n"
      << "path = sys.argv[1] if len(sys.argv) > 1 else " << '"' << csv_path << '"' << "\n"
      << "df = pd.read_csv(path, comment='#')\n"
         "fig, ax = plt.subplots()\n";
    switch (cfg.cmd) {
        case command::trajectory:
            s << "ax.plot(df.t, df.theta_analytic, label='analytic')\n"
                 "ax.plot(df.t, df.theta_rk4, '--', label='RK4')\n"
                 "ax.set_xlabel('t')\nax.set_ylabel('theta')\n";
            break;
        case command::surface:
            s << "for e, g in df.groupby('energy'):\n"
                 "    ax.plot(g.t, g.theta, label=f'E={e:g}')\n"
                 "ax.set_xlabel('t')\nax.set_ylabel('theta')\n";
            break;
        case command::error_sweep:
            s << "col = 't_star_error' if 't_star_error' in df else 'sup_error'\n"
                 "df = df[df.status == 'ok']\n"
                 "for (m, n), g in df.groupby(['method', 'N']):\n"
                 "    ax.semilogy(g.energy, g[col], marker='o', label=f'{m} N={n}')\n"
                 "ax.set_xlabel('energy')\nax.set_ylabel(col)\n";
            break;
        case command::roc:
            s << "for x, g in df.groupby('expansion'):\n"
                 "    ax.plot(g.energy, g.roc_exact, marker='o', label=f'{x} radius')\n"
                 "top = df[df.expansion == 'top']\n"
                 "ax.plot(top.energy, top.t_star, 'k--', label='T*')\n"
                 "ax.set_xlabel('energy')\nax.set_ylabel('time')\n";
            break;
    }
    s << "ax.legend()\n"
         "plt.savefig(path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
    return s.str();
}

} // namespace pendulum
