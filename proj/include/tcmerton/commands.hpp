/**
 * @file commands.hpp
 * @brief Subcommands of the command-line tool, each producing one CSV table
 *
 *   coeffs              alpha1,alpha2,beta1,beta2
 *   solve-finite        t,f,g,c_star
 *   solve-infinite      z,k,k_tilde,positive,integrable,transversal,merton_transversal,accepted
 *   baseline            delta,z,k,k_tilde,weak_condition,merton_condition,verification_gap
 *   verify              check,target,estimate,error,pass
 *   demo-inconsistency  t,s,c_naive
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tcmerton/config.hpp"
#include "tcmerton/csv.hpp"
#include "tcmerton/discounting.hpp"
#include "tcmerton/error.hpp"
#include "tcmerton/finite_horizon.hpp"
#include "tcmerton/infinite_horizon.hpp"
#include "tcmerton/verification.hpp"

namespace tcmerton {

enum ExitStatus : int {
    kExitOk = 0,
    kExitInvalidInput = 1,
    kExitCheckFailed = 2,
    kExitBlowUp = 3,
};

inline std::string coeffs_csv(const RunConfig& cfg) {
    const auto c = hjb_coefficients(cfg.discount);
    return csv::row({"alpha1", "alpha2", "beta1", "beta2"}) +
           csv::row({csv::number(c.alpha1), csv::number(c.alpha2), csv::number(c.beta1), csv::number(c.beta2)});
}

inline double require_horizon(const RunConfig& cfg) {
    if (!cfg.horizon) throw Error(ErrorKind::ValidationError, "this command needs finite.T");
    return *cfg.horizon;
}

inline std::string finite_csv(const RunConfig& cfg) {
    const auto sol = solve_fg(cfg.market, cfg.prefs, cfg.discount, require_horizon(cfg), cfg.steps);
    const auto pol = policy(sol, cfg.market, cfg.prefs);
    std::string out = csv::row({"t", "f", "g", "c_star"});
    for (std::size_t i = 0; i < sol.t.size(); ++i)
        out += csv::row({csv::number(sol.t[i]), csv::number(sol.f[i]), csv::number(sol.g[i]),
                         csv::number(pol.consumption_fraction[i])});
    return out;
}

inline std::string infinite_csv(const RunConfig& cfg) {
    const auto report = enumerate_equilibria(cfg.market, cfg.prefs, cfg.discount);
    std::string out =
        csv::row({"z", "k", "k_tilde", "positive", "integrable", "transversal", "merton_transversal", "accepted"});
    for (const auto& c : report.candidates)
        out += csv::row({csv::number(c.z), csv::number(c.k), csv::number(c.k_tilde), csv::boolean(c.positive),
                         csv::boolean(c.integrable), csv::boolean(c.transversal), csv::boolean(c.merton_transversal),
                         csv::boolean(c.accepted())});
    return out;
}

/// Merton reference for the configured discount; non-exponential discounts use
/// their long-run (dominant) rate.
inline std::string baseline_csv(const RunConfig& cfg) {
    validate(cfg.discount);
    const auto b = merton_baseline(cfg.market, cfg.prefs, dominant_rate(cfg.discount));
    return csv::row({"delta", "z", "k", "k_tilde", "weak_condition", "merton_condition", "verification_gap"}) +
           csv::row({csv::number(b.delta), csv::number(b.candidate.z), csv::number(b.candidate.k),
                     csv::number(b.candidate.k_tilde), csv::boolean(b.weak_condition),
                     csv::boolean(b.merton_condition), csv::boolean(b.verification_gap)});
}

inline std::vector<double> demo_times(const RunConfig& cfg) {
    const double T = require_horizon(cfg);
    return cfg.demo_times.empty() ? std::vector<double>{0.0, T / 4.0, T / 2.0} : cfg.demo_times;
}

inline std::string demo_csv(const RunConfig& cfg) {
    const double T = require_horizon(cfg);
    std::string out = csv::row({"t", "s", "c_naive"});
    for (double t : demo_times(cfg)) {
        const auto curve = naive_consumption_fraction(cfg.market, cfg.prefs, cfg.discount, T, t, cfg.steps);
        for (std::size_t j = 0; j < curve.s.size(); ++j)
            out += csv::row({csv::number(t), csv::number(curve.s[j]), csv::number(curve.c[j])});
    }
    return out;
}

struct VerifyOutcome {
    std::vector<CheckResult> checks;
    std::string csv;
    bool all_pass;
};

namespace detail {

inline CheckResult threshold_check(std::string name, double target, double estimate, double tolerance) {
    const double err = std::abs(estimate - target);
    return {std::move(name), target, estimate, err, tolerance, err <= tolerance};
}

inline std::string indexed(std::string_view name, std::size_t i) {
    return std::string(name) + "[" + std::to_string(i) + "]";
}

}  // namespace detail

/// Runs every applicable check for the configured case.
inline VerifyOutcome run_verify(const RunConfig& cfg, unsigned workers = 0) {
    const auto& m = cfg.market;
    const auto& prefs = cfg.prefs;
    const auto& h = cfg.discount;
    const double p = prefs.p;
    std::vector<CheckResult> checks;

    const auto accepted = enumerate_equilibria(m, prefs, h).accepted();
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        const auto& c = accepted[i];
        const double z = c.z;
        checks.push_back(detail::threshold_check(detail::indexed("ie_residual", i), 0.0, residual(m, prefs, h, z), 1e-9));
        checks.push_back(
            detail::threshold_check(detail::indexed("ie_quadrature", i), 0.0, ie_quadrature_check(m, prefs, h, z), 1e-8));
        const double closure = std::pow(z, p) * exp_weighted_integral(h, c.k_tilde).value;
        checks.push_back(detail::threshold_check(detail::indexed("identity_closure", i), c.k, closure, 1e-9 * c.k));
        checks.push_back(detail::threshold_check(detail::indexed("k_tilde_consistency", i), c.k_tilde,
                                                 kappa(m, prefs) - p * z, 1e-12 * std::abs(c.k_tilde)));

        const auto coeffs = hjb_coefficients(h);
        if (kappa(m, prefs) - p * z - coeffs.beta2 != 0.0) {
            const auto fg = stationary_fg(m, prefs, h, z);
            const auto rhs = FgSystem{kappa(m, prefs), p, coeffs}(0.0, fg);
            checks.push_back(detail::threshold_check(detail::indexed("stationarity", i), 0.0,
                                                     std::max(std::abs(rhs[0]), std::abs(rhs[1])), 1e-10));
        }

        {
            const SimConfig moment_cfg{cfg.sim.x0, cfg.sim.n_paths, 1, 1.0, cfg.sim.seed};
            const auto paths = simulate_wealth(m, prefs, z, moment_cfg, workers);
            std::vector<double> powered(paths.n_paths);
            for (std::size_t k = 0; k < paths.n_paths; ++k) powered[k] = std::pow(paths.at(k, 1), p);
            const auto est = detail::summarize(powered);
            const double target = moment_oracle(m, prefs, z, 1.0, cfg.sim.x0);
            const double tol = 4.0 * est.std_error + 1e-12 * std::abs(target);  // rounding floor for deterministic paths
            checks.push_back({detail::indexed("moment_t1", i), target, est.mean, est.std_error, tol,
                              std::abs(est.mean - target) <= tol});
        }

        const double target = c.k * std::pow(cfg.sim.x0, p) / p;
        const double tail_tol = cfg.sim.tail_tolerance * std::abs(target);
        SimConfig mc{cfg.sim.x0, cfg.sim.n_paths, cfg.sim.n_steps, 0.0, cfg.sim.seed};
        if (cfg.sim.horizon) {
            mc.horizon = *cfg.sim.horizon;
        } else {
            mc.horizon = infinite_value_horizon(m, prefs, h, z, cfg.sim.x0, tail_tol);
            mc.n_steps = std::max(mc.n_steps, static_cast<std::size_t>(std::ceil(mc.horizon / cfg.sim.max_dt)));
        }
        try {
            checks.push_back(mc_infinite_check(m, prefs, h, z, mc, tail_tol, workers, detail::indexed("mc_infinite", i)));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TailTooLarge) throw;
            checks.push_back({detail::indexed("mc_infinite", i), target, std::nan(""), std::nan(""), tail_tol, false});
        }

        const auto adj = adjoint_identity(m, prefs, c.k, cfg.sim.x0);
        checks.push_back(detail::threshold_check(detail::indexed("adjoint_stationary", i), 0.0, adj.relative, 1e-12));
    }

    if (cfg.horizon) {
        const double T = *cfg.horizon;
        const auto sol = solve_fg(m, prefs, h, T, cfg.steps);
        checks.push_back(detail::threshold_check("terminal_f", 1.0, sol.f.back(), 0.0));
        checks.push_back(detail::threshold_check("terminal_g", 0.0, sol.g.back(), 0.0));

        if (const auto* e = std::get_if<Exponential>(&h)) {
            double worst = 0.0;
            double worst_g = 0.0;
            for (std::size_t i = 0; i < sol.t.size(); ++i) {
                const double exact = exponential_f_closed_form(m, prefs, e->delta, T, sol.t[i]);
                worst = std::max(worst, std::abs(sol.f[i] - exact) / exact);
                worst_g = std::max(worst_g, std::abs(sol.g[i]));
            }
            checks.push_back(detail::threshold_check("fg_closed_form", 0.0, worst, 1e-8));
            checks.push_back(detail::threshold_check("g_vanishes", 0.0, worst_g, 1e-12));
        }

        double worst_adj = 0.0;
        for (std::size_t i = 0; i < sol.t.size(); i += std::max<std::size_t>(1, sol.t.size() / 20))
            for (double x : {0.5, 1.0, 2.0, 10.0})
                worst_adj = std::max(worst_adj, adjoint_identity(m, prefs, sol.f[i], x).relative);
        checks.push_back(detail::threshold_check("adjoint_finite", 0.0, worst_adj, 1e-12));

        const SimConfig fin{cfg.sim.x0, cfg.sim.n_paths, cfg.sim.n_steps, T, cfg.sim.seed};
        checks.push_back(mc_finite_check(m, prefs, h, sol, 0.0, cfg.sim.x0, fin, workers, "mc_finite"));
    }

    VerifyOutcome out{checks, csv::row({"check", "target", "estimate", "error", "pass"}), true};
    for (const auto& c : checks) {
        out.csv += csv::row({c.name, csv::number(c.target), csv::number(c.estimate), csv::number(c.error),
                             csv::boolean(c.pass)});
        out.all_pass = out.all_pass && c.pass;
    }
    return out;
}

/// Runs one subcommand, writes `<output_dir>/<subcommand>.csv` and echoes the
/// table to `out`. Errors are reported on `err` and mapped to exit statuses.
inline int dispatch(std::string_view subcommand, const RunConfig& cfg, unsigned workers, std::ostream& out,
                    std::ostream& err) {
    try {
        std::string table;
        int status = kExitOk;
        if (subcommand == "coeffs") {
            table = coeffs_csv(cfg);
        } else if (subcommand == "solve-finite") {
            table = finite_csv(cfg);
        } else if (subcommand == "solve-infinite") {
            table = infinite_csv(cfg);
        } else if (subcommand == "baseline") {
            table = baseline_csv(cfg);
        } else if (subcommand == "verify") {
            auto outcome = run_verify(cfg, workers);
            table = std::move(outcome.csv);
            if (!outcome.all_pass) status = kExitCheckFailed;
        } else if (subcommand == "demo-inconsistency") {
            table = demo_csv(cfg);
        } else {
            err << "unknown subcommand '" << subcommand << "'\n";
            return kExitInvalidInput;
        }
        std::filesystem::create_directories(cfg.output_dir);
        const auto path = std::filesystem::path(cfg.output_dir) / (std::string(subcommand) + ".csv");
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            err << "cannot write " << path << "\n";
            return kExitInvalidInput;
        }
        file << table;
        out << table;
        return status;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.kind() == ErrorKind::BlowUp ? kExitBlowUp : kExitInvalidInput;
    }
}

}  // namespace tcmerton
