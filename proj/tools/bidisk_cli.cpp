// SPDX-License-Identifier: Apache-2.0
// bidisk: command-line front end for norms, approximants, decay scans, energies
// and the property suites. Exit codes: 0 success, 2 input error, 3 numerical
// error (including failed property suites).

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bidisk/analysis.hpp"
#include "bidisk/approximants.hpp"
#include "bidisk/capacity.hpp"
#include "bidisk/error.hpp"
#include "bidisk/io.hpp"
#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"
#include "bidisk/verify.hpp"

namespace {

using namespace bidisk;
using io::json;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

enum class Method { optimal, riesz, cesaro };

struct Config {
    std::string series;
    std::string measure;
    double alpha = 0.0;
    int n = 0;
    std::vector<int> n_list;
    int nmin = 0;
    int nmax = -1;
    int step = 1;
    std::string basis = "full";
    std::string method = "optimal";
    std::string out;
    std::uint64_t seed = 7;
    int trials = 500;
    std::string suite = "all";
    int K = 100;
    int maxdeg = 8;
    int annihilate_K = -1;
    unsigned workers = 0;
    bool fit = false;
    double tol_ortho = 1e-8;
    double tol_eps0 = kDefaultReciprocalEps;
    double tol_monotone = 1e-10;
    double ridge_scale = 1e-12;
    std::size_t max_unknowns = 10000;
    bool no_regularize = false;
};

ScanBasis parse_basis(const std::string& text) {
    if (text == "full") return {BasisKind::full, {}};
    if (text == "onevar") return {BasisKind::onevar, {}};
    if (text == "diag") return {BasisKind::diagonal, {1, 1}};
    if (text.rfind("diag:", 0) == 0) {
        int M = 0;
        int N = 0;
        char tail = 0;
        if (std::sscanf(text.c_str() + 5, "%d,%d%c", &M, &N, &tail) != 2) {
            throw InputError("basis '" + text + "' must look like diag:M,N");
        }
        return {BasisKind::diagonal, {M, N}};
    }
    throw InputError("unknown basis '" + text + "' (expected full, onevar or diag:M,N)");
}

Method parse_method(const std::string& text) {
    if (text == "optimal") return Method::optimal;
    if (text == "riesz") return Method::riesz;
    if (text == "cesaro") return Method::cesaro;
    throw InputError("unknown method '" + text + "' (expected optimal, riesz or cesaro)");
}

SolverOptions solver_options(const Config& cfg) {
    SolverOptions opts;
    opts.ortho_tol = cfg.tol_ortho;
    opts.ridge_scale = cfg.ridge_scale;
    opts.max_unknowns = cfg.max_unknowns;
    opts.allow_regularization = !cfg.no_regularize;
    return opts;
}

BasisSpec basis_spec(const ScanBasis& b, int n) {
    switch (b.kind) {
        case BasisKind::full: return BasisSpec::full(n);
        case BasisKind::onevar: return BasisSpec::onevar(n);
        case BasisKind::diagonal: return BasisSpec::diagonal(n, b.pattern);
    }
    throw InternalError("unknown basis kind");
}

/// Explicit (non-optimal) approximant of order n for the given basis.
TwoVarSeries explicit_approximant(Method m, const TwoVarSeries& f, AlphaWeight a, int n, const ScanBasis& b,
                                  double eps0) {
    if (m == Method::cesaro) {
        if (b.kind != BasisKind::full) throw InputError("method cesaro needs the full basis");
        return cesaro(f, n, eps0);
    }
    switch (b.kind) {
        case BasisKind::full: return riesz_approximant(f, a, n, eps0);
        case BasisKind::diagonal: return riesz_lifted(f, a, n, b.pattern, eps0);
        case BasisKind::onevar: break;
    }
    throw InputError("method riesz supports the full and diag:M,N bases");
}

void emit(const Config& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw InputError("cannot write '" + cfg.out + "'");
    file << text;
}

std::vector<int> scan_orders(const Config& cfg) {
    if (!cfg.n_list.empty()) return cfg.n_list;
    if (cfg.nmin < 0) throw InputError("nmin must be nonnegative");
    if (cfg.step < 1) throw InputError("step must be at least 1");
    if (cfg.nmax < cfg.nmin) throw InputError("decay needs --n or --nmax >= --nmin");
    std::vector<int> out;
    for (int n = cfg.nmin; n <= cfg.nmax; n += cfg.step) out.push_back(n);
    return out;
}

int cmd_norm(const Config& cfg) {
    const auto spec = io::parse_series(cfg.series);
    emit(cfg, io::format_number(norm2(spec.f, AlphaWeight{cfg.alpha})) + "\n");
    return 0;
}

int cmd_approx(const Config& cfg) {
    const auto spec = io::parse_series(cfg.series);
    const AlphaWeight a{cfg.alpha};
    const ScanBasis basis = parse_basis(cfg.basis);
    const Method method = parse_method(cfg.method);
    if (cfg.n < 0) throw InputError("n must be nonnegative");

    json out;
    if (method == Method::optimal) {
        const auto r = solve_for_scan(spec.f, a, cfg.n, basis, solver_options(cfg));
        out["coefficients"] = io::to_json(r.p);
        out["residual_sq"] = r.residual_sq;
        out["cond_estimate"] = io::finite_or_null(r.cond_estimate);
        out["ortho_residual"] = r.ortho_residual;
        out["regularized"] = r.regularized;
    } else {
        const TwoVarSeries p = explicit_approximant(method, spec.f, a, cfg.n, basis, cfg.tol_eps0);
        out["coefficients"] = io::to_json(p);
        out["residual_sq"] = residual_norm_sq(p, spec.f, a);
        out["cond_estimate"] = nullptr;
        out["ortho_residual"] =
            orthogonality_residual(p, spec.f, a, basis_monomials(basis_spec(basis, cfg.n)));
    }
    out["method"] = cfg.method;
    out["basis"] = basis.describe();
    out["n"] = cfg.n;
    out["alpha"] = cfg.alpha;
    emit(cfg, out.dump(2) + "\n");
    return 0;
}

int cmd_decay(const Config& cfg) {
    const auto spec = io::parse_series(cfg.series);
    const AlphaWeight a{cfg.alpha};
    const ScanBasis basis = parse_basis(cfg.basis);
    const Method method = parse_method(cfg.method);
    const auto orders = scan_orders(cfg);

    DecaySeries ds;
    if (method == Method::optimal) {
        ScanOptions opts;
        opts.solver = solver_options(cfg);
        opts.workers = cfg.workers;
        opts.monotone_tol = cfg.tol_monotone;
        opts.label = spec.label;
        ds = decay_scan(spec.f, a, orders, basis, opts);
    } else {
        for (std::size_t i = 1; i < orders.size(); ++i) {
            if (orders[i] <= orders[i - 1]) throw InputError("scan orders must be strictly increasing");
        }
        ds.alpha = cfg.alpha;
        ds.label = spec.label;
        ds.basis = basis.describe();
        for (int n : orders) {
            const TwoVarSeries p = explicit_approximant(method, spec.f, a, n, basis, cfg.tol_eps0);
            ds.points.push_back({n, residual_norm_sq(p, spec.f, a)});
        }
    }

    std::optional<TheoryRate> theory;
    if (spec.family) {
        try {
            theory = predicted_rate(cfg.alpha, *spec.family);
        } catch (const UnsupportedRateError&) {
            theory.reset();
        }
    }
    emit(cfg, io::decay_csv(ds, theory));

    if (cfg.fit) {
        json report;
        try {
            const RateFit fit = fit_rate(ds, theory);
            report["fit"] = {{"mode", fit.mode == RateMode::power ? "power" : "logarithmic"},
                             {"exponent", fit.exponent},
                             {"constant", fit.constant},
                             {"r_squared", fit.r_squared},
                             {"n_min", fit.n_min},
                             {"n_max", fit.n_max}};
        } catch (const Error& e) {
            report["fit"] = {{"error", e.name()}, {"message", e.what()}};
        }
        try {
            const auto v = cyclicity_verdict(ds);
            report["verdict"] = to_string(v.verdict);
            report["diagnostics"] = v.diagnostics;
        } catch (const Error& e) {
            report["verdict"] = {{"error", e.name()}, {"message", e.what()}};
        }
        std::cerr << report.dump(2) << "\n";
    }
    return 0;
}

int cmd_energy(const Config& cfg) {
    const FourierMeasure mu = io::parse_measure(cfg.measure, cfg.K);
    emit(cfg, io::to_json(energy(mu, cfg.K)).dump(2) + "\n");
    return 0;
}

int cmd_annihilate(const Config& cfg) {
    const auto spec = io::parse_series(cfg.series);
    const int needed = cfg.maxdeg + std::max(spec.f.deg1(), spec.f.deg2());
    const FourierMeasure mu = io::parse_measure(cfg.measure, cfg.annihilate_K >= 0 ? cfg.annihilate_K : needed);
    const double value = annihilation_check(spec.f, mu, cfg.maxdeg);
    emit(cfg, io::format_number(value) + "\n");
    return 0;
}

int cmd_verify(const Config& cfg) {
    std::vector<verify::SuiteReport> reports;
    if (cfg.suite == "all") {
        for (const auto& s : verify::suites()) reports.push_back(verify::run_suite(s.name, cfg.trials, cfg.seed));
    } else {
        reports.push_back(verify::run_suite(cfg.suite, cfg.trials, cfg.seed));
    }
    std::string text;
    bool ok = true;
    for (const auto& r : reports) {
        ok = ok && r.passed();
        text += fmt::format("{:<15} {} trials={} checks={} violations={} worst={:.3e}\n", r.name,
                            r.passed() ? "PASS" : "FAIL", r.trials, r.checks, r.violations, r.worst);
    }
    emit(cfg, text);
    return ok ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial approximants and cyclicity experiments on the bidisk"};
    app.require_subcommand(1);
    Config cfg;

    const auto add_series = [&](CLI::App* sub) {
        sub->add_option("--series", cfg.series, "builtin:NAME[:k=v,...], inline JSON, or JSON file")->required();
    };
    const auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--basis", cfg.basis, "full | onevar | diag:M,N")->capture_default_str();
        sub->add_option("--method", cfg.method, "optimal | riesz | cesaro")->capture_default_str();
        sub->add_option("--tol-ortho", cfg.tol_ortho, "orthogonality certificate tolerance")->capture_default_str();
        sub->add_option("--tol-eps0", cfg.tol_eps0, "smallest admissible |a_00| for 1/f")->capture_default_str();
        sub->add_option("--ridge-scale", cfg.ridge_scale, "ridge on factorization failure, times trace/dim")
            ->capture_default_str();
        sub->add_option("--max-unknowns", cfg.max_unknowns, "solver size cap")->capture_default_str();
        sub->add_flag("--no-regularize", cfg.no_regularize, "fail instead of retrying with a ridge");
    };

    auto* norm = app.add_subcommand("norm", "norm of a series in the weighted space");
    add_series(norm);
    norm->add_option("--alpha", cfg.alpha)->required();

    auto* approx = app.add_subcommand("approx", "approximant of one order as JSON");
    add_series(approx);
    approx->add_option("--alpha", cfg.alpha)->required();
    approx->add_option("--n", cfg.n, "approximant order")->required();
    add_solver(approx);

    auto* decay = app.add_subcommand("decay", "dist^2 over a range of orders as CSV");
    add_series(decay);
    decay->add_option("--alpha", cfg.alpha)->required();
    decay->add_option("--n", cfg.n_list, "explicit orders, comma separated")->delimiter(',');
    decay->add_option("--nmin", cfg.nmin)->capture_default_str();
    decay->add_option("--nmax", cfg.nmax);
    decay->add_option("--step", cfg.step)->capture_default_str();
    decay->add_option("--workers", cfg.workers, "solver threads, 0 = hardware concurrency")->capture_default_str();
    decay->add_option("--tol-monotone", cfg.tol_monotone, "allowed increase of dist^2")->capture_default_str();
    decay->add_flag("--fit", cfg.fit, "print rate fit and verdict to stderr");
    add_solver(decay);

    auto* energy_cmd = app.add_subcommand("energy", "logarithmic energy partial sum as JSON");
    energy_cmd->add_option("--measure", cfg.measure, "builtin:NAME, inline JSON, or JSON file")->required();
    energy_cmd->add_option("--K", cfg.K, "cutoff")->capture_default_str();

    auto* annihilate = app.add_subcommand("annihilate", "max |<z1^k z2^l f, C[mu]>| over k, l <= maxdeg");
    add_series(annihilate);
    annihilate->add_option("--measure", cfg.measure)->required();
    annihilate->add_option("--maxdeg", cfg.maxdeg)->capture_default_str();
    annihilate->add_option("--K", cfg.annihilate_K, "measure cutoff (default: just large enough)");

    auto* verify_cmd = app.add_subcommand("verify", "randomized property suites");
    verify_cmd->add_option("--suite", cfg.suite, "suite name or all")->capture_default_str();
    verify_cmd->add_option("--trials", cfg.trials)->capture_default_str();
    verify_cmd->add_option("--seed", cfg.seed)->capture_default_str();

    for (auto* sub : {norm, approx, decay, energy_cmd, annihilate, verify_cmd}) {
        sub->add_option("--out", cfg.out, "output file (default stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*norm) return cmd_norm(cfg);
        if (*approx) return cmd_approx(cfg);
        if (*decay) return cmd_decay(cfg);
        if (*energy_cmd) return cmd_energy(cfg);
        if (*annihilate) return cmd_annihilate(cfg);
        if (*verify_cmd) return cmd_verify(cfg);
    } catch (const ConditioningError& e) {
        std::cerr << fmt::format("error: {}: {} (cond estimate {:.3e})\n", e.name(), e.what(), e.cond_estimate());
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << fmt::format("error: {}: {}\n", e.name(), e.what());
        return e.kind() == ErrorKind::input ? kExitInput : kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << fmt::format("error: InternalError: {}\n", e.what());
        return kExitNumerical;
    }
    return kExitInput;
}
