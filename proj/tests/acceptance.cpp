// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: `acceptance <criterion>` runs one criterion (1-8),
// `acceptance` with no argument runs all of them. One PASS/FAIL line per
// criterion, with supporting detail lines indented below.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bidisk/analysis.hpp"
#include "bidisk/approximants.hpp"
#include "bidisk/capacity.hpp"
#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"
#include "bidisk/verify.hpp"
#include "oracles.hpp"

using namespace bidisk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Every optimal solve made by criteria 1-5, kept for the certificate pass.
struct SolveRecord {
    std::string where;
    TwoVarSeries f;
    double alpha;
    ApproximantResult result;
};

struct Context {
    bool quiet = false;
    std::vector<SolveRecord>* record = nullptr;

    void detail(const std::string& line) const {
        if (!quiet) fmt::print("    {}\n", line);
    }
    void keep(std::string where, const TwoVarSeries& f, double alpha, const ApproximantResult& r) const {
        if (record) record->push_back({std::move(where), f, alpha, r});
    }
};

TwoVarSeries one_minus_z1z2() { return TwoVarSeries::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
TwoVarSeries product_one_minus() { return TwoVarSeries::from_rows({{1.0, -1.0}, {-1.0, 1.0}}); }
TwoVarSeries one_minus_pow(int M, int N) {
    auto f = TwoVarSeries::zero(M, N);
    f.set(0, 0, 1.0);
    f.set(M, N, -1.0);
    return f;
}

oracle::Grid grid_of(const TwoVarSeries& f) {
    oracle::Grid g(f.deg1() + 1, std::vector<oracle::cplx>(f.deg2() + 1));
    for (int k = 0; k <= f.deg1(); ++k)
        for (int l = 0; l <= f.deg2(); ++l) g[k][l] = f.coeff(k, l);
    return g;
}

std::vector<int> range(int lo, int hi, int step = 1) {
    std::vector<int> v;
    for (int n = lo; n <= hi; n += step) v.push_back(n);
    return v;
}

ScanOptions scan_options() {
    ScanOptions o;
    o.workers = 0;
    return o;
}

// 1. dist^2(1, (1 - z1 z2) P_n) = 1/(n+2) at alpha = 0, n = 0..10.
bool criterion1(const Context& ctx) {
    const auto t0 = Clock::now();
    const TwoVarSeries f = one_minus_z1z2();
    const oracle::Grid g = grid_of(f);
    double worst_pair = 0.0, worst_oracle = 0.0, worst_exact = 0.0;
    for (int n = 0; n <= 10; ++n) {
        const auto full = solve_optimal(f, AlphaWeight{0.0}, BasisSpec::full(n));
        const auto diag = diagonal_reduce_solve(f, AlphaWeight{0.0}, n, {1, 1});
        ctx.keep(fmt::format("c1 full n={}", n), f, 0.0, full);
        ctx.keep(fmt::format("c1 diag n={}", n), f, 0.0, diag);
        const double brute = oracle::brute_force_dist_sq(g, 0.0, oracle::full_basis(n));
        const double exact = oracle::one_minus_z_dist_sq(0.0, n);
        worst_pair = std::max(worst_pair, std::abs(full.residual_sq - diag.residual_sq));
        worst_oracle = std::max({worst_oracle, std::abs(full.residual_sq - brute), std::abs(diag.residual_sq - brute)});
        worst_exact = std::max({worst_exact, std::abs(full.residual_sq - exact), std::abs(diag.residual_sq - exact)});
    }
    const double secs = seconds_since(t0);
    ctx.detail(fmt::format("max |full - diag| = {:.3e} (limit 1e-9)", worst_pair));
    ctx.detail(fmt::format("max |solver - brute-force normal equations| = {:.3e} (limit 1e-10)", worst_oracle));
    ctx.detail(fmt::format("max |solver - 1/(n+2)| = {:.3e} (limit 1e-10)", worst_exact));
    ctx.detail(fmt::format("runtime {:.2f} s (limit 10 s)", secs));
    return worst_pair <= 1e-9 && worst_oracle <= 1e-10 && worst_exact <= 1e-10 && secs < 10.0;
}

// 2. Riesz residual for 1 - z1^M z2^N equals the closed form; the closed form
//    is bounded by C1 / (n+1)^{1-2 alpha} with a finite C1.
bool criterion2(const Context& ctx) {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst_match = 0.0;
    for (double alpha : {-1.0, 0.0, 0.5}) {
        const AlphaWeight a{alpha};
        for (auto [M, N] : {std::pair{1, 1}, std::pair{2, 3}}) {
            const DiagonalPattern pat{M, N};
            const TwoVarSeries f = one_minus_pow(M, N);
            for (int n = 0; n <= 50; ++n) {
                const double closed = closed_form_twisted(a, n, pat);
                const double lifted = residual_norm_sq(riesz_lifted(f, a, n, pat), f, a);
                double err = std::abs(lifted - closed) / std::max(1.0, closed);
                if (M == 1 && N == 1) {
                    const double direct = residual_norm_sq(riesz_approximant(f, a, n), f, a);
                    err = std::max(err, std::abs(direct - closed) / std::max(1.0, closed));
                }
                worst_match = std::max(worst_match, err);
            }

            // C1 = max ratio over n in [10, 200]. Boundedness evidence: the ratio is
            // either nonincreasing across the doublings 25 -> 50 -> 100 -> 200, or its
            // log-increments contract by at least 0.75 per doubling, so their sum
            // (and the ratio) stays finite; a power-law growth would show equal steps.
            const auto ratio = [&](int n) {
                return closed_form_twisted(a, n, pat) * std::pow(n + 1.0, 1.0 - 2.0 * alpha);
            };
            double c1 = 0.0;
            for (int n = 10; n <= 200; ++n) c1 = std::max(c1, ratio(n));
            const double i1 = std::log(ratio(50) / ratio(25));
            const double i2 = std::log(ratio(100) / ratio(50));
            const double i3 = std::log(ratio(200) / ratio(100));
            const double q = i1 > 0.0 ? std::max(i2 / i1, i3 / i2) : 0.0;
            const bool settling = std::max({i1, i2, i3}) <= 1e-12 || (i2 > 0.0 && q <= 0.75);
            const double extrapolated = i3 > 0.0 ? ratio(200) * std::exp(i3 * q / (1.0 - q)) : c1;
            const bool bounded = std::isfinite(c1) && c1 > 0.0 && settling;
            ok = ok && bounded;
            ctx.detail(fmt::format("alpha={:>4} (M,N)=({},{}): C1 = {:.6g} on [10,200], doubling steps {:+.4f} {:+.4f} "
                                   "{:+.4f}, extrapolated sup {:.6g} {}",
                                   alpha, M, N, c1, i1, i2, i3, std::max(c1, extrapolated),
                                   bounded ? "ok" : "UNBOUNDED"));
        }
    }
    const double secs = seconds_since(t0);
    ctx.detail(fmt::format("max relative |residual - closed form| = {:.3e} (limit 1e-12)", worst_match));
    ctx.detail(fmt::format("runtime {:.2f} s (limit 30 s)", secs));
    return ok && worst_match <= 1e-12 && secs < 30.0;
}

// 3. Sharp diagonal rate for 1 - z1 z2 over n in [20, 200].
bool criterion3(const Context& ctx) {
    const auto t0 = Clock::now();
    const TwoVarSeries f = one_minus_z1z2();
    const FitWindow win{20, 200};
    bool ok = true;
    for (double alpha : {-1.0, -0.5, 0.0, 0.25, 0.5}) {
        const auto scan = decay_scan_detailed(f, AlphaWeight{alpha}, range(20, 200), {BasisKind::diagonal, {1, 1}},
                                              scan_options());
        for (std::size_t i = 0; i < scan.solves.size(); ++i) {
            ctx.keep(fmt::format("c3 alpha={} n={}", alpha, scan.series.points[i].n), f, alpha, scan.solves[i]);
        }
        if (alpha == 0.5) {
            const RateFit fit = fit_log_mode(scan.series, win);
            const bool pass = fit.r_squared >= 0.8;
            ok = ok && pass;
            ctx.detail(fmt::format("alpha=0.5: log-mode stability {:.4f} (need >= 0.8), constant {:.4f} {}",
                                   fit.r_squared, fit.constant, pass ? "ok" : "FAIL"));
        } else {
            const RateFit fit = fit_power(scan.series, win);
            const double target = -(1.0 - 2.0 * alpha);
            const bool pass = std::abs(fit.exponent - target) <= 0.15;
            ok = ok && pass;
            ctx.detail(fmt::format("alpha={:>5}: exponent {:+.4f}, target {:+.2f} +- 0.15 {}", alpha, fit.exponent,
                                   target, pass ? "ok" : "FAIL"));
        }
    }
    const double secs = seconds_since(t0);
    ctx.detail(fmt::format("runtime {:.2f} s (limit 60 s)", secs));
    return ok && secs < 60.0;
}

// 4. Separable rate for (1 - z1)(1 - z2), full basis, n in [4, 32].
bool criterion4(const Context& ctx) {
    const auto t0 = Clock::now();
    const TwoVarSeries f = product_one_minus();
    bool ok = true;
    for (double alpha : {-0.5, 0.0, 0.5}) {
        const auto scan =
            decay_scan_detailed(f, AlphaWeight{alpha}, range(4, 32), {BasisKind::full, {}}, scan_options());
        for (std::size_t i = 0; i < scan.solves.size(); ++i) {
            ctx.keep(fmt::format("c4 alpha={} n={}", alpha, scan.series.points[i].n), f, alpha, scan.solves[i]);
        }
        const RateFit fit = fit_power(scan.series, FitWindow{4, 32});
        const double target = -(1.0 - alpha);
        const bool pass = std::abs(fit.exponent - target) <= 0.2;
        ok = ok && pass;
        ctx.detail(fmt::format("alpha={:>4}: exponent {:+.4f}, target {:+.2f} +- 0.2, dist^2(32) = {:.6g} {}", alpha,
                               fit.exponent, target, scan.series.points.back().dist_sq, pass ? "ok" : "FAIL"));
    }
    const double secs = seconds_since(t0);
    ctx.detail(fmt::format("runtime {:.2f} s (limit 300 s)", secs));
    return ok && secs < 300.0;
}

// 5. Plateau of dist^2 for 1 - z1 z2 at alpha = 1.
bool criterion5(const Context& ctx) {
    const auto t0 = Clock::now();
    // Level fixed before any solve: in D_2 the distance of 1 to (1 - z) P_n is
    // 1 / sum_{j <= n+2} j^{-2}, which stays above 6 / pi^2.
    const double level = 6.0 / (std::numbers::pi * std::numbers::pi);
    const TwoVarSeries f = one_minus_z1z2();
    const auto scan = decay_scan_detailed(f, AlphaWeight{1.0}, range(1, 200), {BasisKind::diagonal, {1, 1}},
                                          scan_options());
    double lowest = 1.0, worst_oracle = 0.0;
    for (std::size_t i = 0; i < scan.solves.size(); ++i) {
        const auto& p = scan.series.points[i];
        ctx.keep(fmt::format("c5 n={}", p.n), f, 1.0, scan.solves[i]);
        lowest = std::min(lowest, p.dist_sq);
        worst_oracle = std::max(worst_oracle, std::abs(p.dist_sq - oracle::one_minus_z_dist_sq(2.0, p.n)));
    }
    const double d100 = scan.series.points[99].dist_sq;
    const double d200 = scan.series.points[199].dist_sq;
    const double gap = std::abs(d200 - d100);
    const double secs = seconds_since(t0);
    const bool bounded = lowest >= level;
    const bool matches = worst_oracle <= 1e-10;
    const bool flat = gap <= 1e-3;
    ctx.detail(fmt::format("level L = 6/pi^2 = {:.10f}; min dist^2 over n <= 200 = {:.10f} {}", level, lowest,
                           bounded ? "ok" : "FAIL"));
    ctx.detail(fmt::format("max |dist^2 - one-variable D_2 value| = {:.3e} (limit 1e-10) {}", worst_oracle,
                           matches ? "ok" : "FAIL"));
    ctx.detail(fmt::format("dist^2(100) = {:.10f}, dist^2(200) = {:.10f}, |difference| = {:.4e} (limit 1e-3) {}", d100,
                           d200, gap, flat ? "ok" : "FAIL"));
    if (!flat) {
        ctx.detail("the exact values 1/sum_{j<=102} j^-2 and 1/sum_{j<=202} j^-2 differ by about 1.8e-3,");
        ctx.detail("so the 1e-3 flatness bound cannot hold for any correct solver at these orders");
    }
    ctx.detail(fmt::format("runtime {:.2f} s (limit 30 s)", secs));
    return bounded && matches && flat && secs < 30.0;
}

// 6. Inequality suites, 500 trials each, fixed seed.
bool criterion6(const Context& ctx) {
    const auto t0 = Clock::now();
    bool ok = true;
    for (const char* name : {"restriction", "separable", "polyextraction", "comparison", "slice"}) {
        const auto r = verify::run_suite(name, 500, 20240607);
        ok = ok && r.passed();
        ctx.detail(fmt::format("{:<15} checks={:<5} violations={} worst={:.3e}", r.name, r.checks, r.violations,
                               r.worst));
    }
    const double secs = seconds_since(t0);
    ctx.detail(fmt::format("runtime {:.2f} s (limit 60 s)", secs));
    return ok && secs < 60.0;
}

// 7. Energy, Bergman norm and annihilation for the diagonal current.
bool criterion7(const Context& ctx) {
    const auto t0 = Clock::now();
    constexpr int K = 1000;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const FourierMeasure mu = FourierMeasure::diagonal_current(K);
    const EnergyReport e = energy(mu, K);
    // Omitted tail (1/2) sum_{k > K} 1/k^2 lies in [1/(2(K+1)), 1/(2K)].
    const double energy_err = std::abs(e.partial - (1.0 + pi2 / 12.0));
    const bool tail_ok = energy_err >= 0.5 / (K + 1.0) - 1e-12 && energy_err <= 0.5 / K + 1e-12;
    const double bergman = bergman_norm_sq(cauchy_transform(mu, K, K));
    const double bergman_err = std::abs(bergman - pi2 / 6.0);
    const double ann = annihilation_check(one_minus_z1z2(), FourierMeasure::diagonal_current(9), 8);
    const double secs = seconds_since(t0);
    ctx.detail(fmt::format("energy partial = {:.10f}, |error| = {:.4e} (limit 1e-3), inside tail bounds: {}", e.partial,
                           energy_err, tail_ok ? "yes" : "NO"));
    ctx.detail(fmt::format("Bergman norm^2 = {:.10f}, |error| = {:.4e} (limit 1e-3)", bergman, bergman_err));
    ctx.detail(fmt::format("annihilation max = {} (must be exactly 0)", ann));
    ctx.detail(fmt::format("runtime {:.2f} s (limit 5 s)", secs));
    return energy_err <= 1e-3 && tail_ok && bergman_err <= 1e-3 && ann == 0.0 && secs < 5.0;
}

// 8. Orthogonality and perturbation certificates on every solve of 1-5.
bool criterion8(const Context& ctx) {
    std::vector<SolveRecord> records;
    const Context inner{true, &records};
    criterion1(inner);
    criterion3(inner);
    criterion4(inner);
    criterion5(inner);
    // Criterion 2 uses explicit constructions only; it makes no optimal solves.

    std::mt19937_64 rng(8);
    std::ofstream log("acceptance_certificates.csv");
    log << "solve,alpha,n,residual_sq,ortho_residual,ortho_bound,perturbation_gap\n";
    long bad_ortho = 0, bad_perturb = 0;
    double worst_ortho_ratio = 0.0, worst_gap = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        const double bound = 1e-8 * norm2_sq(r.f, AlphaWeight{r.alpha});
        const double gap = perturbation_gap(r.result, r.f, AlphaWeight{r.alpha}, rng, 20, 1e-3);
        if (!(r.result.ortho_residual <= bound)) ++bad_ortho;
        if (!(gap >= -1e-9)) ++bad_perturb;
        worst_ortho_ratio = std::max(worst_ortho_ratio, r.result.ortho_residual / bound);
        worst_gap = std::min(worst_gap, gap);
        log << fmt::format("{},{},{},{:.17g},{:.3e},{:.3e},{:.3e}\n", r.where, r.alpha, r.result.n,
                           r.result.residual_sq, r.result.ortho_residual, bound, gap);
    }
    ctx.detail(fmt::format("{} solves certified; log written to acceptance_certificates.csv", records.size()));
    ctx.detail(fmt::format("orthogonality: {} violations, worst residual/bound = {:.3e}", bad_ortho,
                           worst_ortho_ratio));
    ctx.detail(fmt::format("perturbation: {} violations, smallest increase = {:.3e} (must be >= -1e-9)", bad_perturb,
                           worst_gap));
    return !records.empty() && bad_ortho == 0 && bad_perturb == 0;
}

const std::vector<std::pair<const char*, std::function<bool(const Context&)>>>& criteria() {
    static const std::vector<std::pair<const char*, std::function<bool(const Context&)>>> all{
        {"exact small-case optima for 1 - z1 z2 at alpha = 0", criterion1},
        {"Riesz residual closed form and C1 bound", criterion2},
        {"sharp diagonal rate for 1 - z1 z2", criterion3},
        {"separable rate for (1 - z1)(1 - z2)", criterion4},
        {"plateau of dist^2 for 1 - z1 z2 at alpha = 1", criterion5},
        {"inequality suites", criterion6},
        {"energy, Bergman norm and annihilation", criterion7},
        {"solver certificates", criterion8},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    } else {
        for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) which.push_back(i);
    }
    int failed = 0;
    for (int c : which) {
        if (c < 1 || c > static_cast<int>(criteria().size())) {
            fmt::print(stderr, "unknown criterion {}\n", c);
            return 2;
        }
        const auto& [title, run] = criteria()[c - 1];
        fmt::print("criterion {}: {}\n", c, title);
        bool ok = false;
        try {
            ok = run(Context{});
        } catch (const std::exception& e) {
            fmt::print("    exception: {}\n", e.what());
        }
        fmt::print("{} criterion {}\n", ok ? "PASS" : "FAIL", c);
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
