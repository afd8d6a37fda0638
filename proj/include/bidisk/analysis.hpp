// SPDX-License-Identifier: Apache-2.0
#pragma once

// Decay scans of dist^2(1, f P_n), rate fits, the theoretical rate predictions
// and a conservative numerical cyclicity verdict.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bidisk/approximants.hpp"
#include "bidisk/error.hpp"
#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"

namespace bidisk {

struct DecayPoint {
    int n = 0;
    double dist_sq = 0.0;
};

struct DecaySeries {
    std::vector<DecayPoint> points;
    double alpha = 0.0;
    std::string label;
    std::string basis;
};

/// How a scan builds its bases; diagonal scans use the one-variable reduction.
struct ScanBasis {
    BasisKind kind = BasisKind::full;
    DiagonalPattern pattern{};

    std::string describe() const {
        switch (kind) {
            case BasisKind::full: return "full";
            case BasisKind::onevar: return "onevar";
            case BasisKind::diagonal:
                return "diag:" + std::to_string(pattern.M) + "," + std::to_string(pattern.N);
        }
        return "?";
    }
};

struct ScanOptions {
    SolverOptions solver{};
    /// 0 means one worker per hardware thread.
    unsigned workers = 0;
    double monotone_tol = 1e-10;
    std::string label;
};

struct ScanResult {
    DecaySeries series;
    std::vector<ApproximantResult> solves;  // same order as series.points
};

inline ApproximantResult solve_for_scan(const TwoVarSeries& f, AlphaWeight a, int n, const ScanBasis& basis,
                                        const SolverOptions& opts) {
    switch (basis.kind) {
        case BasisKind::full: return solve_optimal(f, a, BasisSpec::full(n), opts);
        case BasisKind::onevar: return solve_optimal(f, a, BasisSpec::onevar(n), opts);
        case BasisKind::diagonal: return diagonal_reduce_solve(f, a, n, basis.pattern, opts);
    }
    throw InternalError("unknown basis kind");
}

/// One optimal solve per n. Results are ordered by n regardless of which worker
/// finished first; an increase of dist^2 beyond monotone_tol is an error.
inline ScanResult decay_scan_detailed(const TwoVarSeries& f, AlphaWeight a, const std::vector<int>& n_values,
                                      const ScanBasis& basis, const ScanOptions& opts = {}) {
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        if (n_values[i] <= n_values[i - 1]) throw InputError("scan orders must be strictly increasing");
    }
    const std::size_t count = n_values.size();
    std::vector<std::optional<ApproximantResult>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i] = solve_for_scan(f, a, n_values[i], basis, opts.solver);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.workers;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }

    ScanResult out;
    out.series.alpha = a.alpha;
    out.series.label = opts.label;
    out.series.basis = basis.describe();
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) {
            const std::string where = "n = " + std::to_string(n_values[i]) + ": ";
            try {
                std::rethrow_exception(errors[i]);
            } catch (const Error& e) {
                throw Error(e.name(), e.kind(), where + e.what());
            }
        }
        out.series.points.push_back({n_values[i], slots[i]->residual_sq});
        out.solves.push_back(std::move(*slots[i]));
    }
    const auto& pts = out.series.points;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].dist_sq > pts[i - 1].dist_sq + opts.monotone_tol) {
            throw MonotonicityError("dist^2 increased from " + std::to_string(pts[i - 1].dist_sq) + " at n = " +
                                    std::to_string(pts[i - 1].n) + " to " + std::to_string(pts[i].dist_sq) +
                                    " at n = " + std::to_string(pts[i].n) + "; the solver lost accuracy");
        }
    }
    return out;
}

inline DecaySeries decay_scan(const TwoVarSeries& f, AlphaWeight a, const std::vector<int>& n_values,
                              const ScanBasis& basis, const ScanOptions& opts = {}) {
    return decay_scan_detailed(f, a, n_values, basis, opts).series;
}

enum class RateMode { power, logarithmic, plateau };

struct RateFit {
    RateMode mode = RateMode::power;
    /// Power mode: slope of log dist^2 against log(n+1).
    double exponent = 0.0;
    /// Power mode: exp(intercept). Log mode: median of dist^2 log(n+1).
    double constant = 0.0;
    /// Power mode: coefficient of determination. Log mode: stability score.
    double r_squared = 0.0;
    int n_min = 0;
    int n_max = 0;
};

/// Inclusive range of n used by a fit.
struct FitWindow {
    int n_min = 10;
    int n_max = std::numeric_limits<int>::max();
};

namespace detail {

inline std::vector<DecayPoint> fit_points(const DecaySeries& ds, const FitWindow& win) {
    std::vector<DecayPoint> pts;
    for (const auto& p : ds.points) {
        if (p.n >= win.n_min && p.n <= win.n_max) pts.push_back(p);
    }
    if (pts.size() < 5) {
        throw InputError("rate fit needs at least 5 points in [" + std::to_string(win.n_min) + ", " +
                         std::to_string(win.n_max) + "], got " + std::to_string(pts.size()));
    }
    for (const auto& p : pts) {
        if (!(p.dist_sq > 0.0)) {
            throw DegenerateFitError("dist^2 = 0 at n = " + std::to_string(p.n) +
                                     "; f may be exactly inverted at finite order");
        }
    }
    return pts;
}

}  // namespace detail

/// Least squares of log dist^2 on log(n+1).
inline RateFit fit_power(const DecaySeries& ds, const FitWindow& win = {}) {
    const auto pts = detail::fit_points(ds, win);
    const double m = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& p : pts) {
        sx += std::log(p.n + 1.0);
        sy += std::log(p.dist_sq);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : pts) {
        const double dx = std::log(p.n + 1.0) - mx;
        const double dy = std::log(p.dist_sq) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DegenerateFitError("fit window holds a single order");
    RateFit fit;
    fit.mode = RateMode::power;
    fit.exponent = sxy / sxx;
    fit.constant = std::exp(my - fit.exponent * mx);
    const double sse = std::max(0.0, syy - fit.exponent * sxy);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    fit.n_min = pts.front().n;
    fit.n_max = pts.back().n;
    return fit;
}

/// Checks dist^2 ~ C / log(n+1): r(n) = dist^2 log(n+1) should be flat.
/// constant = median r(n); r_squared = 1 - (max r - min r) / max r.
inline RateFit fit_log_mode(const DecaySeries& ds, FitWindow win = {}) {
    win.n_min = std::max(win.n_min, 1);
    const auto pts = detail::fit_points(ds, win);
    std::vector<double> r;
    for (const auto& p : pts) r.push_back(p.dist_sq * std::log(p.n + 1.0));
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    const double rmin = *lo, rmax = *hi;
    std::vector<double> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    const auto mid = sorted.size() / 2;
    RateFit fit;
    fit.mode = RateMode::logarithmic;
    fit.constant = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    fit.r_squared = std::clamp(1.0 - (rmax - rmin) / rmax, 0.0, 1.0);
    fit.n_min = pts.front().n;
    fit.n_max = pts.back().n;
    return fit;
}

enum class FamilyKind { separable, diagonal, onevar };

/// Structural class of f that selects the sharp rate.
struct Family {
    FamilyKind kind = FamilyKind::separable;
    DiagonalPattern pattern{};

    static Family separable() { return {FamilyKind::separable, {}}; }
    static Family diagonal(DiagonalPattern pat = {}) { return {FamilyKind::diagonal, pat}; }
    static Family onevar() { return {FamilyKind::onevar, {}}; }
};

struct TheoryRate {
    Family family{};
    double alpha = 0.0;
    RateMode mode = RateMode::power;
    double exponent = 0.0;  // power mode only

    /// Predicted shape of dist^2 at order n (up to a constant); empty where undefined.
    std::optional<double> value(int n) const {
        switch (mode) {
            case RateMode::power: return std::pow(n + 1.0, exponent);
            case RateMode::logarithmic:
                if (n < 1) return std::nullopt;
                return 1.0 / std::log(n + 1.0);
            case RateMode::plateau: return 1.0;
        }
        return std::nullopt;
    }
};

/// Separable and one-variable f decay like phi_alpha^{-1}(n+1); (M, N)-diagonal f
/// like phi_{2 alpha}^{-1}(n+1), and stop decaying for alpha > 1/2.
inline TheoryRate predicted_rate(double alpha, const Family& family) {
    TheoryRate rate;
    rate.family = family;
    rate.alpha = alpha;
    if (family.kind == FamilyKind::diagonal) {
        if (alpha > 0.5) {
            rate.mode = RateMode::plateau;
        } else if (alpha == 0.5) {
            rate.mode = RateMode::logarithmic;
        } else {
            rate.mode = RateMode::power;
            rate.exponent = -(1.0 - 2.0 * alpha);
        }
        return rate;
    }
    if (alpha > 1.0) {
        throw UnsupportedRateError("no decay rate is defined for alpha = " + std::to_string(alpha) +
                                   " > 1 outside the diagonal family");
    }
    if (alpha == 1.0) {
        rate.mode = RateMode::logarithmic;
    } else {
        rate.mode = RateMode::power;
        rate.exponent = -(1.0 - alpha);
    }
    return rate;
}

/// Fits in the mode the theory predicts; without a prediction both fits run and
/// the one with the higher score is returned.
inline RateFit fit_rate(const DecaySeries& ds, const std::optional<TheoryRate>& theory, const FitWindow& win = {}) {
    if (theory) return theory->mode == RateMode::logarithmic ? fit_log_mode(ds, win) : fit_power(ds, win);
    const RateFit power = fit_power(ds, win);
    const RateFit log = fit_log_mode(ds, win);
    return log.r_squared > power.r_squared ? log : power;
}

enum class Verdict { decaying, plateau, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::decaying: return "decaying";
        case Verdict::plateau: return "plateau";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct VerdictOptions {
    double decay_ratio = 0.5;
    double min_power_r2 = 0.9;
    double min_log_stability = 0.8;
    double plateau_rel = 1e-3;
    double plateau_floor = 0.05;
    FitWindow window{};
};

struct CyclicityVerdict {
    Verdict verdict = Verdict::inconclusive;
    std::optional<RateFit> power;
    std::optional<RateFit> log;
    std::string diagnostics;
};

/// Numerical evidence only: a finite scan cannot prove (non-)cyclicity.
inline CyclicityVerdict cyclicity_verdict(const DecaySeries& ds, const VerdictOptions& opts = {}) {
    const auto& pts = ds.points;
    if (pts.size() < 8) throw InputError("verdict needs at least 8 points, got " + std::to_string(pts.size()));
    if (pts.back().n < 4 * std::max(pts.front().n, 1)) {
        throw InputError("verdict needs the scan to span at least a factor 4 in n");
    }
    CyclicityVerdict out;
    const double first = pts.front().dist_sq;
    const double last = pts.back().dist_sq;
    const double prev = pts[pts.size() - 2].dist_sq;
    if (last <= 1e-300) {
        out.verdict = Verdict::decaying;
        out.diagnostics = "exact inversion: dist^2 reached zero at finite order";
        return out;
    }

    FitWindow win = opts.window;
    std::size_t in_window = 0;
    for (const auto& p : pts) in_window += (p.n >= win.n_min && p.n <= win.n_max) ? 1 : 0;
    if (in_window < 5) win = FitWindow{0, std::numeric_limits<int>::max()};
    try {
        out.power = fit_power(ds, win);
        out.log = fit_log_mode(ds, win);
    } catch (const DegenerateFitError& e) {
        out.diagnostics = e.what();
    }

    const bool fits_decay = (out.power && out.power->r_squared >= opts.min_power_r2) ||
                            (out.log && out.log->r_squared >= opts.min_log_stability);
    if (last < opts.decay_ratio * first && fits_decay) {
        out.verdict = Verdict::decaying;
    } else if (std::abs(last - prev) / last < opts.plateau_rel && last >= opts.plateau_floor) {
        out.verdict = Verdict::plateau;
    } else {
        out.verdict = Verdict::inconclusive;
    }
    if (out.diagnostics.empty()) {
        out.diagnostics = "first = " + std::to_string(first) + ", last = " + std::to_string(last);
    }
    return out;
}

}  // namespace bidisk
