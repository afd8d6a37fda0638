// SPDX-License-Identifier: Apache-2.0
#pragma once

// Norms and inner products of the weighted spaces D_alpha (disk) and
// 𝔇_alpha (bidisk), the rate gauge phi_alpha, and related constants.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "bidisk/error.hpp"
#include "bidisk/series.hpp"

namespace bidisk {

/// Space parameter alpha; coefficient k carries weight (k + 1)^alpha.
struct AlphaWeight {
    double alpha = 0.0;

    AlphaWeight() = default;
    explicit AlphaWeight(double a) : alpha(a) {
        if (!std::isfinite(a)) throw InputError("alpha must be finite");
    }
};

/// (k + 1)^alpha for k = 0..size-1, evaluated once per call site.
class WeightTable {
public:
    WeightTable(AlphaWeight a, int max_index) : values_(static_cast<std::size_t>(std::max(max_index, 0)) + 1) {
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] = std::pow(static_cast<double>(k) + 1.0, a.alpha);
    }

    double operator[](int k) const noexcept { return values_[static_cast<std::size_t>(k)]; }
    int max_index() const noexcept { return static_cast<int>(values_.size()) - 1; }

private:
    std::vector<double> values_;
};

/// Squared 𝔇_alpha norm: sum (k+1)^a (l+1)^a |a_{k,l}|^2.
inline double norm2_sq(const TwoVarSeries& f, AlphaWeight a) {
    const WeightTable w(a, std::max(f.deg1(), f.deg2()));
    double acc = 0.0;
    for (int k = 0; k <= f.deg1(); ++k) {
        double row = 0.0;
        for (int l = 0; l <= f.deg2(); ++l) row += w[l] * std::norm(f.coeff(k, l));
        acc += w[k] * row;
    }
    return acc;
}

inline double norm2(const TwoVarSeries& f, AlphaWeight a) { return std::sqrt(norm2_sq(f, a)); }

/// <f, g> in 𝔇_alpha, conjugate-linear in g.
inline Complex inner2(const TwoVarSeries& f, const TwoVarSeries& g, AlphaWeight a) {
    const int d1 = std::min(f.deg1(), g.deg1());
    const int d2 = std::min(f.deg2(), g.deg2());
    const WeightTable w(a, std::max(d1, d2));
    Complex acc{};
    for (int k = 0; k <= d1; ++k) {
        for (int l = 0; l <= d2; ++l) acc += w[k] * w[l] * f.coeff(k, l) * std::conj(g.coeff(k, l));
    }
    return acc;
}

inline double norm1_sq(const OneVarSeries& F, AlphaWeight a) {
    const WeightTable w(a, F.deg());
    double acc = 0.0;
    for (int k = 0; k <= F.deg(); ++k) acc += w[k] * std::norm(F.coeff(k));
    return acc;
}

inline double norm1(const OneVarSeries& F, AlphaWeight a) { return std::sqrt(norm1_sq(F, a)); }

inline Complex inner1(const OneVarSeries& F, const OneVarSeries& G, AlphaWeight a) {
    const int d = std::min(F.deg(), G.deg());
    const WeightTable w(a, d);
    Complex acc{};
    for (int k = 0; k <= d; ++k) acc += w[k] * F.coeff(k) * std::conj(G.coeff(k));
    return acc;
}

/// Weights (Mk+1)^alpha (Nk+1)^alpha: the 𝔇_alpha norm of lift(F, pat) is the
/// one-variable norm of F under these weights.
inline std::vector<double> pattern_weights(AlphaWeight a, const DiagonalPattern& pat, int max_index) {
    std::vector<double> w(static_cast<std::size_t>(std::max(max_index, 0)) + 1);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double kk = static_cast<double>(k);
        w[k] = std::pow(pat.M * kk + 1.0, a.alpha) * std::pow(pat.N * kk + 1.0, a.alpha);
    }
    return w;
}

namespace detail {

inline void require_rate_defined(AlphaWeight a) {
    if (a.alpha > 1.0) {
        throw UnsupportedRateError("rate function phi_alpha is undefined for alpha = " + std::to_string(a.alpha) +
                                   " > 1");
    }
}

}  // namespace detail

/// phi_alpha(s) = s^{1-alpha} for alpha < 1, log+(s) for alpha = 1.
inline double phi(AlphaWeight a, double s) {
    detail::require_rate_defined(a);
    if (!(s >= 0.0)) throw DomainError("phi needs s >= 0");
    if (a.alpha == 1.0) return s > 1.0 ? std::log(s) : 0.0;
    return std::pow(s, 1.0 - a.alpha);
}

/// Inverse of phi on the branch s >= 1 (s >= 0 for alpha < 1).
inline double phi_inv(AlphaWeight a, double t) {
    detail::require_rate_defined(a);
    if (!(t >= 0.0)) throw DomainError("phi_inv needs t >= 0");
    if (a.alpha == 1.0) return std::exp(t);
    return std::pow(t, 1.0 / (1.0 - a.alpha));
}

/// Target index of the diagonal restriction: f in 𝔇_alpha restricts into D_beta.
inline double beta_of_alpha(double alpha) { return alpha >= 0.0 ? alpha - 1.0 : 2.0 * alpha - 1.0; }

/// ||k_w||^2 in D_alpha, i.e. sum_k (k+1)^{-alpha} |w|^{2k}, to absolute accuracy tol.
inline double kernel_norm_sq(AlphaWeight a, Complex w, double tol = 1e-14) {
    const double r2 = std::norm(w);
    if (!(r2 < 1.0)) {
        throw DivergentKernelError("reproducing kernel diverges at |w| = " + std::to_string(std::sqrt(r2)));
    }
    if (!(tol > 0.0)) throw InputError("kernel tolerance must be positive");
    const double abs_alpha = std::abs(a.alpha);
    double sum = 0.0;
    double rk = 1.0;  // r^{2k}
    for (long k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        sum += std::pow(kd + 1.0, -a.alpha) * rk;
        const double next = std::pow(kd + 2.0, -a.alpha) * rk * r2;
        // Terms beyond k decay at least geometrically with this ratio.
        const double ratio = std::pow((kd + 2.0) / (kd + 1.0), abs_alpha) * r2;
        if (ratio < 1.0 && next / (1.0 - ratio) < tol) break;
        rk *= r2;
        if (k > 100'000'000) throw InternalError("kernel series failed to converge");
    }
    return sum;
}

/// Two-sided constants with c2 ||R f||_{D_2alpha} <= ||f||_alpha <= c1 ||R f||_{D_2alpha}
/// on the (M, N)-diagonal subspace. Sharp for the squared norms.
struct ComparisonConstants {
    double c1 = 1.0;
    double c2 = 1.0;
};

inline ComparisonConstants comparison_constants(double alpha, const DiagonalPattern& pat) {
    const double m = std::pow(static_cast<double>(pat.M), alpha);
    const double n = std::pow(static_cast<double>(pat.N), alpha);
    return {std::max(1.0, m) * std::max(1.0, n), std::min(1.0, m) * std::min(1.0, n)};
}

}  // namespace bidisk
