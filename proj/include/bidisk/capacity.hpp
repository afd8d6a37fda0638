// SPDX-License-Identifier: Apache-2.0
#pragma once

// Probability measures on the torus given by their Fourier coefficients:
// logarithmic energy, Cauchy transforms into the Bergman space, and the
// bilinear pairing that certifies non-cyclicity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bidisk/error.hpp"
#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"

namespace bidisk {

enum class MeasureKind { lebesgue, diagonal_current, custom };

/// mu-hat(k, l) for |k|, |l| <= K with mu-hat(0,0) = 1 and
/// mu-hat(-k,-l) = conj(mu-hat(k,l)). Only the half-plane l >= 0 is stored.
class FourierMeasure {
public:
    struct Coefficient {
        int k;
        int l;
        Complex value;
    };

    static FourierMeasure lebesgue(int K) { return FourierMeasure(K, MeasureKind::lebesgue); }

    /// Normalized integration current on {(e^{it}, e^{-it})}: mu-hat(k,l) = delta_{kl}.
    static FourierMeasure diagonal_current(int K) {
        FourierMeasure mu(K, MeasureKind::diagonal_current);
        for (int k = 1; k <= K; ++k) mu.store(k, k, 1.0);
        return mu;
    }

    /// Unit point mass at (1, 1): every coefficient equals 1.
    static FourierMeasure point_mass(int K) {
        FourierMeasure mu(K, MeasureKind::custom);
        for (int l = 0; l <= K; ++l) {
            for (int k = -K; k <= K; ++k) mu.store(k, l, 1.0);
        }
        return mu;
    }

    /// Custom measure from any set of coefficients; the mirror (-k,-l) of each
    /// given entry is filled in by conjugation. mu-hat(0,0) defaults to 1.
    static FourierMeasure from_coefficients(int K, std::span<const Coefficient> given, double tol = 1e-12) {
        FourierMeasure mu(K, MeasureKind::custom);
        std::vector<char> seen(mu.values_.size(), 0);
        for (const auto& c : given) {
            if (std::abs(c.k) > K || std::abs(c.l) > K) {
                throw RangeError("coefficient (" + std::to_string(c.k) + ", " + std::to_string(c.l) +
                                 ") outside cutoff K = " + std::to_string(K));
            }
            if (!std::isfinite(c.value.real()) || !std::isfinite(c.value.imag())) {
                throw NonFiniteError("non-finite Fourier coefficient");
            }
            if (std::abs(c.value) > 1.0 + tol) {
                throw InputError("|mu-hat(" + std::to_string(c.k) + ", " + std::to_string(c.l) +
                                 ")| exceeds 1 for a probability measure");
            }
            const bool upper = c.l > 0 || (c.l == 0 && c.k >= 0);
            const int k = upper ? c.k : -c.k;
            const int l = upper ? c.l : -c.l;
            const Complex v = upper ? c.value : std::conj(c.value);
            const auto idx = mu.index(k, l);
            if (seen[idx] && std::abs(mu.values_[idx] - v) > tol) {
                throw InputError("coefficients at (" + std::to_string(c.k) + ", " + std::to_string(c.l) +
                                 ") and its mirror violate Hermitian symmetry");
            }
            seen[idx] = 1;
            mu.store(k, l, v);
        }
        if (std::abs(mu.coeff(0, 0) - Complex{1.0}) > tol) {
            throw InputError("mu-hat(0,0) must equal 1 for a probability measure");
        }
        mu.store(0, 0, 1.0);
        return mu;
    }

    int cutoff() const noexcept { return K_; }
    MeasureKind kind() const noexcept { return kind_; }

    Complex coeff(int k, int l) const {
        if (std::abs(k) > K_ || std::abs(l) > K_) {
            throw RangeError("coefficient (" + std::to_string(k) + ", " + std::to_string(l) +
                             ") beyond stored cutoff K = " + std::to_string(K_));
        }
        if (l > 0 || (l == 0 && k >= 0)) return values_[index(k, l)];
        return std::conj(values_[index(-k, -l)]);
    }

private:
    FourierMeasure(int K, MeasureKind kind) : K_(K), kind_(kind) {
        if (K < 0) throw InputError("measure cutoff must be nonnegative");
        values_.assign(static_cast<std::size_t>(2 * K + 1) * static_cast<std::size_t>(K + 1), Complex{});
        values_[index(0, 0)] = 1.0;
    }

    std::size_t index(int k, int l) const noexcept {
        return static_cast<std::size_t>(l) * static_cast<std::size_t>(2 * K_ + 1) + static_cast<std::size_t>(k + K_);
    }

    /// Stores (k, l) with l >= 0; on the row l = 0 the mirror -k is kept consistent.
    void store(int k, int l, Complex v) {
        values_[index(k, l)] = v;
        if (l == 0) values_[index(-k, 0)] = std::conj(v);
    }

    int K_;
    MeasureKind kind_;
    std::vector<Complex> values_;
};

namespace detail {

/// Pairwise (cascade) summation: fixed reduction tree, independent of scheduling.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const auto half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

/// Partial sum of the logarithmic energy with its four groups of terms.
struct EnergyReport {
    int K = 0;
    double partial = 1.0;
    double constant = 1.0;
    double axis_z1 = 0.0;   // sum_{k=1}^K |mu(k,0)|^2 / k
    double axis_z2 = 0.0;   // sum_{l=1}^K |mu(0,l)|^2 / l
    double interior = 0.0;  // (1/2) sum_{0<|k|<=K} sum_{l=1}^K |mu(k,l)|^2 / (|k| l)
};

inline EnergyReport energy(const FourierMeasure& mu, int K) {
    if (K < 0 || K > mu.cutoff()) {
        throw RangeError("energy cutoff " + std::to_string(K) + " exceeds stored coefficients (K = " +
                         std::to_string(mu.cutoff()) + ")");
    }
    EnergyReport rep;
    rep.K = K;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) terms.push_back(std::norm(mu.coeff(k, 0)) / k);
    rep.axis_z1 = detail::pairwise_sum(terms);
    terms.clear();
    for (int l = 1; l <= K; ++l) terms.push_back(std::norm(mu.coeff(0, l)) / l);
    rep.axis_z2 = detail::pairwise_sum(terms);

    std::vector<double> stripes;
    stripes.reserve(static_cast<std::size_t>(2 * K));
    for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;
        terms.clear();
        for (int l = 1; l <= K; ++l) terms.push_back(std::norm(mu.coeff(k, l)) / (static_cast<double>(std::abs(k)) * l));
        stripes.push_back(detail::pairwise_sum(terms));
    }
    rep.interior = 0.5 * detail::pairwise_sum(stripes);
    rep.partial = rep.constant + rep.axis_z1 + rep.axis_z2 + rep.interior;
    return rep;
}

/// C[mu](z1, z2) = integral of (1 - e^{it1} z1)^{-1} (1 - e^{it2} z2)^{-1} dmu;
/// coefficient (k, l) is conj(mu-hat(k, l)).
inline TwoVarSeries cauchy_transform(const FourierMeasure& mu, int d1, int d2) {
    if (d1 < 0 || d2 < 0 || d1 > mu.cutoff() || d2 > mu.cutoff()) {
        throw RangeError("Cauchy transform degrees (" + std::to_string(d1) + ", " + std::to_string(d2) +
                         ") exceed measure cutoff K = " + std::to_string(mu.cutoff()));
    }
    auto g = TwoVarSeries::zero(d1, d2);
    for (int k = 0; k <= d1; ++k) {
        for (int l = 0; l <= d2; ++l) g.set(k, l, std::conj(mu.coeff(k, l)));
    }
    return g;
}

/// Squared norm in the Bergman space of the bidisk, which is 𝔇_{-1}.
inline double bergman_norm_sq(const TwoVarSeries& g) { return norm2_sq(g, AlphaWeight{-1.0}); }

/// Bilinear pairing sum a_{k,l} b_{k,l} identifying the Bergman space with the dual of 𝔇_1.
inline Complex dual_pairing(const TwoVarSeries& f, const TwoVarSeries& g) {
    Complex acc{};
    for (int k = 0; k <= std::min(f.deg1(), g.deg1()); ++k) {
        for (int l = 0; l <= std::min(f.deg2(), g.deg2()); ++l) acc += f.coeff(k, l) * g.coeff(k, l);
    }
    return acc;
}

/// max over 0 <= k, l <= maxdeg of |<z1^k z2^l f, C[mu]>|. Zero means C[mu]
/// annihilates every polynomial multiple of f up to this truncation.
inline double annihilation_check(const TwoVarSeries& f, const FourierMeasure& mu, int maxdeg) {
    if (maxdeg < 0) throw InputError("maxdeg must be nonnegative");
    const int d1 = maxdeg + f.deg1();
    const int d2 = maxdeg + f.deg2();
    if (d1 > mu.cutoff() || d2 > mu.cutoff()) {
        throw RangeError("annihilation check needs coefficients up to (" + std::to_string(d1) + ", " +
                         std::to_string(d2) + ") but the measure stops at K = " + std::to_string(mu.cutoff()));
    }
    const TwoVarSeries c = cauchy_transform(mu, d1, d2);
    const auto terms = f.terms();
    double worst = 0.0;
    for (int k = 0; k <= maxdeg; ++k) {
        for (int l = 0; l <= maxdeg; ++l) {
            Complex acc{};
            for (const auto& t : terms) acc += t.c * c.coeff(k + t.k, l + t.l);
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

}  // namespace bidisk
