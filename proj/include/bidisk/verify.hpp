// SPDX-License-Identifier: Apache-2.0
#pragma once

// Randomized property suites over the series and spaces layers. Each suite is
// deterministic for a given seed and reports the worst relative excess seen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bidisk/approximants.hpp"
#include "bidisk/error.hpp"
#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"

namespace bidisk::verify {

struct SuiteReport {
    std::string name;
    int trials = 0;
    long checks = 0;
    long violations = 0;
    /// Largest (lhs - rhs) / max(|rhs|, 1) over inequality checks, or the
    /// largest relative error over equality checks.
    double worst = 0.0;

    bool passed() const noexcept { return violations == 0; }
};

inline constexpr double kRelTol = 1e-12;

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() noexcept { return rng_; }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    Complex complex() { return {gauss_(rng_), gauss_(rng_)}; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(integer(0, static_cast<int>(items.size()) - 1))];
    }

    OneVarSeries onevar(int max_deg) {
        std::vector<Complex> c(static_cast<std::size_t>(integer(0, max_deg)) + 1);
        for (auto& x : c) x = complex();
        return OneVarSeries(std::move(c));
    }

    TwoVarSeries twovar(int max_deg) {
        const int d1 = integer(0, max_deg);
        const int d2 = integer(0, max_deg);
        std::vector<Complex> c(static_cast<std::size_t>(d1 + 1) * static_cast<std::size_t>(d2 + 1));
        for (auto& x : c) x = complex();
        return TwoVarSeries(d1, d2, std::move(c));
    }

    TwoVarSeries diagonal(const DiagonalPattern& pat, int max_deg) { return lift(onevar(max_deg), pat); }

    DiagonalPattern pattern(int max_mn = 3) { return {integer(1, max_mn), integer(1, max_mn)}; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_;
};

namespace detail {

class Tally {
public:
    explicit Tally(SuiteReport& r) : r_(r) {}

    /// lhs <= rhs up to relative tolerance.
    void at_most(double lhs, double rhs) {
        ++r_.checks;
        const double excess = (lhs - rhs) / std::max(std::abs(rhs), 1.0);
        r_.worst = std::max(r_.worst, excess);
        if (!(excess <= kRelTol)) ++r_.violations;
    }

    void equal(double a, double b) {
        ++r_.checks;
        const double err = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        r_.worst = std::max(r_.worst, err);
        if (!(err <= kRelTol)) ++r_.violations;
    }

    void exact(bool ok) {
        ++r_.checks;
        if (!ok) {
            ++r_.violations;
            r_.worst = std::max(r_.worst, 1.0);
        }
    }

private:
    SuiteReport& r_;
};

}  // namespace detail

/// ||R_diag f||_{D_beta(alpha)} <= ||f||_alpha for alpha in {-2, ..., 2}.
inline SuiteReport suite_restriction(int trials, std::uint64_t seed) {
    SuiteReport rep{"restriction", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    const std::vector<double> alphas{-2.0, -1.0, 0.0, 1.0, 2.0};
    for (int i = 0; i < trials; ++i) {
        const TwoVarSeries f = gen.twovar(8);
        const OneVarSeries r = diag_restrict(f);
        for (double alpha : alphas) {
            t.at_most(norm1(r, AlphaWeight{beta_of_alpha(alpha)}), norm2(f, AlphaWeight{alpha}));
        }
    }
    return rep;
}

/// ||g(z1) h(z2)||_alpha = ||g||_{D_alpha} ||h||_{D_alpha}.
inline SuiteReport suite_separable(int trials, std::uint64_t seed) {
    SuiteReport rep{"separable", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        const OneVarSeries g = gen.onevar(10);
        const OneVarSeries h = gen.onevar(10);
        const AlphaWeight a{gen.uniform(-2.0, 2.0)};
        t.equal(norm2(separable_product(g, h), a), norm1(g, a) * norm1(h, a));
    }
    return rep;
}

/// For diagonal f and any polynomial r with diagonal projection s:
/// ||s f - 1|| <= ||r f - 1||, with ||r f - 1||^2 = ||s f - 1||^2 + ||(r - s) f||^2.
inline SuiteReport suite_polyextraction(int trials, std::uint64_t seed) {
    SuiteReport rep{"polyextraction", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    const std::vector<double> alphas{-1.0, -0.5, 0.0, 0.5, 1.0};
    const TwoVarSeries one = TwoVarSeries::constant(1.0);
    for (int i = 0; i < trials; ++i) {
        const DiagonalPattern pat = gen.pattern();
        const TwoVarSeries f = gen.diagonal(pat, 3);
        const TwoVarSeries r = gen.twovar(6);
        const TwoVarSeries s = diagonal_project(r, pat);
        const AlphaWeight a{gen.pick(alphas)};
        const double full = norm2_sq(multiply(r, f) - one, a);
        const double kept = norm2_sq(multiply(s, f) - one, a);
        const double dropped = norm2_sq(multiply(r - s, f), a);
        t.at_most(kept, full);
        t.equal(full, kept + dropped);
    }
    return rep;
}

/// c2 ||R f||_{D_2alpha} <= ||f||_alpha <= c1 ||R f||_{D_2alpha} on the
/// (M, N)-diagonal subspace, checked in the sharp squared form and for norms.
inline SuiteReport suite_comparison(int trials, std::uint64_t seed) {
    SuiteReport rep{"comparison", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        const DiagonalPattern pat = gen.pattern();
        const double alpha = gen.uniform(-2.0, 2.0);
        const TwoVarSeries f = gen.diagonal(pat, 12);
        const OneVarSeries F = restrict_pattern(f, pat);
        const auto c = comparison_constants(alpha, pat);
        const double lhs_sq = norm2_sq(f, AlphaWeight{alpha});
        const double ref_sq = norm1_sq(F, AlphaWeight{2.0 * alpha});
        t.at_most(c.c2 * ref_sq, lhs_sq);
        t.at_most(lhs_sq, c.c1 * ref_sq);
        t.at_most(c.c2 * std::sqrt(ref_sq), std::sqrt(lhs_sq));
        t.at_most(std::sqrt(lhs_sq), c.c1 * std::sqrt(ref_sq));
    }
    return rep;
}

/// ||f(., w)||_{D_alpha} <= ||k_w||_{D_alpha} ||f||_alpha for |w| <= 0.9, both variables.
inline SuiteReport suite_slice(int trials, std::uint64_t seed) {
    SuiteReport rep{"slice", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        const TwoVarSeries f = gen.twovar(8);
        const AlphaWeight a{gen.uniform(-2.0, 2.0)};
        const Complex w = std::polar(gen.uniform(0.0, 0.9), gen.uniform(0.0, 2.0 * std::numbers::pi));
        const double bound = std::sqrt(kernel_norm_sq(a, w)) * norm2(f, a);
        t.at_most(norm1(slice(f, Variable::z2, w), a), bound);
        t.at_most(norm1(slice(f, Variable::z1, w), a), bound);
    }
    return rep;
}

/// ||F(z1 z2)||_alpha = ||F||_{D_2alpha}.
inline SuiteReport suite_lift(int trials, std::uint64_t seed) {
    SuiteReport rep{"lift", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    const std::vector<double> alphas{-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int i = 0; i < trials; ++i) {
        const OneVarSeries F = gen.onevar(16);
        for (double alpha : alphas) {
            t.equal(norm2(lift(F, {1, 1}), AlphaWeight{alpha}), norm1(F, AlphaWeight{2.0 * alpha}));
        }
    }
    return rep;
}

/// restrict(lift(F, pat), pat) == F exactly, all patterns in {1,2,3}^2.
inline SuiteReport suite_roundtrip(int trials, std::uint64_t seed) {
    SuiteReport rep{"roundtrip", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        const OneVarSeries F = gen.onevar(16);
        for (int M = 1; M <= 3; ++M) {
            for (int N = 1; N <= 3; ++N) t.exact(restrict_pattern(lift(F, {M, N}), {M, N}) == F);
        }
    }
    return rep;
}

/// f * reciprocal(f) agrees with 1 on the truncation grid to 1e-12 (1 + sum |a|).
/// Generated f satisfy sum_{(k,l) != 0} |a_{k,l}| < |a_00| / 2, so f has no zeros
/// on the closed bidisk and 1/f has geometrically decaying coefficients.
inline SuiteReport suite_reciprocal(int trials, std::uint64_t seed) {
    SuiteReport rep{"reciprocal", trials};
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        TwoVarSeries f = gen.twovar(5);
        double tail = 0.0;
        for (const auto& term : f.terms()) {
            if (term.k != 0 || term.l != 0) tail += std::abs(term.c);
        }
        const Complex a00 = std::polar(gen.uniform(0.5, 2.0), gen.uniform(0.0, 2.0 * std::numbers::pi));
        const double scale = tail > 0.0 ? gen.uniform(0.05, 0.49) * std::abs(a00) / tail : 0.0;
        f = scale * f;
        f.set(0, 0, a00);
        double mass = 0.0;
        for (const auto& c : f.coeffs()) mass += std::abs(c);

        const int d1 = gen.integer(0, 12);
        const int d2 = gen.integer(0, 12);
        const TwoVarSeries prod = multiply(f, reciprocal(f, d1, d2));
        double err = 0.0;
        for (int k = 0; k <= d1; ++k) {
            for (int l = 0; l <= d2; ++l) {
                err = std::max(err, std::abs(prod.coeff(k, l) - (k == 0 && l == 0 ? Complex{1.0} : Complex{})));
            }
        }
        ++rep.checks;
        const double rel = err / (1.0 + mass);
        rep.worst = std::max(rep.worst, rel);
        if (!(rel <= kRelTol)) ++rep.violations;
    }
    return rep;
}

/// diagonal_project is idempotent and never increases the alpha-norm, alpha in {-1, 0, 1}.
inline SuiteReport suite_projection(int trials, std::uint64_t seed) {
    SuiteReport rep{"projection", trials};
    detail::Tally t(rep);
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        const DiagonalPattern pat = gen.pattern();
        const TwoVarSeries r = gen.twovar(9);
        const TwoVarSeries s = diagonal_project(r, pat);
        t.exact(diagonal_project(s, pat) == s);
        for (double alpha : {-1.0, 0.0, 1.0}) t.at_most(norm2(s, AlphaWeight{alpha}), norm2(r, AlphaWeight{alpha}));
    }
    return rep;
}

/// phi_inv(phi(s)) = s on [1, 1e6] to 1e-10 relative, alpha <= 1.
inline SuiteReport suite_phi(int trials, std::uint64_t seed) {
    SuiteReport rep{"phi", trials};
    Generator gen(seed);
    for (int i = 0; i < trials; ++i) {
        const AlphaWeight a{i % 5 == 0 ? 1.0 : gen.uniform(-2.0, 0.95)};
        const double s = std::pow(10.0, gen.uniform(0.0, 6.0));
        const double back = phi_inv(a, phi(a, s));
        const double rel = std::abs(back - s) / s;
        ++rep.checks;
        rep.worst = std::max(rep.worst, rel);
        if (!(rel <= 1e-10)) ++rep.violations;
    }
    return rep;
}

struct Suite {
    const char* name;
    SuiteReport (*run)(int, std::uint64_t);
};

inline const std::vector<Suite>& suites() {
    static const std::vector<Suite> all{
        {"restriction", suite_restriction},   {"separable", suite_separable}, {"polyextraction", suite_polyextraction},
        {"comparison", suite_comparison},     {"slice", suite_slice},         {"lift", suite_lift},
        {"roundtrip", suite_roundtrip},       {"reciprocal", suite_reciprocal}, {"projection", suite_projection},
        {"phi", suite_phi},
    };
    return all;
}

inline SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed) {
    if (trials < 1) throw InputError("trials must be positive");
    for (const auto& s : suites()) {
        if (name == s.name) return s.run(trials, seed);
    }
    throw InputError("unknown suite '" + name + "'");
}

}  // namespace bidisk::verify
