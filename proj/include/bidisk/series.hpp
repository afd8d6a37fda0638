// SPDX-License-Identifier: Apache-2.0
#pragma once

// Truncated power series in one and two complex variables, and the maps
// between them: slices, diagonal restriction, lifting along z1^M z2^N and
// the matching restriction/projection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bidisk/error.hpp"

namespace bidisk {

using Complex = std::complex<double>;

/// Largest number of stored coefficients a single series may hold.
inline constexpr std::size_t kDefaultMaxGridEntries = std::size_t{4096} * 4096;
/// Admissibility threshold on |a_{0,0}| for reciprocals.
inline constexpr double kDefaultReciprocalEps = 1e-12;

namespace detail {

inline bool all_finite(std::span<const Complex> values) {
    return std::all_of(values.begin(), values.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

inline std::size_t checked_grid_size(long d1, long d2, std::size_t max_entries) {
    if (d1 < 0 || d2 < 0) {
        throw InputError("negative truncation degree (" + std::to_string(d1) + ", " +
                         std::to_string(d2) + ")");
    }
    const double entries = (static_cast<double>(d1) + 1.0) * (static_cast<double>(d2) + 1.0);
    if (entries > static_cast<double>(max_entries)) {
        throw SizeLimitError("series grid " + std::to_string(d1 + 1) + "x" +
                             std::to_string(d2 + 1) + " exceeds the cap of " +
                             std::to_string(max_entries) + " entries");
    }
    return static_cast<std::size_t>(d1 + 1) * static_cast<std::size_t>(d2 + 1);
}

}  // namespace detail

/// Support pattern z1^{Mk} z2^{Nk} of functions of z1^M z2^N.
struct DiagonalPattern {
    int M = 1;
    int N = 1;

    DiagonalPattern() = default;
    DiagonalPattern(int m, int n) : M(m), N(n) {
        if (M < 1 || N < 1) {
            throw InputError("diagonal pattern needs M, N >= 1 (got " + std::to_string(M) +
                             ", " + std::to_string(N) + ")");
        }
    }

    friend bool operator==(const DiagonalPattern&, const DiagonalPattern&) = default;
};

/// Truncated series sum_{k<=deg} a_k z^k.
class OneVarSeries {
public:
    OneVarSeries() : coeffs_(1, Complex{}) {}

    explicit OneVarSeries(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.assign(1, Complex{});
        if (!detail::all_finite(coeffs_)) throw NonFiniteError("one-variable series has a non-finite coefficient");
    }

    OneVarSeries(std::initializer_list<Complex> coeffs)
        : OneVarSeries(std::vector<Complex>(coeffs)) {}

    static OneVarSeries zero(int deg) {
        detail::checked_grid_size(deg, 0, kDefaultMaxGridEntries);
        return OneVarSeries(std::vector<Complex>(static_cast<std::size_t>(deg) + 1));
    }

    static OneVarSeries monomial(int k, Complex c = 1.0) {
        auto s = zero(k);
        s.coeffs_[static_cast<std::size_t>(k)] = c;
        return s;
    }

    int deg() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

    /// Zero-extended read.
    Complex coeff(int k) const noexcept {
        return (k < 0 || k > deg()) ? Complex{} : coeffs_[static_cast<std::size_t>(k)];
    }

    void set(int k, Complex c) {
        if (k < 0 || k > deg()) throw RangeError("index " + std::to_string(k) + " outside degree " + std::to_string(deg()));
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw NonFiniteError("non-finite coefficient");
        coeffs_[static_cast<std::size_t>(k)] = c;
    }

    friend bool operator==(const OneVarSeries& a, const OneVarSeries& b) {
        const int d = std::max(a.deg(), b.deg());
        for (int k = 0; k <= d; ++k) {
            if (a.coeff(k) != b.coeff(k)) return false;
        }
        return true;
    }

    friend OneVarSeries operator+(const OneVarSeries& a, const OneVarSeries& b) {
        std::vector<Complex> out(static_cast<std::size_t>(std::max(a.deg(), b.deg())) + 1);
        for (int k = 0; k < static_cast<int>(out.size()); ++k) out[k] = a.coeff(k) + b.coeff(k);
        return OneVarSeries(std::move(out));
    }

    friend OneVarSeries operator-(const OneVarSeries& a, const OneVarSeries& b) {
        return a + (-1.0) * b;
    }

    friend OneVarSeries operator*(Complex s, const OneVarSeries& a) {
        std::vector<Complex> out(a.coeffs_);
        for (auto& c : out) c *= s;
        return OneVarSeries(std::move(out));
    }

private:
    std::vector<Complex> coeffs_;
};

/// Truncated series sum_{k<=deg1, l<=deg2} a_{k,l} z1^k z2^l, stored as a
/// dense row-major grid (row k, column l).
class TwoVarSeries {
public:
    struct Term {
        int k;
        int l;
        Complex c;
    };

    TwoVarSeries() : deg1_(0), deg2_(0), coeffs_(1, Complex{}) {}

    TwoVarSeries(int deg1, int deg2, std::vector<Complex> coeffs,
                 std::size_t max_entries = kDefaultMaxGridEntries)
        : deg1_(deg1), deg2_(deg2), coeffs_(std::move(coeffs)) {
        const auto size = detail::checked_grid_size(deg1, deg2, max_entries);
        if (coeffs_.size() != size) {
            throw InputError("coefficient grid has " + std::to_string(coeffs_.size()) +
                             " entries, expected " + std::to_string(size));
        }
        if (!detail::all_finite(coeffs_)) throw NonFiniteError("two-variable series has a non-finite coefficient");
    }

    static TwoVarSeries zero(int deg1, int deg2, std::size_t max_entries = kDefaultMaxGridEntries) {
        const auto size = detail::checked_grid_size(deg1, deg2, max_entries);
        return TwoVarSeries(deg1, deg2, std::vector<Complex>(size), max_entries);
    }

    static TwoVarSeries constant(Complex c) { return TwoVarSeries(0, 0, {c}); }

    static TwoVarSeries monomial(int k, int l, Complex c = 1.0) {
        auto s = zero(k, l);
        s.coeffs_[s.index(k, l)] = c;
        return s;
    }

    /// Builds a series from nested rows: rows[k][l] = a_{k,l}. Rows may be ragged.
    static TwoVarSeries from_rows(const std::vector<std::vector<Complex>>& rows) {
        int d2 = 0;
        for (const auto& r : rows) d2 = std::max(d2, static_cast<int>(r.size()) - 1);
        auto s = zero(std::max(static_cast<int>(rows.size()) - 1, 0), d2);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            for (std::size_t l = 0; l < rows[k].size(); ++l) s.set(static_cast<int>(k), static_cast<int>(l), rows[k][l]);
        }
        return s;
    }

    int deg1() const noexcept { return deg1_; }
    int deg2() const noexcept { return deg2_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

    /// Zero-extended read.
    Complex coeff(int k, int l) const noexcept {
        if (k < 0 || l < 0 || k > deg1_ || l > deg2_) return {};
        return coeffs_[index(k, l)];
    }

    void set(int k, int l, Complex c) {
        if (k < 0 || l < 0 || k > deg1_ || l > deg2_) {
            throw RangeError("index (" + std::to_string(k) + ", " + std::to_string(l) +
                             ") outside grid of degrees (" + std::to_string(deg1_) + ", " +
                             std::to_string(deg2_) + ")");
        }
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw NonFiniteError("non-finite coefficient");
        coeffs_[index(k, l)] = c;
    }

    /// Nonzero coefficients in lexicographic (k, l) order.
    std::vector<Term> terms() const {
        std::vector<Term> out;
        for (int k = 0; k <= deg1_; ++k) {
            for (int l = 0; l <= deg2_; ++l) {
                const Complex c = coeffs_[index(k, l)];
                if (c != Complex{}) out.push_back({k, l, c});
            }
        }
        return out;
    }

    bool is_zero() const noexcept {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == Complex{}; });
    }

    bool is_real() const noexcept {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c.imag() == 0.0; });
    }

    /// Same function with trailing zero rows/columns dropped.
    TwoVarSeries trimmed() const {
        int d1 = 0, d2 = 0;
        for (int k = 0; k <= deg1_; ++k) {
            for (int l = 0; l <= deg2_; ++l) {
                if (coeffs_[index(k, l)] != Complex{}) {
                    d1 = std::max(d1, k);
                    d2 = std::max(d2, l);
                }
            }
        }
        return resized(d1, d2);
    }

    /// Zero-extends or truncates to the given degrees.
    TwoVarSeries resized(int d1, int d2, std::size_t max_entries = kDefaultMaxGridEntries) const {
        auto out = zero(d1, d2, max_entries);
        for (int k = 0; k <= std::min(d1, deg1_); ++k) {
            for (int l = 0; l <= std::min(d2, deg2_); ++l) out.coeffs_[out.index(k, l)] = coeffs_[index(k, l)];
        }
        return out;
    }

    friend bool operator==(const TwoVarSeries& a, const TwoVarSeries& b) {
        const int d1 = std::max(a.deg1_, b.deg1_);
        const int d2 = std::max(a.deg2_, b.deg2_);
        for (int k = 0; k <= d1; ++k) {
            for (int l = 0; l <= d2; ++l) {
                if (a.coeff(k, l) != b.coeff(k, l)) return false;
            }
        }
        return true;
    }

    friend TwoVarSeries operator+(const TwoVarSeries& a, const TwoVarSeries& b) {
        auto out = a.resized(std::max(a.deg1_, b.deg1_), std::max(a.deg2_, b.deg2_));
        for (int k = 0; k <= b.deg1_; ++k) {
            for (int l = 0; l <= b.deg2_; ++l) out.coeffs_[out.index(k, l)] += b.coeffs_[b.index(k, l)];
        }
        return out;
    }

    friend TwoVarSeries operator-(const TwoVarSeries& a, const TwoVarSeries& b) {
        return a + (-1.0) * b;
    }

    friend TwoVarSeries operator*(Complex s, const TwoVarSeries& a) {
        TwoVarSeries out = a;
        for (auto& c : out.coeffs_) c *= s;
        return out;
    }

private:
    std::size_t index(int k, int l) const noexcept {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(deg2_ + 1) + static_cast<std::size_t>(l);
    }

    int deg1_;
    int deg2_;
    std::vector<Complex> coeffs_;
};

/// Max |a - b| over the zero-extended grids.
inline double max_abs_diff(const TwoVarSeries& a, const TwoVarSeries& b) {
    double m = 0.0;
    for (int k = 0; k <= std::max(a.deg1(), b.deg1()); ++k) {
        for (int l = 0; l <= std::max(a.deg2(), b.deg2()); ++l) m = std::max(m, std::abs(a.coeff(k, l) - b.coeff(k, l)));
    }
    return m;
}

inline double max_abs_diff(const OneVarSeries& a, const OneVarSeries& b) {
    double m = 0.0;
    for (int k = 0; k <= std::max(a.deg(), b.deg()); ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
    return m;
}

/// Exact product; degrees add. Only the nonzero terms of the sparser factor are visited.
inline TwoVarSeries multiply(const TwoVarSeries& f, const TwoVarSeries& g,
                             std::size_t max_entries = kDefaultMaxGridEntries) {
    auto out_coeffs = std::vector<Complex>(
        detail::checked_grid_size(static_cast<long>(f.deg1()) + g.deg1(),
                                  static_cast<long>(f.deg2()) + g.deg2(), max_entries));
    const int d2 = f.deg2() + g.deg2();
    const bool f_sparser = f.terms().size() <= g.terms().size();
    const TwoVarSeries& sparse = f_sparser ? f : g;
    const TwoVarSeries& dense = f_sparser ? g : f;
    const auto dense_coeffs = dense.coeffs();
    for (const auto& t : sparse.terms()) {
        for (int k = 0; k <= dense.deg1(); ++k) {
            const std::size_t src = static_cast<std::size_t>(k) * static_cast<std::size_t>(dense.deg2() + 1);
            const std::size_t dst = static_cast<std::size_t>(k + t.k) * static_cast<std::size_t>(d2 + 1) +
                                    static_cast<std::size_t>(t.l);
            for (int l = 0; l <= dense.deg2(); ++l) out_coeffs[dst + l] += t.c * dense_coeffs[src + l];
        }
    }
    return TwoVarSeries(f.deg1() + g.deg1(), d2, std::move(out_coeffs), max_entries);
}

inline OneVarSeries multiply(const OneVarSeries& f, const OneVarSeries& g) {
    std::vector<Complex> out(static_cast<std::size_t>(f.deg() + g.deg()) + 1);
    for (int i = 0; i <= f.deg(); ++i) {
        const Complex a = f.coeff(i);
        if (a == Complex{}) continue;
        for (int j = 0; j <= g.deg(); ++j) out[i + j] += a * g.coeff(j);
    }
    return OneVarSeries(std::move(out));
}

/// Coefficients b_{k,l} of 1/f for k <= d1, l <= d2, by the recursion
/// b_{k,l} = -(1/a_{0,0}) sum_{(i,j) != (0,0)} a_{i,j} b_{k-i,l-j}.
inline TwoVarSeries reciprocal(const TwoVarSeries& f, int d1, int d2,
                               double eps0 = kDefaultReciprocalEps,
                               std::size_t max_entries = kDefaultMaxGridEntries) {
    const Complex a00 = f.coeff(0, 0);
    if (!(std::abs(a00) > eps0)) {
        throw SingularReciprocalError("constant term |a00| = " + std::to_string(std::abs(a00)) +
                                      " does not exceed eps0 = " + std::to_string(eps0));
    }
    auto b = TwoVarSeries::zero(d1, d2, max_entries);
    std::vector<Complex> out(b.coeffs().begin(), b.coeffs().end());
    const auto at = [d2](int k, int l) { return static_cast<std::size_t>(k) * static_cast<std::size_t>(d2 + 1) + l; };
    std::vector<TwoVarSeries::Term> rest;
    for (const auto& t : f.terms()) {
        if ((t.k != 0 || t.l != 0) && t.k <= d1 && t.l <= d2) rest.push_back(t);
    }
    const Complex inv = 1.0 / a00;
    for (int k = 0; k <= d1; ++k) {
        for (int l = 0; l <= d2; ++l) {
            Complex acc = (k == 0 && l == 0) ? Complex{1.0} : Complex{};
            for (const auto& t : rest) {
                if (t.k <= k && t.l <= l) acc -= t.c * out[at(k - t.k, l - t.l)];
            }
            out[at(k, l)] = acc * inv;
        }
    }
    if (!detail::all_finite(out)) {
        throw SingularReciprocalError("reciprocal coefficients overflowed at degrees (" + std::to_string(d1) + ", " +
                                      std::to_string(d2) + ")");
    }
    return TwoVarSeries(d1, d2, std::move(out), max_entries);
}

/// One-variable reciprocal truncated at degree d.
inline OneVarSeries reciprocal(const OneVarSeries& F, int d, double eps0 = kDefaultReciprocalEps) {
    const Complex a0 = F.coeff(0);
    if (!(std::abs(a0) > eps0)) {
        throw SingularReciprocalError("constant term |a0| = " + std::to_string(std::abs(a0)) +
                                      " does not exceed eps0 = " + std::to_string(eps0));
    }
    detail::checked_grid_size(d, 0, kDefaultMaxGridEntries);
    std::vector<Complex> out(static_cast<std::size_t>(d) + 1);
    const Complex inv = 1.0 / a0;
    for (int k = 0; k <= d; ++k) {
        Complex acc = k == 0 ? Complex{1.0} : Complex{};
        for (int i = 1; i <= std::min(k, F.deg()); ++i) acc -= F.coeff(i) * out[k - i];
        out[k] = acc * inv;
    }
    if (!detail::all_finite(out)) throw SingularReciprocalError("reciprocal coefficients overflowed");
    return OneVarSeries(std::move(out));
}

enum class Variable { z1, z2 };

/// Fixes `fixed` at w (|w| < 1) and returns the function of the other variable.
inline OneVarSeries slice(const TwoVarSeries& f, Variable fixed, Complex w) {
    if (!(std::abs(w) < 1.0)) {
        throw DomainError("slice point |w| = " + std::to_string(std::abs(w)) + " is not inside the unit disk");
    }
    if (fixed == Variable::z2) {
        std::vector<Complex> out(static_cast<std::size_t>(f.deg1()) + 1);
        for (int k = 0; k <= f.deg1(); ++k) {
            Complex acc{};
            for (int l = f.deg2(); l >= 0; --l) acc = acc * w + f.coeff(k, l);
            out[k] = acc;
        }
        return OneVarSeries(std::move(out));
    }
    std::vector<Complex> out(static_cast<std::size_t>(f.deg2()) + 1);
    for (int l = 0; l <= f.deg2(); ++l) {
        Complex acc{};
        for (int k = f.deg1(); k >= 0; --k) acc = acc * w + f.coeff(k, l);
        out[l] = acc;
    }
    return OneVarSeries(std::move(out));
}

/// f(z, z): coefficient n is the anti-diagonal sum of a_{k,l} over k + l = n.
inline OneVarSeries diag_restrict(const TwoVarSeries& f) {
    std::vector<Complex> out(static_cast<std::size_t>(f.deg1() + f.deg2()) + 1);
    for (int k = 0; k <= f.deg1(); ++k) {
        for (int l = 0; l <= f.deg2(); ++l) out[k + l] += f.coeff(k, l);
    }
    return OneVarSeries(std::move(out));
}

/// F(z1^M z2^N).
inline TwoVarSeries lift(const OneVarSeries& F, const DiagonalPattern& pat,
                         std::size_t max_entries = kDefaultMaxGridEntries) {
    const long d1 = static_cast<long>(pat.M) * F.deg();
    const long d2 = static_cast<long>(pat.N) * F.deg();
    detail::checked_grid_size(d1, d2, max_entries);
    auto out = TwoVarSeries::zero(static_cast<int>(d1), static_cast<int>(d2), max_entries);
    for (int k = 0; k <= F.deg(); ++k) {
        if (F.coeff(k) != Complex{}) out.set(pat.M * k, pat.N * k, F.coeff(k));
    }
    return out;
}

/// F(z1, z2) = F(z1): embeds a one-variable function as independent of z2.
inline TwoVarSeries embed_z1(const OneVarSeries& F) {
    auto out = TwoVarSeries::zero(F.deg(), 0);
    for (int k = 0; k <= F.deg(); ++k) out.set(k, 0, F.coeff(k));
    return out;
}

/// g(z1) h(z2).
inline TwoVarSeries separable_product(const OneVarSeries& g, const OneVarSeries& h,
                                      std::size_t max_entries = kDefaultMaxGridEntries) {
    auto out = TwoVarSeries::zero(g.deg(), h.deg(), max_entries);
    for (int k = 0; k <= g.deg(); ++k) {
        for (int l = 0; l <= h.deg(); ++l) out.set(k, l, g.coeff(k) * h.coeff(l));
    }
    return out;
}

inline bool on_pattern(int k, int l, const DiagonalPattern& pat) {
    return k % pat.M == 0 && l % pat.N == 0 && k / pat.M == l / pat.N;
}

/// True iff every nonzero coefficient sits at some (Mk, Nk).
inline bool is_diagonal(const TwoVarSeries& f, const DiagonalPattern& pat) {
    for (const auto& t : f.terms()) {
        if (!on_pattern(t.k, t.l, pat)) return false;
    }
    return true;
}

/// Zeroes every coefficient off the (M, N)-diagonal.
inline TwoVarSeries diagonal_project(const TwoVarSeries& r, const DiagonalPattern& pat) {
    auto out = TwoVarSeries::zero(r.deg1(), r.deg2());
    for (const auto& t : r.terms()) {
        if (on_pattern(t.k, t.l, pat)) out.set(t.k, t.l, t.c);
    }
    return out;
}

/// f(z^{1/M}, 1) for f supported on the (M, N)-diagonal: coefficient k is a_{Mk,Nk}.
inline OneVarSeries restrict_pattern(const TwoVarSeries& f, const DiagonalPattern& pat) {
    for (const auto& t : f.terms()) {
        if (!on_pattern(t.k, t.l, pat)) {
            throw PatternViolationError("coefficient at (" + std::to_string(t.k) + ", " + std::to_string(t.l) +
                                        ") is off the (" + std::to_string(pat.M) + ", " + std::to_string(pat.N) +
                                        ")-diagonal");
        }
    }
    const int deg = std::min(f.deg1() / pat.M, f.deg2() / pat.N);
    std::vector<Complex> out(static_cast<std::size_t>(deg) + 1);
    for (int k = 0; k <= deg; ++k) out[k] = f.coeff(pat.M * k, pat.N * k);
    return OneVarSeries(std::move(out));
}

}  // namespace bidisk
