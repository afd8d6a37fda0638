// SPDX-License-Identifier: Apache-2.0
#pragma once

// Optimal polynomial approximants p_n to 1/f: the minimizers of ||p f - 1||_alpha
// over a monomial basis, computed from the Hermitian normal equations. Also the
// explicit Riesz-type and Cesaro constructions, and the reduction of
// (M, N)-diagonal problems to a single variable.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bidisk/error.hpp"
#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"

namespace bidisk {

enum class BasisKind { full, diagonal, onevar };

/// Index set of the approximating polynomials.
///   full:     z1^k z2^l, 0 <= k, l <= n           ((n+1)^2 monomials)
///   diagonal: z1^{Mk} z2^{Nk}, Mk <= n and Nk <= n
///   onevar:   z1^k, 0 <= k <= n
struct BasisSpec {
    int n = 0;
    BasisKind kind = BasisKind::full;
    DiagonalPattern pattern{};

    static BasisSpec full(int n) { return {n, BasisKind::full, {}}; }
    static BasisSpec diagonal(int n, DiagonalPattern pat) { return {n, BasisKind::diagonal, pat}; }
    static BasisSpec onevar(int n) { return {n, BasisKind::onevar, {}}; }
};

struct Monomial {
    int k = 0;
    int l = 0;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Basis monomials in lexicographic (k, l) order; the constant comes first.
inline std::vector<Monomial> basis_monomials(const BasisSpec& b) {
    if (b.n < 0) throw InputError("approximant order must be nonnegative");
    std::vector<Monomial> out;
    switch (b.kind) {
        case BasisKind::full:
            for (int k = 0; k <= b.n; ++k) {
                for (int l = 0; l <= b.n; ++l) out.push_back({k, l});
            }
            break;
        case BasisKind::diagonal:
            for (int k = 0; b.pattern.M * k <= b.n && b.pattern.N * k <= b.n; ++k) {
                out.push_back({b.pattern.M * k, b.pattern.N * k});
            }
            break;
        case BasisKind::onevar:
            for (int k = 0; k <= b.n; ++k) out.push_back({k, 0});
            break;
    }
    return out;
}

struct SolverOptions {
    std::size_t max_unknowns = 10'000;
    /// Orthogonality certificate must satisfy max_i |<pf - 1, m_i f>| <= ortho_tol * ||f||^2.
    double ortho_tol = 1e-8;
    bool allow_regularization = true;
    /// Ridge added on factorization failure, relative to trace(G) / dim.
    double ridge_scale = 1e-12;
};

namespace detail {

/// Cholesky factor of a Gram matrix, real when the data allow it.
class GramFactor {
public:
    GramFactor(const Eigen::MatrixXcd& G, bool real, const SolverOptions& opts) : real_(real) {
        const auto dim = G.rows();
        if (dim == 0) return;
        if (real_) {
            Eigen::MatrixXd Gr = G.real();
            ok_ = factor(real_llt_, Gr, opts);
            rcond_ = ok_ ? real_llt_.rcond() : 0.0;
        } else {
            Eigen::MatrixXcd Gc = G;
            ok_ = factor(complex_llt_, Gc, opts);
            rcond_ = ok_ ? complex_llt_.rcond() : 0.0;
        }
    }

    bool ok() const noexcept { return ok_; }
    bool regularized() const noexcept { return regularized_; }
    double cond_estimate() const noexcept {
        return rcond_ > 0.0 ? 1.0 / rcond_ : std::numeric_limits<double>::infinity();
    }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
        if (rhs.size() == 0) return rhs;
        if (real_) {
            const Eigen::VectorXd x = real_llt_.solve(Eigen::VectorXd(rhs.real()));
            return x.cast<Complex>();
        }
        return complex_llt_.solve(rhs);
    }

private:
    template <class Llt, class Matrix>
    bool factor(Llt& llt, Matrix& G, const SolverOptions& opts) {
        llt.compute(G);
        if (llt.info() == Eigen::Success) return true;
        if (!opts.allow_regularization) return false;
        const double ridge = opts.ridge_scale * std::abs(G.trace()) / static_cast<double>(G.rows());
        G.diagonal().array() += ridge;
        regularized_ = true;
        llt.compute(G);
        return llt.info() == Eigen::Success;
    }

    bool real_ = false;
    bool ok_ = false;
    bool regularized_ = false;
    double rcond_ = 0.0;
    Eigen::LLT<Eigen::MatrixXd> real_llt_;
    Eigen::LLT<Eigen::MatrixXcd> complex_llt_;
};

/// Dense lookup (k, l) -> basis position, -1 when absent.
class BasisIndex {
public:
    explicit BasisIndex(const std::vector<Monomial>& basis) {
        for (const auto& m : basis) {
            max_k_ = std::max(max_k_, m.k);
            max_l_ = std::max(max_l_, m.l);
        }
        table_.assign(static_cast<std::size_t>(max_k_ + 1) * static_cast<std::size_t>(max_l_ + 1), -1);
        for (std::size_t i = 0; i < basis.size(); ++i) table_[at(basis[i].k, basis[i].l)] = static_cast<long>(i);
    }

    long find(int k, int l) const noexcept {
        if (k < 0 || l < 0 || k > max_k_ || l > max_l_) return -1;
        return table_[at(k, l)];
    }

    int max_k() const noexcept { return max_k_; }
    int max_l() const noexcept { return max_l_; }

private:
    std::size_t at(int k, int l) const noexcept {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(max_l_ + 1) + static_cast<std::size_t>(l);
    }

    int max_k_ = 0;
    int max_l_ = 0;
    std::vector<long> table_;
};

}  // namespace detail

/// Normal equations G c = e for min ||sum_j c_j m_j f - 1||_alpha, with
/// G[i][j] = <m_j f, m_i f>_alpha and e[i] = <1, m_i f>_alpha.
struct GramSystem {
    std::vector<Monomial> basis;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
    double cond_estimate = 0.0;
    bool regularized = false;
    std::shared_ptr<const detail::GramFactor> factor;
};

inline GramSystem gram_assemble(const TwoVarSeries& f, AlphaWeight a, const BasisSpec& b,
                                const SolverOptions& opts = {}) {
    if (f.is_zero()) throw InputError("cannot approximate 1/f for f identically zero");
    GramSystem sys;
    sys.basis = basis_monomials(b);
    const auto dim = sys.basis.size();
    if (dim > opts.max_unknowns) {
        throw SizeLimitError("basis of " + std::to_string(dim) + " unknowns exceeds the solver cap of " +
                             std::to_string(opts.max_unknowns));
    }
    const detail::BasisIndex index(sys.basis);
    const auto terms = f.terms();
    const WeightTable w(a, std::max(index.max_k() + f.deg1(), index.max_l() + f.deg2()));

    // Row i collects <m_j f, m_i f>: every pair of support points (s, t) of f with
    // m_i + s = m_j + t contributes W(m_i + s) f_t conj(f_s).
    sys.matrix = Eigen::MatrixXcd::Zero(static_cast<long>(dim), static_cast<long>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const Monomial mi = sys.basis[i];
        for (const auto& s : terms) {
            const int pk = mi.k + s.k;
            const int pl = mi.l + s.l;
            const Complex ws = w[pk] * w[pl] * std::conj(s.c);
            for (const auto& t : terms) {
                const long j = index.find(pk - t.k, pl - t.l);
                if (j >= 0) sys.matrix(static_cast<long>(i), j) += ws * t.c;
            }
        }
    }
    sys.rhs = Eigen::VectorXcd::Zero(static_cast<long>(dim));
    const long constant = index.find(0, 0);
    if (constant >= 0) sys.rhs(constant) = std::conj(f.coeff(0, 0));

    auto factor = std::make_shared<detail::GramFactor>(sys.matrix, f.is_real(), opts);
    sys.cond_estimate = factor->cond_estimate();
    sys.regularized = factor->regularized();
    sys.factor = std::move(factor);
    return sys;
}

struct ApproximantResult {
    TwoVarSeries p;
    /// ||p f - 1||^2_alpha, recomputed from p by series arithmetic.
    double residual_sq = 1.0;
    int n = 0;
    BasisSpec basis{};
    double cond_estimate = 0.0;
    /// max_i |<p f - 1, m_i f>_alpha| over the basis.
    double ortho_residual = 0.0;
    bool regularized = false;
};

/// ||p f - 1||^2_alpha.
inline double residual_norm_sq(const TwoVarSeries& p, const TwoVarSeries& f, AlphaWeight a) {
    return norm2_sq(multiply(p, f) - TwoVarSeries::constant(1.0), a);
}

/// max_i |<p f - 1, m_i f>_alpha| over the given monomials.
inline double orthogonality_residual(const TwoVarSeries& p, const TwoVarSeries& f, AlphaWeight a,
                                     const std::vector<Monomial>& basis) {
    const TwoVarSeries r = multiply(p, f) - TwoVarSeries::constant(1.0);
    int max_k = 0, max_l = 0;
    for (const auto& m : basis) {
        max_k = std::max(max_k, m.k);
        max_l = std::max(max_l, m.l);
    }
    const WeightTable w(a, std::max(max_k + f.deg1(), max_l + f.deg2()));
    const auto terms = f.terms();
    double worst = 0.0;
    for (const auto& m : basis) {
        Complex acc{};
        for (const auto& s : terms) {
            const int k = m.k + s.k;
            const int l = m.l + s.l;
            acc += w[k] * w[l] * r.coeff(k, l) * std::conj(s.c);
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

namespace detail {

inline TwoVarSeries polynomial_from(const std::vector<Monomial>& basis, const Eigen::VectorXcd& c) {
    int max_k = 0, max_l = 0;
    for (const auto& m : basis) {
        max_k = std::max(max_k, m.k);
        max_l = std::max(max_l, m.l);
    }
    auto p = TwoVarSeries::zero(max_k, max_l);
    for (std::size_t i = 0; i < basis.size(); ++i) p.set(basis[i].k, basis[i].l, c(static_cast<long>(i)));
    return p;
}

inline void certify(ApproximantResult& result, const TwoVarSeries& f, AlphaWeight a,
                    const std::vector<Monomial>& basis, const SolverOptions& opts) {
    result.residual_sq = residual_norm_sq(result.p, f, a);
    result.ortho_residual = orthogonality_residual(result.p, f, a, basis);
    const double bound = opts.ortho_tol * norm2_sq(f, a);
    if (!(result.ortho_residual <= bound)) {
        throw ConditioningError("orthogonality certificate " + std::to_string(result.ortho_residual) +
                                    " exceeds " + std::to_string(bound) + " at n = " + std::to_string(result.n),
                                result.cond_estimate);
    }
}

}  // namespace detail

/// Optimal approximant of order b.n: minimizes ||p f - 1||_alpha over the span of the basis.
inline ApproximantResult solve_optimal(const TwoVarSeries& f, AlphaWeight a, const BasisSpec& b,
                                       const SolverOptions& opts = {}) {
    const GramSystem sys = gram_assemble(f, a, b, opts);
    if (!sys.factor->ok()) {
        throw ConditioningError("Gram factorization failed at n = " + std::to_string(b.n) +
                                    " (cond estimate " + std::to_string(sys.cond_estimate) + ")",
                                sys.cond_estimate);
    }
    ApproximantResult result;
    result.p = detail::polynomial_from(sys.basis, sys.factor->solve(sys.rhs));
    result.n = b.n;
    result.basis = b;
    result.cond_estimate = sys.cond_estimate;
    result.regularized = sys.regularized;
    detail::certify(result, f, a, sys.basis, opts);
    return result;
}

/// One-variable optimal approximant for the weighted norm sum_k weights[k] |c_k|^2.
struct OneVarApproximant {
    OneVarSeries q;
    double residual_sq = 1.0;
    double cond_estimate = 0.0;
    bool regularized = false;
};

/// Minimizes ||q F - 1|| over polynomials q of degree <= n, where the norm has
/// weights w[k] (w must cover degree n + deg F).
inline OneVarApproximant solve_weighted_onevar(const OneVarSeries& F, const std::vector<double>& w, int n,
                                               const SolverOptions& opts = {}) {
    if (n < 0) throw InputError("approximant order must be nonnegative");
    if (static_cast<int>(w.size()) <= n + F.deg()) throw InputError("weight table too short");
    if (static_cast<std::size_t>(n) + 1 > opts.max_unknowns) {
        throw SizeLimitError("basis of " + std::to_string(n + 1) + " unknowns exceeds the solver cap");
    }
    std::vector<std::pair<int, Complex>> terms;
    bool real = true;
    for (int k = 0; k <= F.deg(); ++k) {
        if (F.coeff(k) != Complex{}) terms.emplace_back(k, F.coeff(k));
        real = real && F.coeff(k).imag() == 0.0;
    }
    if (terms.empty()) throw InputError("cannot approximate 1/F for F identically zero");

    const long dim = n + 1;
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(dim, dim);
    for (long i = 0; i < dim; ++i) {
        for (const auto& [sk, sc] : terms) {
            const long pos = i + sk;
            const Complex ws = w[static_cast<std::size_t>(pos)] * std::conj(sc);
            for (const auto& [tk, tc] : terms) {
                const long j = pos - tk;
                if (j >= 0 && j < dim) G(i, j) += ws * tc;
            }
        }
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    rhs(0) = std::conj(F.coeff(0)) * w[0];

    const detail::GramFactor factor(G, real, opts);
    if (!factor.ok()) {
        throw ConditioningError("one-variable Gram factorization failed at n = " + std::to_string(n),
                                factor.cond_estimate());
    }
    const Eigen::VectorXcd c = factor.solve(rhs);
    OneVarApproximant out;
    out.q = OneVarSeries(std::vector<Complex>(c.data(), c.data() + c.size()));
    out.cond_estimate = factor.cond_estimate();
    out.regularized = factor.regularized();
    const OneVarSeries r = multiply(out.q, F) - OneVarSeries{1.0};
    double acc = 0.0;
    for (int k = 0; k <= r.deg(); ++k) acc += w[static_cast<std::size_t>(k)] * std::norm(r.coeff(k));
    out.residual_sq = acc;
    return out;
}

/// Optimal approximant for f supported on the (M, N)-diagonal. Only the diagonal
/// basis z1^{Mk} z2^{Nk} is searched; projecting any competitor onto that basis
/// never increases the residual, so this is also the optimum over all of 𝔓_n.
/// The solve runs in one variable on R(f) with weights (Mk+1)^a (Nk+1)^a, which
/// for M = N = 1 is exactly D_{2 alpha}, and the result is lifted back.
inline ApproximantResult diagonal_reduce_solve(const TwoVarSeries& f, AlphaWeight a, int n,
                                               const DiagonalPattern& pat, const SolverOptions& opts = {}) {
    const OneVarSeries F = restrict_pattern(f, pat);
    const BasisSpec b = BasisSpec::diagonal(n, pat);
    const auto basis = basis_monomials(b);
    const int top = static_cast<int>(basis.size()) - 1;
    const auto w = pattern_weights(a, pat, top + F.deg());
    const OneVarApproximant one = solve_weighted_onevar(F, w, top, opts);

    ApproximantResult result;
    result.p = lift(one.q, pat);
    result.n = n;
    result.basis = b;
    result.cond_estimate = one.cond_estimate;
    result.regularized = one.regularized;
    detail::certify(result, f, a, basis, opts);
    return result;
}

/// Riesz-type mean of 1/f: coefficient (k, l) is (1 - phi(max{k,l}) / phi(n+1)) b_{k,l}
/// for 0 <= k, l <= n.
inline TwoVarSeries riesz_approximant(const TwoVarSeries& f, AlphaWeight a, int n,
                                      double eps0 = kDefaultReciprocalEps) {
    if (n < 0) throw InputError("approximant order must be nonnegative");
    detail::require_rate_defined(a);
    const TwoVarSeries b = reciprocal(f, n, n, eps0);
    const double top = phi(a, n + 1.0);
    auto p = TwoVarSeries::zero(n, n);
    for (int k = 0; k <= n; ++k) {
        for (int l = 0; l <= n; ++l) {
            const int m = std::max(k, l);
            const double weight = m == 0 ? 1.0 : 1.0 - phi(a, m) / top;
            p.set(k, l, weight * b.coeff(k, l));
        }
    }
    return p;
}

/// Riesz mean taken in the variable u = z1^M z2^N: lift of the one-variable mean
/// sum_{k<=n} (1 - phi(k)/phi(n+1)) b_k u^k of 1/R(f). Lies in 𝔓_{max(M,N) n};
/// coincides with riesz_approximant when M = N = 1.
inline TwoVarSeries riesz_lifted(const TwoVarSeries& f, AlphaWeight a, int n, const DiagonalPattern& pat,
                                 double eps0 = kDefaultReciprocalEps) {
    if (n < 0) throw InputError("approximant order must be nonnegative");
    detail::require_rate_defined(a);
    const OneVarSeries b = reciprocal(restrict_pattern(f, pat), n, eps0);
    const double top = phi(a, n + 1.0);
    std::vector<Complex> q(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) q[k] = (k == 0 ? 1.0 : 1.0 - phi(a, k) / top) * b.coeff(k);
    return lift(OneVarSeries(std::move(q)), pat);
}

/// (1/(n+1)) sum_{m=0}^n t_m(1/f), with t_m the Taylor polynomial over max{k,l} <= m.
inline TwoVarSeries cesaro_taylor_mean(const TwoVarSeries& f, int n, double eps0 = kDefaultReciprocalEps) {
    if (n < 0) throw InputError("approximant order must be nonnegative");
    const TwoVarSeries b = reciprocal(f, n, n, eps0);
    auto sum = TwoVarSeries::zero(n, n);
    for (int m = 0; m <= n; ++m) {
        auto t = TwoVarSeries::zero(n, n);
        for (int k = 0; k <= m; ++k) {
            for (int l = 0; l <= m; ++l) t.set(k, l, b.coeff(k, l));
        }
        sum = sum + t;
    }
    return (1.0 / (n + 1.0)) * sum;
}

/// n-th Cesaro mean of 1/f. Computed by both the weight formula and the
/// average of Taylor polynomials; disagreement is an internal error.
inline TwoVarSeries cesaro(const TwoVarSeries& f, int n, double eps0 = kDefaultReciprocalEps) {
    const TwoVarSeries by_weights = riesz_approximant(f, AlphaWeight{0.0}, n, eps0);
    const TwoVarSeries by_means = cesaro_taylor_mean(f, n, eps0);
    double scale = 1.0;
    for (const auto& c : by_weights.coeffs()) scale = std::max(scale, std::abs(c));
    if (max_abs_diff(by_weights, by_means) > 1e-12 * scale) {
        throw InternalError("Cesaro weight formula and Taylor-mean formula disagree");
    }
    return by_weights;
}

/// ||p_n f - 1||^2_alpha for f = 1 - z1^M z2^N and p_n the lifted Riesz mean, via
/// phi(n+1)^{-2} sum_{k=1}^{n+1} [phi(k) - phi(k-1)]^2 (Mk+1)^a (Nk+1)^a.
inline double closed_form_twisted(AlphaWeight a, int n, const DiagonalPattern& pat) {
    detail::require_rate_defined(a);
    if (n < 0) throw InputError("approximant order must be nonnegative");
    const auto w = pattern_weights(a, pat, n + 1);
    if (n == 0) return w[1];  // p_0 = 1, residual -u
    const double top = phi(a, n + 1.0);
    double acc = 0.0;
    for (int k = 1; k <= n + 1; ++k) {
        const double step = phi(a, k) - phi(a, k - 1.0);
        acc += step * step * w[static_cast<std::size_t>(k)];
    }
    return acc / (top * top);
}

/// Smallest increase of the residual over random perturbations p + eps q with q
/// a unit-norm combination of the basis. Optimality means the result is >= 0
/// (up to rounding).
inline double perturbation_gap(const ApproximantResult& result, const TwoVarSeries& f, AlphaWeight a,
                               std::mt19937_64& rng, int directions = 20, double eps = 1e-3) {
    const auto basis = basis_monomials(result.basis);
    std::normal_distribution<double> gauss;
    double worst = std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions; ++d) {
        std::vector<Complex> q(basis.size());
        double nrm = 0.0;
        for (auto& c : q) {
            c = {gauss(rng), gauss(rng)};
            nrm += std::norm(c);
        }
        nrm = std::sqrt(nrm);
        TwoVarSeries perturbed = result.p;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const Complex shifted = perturbed.coeff(basis[i].k, basis[i].l) + eps * q[i] / nrm;
            if (basis[i].k > perturbed.deg1() || basis[i].l > perturbed.deg2()) {
                perturbed = perturbed.resized(std::max(perturbed.deg1(), basis[i].k),
                                              std::max(perturbed.deg2(), basis[i].l));
            }
            perturbed.set(basis[i].k, basis[i].l, shifted);
        }
        worst = std::min(worst, residual_norm_sq(perturbed, f, a) - result.residual_sq);
    }
    return worst;
}

}  // namespace bidisk
