#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bergman/measure.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

/// <z^a zbar^b, z^c zbar^d> in L^2(theta). The polar formula collapses the
/// angular integral to the selection rule a + d = b + c (componentwise), and
/// the radial integral to a product of moments:
///   [a+d = b+c] * prod_j moment_j(a_j + b_j + c_j + d_j).
inline Rational monomial_pairing(const ProductMeasure& pm, const MultiIndex& a,
                                 const MultiIndex& b, const MultiIndex& c,
                                 const MultiIndex& d) {
    std::size_t n = pm.dim();
    if (a.dim() != n || b.dim() != n || c.dim() != n || d.dim() != n)
        throw std::invalid_argument("monomial_pairing: dimension mismatch");
    for (std::size_t j = 0; j < n; ++j)
        if (a[j] + d[j] != b[j] + c[j]) return 0;
    Rational r = 1;
    for (std::size_t j = 0; j < n; ++j)
        r *= pm.factor(j).moment(static_cast<unsigned>(a[j] + b[j] + c[j] + d[j]));
    return r;
}

/// <f, g>_theta for polynomial symbols, exact.
inline RationalComplex symbol_pairing(const ProductMeasure& pm, const Symbol& f,
                                      const Symbol& g) {
    RationalComplex total;
    for (const auto& [kf, cf] : f.terms())
        for (const auto& [kg, cg] : g.terms()) {
            Rational p = monomial_pairing(pm, kf.first, kf.second, kg.first, kg.second);
            if (p != 0) total += p * (cf * cg.conj());
        }
    return total;
}

inline Rational symbol_norm_sq(const ProductMeasure& pm, const Symbol& f) {
    return symbol_pairing(pm, f, f).re;
}

/// Coefficients of the Bergman projection P(f z^m) in the monomial basis:
/// the map k -> <f z^m, z^k> / c_k over the finitely many k = m + u - v >= 0.
/// Everything stays rational since no basis normalization enters.
inline std::map<MultiIndex, RationalComplex> project_fz(const ProductMeasure& pm,
                                                        const Symbol& f,
                                                        const MultiIndex& m) {
    if (m.dim() != pm.dim() || !m.nonnegative())
        throw std::invalid_argument("project_fz: bad multi-index");
    MultiIndex zero(pm.dim(), 0);
    std::map<MultiIndex, RationalComplex> coeffs;
    for (const auto& [key, coef] : f.terms()) {
        MultiIndex k = m + key.first - key.second;
        if (!k.nonnegative()) continue;
        if (coeffs.count(k)) continue;  // whole line computed below
        RationalComplex inner;
        for (const auto& [key2, coef2] : f.terms()) {
            if (!(m + key2.first - key2.second == k)) continue;
            Rational p = monomial_pairing(pm, key2.first + m, key2.second, k, zero);
            if (p != 0) inner += p * coef2;
        }
        if (!inner.is_zero()) {
            Rational ck = pm.c_index(k);
            coeffs.emplace(k, RationalComplex{inner.re / ck, inner.im / ck});
        }
    }
    return coeffs;
}

/// Gram matrix of the Hankel operator over a truncated index box.
///
/// Entries are stored unnormalized, raw[i][j] = <H_f z^m_i, H_f z^m_j>,
/// which is an exact Gaussian rational; the e-basis entry divides by
/// sqrt(c_i c_j), so zero tests and the diagonal lambda_m = raw[i][i]/c_i
/// remain exact while float views carry the square root.
class HankelGram {
public:
    HankelGram(const ProductMeasure& pm, const Symbol& f, IndexBox box)
        : box_(std::move(box)), c_(box_.size()), raw_(box_.size()) {
        if (box_.dim() != pm.dim() || f.dim() != pm.dim())
            throw std::invalid_argument("HankelGram: dimension mismatch");
        std::size_t sz = box_.size();
        for (std::size_t i = 0; i < sz; ++i) c_[i] = pm.c_index(box_[i]);

        // Projections are computed in the full (untruncated) space: a
        // polynomial symbol has finitely many projection components.
        std::vector<std::map<MultiIndex, RationalComplex>> proj(sz);
        for (std::size_t i = 0; i < sz; ++i) proj[i] = project_fz(pm, f, box_[i]);

        for (std::size_t i = 0; i < sz; ++i) raw_[i].resize(sz);
        for (std::size_t i = 0; i < sz; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                RationalComplex ff;
                for (const auto& [k1, a1] : f.terms())
                    for (const auto& [k2, a2] : f.terms()) {
                        Rational p = monomial_pairing(pm, k1.first + box_[i], k1.second,
                                                      k2.first + box_[j], k2.second);
                        if (p != 0) ff += p * (a1 * a2.conj());
                    }
                RationalComplex pp;
                for (const auto& [k, ci] : proj[i]) {
                    auto it = proj[j].find(k);
                    if (it != proj[j].end()) {
                        Rational ck = 1;
                        for (std::size_t d = 0; d < box_.dim(); ++d)
                            ck *= pm.factor(d).moment(2 * static_cast<unsigned>(k[d]));
                        pp += ck * (ci * it->second.conj());
                    }
                }
                raw_[i][j] = ff - pp;
            }
        }
        // Hermitian mirror.
        for (std::size_t i = 0; i < sz; ++i)
            for (std::size_t j = i + 1; j < sz; ++j) raw_[i][j] = raw_[j][i].conj();
    }

    const IndexBox& box() const { return box_; }
    std::size_t size() const { return box_.size(); }

    /// Unnormalized entry <H_f z^m_i, H_f z^m_j>, exact.
    const RationalComplex& raw(std::size_t i, std::size_t j) const { return raw_[i][j]; }

    /// lambda_{m_i} = ||H_f e_{m_i}||^2, exact.
    Rational diag(std::size_t i) const { return raw_[i][i].re / c_[i]; }

    const Rational& c(std::size_t i) const { return c_[i]; }

    /// e-basis entry <H_f e_{m_i}, H_f e_{m_j}> in double precision.
    std::complex<double> entry(std::size_t i, std::size_t j) const {
        double s = std::sqrt(to_double(c_[i]) * to_double(c_[j]));
        return {to_double(raw_[i][j].re) / s, to_double(raw_[i][j].im) / s};
    }

    bool is_diagonal() const {
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (!raw_[i][j].is_zero()) return false;
        return true;
    }

    bool is_zero() const {
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (!raw_[i][j].is_zero()) return false;
        return true;
    }

    /// Smallest eigenvalue of the e-basis float matrix, via power iteration
    /// on lambda_max * I - G. Intended for PSD sanity checks at small sizes.
    double min_eigenvalue_estimate(int iters = 500) const;

private:
    IndexBox box_;
    std::vector<Rational> c_;
    std::vector<std::vector<RationalComplex>> raw_;
};

inline double HankelGram::min_eigenvalue_estimate(int iters) const {
    std::size_t sz = size();
    std::vector<std::vector<std::complex<double>>> g(sz, std::vector<std::complex<double>>(sz));
    for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t j = 0; j < sz; ++j) g[i][j] = entry(i, j);

    auto rayleigh_max = [&](const std::vector<std::vector<std::complex<double>>>& a) {
        std::vector<std::complex<double>> x(sz, 1.0 / std::sqrt(double(sz)));
        double lam = 0;
        for (int it = 0; it < iters; ++it) {
            std::vector<std::complex<double>> y(sz, 0.0);
            for (std::size_t i = 0; i < sz; ++i)
                for (std::size_t j = 0; j < sz; ++j) y[i] += a[i][j] * x[j];
            double norm = 0;
            for (auto& yi : y) norm += std::norm(yi);
            norm = std::sqrt(norm);
            if (norm < 1e-300) return 0.0;
            lam = 0;
            for (std::size_t i = 0; i < sz; ++i) lam += std::real(std::conj(x[i]) * y[i]);
            for (auto& yi : y) yi /= norm;
            x = std::move(y);
        }
        return lam;
    };

    double lmax = rayleigh_max(g);
    double shift = std::abs(lmax) + 1.0;
    auto shifted = g;
    for (std::size_t i = 0; i < sz; ++i) {
        for (std::size_t j = 0; j < sz; ++j) shifted[i][j] = -g[i][j];
        shifted[i][i] += shift;
    }
    return shift - rayleigh_max(shifted);
}

inline HankelGram hankel_gram(const ProductMeasure& pm, const Symbol& f, const IndexBox& box) {
    return HankelGram(pm, f, box);
}

/// Eigenvalue of H*_f H_f at basis index m for a quasi-homogeneous symbol,
/// by the two-branch closed form: the radial second moment of |f|^2 alone
/// when m + s is not >= 0, minus the rank-one projection correction when it is.
inline Rational lambda_closed_form(const ProductMeasure& pm, const QuasiPart& fs,
                                   const MultiIndex& m) {
    std::size_t n = pm.dim();
    if (fs.part.dim() != n || m.dim() != n || !m.nonnegative())
        throw std::invalid_argument("lambda_closed_form: bad arguments");

    Rational cm = pm.c_index(m);

    // (1/c_m) * int |f(t)|^2 t^{2m} dmu, with the radial profile
    // f(t) = sum a_{u,v} t^{u+v}.
    RationalComplex fsq;
    for (const auto& [k1, a1] : fs.part.terms())
        for (const auto& [k2, a2] : fs.part.terms()) {
            Rational p = 1;
            for (std::size_t j = 0; j < n; ++j)
                p *= pm.factor(j).moment(static_cast<unsigned>(
                    k1.first[j] + k1.second[j] + k2.first[j] + k2.second[j] + 2 * m[j]));
            fsq += p * (a1 * a2.conj());
        }
    Rational lambda = fsq.re / cm;

    MultiIndex ms = m + fs.degree;
    if (ms.nonnegative()) {
        // int f(t) t^{2m+s} dmu; note u_j + v_j + s_j = 2 u_j >= 0.
        RationalComplex inner;
        for (const auto& [k, a] : fs.part.terms()) {
            Rational p = 1;
            for (std::size_t j = 0; j < n; ++j)
                p *= pm.factor(j).moment(static_cast<unsigned>(
                    k.first[j] + k.second[j] + 2 * m[j] + fs.degree[j]));
            inner += p * a;
        }
        lambda -= inner.norm_sq() / (cm * pm.c_index(ms));
    }
    return lambda;
}

/// Path through Z+^n: some coordinates frozen, the rest driven together
/// from `start` to `cap`.
struct DecayPath {
    std::vector<std::optional<int>> frozen;  // nullopt = driven
    int start = 0;
    int cap = 50;

    std::vector<MultiIndex> points() const {
        bool any_driven = false;
        for (const auto& f : frozen)
            if (!f) any_driven = true;
        if (!any_driven) throw std::invalid_argument("DecayPath: no driven coordinate");
        std::vector<MultiIndex> pts;
        for (int t = start; t <= cap; ++t) {
            MultiIndex m(frozen.size());
            for (std::size_t j = 0; j < frozen.size(); ++j) m[j] = frozen[j] ? *frozen[j] : t;
            pts.push_back(std::move(m));
        }
        return pts;
    }
};

inline std::vector<Rational> decay_sweep(const ProductMeasure& pm, const QuasiPart& fs,
                                         const std::vector<MultiIndex>& path) {
    std::vector<Rational> out;
    out.reserve(path.size());
    for (const auto& m : path) out.push_back(lambda_closed_form(pm, fs, m));
    return out;
}

/// Hilbert-Schmidt bound over a box: (sum ||f e_m||^2, sum ||H_f e_m||^2).
/// The second never exceeds the first.
struct HsBound {
    Rational upper;     // sum_m ||f e_m||^2
    Rational hankel_sum;  // sum_m G[m,m]
};

inline HsBound hs_norm_upper_bound(const ProductMeasure& pm, const Symbol& f,
                                   const IndexBox& box) {
    HsBound b{0, 0};
    HankelGram g(pm, f, box);
    for (std::size_t i = 0; i < box.size(); ++i) {
        RationalComplex ff;
        for (const auto& [k1, a1] : f.terms())
            for (const auto& [k2, a2] : f.terms()) {
                Rational p = monomial_pairing(pm, k1.first + box[i], k1.second,
                                              k2.first + box[i], k2.second);
                if (p != 0) ff += p * (a1 * a2.conj());
            }
        b.upper += ff.re / g.c(i);
        b.hankel_sum += g.diag(i);
    }
    if (b.hankel_sum > b.upper)
        throw std::logic_error("hs_norm_upper_bound: Pythagoras violated");
    return b;
}

/// Outcome of the compactness test for a polynomial symbol.
struct CompactnessVerdict {
    enum class Kind { AlwaysCompactDim1, Compact, NotCompact };

    Kind kind;
    Symbol h;  // Compact: holomorphic part, f = h + g exactly
    Symbol g;  // Compact: residual, vanishing on every boundary part
    MultiIndex witness_s;      // NotCompact: offending quasi-degree
    BoundaryPart witness_part;  // NotCompact: part where the model fails
};

/// Decides compactness of H_f for a polynomial symbol.
///
/// n = 1: always compact. n >= 2: H_f is compact iff every quasi-part f_s
/// agrees on the whole topological boundary with its model monomial
/// f_s(1,...,1) z^s (s >= 0) or with 0 (s not >= 0). When all residuals
/// vanish on all 2^n - 1 parts, f = h + g with h holomorphic and g a
/// polynomial that tends to 0 at the boundary, so H_f = H_g is compact;
/// the first failing (s, W) otherwise witnesses non-compactness.
inline CompactnessVerdict compactness_certificate(const ProductMeasure& pm, const Symbol& f) {
    std::size_t n = pm.dim();
    if (f.dim() != n) throw std::invalid_argument("compactness_certificate: dimension mismatch");
    CompactnessVerdict v{CompactnessVerdict::Kind::Compact, Symbol(n), Symbol(n), MultiIndex(n),
                         BoundaryPart{}};
    if (n == 1) {
        v.kind = CompactnessVerdict::Kind::AlwaysCompactDim1;
        return v;
    }
    auto parts = quasi_decompose(f);
    auto boundary = all_boundary_parts(n);
    Symbol h(n);
    for (const auto& [s, fs] : parts) {
        QuasiPart qp{s, fs};
        Symbol hs = model_monomial(qp);
        Symbol residual = fs - hs;
        for (const auto& w : boundary) {
            if (!boundary_vanishes(residual, w)) {
                v.kind = CompactnessVerdict::Kind::NotCompact;
                v.witness_s = s;
                v.witness_part = w;
                return v;
            }
        }
        h += hs;
    }
    v.kind = CompactnessVerdict::Kind::Compact;
    v.h = h;
    v.g = f - h;
    return v;
}

}  // namespace bergman
