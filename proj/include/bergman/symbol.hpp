#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// A finite linear combination sum a_{u,v} z^u zbar^v with u, v in Z+^n and
/// Gaussian-rational coefficients. Terms are never reduced by cancelling
/// common factors of u and v (|z_j|^2 is not 1 on the polydisc); reduction
/// happens only under boundary restriction, where pinned coordinates are
/// unimodular.
class Symbol {
public:
    using Key = std::pair<MultiIndex, MultiIndex>;  // (u, v)
    using TermMap = std::map<Key, RationalComplex>;

    explicit Symbol(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("Symbol: dimension must be >= 1");
    }

    std::size_t dim() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_holomorphic() const {
        for (const auto& [key, coef] : terms_) {
            (void)coef;
            for (std::size_t j = 0; j < n_; ++j)
                if (key.second[j] != 0) return false;
        }
        return true;
    }

    void add_term(const MultiIndex& u, const MultiIndex& v, const RationalComplex& coef) {
        if (u.dim() != n_ || v.dim() != n_)
            throw std::invalid_argument("Symbol::add_term: exponent dimension mismatch");
        if (!u.nonnegative() || !v.nonnegative())
            throw std::invalid_argument("Symbol::add_term: negative exponent");
        auto& slot = terms_[{u, v}];
        slot += coef;
        if (slot.is_zero()) terms_.erase({u, v});
    }

    Symbol& operator+=(const Symbol& o) {
        check_dim(o);
        for (const auto& [key, coef] : o.terms_) add_term(key.first, key.second, coef);
        return *this;
    }
    Symbol& operator-=(const Symbol& o) {
        check_dim(o);
        for (const auto& [key, coef] : o.terms_) add_term(key.first, key.second, -coef);
        return *this;
    }
    friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
    friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
    friend Symbol operator*(const RationalComplex& c, const Symbol& f) {
        Symbol r(f.n_);
        for (const auto& [key, coef] : f.terms_) r.add_term(key.first, key.second, c * coef);
        return r;
    }
    friend bool operator==(const Symbol& a, const Symbol& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    /// Largest |u_j - v_j| over all terms and coordinates; 0 for the zero symbol.
    int max_quasi_degree() const {
        int d = 0;
        for (const auto& [key, coef] : terms_) {
            (void)coef;
            for (std::size_t j = 0; j < n_; ++j)
                d = std::max(d, std::abs(key.first[j] - key.second[j]));
        }
        return d;
    }

    /// Exact value at the corner (1,...,1): the sum of all coefficients.
    RationalComplex corner_value() const {
        RationalComplex s;
        for (const auto& [key, coef] : terms_) {
            (void)key;
            s += coef;
        }
        return s;
    }

    /// Pointwise evaluation at a point of the closed polydisc.
    std::complex<double> evaluate(const std::vector<std::complex<double>>& z) const {
        if (z.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
        std::complex<double> total = 0;
        for (const auto& [key, coef] : terms_) {
            std::complex<double> t(to_double(coef.re), to_double(coef.im));
            for (std::size_t j = 0; j < n_; ++j) {
                for (int k = 0; k < key.first[j]; ++k) t *= z[j];
                for (int k = 0; k < key.second[j]; ++k) t *= std::conj(z[j]);
            }
            total += t;
        }
        return total;
    }

private:
    void check_dim(const Symbol& o) const {
        if (o.n_ != n_) throw std::invalid_argument("Symbol: dimension mismatch");
    }

    std::size_t n_;
    TermMap terms_;
};

/// A quasi-homogeneous component: all terms share u - v = degree.
struct QuasiPart {
    MultiIndex degree;  // s in Z^n
    Symbol part;
};

/// Groups the terms of f by u - v = s. For polynomial symbols this grouping
/// is the projection Q_s: the toral integral picks out exactly the terms of
/// multi-degree s. Reassembling all parts reproduces f coefficient-exactly.
inline std::map<MultiIndex, Symbol> quasi_decompose(const Symbol& f) {
    std::map<MultiIndex, Symbol> parts;
    for (const auto& [key, coef] : f.terms()) {
        MultiIndex s = key.first - key.second;
        auto it = parts.find(s);
        if (it == parts.end()) it = parts.emplace(s, Symbol(f.dim())).first;
        it->second.add_term(key.first, key.second, coef);
    }
    return parts;
}

/// Cesaro (product-Fejer) mean: the quasi-part of degree s is scaled by
/// prod_j max(0, 1 - |s_j|/(N+1)); parts with any |s_j| > N drop out.
inline Symbol cesaro_mean(const Symbol& f, int N) {
    if (N < 1) throw std::invalid_argument("cesaro_mean: need N >= 1");
    Symbol out(f.dim());
    for (const auto& [key, coef] : f.terms()) {
        Rational w = 1;
        bool dropped = false;
        for (std::size_t j = 0; j < f.dim(); ++j) {
            int sj = std::abs(key.first[j] - key.second[j]);
            if (sj > N) {
                dropped = true;
                break;
            }
            w *= Rational(N + 1 - sj, N + 1);
        }
        if (!dropped) out.add_term(key.first, key.second, w * coef);
    }
    return out;
}

/// One of the 2^n - 1 boundary parts A_1 x ... x A_n: pinned coordinates lie
/// on the torus, the rest range over the open disc. At least one pinned.
struct BoundaryPart {
    std::vector<bool> pinned;

    std::size_t dim() const { return pinned.size(); }
    bool valid() const {
        for (bool p : pinned)
            if (p) return true;
        return false;
    }
};

inline std::string to_string(const BoundaryPart& w) {
    std::string s;
    for (std::size_t j = 0; j < w.dim(); ++j) {
        if (j) s += ",";
        s += w.pinned[j] ? "T" : "D";
    }
    return s;
}

/// All 2^n - 1 parts, torus-heavy first (the all-torus part leads).
inline std::vector<BoundaryPart> all_boundary_parts(std::size_t n) {
    if (n > 20) throw std::invalid_argument("all_boundary_parts: dimension too large");
    std::vector<BoundaryPart> parts;
    unsigned full = (1u << n) - 1;
    for (unsigned mask = full; mask >= 1; --mask) {
        BoundaryPart w;
        w.pinned.resize(n);
        for (std::size_t j = 0; j < n; ++j) w.pinned[j] = (mask >> j) & 1u;
        parts.push_back(std::move(w));
    }
    return parts;
}

/// Canonical form of f restricted to a boundary part. For pinned coordinates
/// |zeta_j| = 1 collapses (u_j, v_j) to the toral exponent u_j - v_j; disc
/// coordinates keep the pair. Distinct keys are linearly independent
/// functions on the part, so the restriction vanishes identically iff every
/// summed coefficient is zero.
using RestrictedSymbol = std::map<std::vector<int>, RationalComplex>;

inline RestrictedSymbol boundary_restrict(const Symbol& f, const BoundaryPart& w) {
    if (w.dim() != f.dim()) throw std::invalid_argument("boundary_restrict: dimension mismatch");
    if (!w.valid()) throw std::invalid_argument("boundary_restrict: part must pin a coordinate");
    RestrictedSymbol out;
    for (const auto& [key, coef] : f.terms()) {
        std::vector<int> rk;
        for (std::size_t j = 0; j < f.dim(); ++j) {
            if (w.pinned[j]) {
                rk.push_back(key.first[j] - key.second[j]);
            } else {
                rk.push_back(key.first[j]);
                rk.push_back(key.second[j]);
            }
        }
        auto& slot = out[rk];
        slot += coef;
        if (slot.is_zero()) out.erase(rk);
    }
    return out;
}

inline bool boundary_vanishes(const Symbol& f, const BoundaryPart& w) {
    return boundary_restrict(f, w).empty();
}

/// The model monomial of a quasi-part: f_s(1,...,1) z^s when s >= 0
/// componentwise, zero otherwise.
inline Symbol model_monomial(const QuasiPart& fs) {
    Symbol out(fs.part.dim());
    if (!fs.degree.succeq_zero()) return out;
    RationalComplex alpha = fs.part.corner_value();
    if (!alpha.is_zero()) out.add_term(fs.degree, MultiIndex(fs.part.dim(), 0), alpha);
    return out;
}

}  // namespace bergman
