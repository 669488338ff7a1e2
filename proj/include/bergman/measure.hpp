#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

enum class NumericMode { Exact, Float };

enum class MeasureError { Ok, NotProbability, SupportGap, BadParameter };

inline const char* to_string(MeasureError e) {
    switch (e) {
        case MeasureError::Ok: return "ok";
        case MeasureError::NotProbability: return "NotProbability";
        case MeasureError::SupportGap: return "SupportGap";
        case MeasureError::BadParameter: return "BadParameter";
    }
    return "?";
}

/// A radial probability measure on [0,1), accessed only through its moment
/// functional p -> int t^p dmu(t).
///
/// Two families:
///   PowerWeight(beta): dmu = (beta+1) t^beta dt, moment(p) = (beta+1)/(p+beta+1)
///   Atomic: finitely many atoms (t_i, w_i); moment(p) = sum w_i t_i^p.
///
/// An atomic list may be the truncation of an infinite sequence accumulating
/// at 1; such measures carry tail_incomplete = true and are admitted only in
/// float mode, since the standing support hypothesis refers to the untruncated
/// measure.
class RadialMeasure {
public:
    struct Atom {
        Rational t;
        Rational w;
    };

    static RadialMeasure power_weight(int beta) {
        RadialMeasure m;
        m.family_ = Family::PowerWeight;
        m.beta_ = beta;
        return m;
    }

    static RadialMeasure atomic(std::vector<Atom> atoms, bool tail_incomplete = false) {
        RadialMeasure m;
        m.family_ = Family::Atomic;
        m.atoms_ = std::move(atoms);
        m.tail_incomplete_ = tail_incomplete;
        return m;
    }

    bool is_power_weight() const { return family_ == Family::PowerWeight; }
    bool is_atomic() const { return family_ == Family::Atomic; }
    int beta() const { return beta_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    bool tail_incomplete() const { return tail_incomplete_; }

    MeasureError validate(NumericMode mode = NumericMode::Exact) const {
        if (family_ == Family::PowerWeight)
            return beta_ >= 0 ? MeasureError::Ok : MeasureError::BadParameter;
        if (atoms_.empty()) return MeasureError::NotProbability;
        Rational total = 0;
        for (const auto& a : atoms_) {
            if (a.w <= 0 || a.t < 0 || a.t >= 1) return MeasureError::BadParameter;
            total += a.w;
        }
        if (total != 1) return MeasureError::NotProbability;
        // The support hypothesis mu([r,1)) > 0 for all r < 1 needs atoms
        // accumulating at 1. A finite list can only stand in for such a
        // measure when flagged as a truncation, and then only in float mode.
        if (!tail_incomplete_) return MeasureError::SupportGap;
        return mode == NumericMode::Float ? MeasureError::Ok : MeasureError::SupportGap;
    }

    /// int t^p dmu(t), exact. Memoized; safe for concurrent use.
    Rational moment(unsigned p) const {
        if (family_ == Family::PowerWeight)
            return Rational(beta_ + 1, static_cast<long>(p) + beta_ + 1);
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = moment_cache_.find(p);
            if (it != moment_cache_.end()) return it->second;
        }
        Rational s = 0;
        for (const auto& a : atoms_) s += a.w * pow_rational(a.t, p);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        moment_cache_.emplace(p, s);
        return s;
    }

    /// Generalized moment at real exponent p; PowerWeight only (the closed
    /// form (beta+1)/(p+beta+1) extends to real p > -(beta+1)).
    double moment_real(double p) const {
        if (family_ == Family::PowerWeight) return (beta_ + 1.0) / (p + beta_ + 1.0);
        double s = 0;
        for (const auto& a : atoms_) s += to_double(a.w) * std::pow(to_double(a.t), p);
        return s;
    }

    /// Mass of the open interval (a, b), exact.
    Rational interval_mass(const Rational& a, const Rational& b) const {
        if (family_ == Family::PowerWeight)
            return pow_rational(b, beta_ + 1) - pow_rational(a, beta_ + 1);
        Rational s = 0;
        for (const auto& at : atoms_)
            if (at.t > a && at.t < b) s += at.w;
        return s;
    }

private:
    enum class Family { PowerWeight, Atomic };

    static Rational pow_rational(const Rational& x, unsigned p) {
        Rational r = 1, base = x;
        while (p) {
            if (p & 1u) r *= base;
            base *= base;
            p >>= 1u;
        }
        return r;
    }

    Family family_ = Family::PowerWeight;
    int beta_ = 0;
    std::vector<Atom> atoms_;
    bool tail_incomplete_ = false;

    mutable std::mutex cache_mutex_;
    mutable std::map<unsigned, Rational> moment_cache_;

public:
    RadialMeasure() = default;
    RadialMeasure(const RadialMeasure& o)
        : family_(o.family_), beta_(o.beta_), atoms_(o.atoms_), tail_incomplete_(o.tail_incomplete_) {}
    RadialMeasure& operator=(const RadialMeasure& o) {
        family_ = o.family_;
        beta_ = o.beta_;
        atoms_ = o.atoms_;
        tail_incomplete_ = o.tail_incomplete_;
        std::lock_guard<std::mutex> lock(cache_mutex_);
        moment_cache_.clear();
        return *this;
    }
};

/// Product of n radial measures; the radial part of the measure on D^n.
/// Angular integrals are always done analytically, so this object together
/// with the moment functionals is the whole geometry.
class ProductMeasure {
public:
    ProductMeasure(std::vector<RadialMeasure> factors) : factors_(std::move(factors)) {
        if (factors_.empty()) throw std::invalid_argument("ProductMeasure: need n >= 1 factors");
    }

    static ProductMeasure power_weight(std::size_t n, int beta) {
        std::vector<RadialMeasure> f;
        for (std::size_t j = 0; j < n; ++j) f.push_back(RadialMeasure::power_weight(beta));
        return ProductMeasure(std::move(f));
    }

    std::size_t dim() const { return factors_.size(); }
    const RadialMeasure& factor(std::size_t j) const { return factors_[j]; }

    MeasureError validate(NumericMode mode = NumericMode::Exact) const {
        for (const auto& f : factors_) {
            auto e = f.validate(mode);
            if (e != MeasureError::Ok) return e;
        }
        return MeasureError::Ok;
    }

    /// c_m = prod_j moment_j(2 m_j), the squared norm of the monomial z^m.
    Rational c_index(const MultiIndex& m) const {
        check_dim(m);
        if (!m.nonnegative()) throw std::invalid_argument("c_index: negative multi-index");
        Rational c = 1;
        for (std::size_t j = 0; j < dim(); ++j)
            c *= factors_[j].moment(2 * static_cast<unsigned>(m[j]));
        return c;
    }

    /// Truncated reproducing-kernel diagonal sum_{m in {0..N}^n} r^{2m} / c_m,
    /// exact at rational moduli. Nondecreasing in N and in each r_j.
    Rational kernel_diag(const std::vector<Rational>& r, int N) const {
        if (r.size() != dim()) throw std::invalid_argument("kernel_diag: dimension mismatch");
        for (const auto& rj : r)
            if (rj < 0 || rj >= 1) throw std::domain_error("kernel_diag: need 0 <= r_j < 1");
        // Factorizes over coordinates.
        Rational total = 1;
        for (std::size_t j = 0; j < dim(); ++j) {
            Rational s = 0, rp = 1, r2 = r[j] * r[j];
            for (int m = 0; m <= N; ++m) {
                s += rp / factors_[j].moment(2 * static_cast<unsigned>(m));
                rp *= r2;
            }
            total *= s;
        }
        return total;
    }

    /// Exact infinite-N kernel diagonal prod_j (1 - r_j^2)^{-2}; valid only
    /// when every factor is PowerWeight(1).
    Rational kernel_diag_closed_form(const std::vector<Rational>& r) const {
        if (r.size() != dim()) throw std::invalid_argument("kernel_diag: dimension mismatch");
        Rational total = 1;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (!factors_[j].is_power_weight() || factors_[j].beta() != 1)
                throw std::domain_error("closed-form kernel needs PowerWeight(1) factors");
            Rational d = 1 - r[j] * r[j];
            if (d <= 0) throw std::domain_error("kernel_diag: need r_j < 1");
            total /= d * d;
        }
        return total;
    }

    double kernel_diag_closed_form(const std::vector<double>& r) const {
        double total = 1;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (!factors_[j].is_power_weight() || factors_[j].beta() != 1)
                throw std::domain_error("closed-form kernel needs PowerWeight(1) factors");
            double d = 1 - r[j] * r[j];
            total /= d * d;
        }
        return total;
    }

private:
    void check_dim(const MultiIndex& m) const {
        if (m.dim() != dim()) throw std::invalid_argument("multi-index dimension mismatch");
    }

    std::vector<RadialMeasure> factors_;
};

}  // namespace bergman
