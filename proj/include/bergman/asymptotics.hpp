#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "bergman/measure.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// Moment-ratio limit experiment: for a polynomial phi on [0,1)^N and
/// integer shift tuples delta, beta, evaluates
///   ratio(m) = int phi(r) r^{m+delta} dmu / int r^{m+beta} dmu
/// along an index path. The ratio tends to phi(1,...,1) whenever every
/// factor measure charges [r,1) for all r < 1.
struct RatioExperiment {
    std::vector<RadialMeasure> factors;
    std::map<MultiIndex, Rational> phi;  // powers -> coefficient
    MultiIndex delta;
    MultiIndex beta;
    std::vector<MultiIndex> path;

    std::size_t dim() const { return factors.size(); }

    Rational target() const {
        Rational a = 0;
        for (const auto& [p, c] : phi) {
            (void)p;
            a += c;
        }
        return a;
    }

    void check() const {
        std::size_t n = dim();
        if (n == 0) throw std::invalid_argument("RatioExperiment: no factors");
        if (delta.dim() != n || beta.dim() != n || !delta.nonnegative() || !beta.nonnegative())
            throw std::invalid_argument("RatioExperiment: bad shift tuples");
        for (const auto& [p, c] : phi) {
            (void)c;
            if (p.dim() != n || !p.nonnegative())
                throw std::invalid_argument("RatioExperiment: bad phi exponent");
        }
        for (std::size_t i = 1; i < path.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (path[i][j] <= path[i - 1][j])
                    throw std::invalid_argument(
                        "RatioExperiment: path must be strictly increasing in every coordinate");
    }
};

inline std::vector<Rational> ratio_sequence(const RatioExperiment& exp) {
    exp.check();
    std::vector<Rational> out;
    out.reserve(exp.path.size());
    for (const auto& m : exp.path) {
        Rational num = 0;
        for (const auto& [p, c] : exp.phi) {
            Rational t = c;
            for (std::size_t j = 0; j < exp.dim(); ++j)
                t *= exp.factors[j].moment(
                    static_cast<unsigned>(m[j] + exp.delta[j] + p[j]));
            num += t;
        }
        Rational den = 1;
        for (std::size_t j = 0; j < exp.dim(); ++j)
            den *= exp.factors[j].moment(static_cast<unsigned>(m[j] + exp.beta[j]));
        out.push_back(num / den);  // moments are strictly positive
    }
    return out;
}

/// Float-mode variant with real shift tuples (PowerWeight factors extend
/// their moment formula to real exponents).
inline std::vector<double> ratio_sequence_real(const RatioExperiment& exp,
                                               const std::vector<double>& delta,
                                               const std::vector<double>& beta) {
    if (delta.size() != exp.dim() || beta.size() != exp.dim())
        throw std::invalid_argument("ratio_sequence_real: shift dimension mismatch");
    std::vector<double> out;
    out.reserve(exp.path.size());
    for (const auto& m : exp.path) {
        double num = 0;
        for (const auto& [p, c] : exp.phi) {
            double t = to_double(c);
            for (std::size_t j = 0; j < exp.dim(); ++j)
                t *= exp.factors[j].moment_real(m[j] + delta[j] + p[j]);
            num += t;
        }
        double den = 1;
        for (std::size_t j = 0; j < exp.dim(); ++j)
            den *= exp.factors[j].moment_real(m[j] + beta[j]);
        out.push_back(num / den);
    }
    return out;
}

struct ConvergenceResult {
    bool converged = false;
    std::size_t first_window_end = 0;  // index of the last point of the first passing window
};

/// True iff the last 5 values lie within tol of alpha; also reports the
/// first index at which a trailing 5-window passes.
template <typename Seq, typename Value>
ConvergenceResult check_convergence(const Seq& seq, const Value& alpha, const Value& tol) {
    if (tol <= 0) throw std::invalid_argument("check_convergence: tol must be positive");
    if (seq.size() < 5) throw std::invalid_argument("check_convergence: InsufficientPath");
    auto within = [&](std::size_t i) {
        Value d(seq[i] - alpha);
        if (d < 0) d = -d;
        return d <= tol;
    };
    ConvergenceResult res;
    std::size_t run = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        run = within(i) ? run + 1 : 0;
        if (run >= 5 && res.first_window_end == 0 && !res.converged) {
            res.first_window_end = i;
            res.converged = true;  // provisional; final verdict below
        }
    }
    // Final verdict: the *last* five must pass.
    bool tail = true;
    for (std::size_t i = seq.size() - 5; i < seq.size(); ++i) tail = tail && within(i);
    res.converged = tail;
    return res;
}

}  // namespace bergman
