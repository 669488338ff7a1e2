#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bergman {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Serializes as "p/q" (or just "p" when the denominator is 1).
inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "p/q", or "-p/q". Throws std::invalid_argument on bad input.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int num(s.substr(0, slash));
        boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

/// Complex number with exact rational real and imaginary parts
/// (Gaussian-rational arithmetic).
struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(Rational r) : re(std::move(r)) {}
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    RationalComplex(long r) : re(r) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    RationalComplex conj() const { return {re, -im}; }
    Rational norm_sq() const { return re * re + im * im; }

    RationalComplex operator-() const { return {-re, -im}; }

    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    RationalComplex& operator-=(const RationalComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
    friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RationalComplex operator*(const Rational& c, const RationalComplex& a) {
        return {c * a.re, c * a.im};
    }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

inline std::string to_string(const RationalComplex& c) {
    if (c.im == 0) return to_string(c.re);
    std::string s = to_string(c.re);
    s += (c.im < 0) ? "-" : "+";
    Rational ai = abs(c.im);
    s += to_string(ai) + "i";
    return s;
}

}  // namespace bergman
