#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergman/hankel.hpp"
#include "bergman/measure.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

class Cursor {
public:
    explicit Cursor(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool accept_word(const std::string& w) {
        skip_ws();
        if (s_.compare(pos_, w.size(), w) == 0) {
            pos_ += w.size();
            return true;
        }
        return false;
    }
    std::string digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected digits");
        return s_.substr(start, pos_ - start);
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    /// Unsigned rational: digits ['/' digits].
    Rational rational() {
        std::string num = digits();
        if (accept('/')) {
            std::string den = digits();
            return parse_rational(num + "/" + den);
        }
        return parse_rational(num);
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

/// One signed real-or-imaginary piece of a complex literal: "3/2", "1/2i", "i".
inline void complex_piece(Cursor& cur, bool negative, RationalComplex& out) {
    Rational mag;
    bool have_digits = std::isdigit(static_cast<unsigned char>(cur.peek()));
    if (have_digits)
        mag = cur.rational();
    else
        mag = 1;
    if (cur.accept('i')) {
        out.im += negative ? -mag : mag;
    } else {
        if (!have_digits) cur.fail("expected number or 'i'");
        out.re += negative ? -mag : mag;
    }
}

inline RationalComplex complex_literal(Cursor& cur) {
    RationalComplex c;
    bool neg = cur.accept('-');
    if (!neg) cur.accept('+');
    complex_piece(cur, neg, c);
    while (true) {
        if (cur.accept('+'))
            complex_piece(cur, false, c);
        else if (cur.accept('-'))
            complex_piece(cur, true, c);
        else
            break;
    }
    return c;
}

struct Factor {
    bool conjugated;
    std::size_t coord;  // 1-based
    int power;
};

inline std::optional<Factor> factor(Cursor& cur, char var) {
    std::string bar = std::string(1, var) + "bar";
    bool conj = false;
    if (cur.accept_word(bar))
        conj = true;
    else if (cur.peek() == var)
        cur.accept(var);
    else
        return std::nullopt;
    Factor f;
    f.conjugated = conj;
    f.coord = std::stoul(cur.digits());
    if (f.coord == 0) cur.fail("coordinate indices are 1-based");
    f.power = 1;
    if (cur.accept('^')) f.power = std::stoi(cur.digits());
    return f;
}

struct RawTerm {
    RationalComplex coef;
    std::vector<Factor> factors;
};

/// term := [coef] factor* ; coef := '(' complex ')' | rational | rational 'i'
inline RawTerm term(Cursor& cur, char var) {
    RawTerm t;
    t.coef = RationalComplex(Rational(1));
    bool have_coef = false;
    if (cur.accept('(')) {
        t.coef = complex_literal(cur);
        cur.expect(')');
        have_coef = true;
    } else if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        Rational mag = cur.rational();
        if (cur.accept('i'))
            t.coef = RationalComplex(Rational(0), mag);
        else
            t.coef = RationalComplex(mag);
        have_coef = true;
    } else if (cur.peek() == 'i') {
        // bare imaginary unit, as long as it is not the start of an identifier
        cur.accept('i');
        t.coef = RationalComplex(Rational(0), Rational(1));
        have_coef = true;
    }
    while (auto f = factor(cur, var)) t.factors.push_back(*f);
    if (!have_coef && t.factors.empty()) cur.fail("expected a term");
    return t;
}

}  // namespace detail

/// Parses the ASCII symbol grammar, e.g. "(3/2+1/2i) z1^2 zbar2^1 + zbar1".
/// Dimension is inferred from the largest coordinate index unless given.
inline Symbol parse_symbol(const std::string& text, std::size_t n = 0) {
    detail::Cursor cur(text);
    std::vector<std::pair<detail::RawTerm, bool>> terms;  // (term, negated)
    bool neg = cur.accept('-');
    if (!neg) cur.accept('+');
    terms.emplace_back(detail::term(cur, 'z'), neg);
    while (!cur.done()) {
        if (cur.accept('+'))
            terms.emplace_back(detail::term(cur, 'z'), false);
        else if (cur.accept('-'))
            terms.emplace_back(detail::term(cur, 'z'), true);
        else
            cur.fail("expected '+' or '-'");
    }
    std::size_t max_coord = n;
    for (const auto& [t, tn] : terms) {
        (void)tn;
        for (const auto& f : t.factors) max_coord = std::max(max_coord, f.coord);
    }
    if (max_coord == 0) max_coord = 1;  // constant symbol
    Symbol sym(max_coord);
    for (const auto& [t, negated] : terms) {
        MultiIndex u(max_coord, 0), v(max_coord, 0);
        for (const auto& f : t.factors) {
            if (f.power < 0) throw ParseError("negative exponents are not allowed");
            if (f.conjugated)
                v[f.coord - 1] += f.power;
            else
                u[f.coord - 1] += f.power;
        }
        sym.add_term(u, v, negated ? -t.coef : t.coef);
    }
    if (n != 0 && sym.dim() != n) throw ParseError("symbol exceeds declared dimension");
    return sym;
}

/// Parses a real polynomial in r1..rN (same grammar with variable 'r',
/// no conjugates, real rational coefficients).
inline std::map<MultiIndex, Rational> parse_radial_poly(const std::string& text, std::size_t n) {
    Symbol s = parse_symbol([&] {
        std::string t = text;
        for (auto& ch : t)
            if (ch == 'r' || ch == 'R') ch = 'z';
        return t;
    }(), n);
    std::map<MultiIndex, Rational> poly;
    for (const auto& [key, coef] : s.terms()) {
        if (!coef.is_real()) throw ParseError("radial polynomial must have real coefficients");
        for (std::size_t j = 0; j < n; ++j)
            if (key.second[j] != 0) throw ParseError("radial polynomial takes no conjugates");
        poly[key.first] = coef.re;
    }
    return poly;
}

/// Path spec grammar: clauses separated by ';', either
///   freeze:<coord>=<value>  or  drive:<coord>[=<start>]..<cap>
/// with 1-based coordinates; every coordinate must appear exactly once.
inline DecayPath parse_path_spec(const std::string& text, std::size_t n) {
    DecayPath path;
    path.frozen.assign(n, std::nullopt);
    std::vector<bool> seen(n, false);
    bool have_drive = false;
    std::optional<int> start, cap;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(';', pos);
        std::string clause = text.substr(pos, end == std::string::npos ? end : end - pos);
        pos = (end == std::string::npos) ? text.size() + 1 : end + 1;
        if (clause.empty()) continue;

        auto colon = clause.find(':');
        if (colon == std::string::npos) throw ParseError("path clause needs ':' in " + clause);
        std::string kind = clause.substr(0, colon);
        std::string rest = clause.substr(colon + 1);
        auto coord_end = rest.find_first_of("=.");
        std::size_t coord = std::stoul(rest.substr(0, coord_end));
        if (coord < 1 || coord > n) throw ParseError("path coordinate out of range: " + clause);
        if (seen[coord - 1]) throw ParseError("path coordinate repeated: " + clause);
        seen[coord - 1] = true;

        if (kind == "freeze") {
            if (coord_end == std::string::npos || rest[coord_end] != '=')
                throw ParseError("freeze clause needs '=': " + clause);
            path.frozen[coord - 1] = std::stoi(rest.substr(coord_end + 1));
        } else if (kind == "drive") {
            have_drive = true;
            std::string range = rest.substr(coord_end);
            int s = 0, c;
            if (range[0] == '=') {
                auto dots = range.find("..");
                if (dots == std::string::npos) throw ParseError("drive clause needs '..'");
                s = std::stoi(range.substr(1, dots - 1));
                c = std::stoi(range.substr(dots + 2));
            } else if (range.rfind("..", 0) == 0) {
                c = std::stoi(range.substr(2));
            } else {
                throw ParseError("malformed drive clause: " + clause);
            }
            if (start && (*start != s)) throw ParseError("drive clauses disagree on start");
            if (cap && (*cap != c)) throw ParseError("drive clauses disagree on cap");
            start = s;
            cap = c;
        } else {
            throw ParseError("unknown path clause kind: " + kind);
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        if (!seen[j]) throw ParseError("path spec does not cover coordinate " + std::to_string(j + 1));
    if (!have_drive) throw ParseError("path spec needs at least one drive clause");
    path.start = start.value_or(0);
    path.cap = *cap;
    if (path.cap < path.start) throw ParseError("path cap below start");
    return path;
}

}  // namespace bergman
