#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

/// Integer multi-index. Used both for exponents in Z+^n and for signed
/// quasi-degrees in Z^n; the role decides which variant is in play.
struct MultiIndex {
    std::vector<int> v;

    MultiIndex() = default;
    explicit MultiIndex(std::size_t n, int fill = 0) : v(n, fill) {}
    MultiIndex(std::initializer_list<int> il) : v(il) {}

    std::size_t dim() const { return v.size(); }
    int operator[](std::size_t j) const { return v[j]; }
    int& operator[](std::size_t j) { return v[j]; }

    bool nonnegative() const {
        return std::all_of(v.begin(), v.end(), [](int x) { return x >= 0; });
    }

    /// Componentwise order: *this >= o in every coordinate.
    bool succeq(const MultiIndex& o) const {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] < o.v[j]) return false;
        return true;
    }
    bool succeq_zero() const { return nonnegative(); }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r(a.dim());
        for (std::size_t j = 0; j < a.dim(); ++j) r.v[j] = a.v[j] + b.v[j];
        return r;
    }
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r(a.dim());
        for (std::size_t j = 0; j < a.dim(); ++j) r.v[j] = a.v[j] - b.v[j];
        return r;
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.v == b.v; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.v < b.v; }
};

inline std::string to_string(const MultiIndex& m) {
    std::string s = "(";
    for (std::size_t j = 0; j < m.dim(); ++j) {
        if (j) s += ",";
        s += std::to_string(m[j]);
    }
    return s + ")";
}

/// The truncation box {m in Z+^n : m_j <= N for all j}, enumerated in
/// lexicographic order (last coordinate fastest).
class IndexBox {
public:
    IndexBox(std::size_t n, int cap) : n_(n), cap_(cap) {
        if (cap < 0) throw std::invalid_argument("IndexBox: negative cap");
        MultiIndex m(n, 0);
        indices_.push_back(m);
        while (advance(m)) indices_.push_back(m);
    }

    std::size_t dim() const { return n_; }
    int cap() const { return cap_; }
    std::size_t size() const { return indices_.size(); }
    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

private:
    bool advance(MultiIndex& m) const {
        for (std::size_t j = n_; j-- > 0;) {
            if (m[j] < cap_) {
                ++m[j];
                for (std::size_t i = j + 1; i < n_; ++i) m[i] = 0;
                return true;
            }
        }
        return false;
    }

    std::size_t n_;
    int cap_;
    std::vector<MultiIndex> indices_;
};

}  // namespace bergman
