#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/measure.hpp"
#include "bergman/parse.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// Reads a ProductMeasure from the JSON config grammar:
///
/// { "n": 2,
///   "factors": [
///     {"family": "power_weight", "beta": 1},
///     {"family": "atomic",
///      "atoms": [["1/2", "1/2"], ["3/4", "1/2"]],
///      "tail_incomplete": true} ] }
///
/// Rationals are "p/q" strings. Shorthand: a document with "family" at top
/// level describes n identical factors.
inline ProductMeasure parse_measure_config(const nlohmann::json& doc) {
    if (!doc.contains("n")) throw ParseError("measure config: missing field 'n'");
    std::size_t n = doc.at("n").get<std::size_t>();
    if (n == 0) throw ParseError("measure config: n must be >= 1");

    auto parse_factor = [](const nlohmann::json& fj) {
        std::string family = fj.at("family").get<std::string>();
        if (family == "power_weight") {
            return RadialMeasure::power_weight(fj.at("beta").get<int>());
        }
        if (family == "atomic") {
            std::vector<RadialMeasure::Atom> atoms;
            for (const auto& aj : fj.at("atoms"))
                atoms.push_back({parse_rational(aj.at(0).get<std::string>()),
                                 parse_rational(aj.at(1).get<std::string>())});
            bool tail = fj.value("tail_incomplete", false);
            return RadialMeasure::atomic(std::move(atoms), tail);
        }
        throw ParseError("measure config: unknown family '" + family + "'");
    };

    std::vector<RadialMeasure> factors;
    if (doc.contains("factors")) {
        for (const auto& fj : doc.at("factors")) factors.push_back(parse_factor(fj));
        if (factors.size() != n) throw ParseError("measure config: factor count != n");
    } else if (doc.contains("family")) {
        for (std::size_t j = 0; j < n; ++j) factors.push_back(parse_factor(doc));
    } else {
        throw ParseError("measure config: need 'factors' or a top-level 'family'");
    }
    return ProductMeasure(std::move(factors));
}

inline ProductMeasure load_measure_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open measure config: " + path);
    nlohmann::json doc;
    in >> doc;
    return parse_measure_config(doc);
}

}  // namespace bergman
