#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bergman/asymptotics.hpp"
#include "bergman/config.hpp"
#include "bergman/counterexample.hpp"
#include "bergman/hankel.hpp"
#include "bergman/measure.hpp"
#include "bergman/parse.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

// Exit codes: 0 success (a NotCompact verdict is a result, not an error),
// 2 validation / parse error, 3 BudgetUnreachable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

/// Renders a symbol back into the CLI literal grammar (round-trips through
/// parse_symbol).
inline std::string format_symbol(const Symbol& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, coef] : f.terms()) {
        if (!first) out += " + ";
        first = false;
        out += "(" + to_string(coef) + ")";
        for (std::size_t j = 0; j < f.dim(); ++j) {
            if (key.first[j] != 0)
                out += " z" + std::to_string(j + 1) + "^" + std::to_string(key.first[j]);
            if (key.second[j] != 0)
                out += " zbar" + std::to_string(j + 1) + "^" + std::to_string(key.second[j]);
        }
    }
    return out;
}

namespace cli_detail {

struct Options {
    std::string measure_file;
    std::string symbol_text;
    std::string phi_text;
    std::string path_spec;
    std::string out_path;
    std::string format = "csv";
    std::string mode;  // per-command default applied later
    std::size_t n = 0;
    int beta = 1;
    int box_cap = -1;
    double tol = 1e-10;
    // limit
    std::string delta_list, beta_list;
    int cap = 1000, step = 100;
    // counterexample
    int layers = 8;
    double budget_scale = 1.0;
    std::size_t radial_order = 32;
    std::size_t angular_size = 4096;
};

struct CliFailure : std::runtime_error {
    CliFailure(int code_, const std::string& msg) : std::runtime_error(msg), code(code_) {}
    int code;
};

inline ProductMeasure resolve_measure(const Options& opt, NumericMode mode,
                                      bool check_support = true) {
    ProductMeasure pm = opt.measure_file.empty()
                            ? ProductMeasure::power_weight(opt.n ? opt.n : 1, opt.beta)
                            : load_measure_config(opt.measure_file);
    MeasureError err = pm.validate(mode);
    if (err == MeasureError::SupportGap && !check_support) {
        // Limit experiments deliberately probe support violations.
    } else if (err != MeasureError::Ok) {
        throw CliFailure(kExitValidation, std::string("invalid measure: ") + to_string(err));
    }
    if (opt.n != 0 && pm.dim() != opt.n)
        throw CliFailure(kExitValidation, "--n disagrees with measure dimension");
    return pm;
}

inline void emit(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw CliFailure(kExitValidation, "cannot open output file " + opt.out_path);
        out << text;
    }
}

inline std::string scalar_str(const Rational& q, NumericMode mode) {
    if (mode == NumericMode::Exact) return to_string(q);
    std::ostringstream os;
    os.precision(17);
    os << to_double(q);
    return os.str();
}

inline nlohmann::json symbol_json(const Symbol& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, coef] : f.terms()) {
        nlohmann::json t;
        t["u"] = key.first.v;
        t["v"] = key.second.v;
        t["re"] = to_string(coef.re);
        t["im"] = to_string(coef.im);
        terms.push_back(t);
    }
    return {{"n", f.dim()}, {"literal", format_symbol(f)}, {"terms", terms}};
}

inline int cmd_moments(const Options& opt) {
    NumericMode mode = opt.mode == "float" ? NumericMode::Float : NumericMode::Exact;
    ProductMeasure pm = resolve_measure(opt, mode);
    int N = opt.box_cap < 0 ? 6 : opt.box_cap;
    IndexBox box(pm.dim(), N);
    if (opt.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& m : box)
            rows.push_back({{"m", m.v}, {"c", scalar_str(pm.c_index(m), mode)}});
        emit(opt, nlohmann::json{{"command", "moments"}, {"n", pm.dim()}, {"N", N},
                                 {"rows", rows}}
                      .dump(2));
    } else {
        std::ostringstream os;
        for (std::size_t j = 1; j <= pm.dim(); ++j) os << "m" << j << ",";
        os << "c\n";
        for (const auto& m : box) {
            for (std::size_t j = 0; j < pm.dim(); ++j) os << m[j] << ",";
            os << scalar_str(pm.c_index(m), mode) << "\n";
        }
        emit(opt, os.str());
    }
    return kExitOk;
}

inline int cmd_gram(const Options& opt) {
    NumericMode mode = opt.mode == "float" ? NumericMode::Float : NumericMode::Exact;
    ProductMeasure pm = resolve_measure(opt, mode);
    if (opt.symbol_text.empty()) throw CliFailure(kExitValidation, "gram needs --symbol");
    Symbol f = parse_symbol(opt.symbol_text, pm.dim());
    int N = opt.box_cap < 0 ? (mode == NumericMode::Exact ? 6 : 12) : opt.box_cap;
    IndexBox box(pm.dim(), N);
    HankelGram g(pm, f, box);
    // Exact output is the unnormalized matrix <H_f z^m, H_f z^k> (rational);
    // float output is the e-basis matrix (decimal).
    std::ostringstream os;
    if (opt.format == "json") {
        nlohmann::json entries = nlohmann::json::array();
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (mode == NumericMode::Exact) {
                    entries.push_back({{"row", box[i].v}, {"col", box[j].v},
                                       {"re", to_string(g.raw(i, j).re)},
                                       {"im", to_string(g.raw(i, j).im)}});
                } else {
                    auto e = g.entry(i, j);
                    entries.push_back({{"row", box[i].v}, {"col", box[j].v},
                                       {"re", e.real()}, {"im", e.imag()}});
                }
            }
        emit(opt, nlohmann::json{{"command", "gram"},
                                 {"n", pm.dim()},
                                 {"N", N},
                                 {"basis", mode == NumericMode::Exact ? "monomial" : "orthonormal"},
                                 {"entries", entries}}
                      .dump(2));
    } else {
        os << "row,col,re,im\n";
        os.precision(17);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                os << i << "," << j << ",";
                if (mode == NumericMode::Exact)
                    os << to_string(g.raw(i, j).re) << "," << to_string(g.raw(i, j).im);
                else {
                    auto e = g.entry(i, j);
                    os << e.real() << "," << e.imag();
                }
                os << "\n";
            }
        emit(opt, os.str());
    }
    return kExitOk;
}

inline int cmd_decay(const Options& opt) {
    NumericMode mode = opt.mode == "float" ? NumericMode::Float : NumericMode::Exact;
    ProductMeasure pm = resolve_measure(opt, mode);
    if (opt.symbol_text.empty()) throw CliFailure(kExitValidation, "decay needs --symbol");
    Symbol f = parse_symbol(opt.symbol_text, pm.dim());
    auto parts = quasi_decompose(f);
    if (parts.size() != 1)
        throw CliFailure(kExitValidation, "decay needs a quasi-homogeneous symbol");
    QuasiPart fs{parts.begin()->first, parts.begin()->second};
    if (opt.path_spec.empty()) throw CliFailure(kExitValidation, "decay needs --path");
    DecayPath path = parse_path_spec(opt.path_spec, pm.dim());
    auto points = path.points();
    auto values = decay_sweep(pm, fs, points);
    if (opt.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < points.size(); ++i)
            rows.push_back({{"m", points[i].v},
                            {"lambda", to_string(values[i])},
                            {"lambda_float", to_double(values[i])}});
        emit(opt, nlohmann::json{{"command", "decay"}, {"s", fs.degree.v}, {"rows", rows}}.dump(2));
    } else {
        std::ostringstream os;
        os.precision(17);
        for (std::size_t j = 1; j <= pm.dim(); ++j) os << "m" << j << ",";
        os << "lambda,lambda_float\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = 0; j < pm.dim(); ++j) os << points[i][j] << ",";
            os << to_string(values[i]) << "," << to_double(values[i]) << "\n";
        }
        emit(opt, os.str());
    }
    return kExitOk;
}

inline int cmd_certify(const Options& opt) {
    if (opt.mode == "float")
        throw CliFailure(kExitValidation, "certify requires exact mode");
    ProductMeasure pm = resolve_measure(opt, NumericMode::Exact);
    if (opt.symbol_text.empty()) throw CliFailure(kExitValidation, "certify needs --symbol");
    Symbol f = parse_symbol(opt.symbol_text, pm.dim());
    CompactnessVerdict v = compactness_certificate(pm, f);
    nlohmann::json doc;
    switch (v.kind) {
        case CompactnessVerdict::Kind::AlwaysCompactDim1:
            doc["verdict"] = "always_compact_dim1";
            break;
        case CompactnessVerdict::Kind::Compact:
            doc["verdict"] = "compact";
            doc["h"] = symbol_json(v.h);
            doc["g"] = symbol_json(v.g);
            break;
        case CompactnessVerdict::Kind::NotCompact:
            doc["verdict"] = "not_compact";
            doc["witness_s"] = v.witness_s.v;
            doc["witness_part"] = to_string(v.witness_part);
            break;
    }
    emit(opt, doc.dump(2));
    return kExitOk;
}

inline int cmd_cesaro(const Options& opt) {
    if (opt.symbol_text.empty()) throw CliFailure(kExitValidation, "cesaro needs --symbol");
    Symbol f = parse_symbol(opt.symbol_text, opt.n);
    int N = opt.box_cap < 0 ? 1 : opt.box_cap;
    Symbol out = cesaro_mean(f, N);
    if (opt.format == "json") {
        emit(opt, nlohmann::json{{"command", "cesaro"}, {"N", N}, {"symbol", symbol_json(out)}}
                      .dump(2));
    } else {
        std::ostringstream os;
        os << "term\n";
        os << format_symbol(out) << "\n";
        emit(opt, os.str());
    }
    return kExitOk;
}

inline std::vector<int> parse_int_list(const std::string& s, std::size_t n,
                                       const std::string& what) {
    if (s.empty()) return std::vector<int>(n, 0);
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.size() != n) throw CliFailure(kExitValidation, what + " needs " + std::to_string(n) + " entries");
    return out;
}

inline int cmd_limit(const Options& opt) {
    NumericMode mode = opt.mode == "float" ? NumericMode::Float : NumericMode::Exact;
    // Support violations are the point of the negative controls here, so the
    // support condition is not enforced for this command.
    ProductMeasure pm = resolve_measure(opt, mode, /*check_support=*/false);
    if (opt.phi_text.empty()) throw CliFailure(kExitValidation, "limit needs --phi");
    RatioExperiment exp;
    for (std::size_t j = 0; j < pm.dim(); ++j) exp.factors.push_back(pm.factor(j));
    exp.phi = parse_radial_poly(opt.phi_text, pm.dim());
    auto dl = parse_int_list(opt.delta_list, pm.dim(), "--delta");
    auto bl = parse_int_list(opt.beta_list, pm.dim(), "--beta-shift");
    exp.delta = MultiIndex(pm.dim());
    exp.beta = MultiIndex(pm.dim());
    for (std::size_t j = 0; j < pm.dim(); ++j) {
        if (dl[j] < 0 || bl[j] < 0)
            throw CliFailure(kExitValidation, "integer shifts must be nonnegative");
        exp.delta[j] = dl[j];
        exp.beta[j] = bl[j];
    }
    if (opt.step <= 0) throw CliFailure(kExitValidation, "--step must be positive");
    for (int m = opt.step; m <= opt.cap; m += opt.step)
        exp.path.push_back(MultiIndex(pm.dim(), m));
    if (exp.path.empty()) throw CliFailure(kExitValidation, "empty limit path");
    std::vector<Rational> seq;
    try {
        seq = ratio_sequence(exp);
    } catch (const std::invalid_argument& e) {
        throw CliFailure(kExitValidation, e.what());
    }
    Rational alpha = exp.target();
    std::ostringstream os;
    os.precision(17);
    if (opt.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < seq.size(); ++i) {
            Rational err = seq[i] - alpha;
            if (err < 0) err = -err;
            rows.push_back({{"m", exp.path[i].v},
                            {"ratio", to_string(seq[i])},
                            {"ratio_float", to_double(seq[i])},
                            {"abs_error", to_double(err)}});
        }
        emit(opt, nlohmann::json{{"command", "limit"},
                                 {"alpha", to_string(alpha)},
                                 {"rows", rows}}
                      .dump(2));
    } else {
        for (std::size_t j = 1; j <= pm.dim(); ++j) os << "m" << j << ",";
        os << "ratio,ratio_float,abs_error\n";
        for (std::size_t i = 0; i < seq.size(); ++i) {
            for (std::size_t j = 0; j < pm.dim(); ++j) os << exp.path[i][j] << ",";
            Rational err = seq[i] - alpha;
            if (err < 0) err = -err;
            os << to_string(seq[i]) << "," << to_double(seq[i]) << "," << to_double(err) << "\n";
        }
        emit(opt, os.str());
    }
    return kExitOk;
}

inline int cmd_counterexample(const Options& opt) {
    if (opt.mode == "exact")
        throw CliFailure(kExitValidation, "counterexample requires float mode");
    std::size_t n = opt.n ? opt.n : 2;
    ProductMeasure pm = ProductMeasure::power_weight(n, 1);
    QuadratureRule rule{opt.radial_order, opt.angular_size};
    CounterexampleSymbol ce = build_counterexample(pm, opt.layers, opt.budget_scale, rule);
    HsSumResult hs = hs_sum_check(ce, rule, opt.tol > 0 ? opt.tol : 1e-2);
    NoDecompositionReport rep = no_decomposition_witness(ce, rule);

    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t k = 0; k < ce.layer_count(); ++k) {
        const auto& l = ce.layer(k);
        layers.push_back({{"k", k + 1},
                          {"inner", to_string(l.inner)},
                          {"outer", to_string(l.outer)},
                          {"arc_fraction", to_string(l.arc_fraction)},
                          {"sigma", to_string(ce.sigma(k))},
                          {"sigma_cap", to_string(Rational(1, static_cast<long>(k + 1)))},
                          {"kernel_integral", l.kernel_integral},
                          {"kernel_budget", opt.budget_scale / ((k + 1.0) * (k + 1.0))},
                          {"plateau_measure", to_string(rep.plateau_measures[k])}});
    }
    nlohmann::json doc{{"command", "counterexample"},
                       {"n", n},
                       {"K", opt.layers},
                       {"quadrature", {{"radial_order", rule.radial_order},
                                       {"angular_size", rule.angular_size}}},
                       {"layers", layers},
                       {"hs_sum", {{"estimate", hs.estimate}, {"bound", hs.bound},
                                   {"pass", hs.pass}}},
                       {"q0_max_beyond_ring", rep.q0_max_beyond_ring},
                       {"q_dominated", rep.q_dominated}};
    emit(opt, doc.dump(2));
    return kExitOk;
}

}  // namespace cli_detail

/// Runs the CLI with argv-style arguments (excluding the program name).
inline int run_cli(const std::vector<std::string>& args) {
    using cli_detail::Options;
    CLI::App app{"Hankel operators on generalized Bergman spaces of the polydisc"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--measure", opt.measure_file, "measure config file (JSON)");
        sub->add_option("--symbol", opt.symbol_text, "symbol literal");
        sub->add_option("--n", opt.n, "ambient dimension");
        sub->add_option("--beta", opt.beta, "PowerWeight beta for the default measure");
        sub->add_option("-N", opt.box_cap, "index box cap");
        sub->add_option("--mode", opt.mode, "exact|float")
            ->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--out", opt.out_path, "output file (stdout if absent)");
        sub->add_option("--format", opt.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol", opt.tol, "tolerance override");
        sub->callback([&, sub] { command = sub->get_name(); });
        return sub;
    };

    add_common(app.add_subcommand("moments", "table of c_m over an index box"));
    add_common(app.add_subcommand("gram", "Hankel Gram matrix of a symbol"));
    auto* decay = add_common(app.add_subcommand("decay", "eigenvalue sweep along a path"));
    decay->add_option("--path", opt.path_spec, "path spec, e.g. freeze:1=0;drive:2..50");
    add_common(app.add_subcommand("certify", "compactness certificate for a symbol"));
    add_common(app.add_subcommand("cesaro", "Cesaro (product-Fejer) mean of a symbol"));
    auto* limit = add_common(app.add_subcommand("limit", "moment-ratio limit experiment"));
    limit->add_option("--phi", opt.phi_text, "radial polynomial, e.g. \"r1 r2\"");
    limit->add_option("--delta", opt.delta_list, "comma-separated integer shifts");
    limit->add_option("--beta-shift", opt.beta_list, "comma-separated integer shifts");
    limit->add_option("--cap", opt.cap, "largest path index");
    limit->add_option("--step", opt.step, "path stride");
    auto* ce = add_common(app.add_subcommand("counterexample",
                                             "build and verify the boundary counterexample"));
    ce->add_option("--K", opt.layers, "layer count");
    ce->add_option("--budget-scale", opt.budget_scale, "kernel budget scale (budget = scale/k^2)");
    ce->add_option("--radial-order", opt.radial_order, "Gauss order per ring");
    ce->add_option("--angular", opt.angular_size, "angular grid size");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (command == "moments") return cli_detail::cmd_moments(opt);
        if (command == "gram") return cli_detail::cmd_gram(opt);
        if (command == "decay") return cli_detail::cmd_decay(opt);
        if (command == "certify") return cli_detail::cmd_certify(opt);
        if (command == "cesaro") return cli_detail::cmd_cesaro(opt);
        if (command == "limit") return cli_detail::cmd_limit(opt);
        if (command == "counterexample") return cli_detail::cmd_counterexample(opt);
        std::cerr << "unknown command\n";
        return kExitValidation;
    } catch (const cli_detail::CliFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const BudgetUnreachable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace bergman
