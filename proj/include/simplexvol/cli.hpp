#pragma once

#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "simplexvol/relaxations.hpp"

namespace simplexvol::cli {

// ---------------------------------------------------------------------------
// Simplex shorthands:
//   std:d          standard simplex
//   scaled:d,u     u * Delta_d
//   shifted:d,u,v1,...,vd   v0 + u * Delta_d
//   interval:l,u   the 1-D simplex [l, u]
//   file:path      JSON file (exact or numeric per its entries)
// ---------------------------------------------------------------------------

inline SimplexInput parse_simplex_arg(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("simplex spec needs a 'kind:' prefix in '" + text + "'");
    std::string kind = text.substr(0, colon);
    std::string body = text.substr(colon + 1);

    if (kind == "file") return load_simplex(body);

    auto fields = detail::parse_rational_list(body.empty() ? "0" : body);
    auto as_dim = [&](const Rational& r) {
        if (denominator(r) != 1 || r < 1)
            throw ParseError("dimension must be a positive integer in '" + text + "'");
        return static_cast<std::size_t>(r.convert_to<long>());
    };
    if (kind == "std") {
        if (fields.size() != 1) throw ParseError("std:d takes one field in '" + text + "'");
        return Simplex<Rational>::standard(as_dim(fields[0]));
    }
    if (kind == "scaled" || kind == "shifted") {
        if (fields.size() < 2) throw ParseError("missing scale in '" + text + "'");
        std::size_t d = as_dim(fields[0]);
        Rational u = fields[1];
        if (u <= 0) throw ParseError("scale must be positive in '" + text + "'");
        Vector<Rational> v0(d, Rational(0));
        if (kind == "shifted") {
            if (fields.size() != 2 + d)
                throw ParseError("shifted:d,u needs d offset coordinates in '" + text + "'");
            for (std::size_t i = 0; i < d; ++i) v0[i] = fields[2 + i];
        } else if (fields.size() != 2) {
            throw ParseError("scaled:d,u takes two fields in '" + text + "'");
        }
        std::vector<Vector<Rational>> verts(d + 1, v0);
        for (std::size_t j = 1; j <= d; ++j) verts[j][j - 1] += u;
        return Simplex<Rational>(std::move(verts));
    }
    if (kind == "interval") {
        if (fields.size() != 2) throw ParseError("interval:l,u takes two fields in '" + text + "'");
        if (fields[0] >= fields[1]) throw ParseError("interval needs l < u in '" + text + "'");
        return Simplex<Rational>({{fields[0]}, {fields[1]}});
    }
    throw ParseError("unknown simplex kind '" + kind + "'");
}

namespace detail_cli {

inline unsigned thread_budget() {
    if (const char* env = std::getenv("SIMPLEXVOL_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

inline std::size_t simplex_dim(const SimplexInput& input) {
    return std::visit([](const auto& j) { return j.dim(); }, input);
}

inline PolyMethod parse_method(const std::string& name) {
    if (name == "auto") return PolyMethod::auto_select;
    if (name == "pullback") return PolyMethod::pullback;
    if (name == "taylor") return PolyMethod::taylor_expansion;
    if (name == "linform") return PolyMethod::linform_decomp;
    throw ParseError("unknown method '" + name + "'");
}

inline std::string quantity_text(const Quantity& q) {
    return q.exact ? format_rational(*q.exact) : format_double(q.value);
}

struct SweepRow {
    double u;
    double perspective;
    double naive;
    double ratio;
};

} // namespace detail_cli

/// Runs the command line and writes results to `out`, diagnostics to `err`.
/// Exit codes: 0 success, 2 parse error, 3 precondition violation, 4 numeric
/// failure.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"volumes of perspective and naive relaxations over simplices"};
    app.require_subcommand(1);

    std::string simplex_text, function_text, method_text = "auto", format_text;
    unsigned degree = 5;
    std::uint64_t seed = 0;
    bool audit = false;

    auto* integrate = app.add_subcommand("integrate", "integrate a function over a simplex");
    integrate->add_option("--simplex", simplex_text, "simplex shorthand or file:")->required();
    integrate->add_option("--f", function_text, "function spec")->required();
    integrate->add_option("--method", method_text, "auto|pullback|taylor|linform");
    integrate->add_option("--degree", degree, "cubature degree for numeric fallbacks");
    integrate->add_option("--seed", seed, "seed for Monte-Carlo fallbacks");
    integrate->add_option("--format", format_text, "csv|json");

    auto* volume = app.add_subcommand("volume", "perspective/naive relaxation report");
    volume->add_option("--simplex", simplex_text, "simplex shorthand or file:")->required();
    volume->add_option("--f", function_text, "function spec")->required();
    volume->add_option("--degree", degree, "cubature degree (2s+1, odd)");
    volume->add_option("--seed", seed, "seed for Monte-Carlo fallbacks");
    volume->add_option("--format", format_text, "csv|json");
    volume->add_flag("--audit-convexity", audit, "stochastic midpoint-convexity audit");

    std::string family = "logsumexp";
    std::string grid_text;
    unsigned sweep_d = 3;
    auto* sweep = app.add_subcommand("sweep", "cut-off ratio over a grid of simplex scales");
    sweep->add_option("--family", family, "function family (logsumexp)");
    sweep->add_option("--d", sweep_d, "dimension")->required();
    sweep->add_option("--u-grid", grid_text, "a:b:step inclusive grid")->required();
    sweep->add_option("--degree", degree, "cubature degree (2s+1, odd)");
    sweep->add_option("--seed", seed, "seed");

    bool rule_gm = false, rule_conical = false;
    unsigned rule_d = 2, rule_s = 0;
    auto* rule = app.add_subcommand("rule", "export a cubature rule");
    rule->add_flag("--gm", rule_gm, "Grundmann-Moller rule");
    rule->add_flag("--conical", rule_conical, "conical product rule");
    rule->add_option("--d", rule_d, "dimension")->required();
    rule->add_option("--s", rule_s, "rule index; degree is 2s+1")->required();
    rule->add_option("--format", format_text, "json");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (integrate->parsed()) {
            SimplexInput input = parse_simplex_arg(simplex_text);
            FunctionSpec spec = parse_function_spec(function_text, detail_cli::simplex_dim(input));
            if (spec.dim() > detail_cli::simplex_dim(input))
                throw ParseError("function uses more variables than the simplex has");

            RelaxationConfig cfg;
            if (degree % 2 == 0) throw ParseError("--degree must be odd (rules have degree 2s+1)");
            cfg.cubature_s = (degree - 1) / 2;
            cfg.seed = seed;

            Quantity result;
            PolyMethod method = detail_cli::parse_method(method_text);
            if (method != PolyMethod::auto_select) {
                const auto* poly = spec.get_if<PolySpec>();
                if (!poly) throw ParseError("--method applies only to poly: integrands");
                if (const auto* exact = std::get_if<Simplex<Rational>>(&input)) {
                    Rational value = integrate_polynomial(*exact, poly->poly, method);
                    result = {to_double(value), value, method_text, 0.0};
                } else {
                    const auto& numeric = std::get<Simplex<double>>(input);
                    double value = integrate_polynomial(numeric, to_double(poly->poly), method);
                    result = {value, std::nullopt, method_text, 0.0};
                }
            } else {
                result = integrate_function(SimplexContext(input), spec, cfg);
            }

            if (format_text == "json") {
                nlohmann::json doc{{"value", detail_cli::quantity_text(result)},
                                   {"method", result.method},
                                   {"error", format_double(result.error)}};
                out << doc.dump(2) << "\n";
            } else {
                out << "value,method,error\n";
                out << detail_cli::quantity_text(result) << "," << result.method << ","
                    << format_double(result.error) << "\n";
            }
            return 0;
        }

        if (volume->parsed()) {
            SimplexInput input = parse_simplex_arg(simplex_text);
            FunctionSpec spec = parse_function_spec(function_text, detail_cli::simplex_dim(input));
            if (spec.dim() > detail_cli::simplex_dim(input))
                throw ParseError("function uses more variables than the simplex has");
            RelaxationConfig cfg;
            if (degree % 2 == 0) throw ParseError("--degree must be odd (rules have degree 2s+1)");
            cfg.cubature_s = (degree - 1) / 2;
            cfg.seed = seed;
            cfg.audit_convexity = audit;

            RelaxationReport report = cutoff_report(SimplexContext(input), spec, cfg);
            if (format_text == "csv") {
                out << "perspective,naive,cutoff_amount,cutoff_ratio\n";
                out << format_double(report.perspective.value) << ","
                    << format_double(report.naive.value) << ","
                    << format_double(report.cutoff.value) << ",";
                if (report.ratio_defined) out << format_double(report.ratio);
                out << "\n";
            } else {
                out << report_to_json(report).dump(2) << "\n";
            }
            return 0;
        }

        if (sweep->parsed()) {
            if (family != "logsumexp")
                throw ParseError("unknown sweep family '" + family + "'");
            if (degree % 2 == 0) throw ParseError("--degree must be odd (rules have degree 2s+1)");

            std::size_t colon1 = grid_text.find(':');
            std::size_t colon2 = colon1 == std::string::npos ? std::string::npos
                                                             : grid_text.find(':', colon1 + 1);
            if (colon2 == std::string::npos)
                throw ParseError("--u-grid needs a:b:step in '" + grid_text + "'");
            Rational lo = parse_rational(grid_text.substr(0, colon1));
            Rational hi = parse_rational(grid_text.substr(colon1 + 1, colon2 - colon1 - 1));
            Rational step = parse_rational(grid_text.substr(colon2 + 1));
            if (step <= 0 || hi < lo) throw ParseError("--u-grid needs lo <= hi and step > 0");

            std::vector<Rational> grid;
            for (Rational u = lo; u <= hi; u += step) grid.push_back(u);

            RelaxationConfig cfg;
            cfg.cubature_s = (degree - 1) / 2;
            cfg.seed = seed;
            FunctionSpec spec{LogSumExpSpec{sweep_d}};

            std::vector<detail_cli::SweepRow> rows(grid.size());
            auto worker = [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                    std::vector<Vector<Rational>> verts(sweep_d + 1,
                                                        Vector<Rational>(sweep_d, Rational(0)));
                    for (std::size_t j = 1; j <= sweep_d; ++j) verts[j][j - 1] = grid[i];
                    SimplexContext ctx{Simplex<Rational>(std::move(verts))};
                    RelaxationReport report = cutoff_report(ctx, spec, cfg);
                    rows[i] = {to_double(grid[i]), report.perspective.value, report.naive.value,
                               report.ratio_defined ? report.ratio
                                                    : std::numeric_limits<double>::quiet_NaN()};
                }
            };
            unsigned threads = std::min(detail_cli::thread_budget(),
                                        static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
            if (threads <= 1 || grid.size() <= 1) {
                worker(0, grid.size());
            } else {
                std::vector<std::future<void>> futures;
                std::size_t chunk = (grid.size() + threads - 1) / threads;
                for (unsigned t = 0; t < threads; ++t) {
                    std::size_t begin = t * chunk;
                    std::size_t end = std::min(grid.size(), begin + chunk);
                    if (begin >= end) break;
                    futures.push_back(std::async(std::launch::async, worker, begin, end));
                }
                for (auto& f : futures) f.get();
            }

            out << "u,perspective,naive,ratio\n";
            for (const auto& row : rows)
                out << format_double(row.u) << "," << format_double(row.perspective) << ","
                    << format_double(row.naive) << "," << format_double(row.ratio) << "\n";
            return 0;
        }

        if (rule->parsed()) {
            if (rule_gm == rule_conical)
                throw ParseError("rule needs exactly one of --gm or --conical");
            nlohmann::json doc;
            if (rule_gm)
                doc = rule_to_json(grundmann_moller_rule(rule_d, rule_s));
            else
                doc = rule_to_json(conical_product_rule(rule_d, rule_s));
            out << doc.dump(2) << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "precondition violation: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 4;
    }
    return 2;
}

inline int run_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), std::cout, std::cerr);
}

} // namespace simplexvol::cli
