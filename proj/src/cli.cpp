#include "dquad/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dquad/bessel.hpp"
#include "dquad/errors.hpp"
#include "dquad/example.hpp"
#include "dquad/expr.hpp"
#include "dquad/geometry.hpp"
#include "dquad/quadrature.hpp"
#include "dquad/symmetry.hpp"

namespace dquad::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Real-valued flags accept any constant expression ("pi", "2*pi", "1e-9").
double parse_real(const std::string& flag, const std::string& text) {
    try {
        expr::Expression e = expr::Expression::parse(text);
        if (!e.free_variables().empty()) {
            throw UsageError(flag + ": expected a constant, but '" + text +
                             "' uses variables");
        }
        return e.evaluate(0.0, 0.0);
    } catch (const expr::ParseError& pe) {
        throw UsageError(flag + ": cannot parse '" + text +
                         "': " + pe.what());
    } catch (const expr::EvalDomainError& de) {
        throw UsageError(flag + ": cannot evaluate '" + text +
                         "': " + de.what());
    }
}

struct QuadFlags {
    std::string abs_tol = "1e-12";
    std::string rel_tol = "1e-10";
    int order = 32;
    bool no_adaptive = false;
};

void add_quad_flags(CLI::App* cmd, QuadFlags& qf) {
    cmd->add_option("--tol", qf.abs_tol, "absolute tolerance")
        ->capture_default_str();
    cmd->add_option("--rel-tol", qf.rel_tol, "relative tolerance")
        ->capture_default_str();
    cmd->add_option("--order", qf.order,
                    "Gauss-Legendre base order, 1..64")
        ->capture_default_str();
    cmd->add_flag("--no-adaptive", qf.no_adaptive,
                  "single fixed rule instead of adaptive subdivision");
}

quad::QuadratureOptions to_options(const QuadFlags& qf) {
    quad::QuadratureOptions opts;
    opts.abs_tol = parse_real("--tol", qf.abs_tol);
    opts.rel_tol = parse_real("--rel-tol", qf.rel_tol);
    opts.base_order = qf.order;
    opts.adaptive = !qf.no_adaptive;
    return opts;
}

ordered_json options_json(const quad::QuadratureOptions& opts) {
    return {{"abs_tol", opts.abs_tol},
            {"rel_tol", opts.rel_tol},
            {"base_order", opts.base_order},
            {"adaptive", opts.adaptive},
            {"max_depth", opts.max_depth}};
}

ordered_json result_json(const quad::IntegralResult& r) {
    return {{"value", r.value},
            {"error_estimate", r.error_estimate},
            {"evaluations", r.evaluations},
            {"method", r.method}};
}

ordered_json make_envelope(const std::string& command) {
    ordered_json env;
    env["schema_version"] = "1";
    env["command"] = command;
    env["inputs"] = ordered_json::object();
    env["results"] = ordered_json::object();
    env["diagnostics"] = ordered_json::object();
    return env;
}

void emit_json(const ordered_json& env, std::ostream& out) {
    out << env.dump(2) << '\n';
}

expr::Expression load_expression(const std::string& source,
                                 std::vector<std::string>& warnings) {
    expr::Expression e = expr::Expression::parse(source);
    auto vars = e.free_variables();
    if (vars.find(expr::Var::X) == vars.end()) {
        warnings.push_back("expression does not use x");
    }
    if (vars.find(expr::Var::Y) == vars.end()) {
        warnings.push_back("expression does not use y");
    }
    return e;
}

quad::Fn2D as_fn(const expr::Expression& e) {
    return [e](double x, double y) { return e.evaluate(x, y); };
}

void print_warnings(const std::vector<std::string>& warnings, bool json_mode,
                    std::ostream& err) {
    if (json_mode) return;
    for (const auto& w : warnings) err << "note: " << w << '\n';
}

ordered_json point_json(const Point& p) {
    return {{"x", p.x}, {"y", p.y}};
}

ordered_json invariance_json(const symmetry::InvarianceReport& rep,
                             double tolerance) {
    return {{"max_deviation", rep.max_deviation},
            {"tolerance", tolerance},
            {"worst_point", point_json(rep.worst_point)},
            {"samples_used", rep.samples_used},
            {"pass", rep.pass}};
}

struct IntegrateFlags {
    std::string expr_text;
    std::string domain;
    std::string method = "direct";
    std::string half_width;
    std::string x_lo, x_hi, y_lo, y_hi;
    QuadFlags quad;
    bool assume_invariant = false;
    std::string max_dev = "1e-7";
    std::int64_t samples = 200;
    std::uint32_t seed = 0;
    bool json = false;
};

struct InvarianceFlags {
    std::string expr_text;
    std::string half_width;
    std::int64_t samples = 200;
    std::string max_dev = "1e-7";
    std::uint32_t seed = 0;
    bool json = false;
};

struct ExampleFlags {
    std::string a = "0";
    std::string b = "0";
    std::string c = "0";
    std::string d = "0";
    QuadFlags quad;
    std::string max_dev = "1e-7";
    bool json = false;
};

struct TilingFlags {
    std::string half_width;
    int grid_resolution = 256;
    std::string margin = "1e-6";
    bool json = false;
};

struct GridFlags {
    std::string expr_text;
    std::string half_width;
    int resolution = 128;
    std::string out_path = "-";
    bool json = false;
};

struct BenchFlags {
    std::string expr_text;
    std::string half_width;
    std::string tol = "1e-8";
    std::string max_dev = "1e-7";
    std::int64_t samples = 200;
    std::uint32_t seed = 0;
    bool assume_invariant = false;
    bool json = false;
};

double parse_half_width(const std::string& text) {
    double h = parse_real("--L", text);
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw UsageError("--L must be finite and > 0");
    }
    return h;
}

// Invariance gate shared by `integrate --method reduced` and `bench`.
// Returns the report; the caller fails with exit 1 when it does not pass.
symmetry::InvarianceReport run_gate(const quad::Fn2D& f, double h,
                                    std::int64_t samples, double tolerance,
                                    std::uint32_t seed) {
    return symmetry::check_invariance(f, h, samples, tolerance, seed);
}

int run_integrate(const IntegrateFlags& fl, std::ostream& out,
                  std::ostream& err) {
    std::vector<std::string> warnings;
    expr::Expression e = load_expression(fl.expr_text, warnings);
    quad::Fn2D f = as_fn(e);
    quad::QuadratureOptions opts = to_options(fl.quad);

    if (fl.method != "direct" && fl.domain != "diamond") {
        throw UsageError("--method " + fl.method +
                         " requires --domain diamond");
    }

    ordered_json env = make_envelope("integrate");
    env["inputs"]["expr"] = fl.expr_text;
    env["inputs"]["domain"] = fl.domain;
    env["inputs"]["method"] = fl.method;
    env["inputs"]["options"] = options_json(opts);

    quad::IntegralResult result;
    if (fl.domain == "rect") {
        for (const auto* bound : {&fl.x_lo, &fl.x_hi, &fl.y_lo, &fl.y_hi}) {
            if (bound->empty()) {
                throw UsageError(
                    "--domain rect requires --x-lo, --x-hi, --y-lo, --y-hi");
            }
        }
        Rectangle rect{parse_real("--x-lo", fl.x_lo),
                       parse_real("--x-hi", fl.x_hi),
                       parse_real("--y-lo", fl.y_lo),
                       parse_real("--y-hi", fl.y_hi)};
        env["inputs"]["x_lo"] = rect.x_lo;
        env["inputs"]["x_hi"] = rect.x_hi;
        env["inputs"]["y_lo"] = rect.y_lo;
        env["inputs"]["y_hi"] = rect.y_hi;
        result = quad::integrate_rectangle(f, rect, opts);
    } else {
        if (fl.half_width.empty()) {
            throw UsageError("--domain " + fl.domain + " requires --L");
        }
        const double h = parse_half_width(fl.half_width);
        env["inputs"]["L"] = h;
        if (fl.domain == "square") {
            result = quad::integrate_rectangle(f, centered_square(h), opts);
        } else if (fl.method == "direct") {
            result = quad::integrate_diamond_direct(f, h, opts);
        } else if (fl.method == "rotated") {
            result = quad::integrate_diamond_rotated(f, h, opts);
        } else {
            const double max_dev = parse_real("--max-dev", fl.max_dev);
            env["inputs"]["assume_invariant"] = fl.assume_invariant;
            env["inputs"]["seed"] = fl.seed;
            env["inputs"]["samples"] = fl.samples;
            env["inputs"]["max_dev"] = max_dev;
            if (!fl.assume_invariant) {
                auto gate =
                    run_gate(f, h, fl.samples, max_dev, fl.seed);
                env["diagnostics"]["invariance"] =
                    invariance_json(gate, max_dev);
                if (!gate.pass) {
                    env["results"]["pass"] = false;
                    print_warnings(warnings, fl.json, err);
                    if (fl.json) {
                        env["diagnostics"]["warnings"] = warnings;
                        emit_json(env, out);
                    } else {
                        err << "integrand is not invariant under the "
                               "diagonal shifts: max deviation "
                            << fmt(gate.max_deviation) << " at ("
                            << fmt(gate.worst_point.x) << ", "
                            << fmt(gate.worst_point.y) << ") exceeds "
                            << fmt(max_dev)
                            << " (use --assume-invariant to override)\n";
                    }
                    return kExitVerificationFailure;
                }
            }
            result = symmetry::reduce_diamond_to_square(f, h, opts);
        }
    }

    env["results"]["value"] = result.value;
    env["diagnostics"]["integral"] = result_json(result);
    env["diagnostics"]["warnings"] = warnings;

    print_warnings(warnings, fl.json, err);
    if (fl.json) {
        emit_json(env, out);
    } else {
        out << "value          = " << fmt(result.value) << '\n'
            << "error_estimate = " << fmt(result.error_estimate) << '\n'
            << "evaluations    = " << result.evaluations << '\n'
            << "method         = " << result.method << '\n';
    }
    return kExitOk;
}

int run_invariance(const InvarianceFlags& fl, std::ostream& out,
                   std::ostream& err) {
    std::vector<std::string> warnings;
    expr::Expression e = load_expression(fl.expr_text, warnings);
    const double h = parse_half_width(fl.half_width);
    const double max_dev = parse_real("--max-dev", fl.max_dev);

    auto rep =
        symmetry::check_invariance(as_fn(e), h, fl.samples, max_dev, fl.seed);

    ordered_json env = make_envelope("invariance");
    env["inputs"] = {{"expr", fl.expr_text}, {"L", h},
                     {"samples", fl.samples}, {"max_dev", max_dev},
                     {"seed", fl.seed}};
    env["results"] = {{"max_deviation", rep.max_deviation},
                      {"pass", rep.pass}};
    env["diagnostics"]["invariance"] = invariance_json(rep, max_dev);
    env["diagnostics"]["warnings"] = warnings;

    print_warnings(warnings, fl.json, err);
    if (fl.json) {
        emit_json(env, out);
    } else {
        out << "max_deviation = " << fmt(rep.max_deviation)
            << "  (tolerance " << fmt(max_dev) << ")\n"
            << "worst_point   = (" << fmt(rep.worst_point.x) << ", "
            << fmt(rep.worst_point.y) << ")\n"
            << "samples_used  = " << rep.samples_used << '\n'
            << (rep.pass ? "PASS" : "FAIL") << '\n';
    }
    return rep.pass ? kExitOk : kExitVerificationFailure;
}

int run_example(const ExampleFlags& fl, std::ostream& out, std::ostream&) {
    example::ExampleParams params;
    params.cos_sum = parse_real("--A", fl.a);
    params.sin_sum = parse_real("--B", fl.b);
    params.cos_diff = parse_real("--C", fl.c);
    params.sin_diff = parse_real("--D", fl.d);
    quad::QuadratureOptions opts = to_options(fl.quad);
    const double max_dev = parse_real("--max-dev", fl.max_dev);

    example::ExampleComparison cmp = example::evaluate_all(params, opts);
    const bool pass = cmp.max_pairwise_rel_dev <= max_dev;

    ordered_json env = make_envelope("example");
    env["inputs"] = {{"A", params.cos_sum}, {"B", params.sin_sum},
                     {"C", params.cos_diff}, {"D", params.sin_diff},
                     {"max_dev", max_dev},
                     {"options", options_json(opts)}};
    env["results"] = {{"values",
                       {{"direct", cmp.direct.value},
                        {"diamond", cmp.diamond.value},
                        {"reduced", cmp.reduced.value},
                        {"closed_form", cmp.closed_form.value}}},
                      {"max_pairwise_rel_dev", cmp.max_pairwise_rel_dev},
                      {"pass", pass}};
    env["diagnostics"]["routes"] = {{"direct", result_json(cmp.direct)},
                                    {"diamond", result_json(cmp.diamond)},
                                    {"reduced", result_json(cmp.reduced)},
                                    {"closed_form",
                                     result_json(cmp.closed_form)}};

    if (fl.json) {
        emit_json(env, out);
    } else {
        out << std::left << std::setw(13) << "route" << std::setw(26)
            << "value" << std::setw(26) << "error_estimate"
            << "evaluations" << '\n';
        for (const auto* r :
             {&cmp.direct, &cmp.diamond, &cmp.reduced, &cmp.closed_form}) {
            out << std::left << std::setw(13) << r->method << std::setw(26)
                << fmt(r->value) << std::setw(26)
                << fmt(r->error_estimate) << r->evaluations << '\n';
        }
        out << "max_pairwise_rel_dev = " << fmt(cmp.max_pairwise_rel_dev)
            << "  (limit " << fmt(max_dev) << ")\n"
            << (pass ? "PASS" : "FAIL") << '\n';
    }
    return pass ? kExitOk : kExitVerificationFailure;
}

int run_tiling(const TilingFlags& fl, std::ostream& out, std::ostream&) {
    const double h = parse_half_width(fl.half_width);
    const double margin = parse_real("--margin", fl.margin);

    symmetry::TilingReport rep =
        symmetry::verify_tiling(h, fl.grid_resolution, margin);

    ordered_json env = make_envelope("tiling");
    env["inputs"] = {{"L", h}, {"grid", fl.grid_resolution},
                     {"margin", margin}};
    env["results"] = {{"violations",
                       static_cast<std::int64_t>(rep.violations.size())},
                      {"pass", rep.pass}};
    ordered_json first = ordered_json::array();
    for (std::size_t i = 0; i < rep.violations.size() && i < 10; ++i) {
        first.push_back(point_json(rep.violations[i]));
    }
    env["diagnostics"] = {{"points_checked", rep.points_checked},
                          {"first_violations", first}};

    if (fl.json) {
        emit_json(env, out);
    } else {
        out << "grid_resolution = " << rep.grid_resolution << '\n'
            << "margin          = " << fmt(rep.margin) << '\n'
            << "points_checked  = " << rep.points_checked << '\n'
            << "violations      = " << rep.violations.size() << '\n';
        for (std::size_t i = 0; i < rep.violations.size() && i < 10; ++i) {
            out << "  violation at (" << fmt(rep.violations[i].x) << ", "
                << fmt(rep.violations[i].y) << ")\n";
        }
        out << (rep.pass ? "PASS" : "FAIL") << '\n';
    }
    return rep.pass ? kExitOk : kExitVerificationFailure;
}

int run_grid(const GridFlags& fl, std::ostream& out, std::ostream& err) {
    std::vector<std::string> warnings;
    expr::Expression e = load_expression(fl.expr_text, warnings);
    const double h = parse_half_width(fl.half_width);
    if (fl.resolution < 2) {
        throw UsageError("--resolution must be >= 2");
    }
    if (fl.json && fl.out_path == "-") {
        throw UsageError("--json requires --out FILE for the CSV rows");
    }

    std::ofstream file;
    std::ostream* dest = &out;
    if (fl.out_path != "-") {
        file.open(fl.out_path, std::ios::binary);
        if (!file) {
            throw UsageError("cannot open '" + fl.out_path +
                             "' for writing");
        }
        dest = &file;
    }

    std::int64_t in_region = 0;
    std::int64_t eval_errors = 0;
    const int n = fl.resolution;
    const double step = 2.0 * h / (n - 1);
    *dest << "x,y,value,in_region\n";
    for (int iy = 0; iy < n; ++iy) {
        const double y = -h + iy * step;
        for (int ix = 0; ix < n; ++ix) {
            const double x = -h + ix * step;
            double value;
            try {
                value = e.evaluate(x, y);
            } catch (const expr::EvalDomainError&) {
                value = std::numeric_limits<double>::quiet_NaN();
                ++eval_errors;
            }
            const bool inside = std::fabs(x) + std::fabs(y) <= h;
            if (inside) ++in_region;
            *dest << fmt(x) << ',' << fmt(y) << ',' << fmt(value) << ','
                  << (inside ? '1' : '0') << '\n';
        }
    }
    dest->flush();
    if (!*dest) {
        throw UsageError("write failed for '" + fl.out_path + "'");
    }

    print_warnings(warnings, fl.json, err);
    if (fl.json) {
        ordered_json env = make_envelope("grid");
        env["inputs"] = {{"expr", fl.expr_text}, {"L", h},
                         {"resolution", fl.resolution},
                         {"out", fl.out_path}};
        env["results"] = {{"rows_written",
                           static_cast<std::int64_t>(n) * n},
                          {"path", fl.out_path}};
        env["diagnostics"] = {{"in_region_count", in_region},
                              {"eval_errors", eval_errors},
                              {"warnings", warnings}};
        emit_json(env, out);
    }
    return kExitOk;
}

int run_bench(const BenchFlags& fl, std::ostream& out, std::ostream& err) {
    std::vector<std::string> warnings;
    expr::Expression e = load_expression(fl.expr_text, warnings);
    quad::Fn2D f = as_fn(e);
    const double h = parse_half_width(fl.half_width);
    const double tol = parse_real("--tol", fl.tol);
    const double max_dev = parse_real("--max-dev", fl.max_dev);

    quad::QuadratureOptions opts;
    opts.abs_tol = tol;
    opts.rel_tol = tol;

    ordered_json env = make_envelope("bench");
    env["inputs"] = {{"expr", fl.expr_text}, {"L", h}, {"tol", tol},
                     {"seed", fl.seed},
                     {"assume_invariant", fl.assume_invariant}};

    if (!fl.assume_invariant) {
        auto gate = run_gate(f, h, fl.samples, max_dev, fl.seed);
        env["diagnostics"]["invariance"] = invariance_json(gate, max_dev);
        if (!gate.pass) {
            print_warnings(warnings, fl.json, err);
            if (fl.json) {
                env["results"]["pass"] = false;
                emit_json(env, out);
            } else {
                err << "integrand is not invariant under the diagonal "
                       "shifts (use --assume-invariant to benchmark "
                       "anyway)\n";
            }
            return kExitVerificationFailure;
        }
    }

    struct Timed {
        const char* name;
        quad::IntegralResult result;
        double wall_ms = 0.0;
        bool converged = true;
    };
    auto timed = [&](const char* name, auto&& call) {
        Timed t;
        t.name = name;
        auto start = std::chrono::steady_clock::now();
        try {
            t.result = call();
        } catch (const quad::NonConvergence& nc) {
            t.result = nc.partial;
            t.converged = false;
        }
        auto stop = std::chrono::steady_clock::now();
        t.wall_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
        return t;
    };

    const Timed runs[3] = {
        timed("direct",
              [&] { return quad::integrate_diamond_direct(f, h, opts); }),
        timed("rotated",
              [&] { return quad::integrate_diamond_rotated(f, h, opts); }),
        timed("reduced",
              [&] { return symmetry::reduce_diamond_to_square(f, h, opts); }),
    };

    // Wall time stays out of the JSON envelope so identical inputs give
    // byte-identical output.
    ordered_json methods = ordered_json::object();
    for (const Timed& t : runs) {
        ordered_json block = result_json(t.result);
        block["converged"] = t.converged;
        methods[t.name] = block;
    }
    env["results"]["methods"] = methods;
    env["diagnostics"]["warnings"] = warnings;

    print_warnings(warnings, fl.json, err);
    if (fl.json) {
        emit_json(env, out);
    } else {
        out << std::left << std::setw(10) << "method" << std::setw(26)
            << "value" << std::setw(26) << "error_estimate" << std::setw(14)
            << "evaluations" << std::setw(12) << "wall_ms" << "converged"
            << '\n';
        for (const Timed& t : runs) {
            std::ostringstream ms;
            ms << std::fixed << std::setprecision(3) << t.wall_ms;
            out << std::left << std::setw(10) << t.name << std::setw(26)
                << fmt(t.result.value) << std::setw(26)
                << fmt(t.result.error_estimate) << std::setw(14)
                << t.result.evaluations << std::setw(12) << ms.str()
                << (t.converged ? "yes" : "no") << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"2D quadrature toolkit: diamond-to-square reduction for "
                 "diagonally shift-invariant integrands"};
    app.require_subcommand(1);

    IntegrateFlags in_fl;
    auto* cmd_integrate = app.add_subcommand(
        "integrate", "integrate an expression over a square, rectangle, or "
                     "diamond");
    cmd_integrate->add_option("--expr", in_fl.expr_text,
                              "integrand in x and y")->required();
    cmd_integrate->add_option("--domain", in_fl.domain,
                              "square | rect | diamond")
        ->required()
        ->check(CLI::IsMember({"square", "rect", "diamond"}));
    cmd_integrate->add_option("--method", in_fl.method,
                              "direct | rotated | reduced (diamond only)")
        ->check(CLI::IsMember({"direct", "rotated", "reduced"}))
        ->capture_default_str();
    cmd_integrate->add_option("--L", in_fl.half_width,
                              "half-width of the square or diamond");
    cmd_integrate->add_option("--x-lo", in_fl.x_lo, "rect lower x bound");
    cmd_integrate->add_option("--x-hi", in_fl.x_hi, "rect upper x bound");
    cmd_integrate->add_option("--y-lo", in_fl.y_lo, "rect lower y bound");
    cmd_integrate->add_option("--y-hi", in_fl.y_hi, "rect upper y bound");
    add_quad_flags(cmd_integrate, in_fl.quad);
    cmd_integrate->add_flag("--assume-invariant", in_fl.assume_invariant,
                            "skip the invariance gate for --method reduced");
    cmd_integrate->add_option("--max-dev", in_fl.max_dev,
                              "invariance gate tolerance")
        ->capture_default_str();
    cmd_integrate->add_option("--samples", in_fl.samples,
                              "invariance gate sample count")
        ->capture_default_str();
    cmd_integrate->add_option("--seed", in_fl.seed,
                              "invariance gate sampling seed")
        ->capture_default_str();
    cmd_integrate->add_flag("--json", in_fl.json, "emit a JSON envelope");

    InvarianceFlags inv_fl;
    auto* cmd_invariance = app.add_subcommand(
        "invariance",
        "check invariance under the four diagonal shifts (+-L, +-L)");
    cmd_invariance->add_option("--expr", inv_fl.expr_text,
                               "expression in x and y")->required();
    cmd_invariance->add_option("--L", inv_fl.half_width, "shift half-width")
        ->required();
    cmd_invariance->add_option("--samples", inv_fl.samples, "sample count")
        ->capture_default_str();
    cmd_invariance->add_option("--max-dev", inv_fl.max_dev,
                               "maximum allowed relative deviation")
        ->capture_default_str();
    cmd_invariance->add_option("--seed", inv_fl.seed, "sampling seed")
        ->capture_default_str();
    cmd_invariance->add_flag("--json", inv_fl.json, "emit a JSON envelope");

    ExampleFlags ex_fl;
    auto* cmd_example = app.add_subcommand(
        "example",
        "evaluate exp(A*cos(u+v) + B*sin(u+v) + C*cos(u-v) + D*sin(u-v)) "
        "over [-pi,pi]^2 by four routes and compare");
    cmd_example->add_option("--A", ex_fl.a, "cos(u+v) coefficient")
        ->capture_default_str();
    cmd_example->add_option("--B", ex_fl.b, "sin(u+v) coefficient")
        ->capture_default_str();
    cmd_example->add_option("--C", ex_fl.c, "cos(u-v) coefficient")
        ->capture_default_str();
    cmd_example->add_option("--D", ex_fl.d, "sin(u-v) coefficient")
        ->capture_default_str();
    add_quad_flags(cmd_example, ex_fl.quad);
    cmd_example->add_option("--max-dev", ex_fl.max_dev,
                            "maximum allowed pairwise relative deviation")
        ->capture_default_str();
    cmd_example->add_flag("--json", ex_fl.json, "emit a JSON envelope");

    TilingFlags tile_fl;
    auto* cmd_tiling = app.add_subcommand(
        "tiling", "verify that the shifted quadrant triangles tile the "
                  "square minus the diamond");
    cmd_tiling->add_option("--L", tile_fl.half_width, "half-width")
        ->required();
    cmd_tiling->add_option("--grid", tile_fl.grid_resolution,
                           "grid resolution (>= 8)")
        ->capture_default_str();
    cmd_tiling->add_option("--margin", tile_fl.margin,
                           "skip margin around boundaries and axes")
        ->capture_default_str();
    cmd_tiling->add_flag("--json", tile_fl.json, "emit a JSON envelope");

    GridFlags grid_fl;
    auto* cmd_grid = app.add_subcommand(
        "grid", "sample an expression on an endpoint-inclusive grid over "
                "[-L,L]^2 as CSV (in_region marks the diamond)");
    cmd_grid->add_option("--expr", grid_fl.expr_text,
                         "expression in x and y")->required();
    cmd_grid->add_option("--L", grid_fl.half_width, "half-width")->required();
    cmd_grid->add_option("--resolution", grid_fl.resolution,
                         "points per axis (>= 2)")
        ->capture_default_str();
    cmd_grid->add_option("--out", grid_fl.out_path,
                         "output path, - for stdout")
        ->capture_default_str();
    cmd_grid->add_flag("--json", grid_fl.json,
                       "emit a JSON envelope (requires --out FILE)");

    BenchFlags bench_fl;
    auto* cmd_bench = app.add_subcommand(
        "bench", "compare the three diamond integration methods");
    cmd_bench->add_option("--expr", bench_fl.expr_text,
                          "integrand in x and y")->required();
    cmd_bench->add_option("--L", bench_fl.half_width, "half-width")
        ->required();
    cmd_bench->add_option("--tol", bench_fl.tol, "target tolerance")
        ->capture_default_str();
    cmd_bench->add_option("--max-dev", bench_fl.max_dev,
                          "invariance gate tolerance")
        ->capture_default_str();
    cmd_bench->add_option("--samples", bench_fl.samples,
                          "invariance gate sample count")
        ->capture_default_str();
    cmd_bench->add_option("--seed", bench_fl.seed,
                          "invariance gate sampling seed")
        ->capture_default_str();
    cmd_bench->add_flag("--assume-invariant", bench_fl.assume_invariant,
                        "skip the invariance gate");
    cmd_bench->add_flag("--json", bench_fl.json, "emit a JSON envelope");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (cmd_integrate->parsed()) return run_integrate(in_fl, out, err);
        if (cmd_invariance->parsed()) return run_invariance(inv_fl, out, err);
        if (cmd_example->parsed()) return run_example(ex_fl, out, err);
        if (cmd_tiling->parsed()) return run_tiling(tile_fl, out, err);
        if (cmd_grid->parsed()) return run_grid(grid_fl, out, err);
        if (cmd_bench->parsed()) return run_bench(bench_fl, out, err);
        err << "error: no command given\n";
        return kExitUsage;
    } catch (const expr::ParseError& e) {
        err << "parse error at offset " << e.offset << ": " << e.what()
            << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const quad::NonConvergence& e) {
        err << "did not converge: " << e.what() << '\n'
            << "partial value " << fmt(e.partial.value) << " with error "
            << fmt(e.partial.error_estimate) << " after "
            << e.partial.evaluations << " evaluations\n";
        return kExitNonConvergence;
    } catch (const specfun::ConvergenceError& e) {
        err << "did not converge: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const expr::EvalDomainError& e) {
        err << "evaluation error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace dquad::cli
