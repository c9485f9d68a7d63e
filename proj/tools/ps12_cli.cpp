// Command-line interface for the 12-split simplex spline library.
//
// Subcommands: eval, verify, quasi, mesh-dim, convergence.
// Exit codes: 0 success, 1 quantitative failure, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "ps12/geometry.hpp"
#include "ps12/macro_mesh.hpp"
#include "ps12/s_basis.hpp"
#include "ps12/simplex_spline.hpp"
#include "ps12/suites.hpp"

namespace {

using json = nlohmann::json;
using namespace ps12;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_reals(const std::string& csv, size_t expect,
                                const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw UsageError(std::string("bad number in ") + what + ": '" + tok + "'");
        }
    }
    if (expect != 0 && out.size() != expect)
        throw UsageError(std::string(what) + ": expected " + std::to_string(expect) +
                         " comma-separated numbers");
    return out;
}

Triangle parse_triangle(const std::string& spec) {
    const auto v = parse_reals(spec, 6, "--triangle");
    try {
        return Triangle({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]});
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--triangle: ") + e.what());
    }
}

// ------------------------------------------------------------ functions --

// poly:EXPR with EXPR a sum of terms [coef][x[p]][y[q]], e.g. "x3+y3",
// "x2-2xy+y2", "0.5x2y".
std::function<double(Point2)> parse_poly(const std::string& expr) {
    struct Term {
        double coef;
        int px, py;
    };
    std::vector<Term> terms;
    size_t i = 0;
    while (i < expr.size()) {
        double sign = 1.0;
        while (i < expr.size() && (expr[i] == '+' || expr[i] == '-')) {
            if (expr[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= expr.size()) throw UsageError("poly: trailing sign in '" + expr + "'");
        double coef = 1.0;
        size_t start = i;
        while (i < expr.size() &&
               (std::isdigit(static_cast<unsigned char>(expr[i])) || expr[i] == '.'))
            ++i;
        if (i > start) coef = std::stod(expr.substr(start, i - start));
        int px = 0, py = 0;
        auto read_power = [&](char var, int& p) {
            if (i < expr.size() && expr[i] == var) {
                ++i;
                p = 1;
                size_t s = i;
                while (i < expr.size() && std::isdigit(static_cast<unsigned char>(expr[i])))
                    ++i;
                if (i > s) p = std::stoi(expr.substr(s, i - s));
            }
        };
        read_power('x', px);
        read_power('y', py);
        if (i == start && px == 0 && py == 0)
            throw UsageError("poly: cannot parse term at '" + expr.substr(i) + "'");
        terms.push_back({sign * coef, px, py});
    }
    if (terms.empty()) throw UsageError("poly: empty expression");
    return [terms](Point2 p) {
        double total = 0.0;
        for (const auto& t : terms)
            total += t.coef * std::pow(p.x, t.px) * std::pow(p.y, t.py);
        return total;
    };
}

std::function<double(Point2)> parse_function(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw UsageError("--fn: expected const:V, poly:EXPR or table:PATH");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "const") {
        const double v = parse_reals(rest, 1, "--fn const")[0];
        return [v](Point2) { return v; };
    }
    if (kind == "poly") return parse_poly(rest);
    if (kind == "table") {
        auto table = std::make_shared<std::vector<std::pair<Point2, double>>>();
        std::ifstream in(rest);
        if (!in) throw UsageError("--fn table: cannot open " + rest);
        double x, y, v;
        while (in >> x >> y >> v) table->push_back({{x, y}, v});
        if (table->empty()) throw UsageError("--fn table: no rows in " + rest);
        return [table, rest](Point2 p) {
            for (const auto& [q, v] : *table)
                if (distance(p, q) <= 1e-9) return v;
            throw UsageError("--fn table: " + rest + " has no value at (" +
                             fmt(p.x) + ", " + fmt(p.y) + ")");
        };
    }
    throw UsageError("--fn: unknown kind '" + kind + "'");
}

// --------------------------------------------------------------- output --

struct Output {
    std::string format = "csv";  // csv | json
    std::string path;            // empty = stdout

    void write_table(const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows,
                     const json& extra = json::object()) const {
        std::ostringstream body;
        if (format == "json") {
            json doc = extra;
            json jrows = json::array();
            for (const auto& row : rows) {
                json r = json::object();
                for (size_t c = 0; c < columns.size(); ++c) r[columns[c]] = row[c];
                jrows.push_back(std::move(r));
            }
            doc["rows"] = std::move(jrows);
            body << doc.dump(2) << "\n";
        } else {
            for (size_t c = 0; c < columns.size(); ++c)
                body << columns[c] << (c + 1 < columns.size() ? "," : "\n");
            for (const auto& row : rows) {
                for (size_t c = 0; c < row.size(); ++c)
                    body << row[c] << (c + 1 < row.size() ? "," : "\n");
            }
        }
        if (path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(path);
            if (!out) throw UsageError("cannot open output file: " + path);
            out << body.str();
        }
    }
};

// ------------------------------------------------------------------ eval --

int cmd_eval(const std::string& triangle_spec, const std::string& basis_label,
             const std::string& mult_digits, std::vector<std::string> point_specs,
             const std::string& points_file, int grid, const Output& out) {
    const Triangle tri = parse_triangle(triangle_spec);
    const PS12Frame frame = make_frame(tri);

    if (basis_label.empty() == mult_digits.empty())
        throw UsageError("eval: pass exactly one of --basis or --mult");

    std::function<double(Point2)> value;
    if (!basis_label.empty()) {
        const int idx = basis_index(basis_label);
        if (idx < 0) throw UsageError("eval: unknown basis label '" + basis_label + "'");
        auto basis = std::make_shared<SBasis>(frame);
        value = [basis, idx](Point2 x) { return basis->eval_one(idx, x); };
    } else {
        MultiplicityVector mv;
        try {
            mv = MultiplicityVector::parse(mult_digits);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("eval: --mult: ") + e.what());
        }
        if (mv.total() < 3) throw UsageError("eval: --mult needs at least 3 knots");
        auto k = std::make_shared<KnotMultiset>(mv.knots(frame));
        const EvalContext ctx =
            EvalContext::for_frame(frame, HalfOpenMode::interior_limit);
        value = [k, ctx](Point2 x) { return eval_q(*k, x, ctx); };
    }

    std::vector<Point2> points;
    for (const std::string& spec : point_specs) {
        const auto v = parse_reals(spec, 2, "--point");
        points.push_back({v[0], v[1]});
    }
    if (!points_file.empty()) {
        std::ifstream in(points_file);
        if (!in) throw UsageError("eval: cannot open points file: " + points_file);
        double x, y;
        while (in >> x >> y) points.push_back({x, y});
        if (!in.eof()) throw UsageError("eval: malformed points file: " + points_file);
    }
    if (grid > 0) {
        if (grid < 2) throw UsageError("eval: --grid needs N >= 2");
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double b1 = static_cast<double>(i) / (grid - 1);
                const double b2 = static_cast<double>(j) / (grid - 1);
                const double b3 = 1.0 - b1 - b2;
                if (b3 < -1e-12) continue;
                points.push_back(combine(tri.corner(0), tri.corner(1), tri.corner(2),
                                         Bary3(b1, b2, std::max(b3, 0.0))));
            }
    }
    if (points.empty())
        throw UsageError("eval: no evaluation points (--point, --points or --grid)");

    std::vector<std::vector<std::string>> rows;
    rows.reserve(points.size());
    for (const Point2& p : points)
        rows.push_back({fmt(p.x), fmt(p.y), fmt(value(p))});
    out.write_table({"x", "y", "value"}, rows);
    return kExitPass;
}

// ---------------------------------------------------------------- verify --

int cmd_verify(const std::string& suite, const SuiteConfig& config,
               const Output& out) {
    std::vector<CheckResult> results;
    try {
        results = run_suite(suite, config);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::vector<std::vector<std::string>> rows;
    for (const CheckResult& r : results)
        rows.push_back({r.name, fmt(r.max_error), fmt(r.tolerance),
                        r.pass ? "true" : "false"});
    json extra;
    extra["suite"] = suite;
    extra["pass"] = all_pass(results);
    out.write_table({"check", "max_error", "tolerance", "pass"}, rows, extra);

    for (const CheckResult& r : results)
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  max_error="
                  << fmt(r.max_error) << " tol=" << fmt(r.tolerance)
                  << (r.note.empty() ? "" : "  (" + r.note + ")") << "\n";
    return all_pass(results) ? kExitPass : kExitFail;
}

// ----------------------------------------------------------------- quasi --

int cmd_quasi(const std::string& fn_spec, const std::string& triangle_spec,
              bool check, int grid, const Output& out) {
    const Triangle tri = parse_triangle(triangle_spec);
    const PS12Frame frame = make_frame(tri);
    const auto f = parse_function(fn_spec);
    const SplineFunction s = quasi_interpolant(frame, f);

    std::vector<std::vector<std::string>> rows;
    for (int j = 0; j < 12; ++j)
        rows.push_back({std::to_string(j), s_basis_functions()[j].label(),
                        fmt(s.coefficients[j])});

    json extra;
    if (check) {
        const int n = grid > 1 ? grid : 40;
        double max_err = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) {
                const double b1 = static_cast<double>(i) / n;
                const double b2 = static_cast<double>(j) / n;
                const Point2 x = combine(tri.corner(0), tri.corner(1), tri.corner(2),
                                         Bary3(b1, b2, 1.0 - b1 - b2));
                max_err = std::max(max_err, std::abs(s.eval(x) - f(x)));
            }
        extra["max_reproduction_error"] = max_err;
        std::cerr << "max_reproduction_error=" << fmt(max_err) << "\n";
    }
    out.write_table({"index", "label", "coefficient"}, rows, extra);
    return kExitPass;
}

// -------------------------------------------------------------- mesh-dim --

int cmd_mesh_dim(const std::string& path, const Output& out) {
    const Triangulation mesh = Triangulation::from_file(path);
    const auto space = assemble_c1_constraints(mesh);

    const bool match = space->dimension() == space->formula_dimension();
    const bool conditioned = space->gap_ok();
    std::vector<std::vector<std::string>> rows{
        {std::to_string(mesh.num_vertices()), std::to_string(mesh.num_edges()),
         std::to_string(mesh.num_triangles()), std::to_string(space->dimension()),
         std::to_string(space->formula_dimension()), std::to_string(space->rank),
         fmt(space->spectral_gap), (match && conditioned) ? "true" : "false"}};
    json extra;
    extra["mesh"] = path;
    out.write_table({"nv", "ne", "nt", "computed_dimension", "formula_dimension",
                     "rank", "spectral_gap", "pass"},
                    rows, extra);

    std::cerr << "dimension " << space->dimension() << " vs formula 3V+E = "
              << space->formula_dimension() << ", rank " << space->rank
              << ", gap " << fmt(space->spectral_gap) << "\n";
    if (!conditioned) {
        std::cerr << "rank computation ill-conditioned (gap < 10)\n";
        return kExitFail;
    }
    return match ? kExitPass : kExitFail;
}

// ----------------------------------------------------------- convergence --

Triangulation builtin_square_mesh() {
    return Triangulation::build(
        {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}},
        {{0, 1, 2}, {0, 2, 3}});
}

int cmd_convergence(const std::string& fn_spec, const std::string& mesh_path,
                    int levels, double slope_min, const Output& out) {
    if (levels < 3) throw UsageError("convergence: --levels must be >= 3");
    const Triangulation mesh = mesh_path.empty() ? builtin_square_mesh()
                                                 : Triangulation::from_file(mesh_path);
    const auto f = parse_function(fn_spec);
    const ConvergenceResult res = h2_convergence(f, mesh, levels);

    std::vector<std::vector<std::string>> rows;
    for (const ConvergenceRow& r : res.rows)
        rows.push_back({std::to_string(r.level), fmt(r.h), fmt(r.distance)});
    json extra;
    extra["slope"] = res.slope;
    extra["slope_defined"] = res.slope_defined;
    extra["exact_reproduction"] = res.exact_reproduction;
    out.write_table({"level", "h", "distance"}, rows, extra);

    if (res.exact_reproduction) {
        std::cerr << "exact reproduction; slope undefined\n";
        return kExitPass;
    }
    if (!res.slope_defined) {
        std::cerr << "distances at rounding noise; slope undefined\n";
        return kExitPass;
    }
    std::cerr << "slope=" << fmt(res.slope) << " (threshold " << fmt(slope_min)
              << ")\n";
    return res.slope >= slope_min ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"C1 quadratic simplex splines on the Powell-Sabin 12-split"};
    app.require_subcommand(1);

    std::string triangle_spec = "0,0,1,0,0,1";
    Output out;
    SuiteConfig config;

    auto add_output_flags = [&](CLI::App* cmd) {
        cmd->add_option("--format", out.format, "Output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out.path, "Output path (default: stdout)");
    };

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a basis function or Q[K]");
    std::string basis_label, mult_digits, points_file;
    std::vector<std::string> point_specs;
    int grid = 0;
    eval_cmd->add_option("--triangle", triangle_spec, "x1,y1,x2,y2,x3,y3");
    eval_cmd->add_option("--basis", basis_label, "Basis label, e.g. corner1, edge14");
    eval_cmd->add_option("--mult", mult_digits, "Multiplicity digits (6 or 10)");
    eval_cmd->add_option("--point", point_specs, "Evaluation point x,y (repeatable)");
    eval_cmd->add_option("--points", points_file, "File of x y rows");
    eval_cmd->add_option("--grid", grid, "N x N barycentric lattice clipped to the triangle");
    add_output_flags(eval_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    verify_cmd->add_option("suite", suite, "pou|marsden|boundary|smoothness|independence|stability|oracle|insertion|derivative")
        ->required();
    verify_cmd->add_option("--seed", config.seed, "Random seed");
    verify_cmd->add_option("--tol", config.tol_override, "Tolerance override");
    verify_cmd->add_option("--h", config.fd_step, "Finite-difference step");
    verify_cmd->add_option("--n", config.oracle_samples, "Monte Carlo samples");
    add_output_flags(verify_cmd);

    // quasi
    auto* quasi_cmd = app.add_subcommand("quasi", "Quasi-interpolate a function");
    std::string fn_spec;
    bool check = false;
    quasi_cmd->add_option("--fn", fn_spec, "const:V | poly:EXPR | table:PATH")->required();
    quasi_cmd->add_option("--triangle", triangle_spec, "x1,y1,x2,y2,x3,y3");
    quasi_cmd->add_flag("--check", check, "Report max sampled reproduction error");
    quasi_cmd->add_option("--grid", grid, "Sampling density for --check");
    add_output_flags(quasi_cmd);

    // mesh-dim
    auto* mesh_cmd = app.add_subcommand("mesh-dim", "Verify the 3|V|+|E| dimension formula");
    std::string mesh_path;
    mesh_cmd->add_option("mesh", mesh_path, "Mesh file")->required();
    add_output_flags(mesh_cmd);

    // convergence
    auto* conv_cmd = app.add_subcommand("convergence", "Control-surface distance under refinement");
    int levels = 4;
    double slope_min = 1.8;
    conv_cmd->add_option("--fn", fn_spec, "const:V | poly:EXPR | table:PATH")->required();
    conv_cmd->add_option("--mesh", mesh_path, "Base mesh file (default: unit square)");
    conv_cmd->add_option("--levels", levels, "Refinement levels (>= 3)");
    conv_cmd->add_option("--slope-min", slope_min, "Required fitted slope");
    add_output_flags(conv_cmd);

    try {
        app.parse(argc, argv);
        if (eval_cmd->parsed())
            return cmd_eval(triangle_spec, basis_label, mult_digits, point_specs,
                            points_file, grid, out);
        if (verify_cmd->parsed()) return cmd_verify(suite, config, out);
        if (quasi_cmd->parsed())
            return cmd_quasi(fn_spec, triangle_spec, check, grid, out);
        if (mesh_cmd->parsed()) return cmd_mesh_dim(mesh_path, out);
        if (conv_cmd->parsed())
            return cmd_convergence(fn_spec, mesh_path, levels, slope_min, out);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
