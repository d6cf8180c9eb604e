#include "bsc/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bsc/analysis.hpp"
#include "bsc/error.hpp"
#include "bsc/exact.hpp"
#include "bsc/experiments.hpp"
#include "bsc/io.hpp"

namespace bsc {

namespace {

constexpr const char* domain_note = "domain: unit square [0,1]^2 (assumed; the ring is centred inside it)";

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::out_of_domain:
    case ErrorKind::mismatched_spaces:
    case ErrorKind::unsupported_width:
    case ErrorKind::no_valid_configuration: return exit_invalid_config;
    case ErrorKind::dimension_mismatch:
    case ErrorKind::too_small_space:
    case ErrorKind::size_cap_exceeded:
    case ErrorKind::rank_deficient: return exit_dimension;
    case ErrorKind::io_error: return exit_io;
    case ErrorKind::singular_system:
    case ErrorKind::solver_failure: return exit_internal;
    }
    return exit_internal;
}

/// Writes to --out when given, otherwise to the command's stdout.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream os(path);
    if (!os || !(os << text)) throw Error(ErrorKind::io_error, "cannot write " + path);
}

std::vector<int> parse_degrees(const std::string& s) {
    if (s == "all") return {1, 2, 3, 4};
    try {
        std::size_t used = 0;
        const int p = std::stoi(s, &used);
        if (used == s.size()) return {p};
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::invalid_argument, "degree must be an integer or 'all'");
}

int single_degree(const std::string& s) {
    const auto d = parse_degrees(s);
    if (d.size() != 1) throw Error(ErrorKind::invalid_argument, "this command takes a single degree");
    return d.front();
}

void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (fmt == a) return;
    throw Error(ErrorKind::invalid_argument, "unsupported --format '" + fmt + "'");
}

std::string join_rationals(const std::vector<Rational>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s;
}

std::string join_decimals(std::span<const double> v) {
    std::ostringstream os;
    os << std::setprecision(15);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    return os.str();
}

void print_block(std::ostringstream& os, const char* name, const RationalMatrix& M) {
    os << name << " (" << M.size() << "x" << (M.empty() ? 0 : M.front().size()) << "):\n";
    for (const auto& row : M) os << "  " << join_rationals(row) << '\n';
}

std::string show_operator(int p, int r, int breakpoints, const std::string& format) {
    const SubdivisionMatrix A = build_subdivision_matrix(p, breakpoints);
    const LocalityParameters P = lookup_parameters(p, r);
    const CoarseningOperator op = assemble_left_inverse(A, P);
    if (format == "json") return operator_to_json(op).dump(2) + "\n";

    std::ostringstream os;
    os << "p=" << P.p << " r=" << P.r << " k=" << P.k << " q=" << P.q << " t=" << P.t << " l=" << P.l
       << " ell=" << P.ell << " z=" << P.z << " n_coarse=" << op.n_coarse() << " n_fine=" << op.n_fine() << '\n';
    os << "omega (decimal): " << join_decimals(op.omega()) << '\n';
    const auto omega_q = rationalize(op.omega());
    os << "omega (rational): " << join_rationals(omega_q) << '\n';
    os << "omega (scaled): " << format_scaled(scale_to_integers(compute_omega_exact(P))) << '\n';
    os << "omega exact check: " << (verify_omega_exact(P, omega_q) ? "ok" : "FAILED") << '\n';

    const CornerBlocks corners = build_corner_blocks(A, P);
    const auto l = static_cast<int>(corners.bottom_right.cols());
    std::vector<int> top_idx, bottom_idx;
    for (int i = 0; i < op.top_rows(); ++i) top_idx.push_back(i);
    for (int i = 0; i < op.bottom_rows(); ++i) bottom_idx.push_back(l - op.bottom_rows() + i);
    const RationalMatrix top = pseudoinverse_rows_exact(to_rational(corners.top_left), top_idx);
    const RationalMatrix bottom = pseudoinverse_rows_exact(to_rational(corners.bottom_right), bottom_idx);
    print_block(os, "B_tl", top);
    print_block(os, "B_br", bottom);
    const double dev = std::max(max_deviation(top, op.top_block()), max_deviation(bottom, op.bottom_block()));
    os << "corner deviation from exact: " << dev << '\n';
    const bool cf_ok = verify_left_inverse_rows(op.top_block(), corners.top_left, 0) &&
                       verify_left_inverse_rows(op.bottom_block(), corners.bottom_right, l - op.bottom_rows());
    os << "corner continued-fraction check: " << (cf_ok ? "ok" : "denominators beyond the 1e7 cap") << '\n';
    return os.str();
}

std::string norm_table_text(const std::vector<NormReport>& reports, const std::string& format) {
    if (format == "json") return norm_reports_json(reports).dump(2) + "\n";
    return norm_reports_csv(reports);
}

CoefficientGrid read_input_grid(const std::string& path, int dims) {
    if (path.empty()) throw Error(ErrorKind::invalid_argument, "--in is required");
    CoefficientGrid g = load_grid(path, dims >= 3);
    if (dims == 1) {
        if (g.extent(1) != 1) throw Error(ErrorKind::dimension_mismatch, "a 1D grid is a single CSV column");
        return CoefficientGrid({g.extent(0)}, std::vector<double>(g.data().begin(), g.data().end()));
    }
    if (static_cast<int>(g.dimensions()) != dims)
        throw Error(ErrorKind::dimension_mismatch, "grid has " + std::to_string(g.dimensions()) + " directions, expected " + std::to_string(dims));
    return g;
}

void write_output_grid(const std::string& path, std::ostream& out, const CoefficientGrid& g) {
    if (g.dimensions() >= 3) {
        if (path.empty()) throw Error(ErrorKind::invalid_argument, "grids with three or more directions need --out");
        save_grid(path, g, true);
        return;
    }
    std::ostringstream os;
    write_grid_csv(os, g);
    emit(path, out, os.str());
}

/// Breakpoints of the space whose dimension is n.
int breakpoints_for_dim(int n, int p) {
    const int N = n - p + 1;
    if (N < 2) throw Error(ErrorKind::dimension_mismatch, "grid extent " + std::to_string(n) + " is too small for degree " + std::to_string(p));
    return N;
}

Function2D spline_function(const CoefficientGrid& C, const TensorSpace& space) {
    return [C, space](double x, double y) {
        const auto bx = eval_basis(space.direction(0), x), by = eval_basis(space.direction(1), y);
        double s = 0.0;
        for (std::size_t b = 0; b < by.values.size(); ++b)
            for (std::size_t a = 0; a < bx.values.size(); ++a)
                s += bx.values[a] * by.values[b] * C.at(bx.first_active + static_cast<int>(a), by.first_active + static_cast<int>(b));
        return s;
    };
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"B-spline subdivision and local least-squares coarsening"};
    app.require_subcommand(1);

    std::string degree = "2", out_path, in_path, format, function = "arctan-ring", which = "B";
    std::vector<int> widths;
    int width = 0, elements = 0, levels = 4, dims = 0, threads = 1;
    std::uint64_t seed = SpectralOptions{}.seed;
    std::vector<double> region;
    std::string contour_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "Output file (stdout when omitted)");
        sub->add_option("--parallel", threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* show = app.add_subcommand("show-operator", "Print parameters, omega and corner blocks");
    show->add_option("--degree", degree)->required();
    show->add_option("--width", width)->required();
    show->add_option("--elements", elements, "Coarse breakpoints (default 25)");
    show->add_option("--format", format, "text or json");
    add_common(show);

    auto* norms = app.add_subcommand("norm-table", "Stability table for tabulated widths");
    norms->add_option("--degree", degree, "Degree or 'all'");
    norms->add_option("--dims", dims, "1 or 2");
    norms->add_option("--elements", elements, "Coarse breakpoints per direction (default 40 in 1D, 15 in 2D)");
    norms->add_option("--format", format, "csv or json");
    norms->add_option("--seed", seed, "Seed of the power-iteration start vector");
    add_common(norms);

    auto* curve = app.add_subcommand("coarsen-curve", "L2 error per level under repeated coarsening");
    curve->add_option("--degree", degree);
    curve->add_option("--widths", widths, "Widths (default: all tabulated)")->delimiter(',');
    curve->add_option("--elements", elements, "Fine elements per direction (default 128)");
    curve->add_option("--levels", levels, "Coarsening steps");
    curve->add_option("--function", function, "arctan-ring or custom-csv");
    curve->add_option("--in", in_path, "Fine coefficient grid for custom-csv");
    curve->add_option("--format", format, "csv or json");
    add_common(curve);

    auto* local = app.add_subcommand("localized", "Single coarsening of a localized spline");
    local->add_option("--degree", degree);
    local->add_option("--widths", widths, "Widths (default 6,8)")->delimiter(',');
    local->add_option("--elements", elements, "Fine elements per direction (default 40)");
    local->add_option("--region", region, "center_i,center_j,radius of the unit-coefficient disk")->delimiter(',')->expected(3);
    local->add_option("--contours", contour_dir, "Directory for sampled spline grids");
    local->add_option("--format", format, "csv or json");
    add_common(local);

    auto* coarsen = app.add_subcommand("coarsen", "Coarsen a coefficient grid once");
    auto* refine = app.add_subcommand("refine", "Refine a coefficient grid once");
    for (auto* sub : {coarsen, refine}) {
        sub->add_option("--in", in_path)->required();
        sub->add_option("--degree", degree)->required();
        sub->add_option("--dims", dims, "Directions (1, 2 via CSV; 3+ via binary)")->required();
        add_common(sub);
    }
    coarsen->add_option("--width", width)->required();

    auto* exportm = app.add_subcommand("export-matrix", "Export A or B");
    exportm->add_option("--degree", degree)->required();
    exportm->add_option("--width", width);
    exportm->add_option("--elements", elements, "Coarse breakpoints")->required();
    exportm->add_option("--which", which, "A or B");
    exportm->add_option("--format", format, "mtx, csv or json (operator, B only)");
    add_common(exportm);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    if (!argv_rev.empty()) argv_rev.pop_back();
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid_config;
    }

    try {
        if (*show) {
            if (format.empty()) format = "text";
            require_format(format, {"text", "json"});
            emit(out_path, out, show_operator(single_degree(degree), width, elements ? elements : 25, format));
        } else if (*norms) {
            if (dims == 0) dims = 1;
            if (format.empty()) format = "csv";
            require_format(format, {"csv", "json"});
            SpectralOptions opts;
            opts.seed = seed;
            const auto degrees = parse_degrees(degree);
            const int N = elements ? elements : (dims == 2 ? 15 : 40);
            emit(out_path, out, norm_table_text(norm_table(degrees, dims, N, threads, opts), format));
        } else if (*curve) {
            if (format.empty()) format = "csv";
            require_format(format, {"csv", "json"});
            CurveConfig cfg;
            cfg.p = single_degree(degree);
            cfg.widths = widths.empty() ? tabulated_widths(cfg.p) : widths;
            cfg.levels = levels;
            cfg.threads = threads;
            std::string meta = domain_note;
            if (function == "arctan-ring") {
                cfg.fine_elements = elements ? elements : 128;
            } else if (function == "custom-csv") {
                const CoefficientGrid C = read_input_grid(in_path, 2);
                const TensorSpace space({SplineSpace(0.0, 1.0, breakpoints_for_dim(C.extent(0), cfg.p), cfg.p),
                                         SplineSpace(0.0, 1.0, breakpoints_for_dim(C.extent(1), cfg.p), cfg.p)});
                if (C.extent(0) != C.extent(1)) throw Error(ErrorKind::dimension_mismatch, "custom grids must be square");
                cfg.fine_elements = space.direction(0).knots().element_count();
                cfg.f = spline_function(C, space);
                meta = "domain: unit square [0,1]^2; target: spline from " + in_path;
            } else {
                throw Error(ErrorKind::invalid_argument, "unknown --function '" + function + "'");
            }
            const auto curves = coarsening_curves(cfg);
            if (format == "json") {
                nlohmann::json j = {{"metadata", {{"domain", "[0,1]^2"}, {"note", meta}, {"function", function}}},
                                    {"curves", error_curves_json(curves)}};
                emit(out_path, out, j.dump(2) + "\n");
            } else {
                emit(out_path, out, "# " + meta + "\n" + error_curves_csv(curves));
            }
        } else if (*local) {
            if (format.empty()) format = "csv";
            require_format(format, {"csv", "json"});
            LocalizedConfig cfg;
            cfg.p = single_degree(degree);
            if (!widths.empty()) cfg.widths = widths;
            if (elements) cfg.fine_elements = elements;
            if (!region.empty()) cfg.region = {region[0], region[1], region[2]};
            const auto results = localized_experiment(cfg);
            if (!contour_dir.empty()) {
                const TensorSpace fine = TensorSpace({SplineSpace(0.0, 1.0, cfg.fine_elements + 1, cfg.p),
                                                      SplineSpace(0.0, 1.0, cfg.fine_elements + 1, cfg.p)});
                const TensorSpace coarse = TensorSpace({SplineSpace(0.0, 1.0, cfg.fine_elements / 2 + 1, cfg.p),
                                                        SplineSpace(0.0, 1.0, cfg.fine_elements / 2 + 1, cfg.p)});
                save_grid(std::filesystem::path(contour_dir) / "input.csv",
                          sample_spline(localized_coefficients(fine.direction(0).dim(), cfg.region), fine), false);
                for (const auto& r : results)
                    save_grid(std::filesystem::path(contour_dir) / (r.method + ".csv"), sample_spline(r.coarse, coarse), false);
            }
            if (format == "json") {
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& r : results)
                    rows.push_back({{"method", r.method}, {"width", r.width}, {"modified_fraction", r.modified_fraction},
                                    {"linf_relative", r.linf_relative}});
                emit(out_path, out, rows.dump(2) + "\n");
            } else {
                std::ostringstream os;
                os << "method,width,modified_fraction,linf_relative\n";
                for (const auto& r : results)
                    os << r.method << ',' << r.width << ',' << format_double(r.modified_fraction) << ','
                       << format_double(r.linf_relative) << '\n';
                emit(out_path, out, os.str());
            }
        } else if (*coarsen || *refine) {
            const int p = single_degree(degree);
            if (dims < 1) throw Error(ErrorKind::invalid_argument, "--dims must be at least 1");
            const CoefficientGrid in = read_input_grid(in_path, dims);
            CoefficientGrid result = in;
            if (*coarsen) {
                std::vector<CoarseningOperator> factors;
                for (int n : in.shape()) {
                    const int N = breakpoints_for_dim(n, p);
                    if (N % 2 == 0) throw Error(ErrorKind::dimension_mismatch, "extent " + std::to_string(n) + " is not a dyadic refinement");
                    factors.push_back(build_coarsening_operator(p, width, (N + 1) / 2));
                }
                result = coarsen_grid(in, TensorCoarseningOperator(std::move(factors)), threads);
            } else {
                std::vector<SubdivisionMatrix> As;
                for (int n : in.shape()) As.push_back(build_subdivision_matrix(p, breakpoints_for_dim(n, p)));
                result = refine_grid(in, As, threads);
            }
            write_output_grid(out_path, out, result);
        } else if (*exportm) {
            const int p = single_degree(degree);
            if (format.empty()) format = "mtx";
            require_format(format, {"mtx", "csv", "json"});
            const SubdivisionMatrix A = build_subdivision_matrix(p, elements);
            std::ostringstream os;
            if (which == "A") {
                if (format == "json") throw Error(ErrorKind::invalid_argument, "JSON export is for coarsening operators");
                format == "mtx" ? write_matrix_market(os, A) : write_matrix_csv(os, A.dense());
            } else if (which == "B") {
                const CoarseningOperator op = assemble_left_inverse(A, lookup_parameters(p, width));
                if (format == "json") os << operator_to_json(op).dump(2) << '\n';
                else if (format == "mtx") write_matrix_market(os, op.dense());
                else write_matrix_csv(os, op.dense());
            } else {
                throw Error(ErrorKind::invalid_argument, "--which must be A or B");
            }
            emit(out_path, out, os.str());
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_ok;
}

} // namespace bsc
