// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "bsc/analysis.hpp"
#include "bsc/exact.hpp"
#include "bsc/experiments.hpp"
#include "bsc/left_inverse.hpp"
#include "bsc/subdivision.hpp"
#include "bsc/tensor.hpp"
#include "oracles.hpp"
#include "tables.hpp"

using namespace bsc;

namespace {

constexpr double table_tol = 0.006;
constexpr double saturation_tol = 5e-3;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string pr(int p, int r) { return "p=" + std::to_string(p) + " r=" + std::to_string(r); }

double max_abs(const Eigen::MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

void subdivision_matrices() {
    Stopwatch sw;
    double worst = 0.0;
    int checked = 0;
    for (int p = 1; p <= 4; ++p)
        for (int n_hat = 2 * p + 2; n_hat <= 30; ++n_hat) {
            const SubdivisionMatrix A = build_subdivision_matrix(p, n_hat - p + 1);
            worst = std::max(worst, max_abs(A.dense() - oracle::printed_subdivision(p, n_hat)));
            ++checked;
        }
    const double t = sw.seconds();
    report(worst <= 1e-15 && t < 1.0, "subdivision matrices",
           std::to_string(checked) + " matrices p=1..4, max deviation " + fmt(worst) + ", " + fmt(t) + " s");
}

void eta_vectors() {
    double worst = 0.0;
    for (int p = 1; p <= 10; ++p) {
        const auto eta = eta_vector(p);
        double sum = 0.0;
        for (int i = 0; i <= p + 1; ++i) {
            const double v = eta[static_cast<std::size_t>(i)];
            worst = std::max(worst, std::abs(v - oracle::binomial(p + 1, i) * std::ldexp(1.0, -p)));
            worst = std::max(worst, std::abs(v - eta[static_cast<std::size_t>(p + 1 - i)]));
            sum += v;
        }
        worst = std::max(worst, std::abs(sum - 2.0));
    }
    report(worst <= 1e-15, "eta vectors", "p=1..10, max deviation " + fmt(worst));
}

void omega_vectors() {
    double worst = 0.0;
    int exact_rows = 0;
    std::string mismatches;
    for (const auto& row : ref::omegas) {
        const auto w = compute_omega(row.p, row.r);
        const auto full = ref::complete(row);
        const auto exact = compute_omega_exact(lookup_parameters(row.p, row.r));
        bool row_exact = exact.size() == full.size();
        for (std::size_t i = 0; i < w.size() && i < full.size(); ++i) {
            const Rational printed(full[i], row.denominator);
            worst = std::max(worst, std::abs(w[i] - printed.convert_to<double>()));
            if (row_exact && exact[i] != printed) {
                row_exact = false;
                mismatches += " " + pr(row.p, row.r) + " entry " + std::to_string(i) + " computed " + to_string(exact[i]) +
                              " printed " + to_string(printed) + ";";
            }
        }
        exact_rows += row_exact ? 1 : 0;
    }
    const bool ok = worst <= 1e-12 && exact_rows == static_cast<int>(ref::omegas.size());
    report(ok, "omega vectors",
           std::to_string(exact_rows) + "/" + std::to_string(ref::omegas.size()) + " rows verbatim, max float deviation " +
               fmt(worst) + (mismatches.empty() ? "" : ";" + mismatches));
}

void corner_blocks() {
    // Printed corner blocks for p=2, r=6.
    const auto q = [](double a, double b) { return a / b; };
    Eigen::MatrixXd tl(3, 6), br(3, 6);
    tl << q(121, 141), q(40, 141), q(-9, 47), q(1, 141), q(3, 47), q(-1, 47),
          q(-41, 141), q(82, 141), q(45, 47), q(-5, 141), q(-15, 141), q(5, 47),
          q(5, 47), q(-10, 47), q(-5, 47), q(35, 47), q(33, 47), q(-11, 47);
    br << q(-11, 47), q(33, 47), q(35, 47), q(-5, 47), q(-10, 47), q(5, 47),
          q(5, 47), q(-15, 141), q(-5, 141), q(45, 47), q(82, 141), q(-41, 141),
          q(-1, 47), q(3, 47), q(1, 141), q(-9, 47), q(40, 141), q(121, 141);
    const SubdivisionMatrix A = build_subdivision_matrix(2, 25);
    const CoarseningOperator B = assemble_left_inverse(A, lookup_parameters(2, 6));
    const Eigen::MatrixXd dt = B.top_block() - tl, db = B.bottom_block() - br;
    int off = 0;
    std::string where;
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 6; ++j) {
            if (std::abs(dt(i, j)) > 1e-12) { ++off; where += " B_tl(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }
            if (std::abs(db(i, j)) > 1e-12) { ++off; where += " B_br(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }
        }
    // The printed rows against the corner block they should invert.
    const auto corners = build_corner_blocks(A, lookup_parameters(2, 6));
    const double printed_residual = max_abs(tl * corners.top_left - Eigen::MatrixXd::Identity(3, 4));
    const double computed_residual = max_abs(B.top_block() * corners.top_left - Eigen::MatrixXd::Identity(3, 4));
    report(off == 0, "corner blocks",
           std::to_string(36 - off) + "/36 entries within 1e-12, max deviation " + fmt(std::max(max_abs(dt), max_abs(db))) +
               (where.empty() ? "" : " at" + where) + "; |B_tl A_tl - [I 0]| printed " + fmt(printed_residual) +
               ", computed " + fmt(computed_residual));
}

void left_inverse_identity() {
    Stopwatch sw;
    double worst = 0.0;
    int count = 0;
    for (const auto& row : ref::parameters)
        for (int N : {row.p + 3, 12, 25}) {
            const SubdivisionMatrix A = build_subdivision_matrix(row.p, N);
            const CoarseningOperator B = assemble_left_inverse(A, lookup_parameters(row.p, row.r));
            worst = std::max(worst, max_abs(B.dense() * A.dense() - Eigen::MatrixXd::Identity(A.cols(), A.cols())));
            ++count;
        }
    const double t = sw.seconds();
    report(worst <= 1e-12 && t < 10.0, "left-inverse identity",
           std::to_string(count) + " operators, max |BA-I| " + fmt(worst) + ", " + fmt(t) + " s");
}

void norm_tables_1d() {
    std::string misses, drifts;
    double worst = 0.0, drift = 0.0;
    for (const auto& row : ref::norms_1d) {
        const auto a = norm_report(row.p, row.r, 25);
        const auto b = norm_report(row.p, row.r, 35);
        const double d = std::max({std::abs(a.norm_B_inf - row.B_inf), std::abs(a.norm_omega_2 - row.omega_2),
                                   std::abs(a.norm_residual_2 - row.res_2), std::abs(a.norm_residual_inf - row.res_inf)});
        const double s = std::max({std::abs(a.norm_B_inf - b.norm_B_inf), std::abs(a.norm_omega_2 - b.norm_omega_2),
                                   std::abs(a.norm_residual_2 - b.norm_residual_2),
                                   std::abs(a.norm_residual_inf - b.norm_residual_inf)});
        worst = std::max(worst, d);
        drift = std::max(drift, s);
        if (d > table_tol)
            misses += " " + pr(row.p, row.r) + " (I-AB_2 " + fmt(a.norm_residual_2) + " vs " + fmt(row.res_2, 3) + ")";
        if (s > saturation_tol) drifts += " " + pr(row.p, row.r) + " moves " + fmt(s, 2);
    }
    report(misses.empty() && drifts.empty(), "1D norm tables",
           "N=25 max deviation " + fmt(worst) + (misses.empty() ? "" : ", outside 0.006:" + misses) +
               "; saturation 25->35 max change " + fmt(drift) + (drifts.empty() ? "" : ":" + drifts));
}

void norm_tables_2d() {
    Stopwatch sw;
    const std::vector<int> degrees{1, 2, 3, 4};
    const auto reports = norm_table(degrees, 2, 15);
    const double t = sw.seconds();
    std::string misses;
    int ok_rows = 0;
    double worst_b = 0.0, worst_inf = 0.0, worst_2 = 0.0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& row = ref::norms_2d[i];
        const auto& rep = reports[i];
        const double db = std::abs(rep.norm_B_inf - row.B_inf), d2 = std::abs(rep.norm_residual_2 - row.res_2),
                     di = std::abs(rep.norm_residual_inf - row.res_inf);
        worst_b = std::max(worst_b, db);
        worst_2 = std::max(worst_2, d2);
        worst_inf = std::max(worst_inf, di);
        if (std::max({db, d2, di}) <= table_tol && rep.p == row.p && rep.r == row.r) {
            ++ok_rows;
        } else {
            misses += " " + pr(row.p, row.r) + " I-AB_2 " + fmt(rep.norm_residual_2) + " vs " + fmt(row.res_2, 3) + ";";
        }
    }
    report(ok_rows == static_cast<int>(ref::norms_2d.size()) && t < 120.0, "2D norm tables",
           std::to_string(ok_rows) + "/22 rows within 0.006 at N=15 (max dev B_inf " + fmt(worst_b) + ", I-AB_inf " +
               fmt(worst_inf) + ", I-AB_2 " + fmt(worst_2) + "), " + fmt(t) + " s" + (misses.empty() ? "" : ";" + misses));
}

void kronecker_correctness() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0.0, round_trip = 0.0;
    int cases = 0;
    for (int D = 2; D <= 3; ++D)
        for (int p = 1; p <= 4; ++p) {
            std::vector<SubdivisionMatrix> A;
            std::vector<int> N, shape;
            for (int d = 0; d < D; ++d) {
                const int n_hat = std::min(10, p + 4 + d);
                N.push_back(n_hat - p + 1);
                shape.push_back(n_hat);
                A.push_back(build_subdivision_matrix(p, N.back()));
            }
            CoefficientGrid c(shape);
            for (auto& v : c.data()) v = u(rng);
            const auto fine = refine_grid(c, A);
            std::vector<Eigen::MatrixXd> dense;
            for (const auto& a : A) dense.push_back(a.dense());
            const Eigen::VectorXd ref =
                oracle::kron_by_index(dense) * Eigen::Map<const Eigen::VectorXd>(c.data().data(), static_cast<Eigen::Index>(c.size()));
            for (std::size_t i = 0; i < fine.size(); ++i)
                worst = std::max(worst, std::abs(fine.data()[i] - ref(static_cast<Eigen::Index>(i))));

            const auto op = build_tensor_coarsening(p, tabulated_widths(p).front(), N);
            const auto coarse = coarsen_grid(fine, op);
            std::vector<Eigen::MatrixXd> bd;
            for (const auto& f : op.factors()) bd.push_back(f.dense());
            const Eigen::VectorXd bref = oracle::kron_by_index(bd) *
                                         Eigen::Map<const Eigen::VectorXd>(fine.data().data(), static_cast<Eigen::Index>(fine.size()));
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                worst = std::max(worst, std::abs(coarse.data()[i] - bref(static_cast<Eigen::Index>(i))));
                round_trip = std::max(round_trip, std::abs(coarse.data()[i] - c.data()[i]));
            }
            ++cases;
        }
    report(worst <= 1e-12 && round_trip <= 1e-12, "Kronecker correctness",
           std::to_string(cases) + " grids D=2,3, max deviation from dense Kronecker " + fmt(worst) + ", round trip " + fmt(round_trip));
}

void consistency_identity() {
    int ok = 0;
    for (const auto& row : ref::parameters) {
        const auto P = lookup_parameters(row.p, row.r, false);
        ok += (row.r == 4 * row.ell + 2 - row.p - 2 * row.z && P.r == 4 * P.ell + 2 - P.p - 2 * P.z && P.ell == row.ell &&
               P.z == row.z) ? 1 : 0;
    }
    report(ok == 22, "consistency identity", std::to_string(ok) + "/22 rows satisfy r = 4 ell + 2 - p - 2 z");
}

void ancestor_count_formula() {
    int ok = 0;
    std::string bad;
    for (const auto& row : ref::parameters) {
        const CoarseningOperator B = build_coarsening_operator(row.p, row.r, 30);
        const auto counts = ancestor_counts(B);
        const int nnz = count_nonzeros(B.omega());
        // Central columns sit far from both corner blocks.
        const int mid = B.n_fine() / 2;
        bool good = true;
        for (int j = mid - 4; j <= mid + 4 && good; ++j) {
            const int c = counts[static_cast<std::size_t>(j)];
            if (nnz % 2 == 0) {
                good = c == nnz / 2;
            } else {
                good = (c == (nnz - 1) / 2 || c == (nnz + 1) / 2) && (j == mid - 4 || c != counts[static_cast<std::size_t>(j - 1)]);
            }
        }
        if (good) ++ok;
        else bad += " " + pr(row.p, row.r);
    }
    report(ok == 22, "ancestor counts", std::to_string(ok) + "/22 configurations follow the parity rule" + bad);
}

void minimum_norm_ordering() {
    bool monotone = true;
    double worst = 0.0;
    std::string detail;
    for (int p = 1; p <= 4; ++p) {
        double previous = 1e300;
        for (const auto& row : ref::norms_1d) {
            if (row.p != p) continue;
            const auto w = compute_omega(p, row.r);
            const double n2 = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).norm();
            if (n2 > previous + 1e-12) {
                monotone = false;
                detail += " increase at " + pr(p, row.r);
            }
            previous = n2;
            worst = std::max(worst, std::abs(n2 - row.omega_2));
        }
    }
    report(monotone && worst <= table_tol, "minimum-norm ordering",
           std::string(monotone ? "nonincreasing in r for p=1..4" : "not monotone:" + detail) + ", max deviation from table " + fmt(worst));
}

void coarsening_curves_check() {
    Stopwatch sw;
    bool dominance = true;
    std::string detail;
    bool close = true;
    for (int p = 1; p <= 4; ++p) {
        CurveConfig cfg;
        cfg.p = p;
        cfg.widths = tabulated_widths(p);
        cfg.fine_elements = 128;
        cfg.levels = 4;
        const auto curves = coarsening_curves(cfg);
        const auto& proj = curves.front();
        for (std::size_t w = 1; w < curves.size(); ++w)
            for (std::size_t k = 0; k < proj.points.size(); ++k)
                if (proj.points[k].l2_error > curves[w].points[k].l2_error + 1e-12) dominance = false;
        const auto& best = curves.back();
        double ratio = 0.0;
        for (std::size_t k = 0; k < proj.points.size(); ++k)
            ratio = std::max(ratio, best.points[k].l2_error / proj.points[k].l2_error);
        if (ratio > 1.10) close = false;
        detail += " " + pr(p, best.width) + " max ratio " + fmt(ratio) + ";";
    }
    const double t = sw.seconds();
    report(dominance && close && t < 300.0, "coarsening curves",
           std::string("projection ") + (dominance ? "<=" : "NOT <=") + " local at every level;" + detail + " " + fmt(t) + " s");
}

void localized_check() {
    const auto results = localized_experiment(LocalizedConfig{});
    const auto& proj = results[0];
    const auto& r6 = results[1];
    const auto& r8 = results[2];
    const bool ok = std::abs(r6.modified_fraction - 0.18) <= 0.04 && std::abs(r8.modified_fraction - 0.32) <= 0.04 &&
                    std::abs(r6.linf_relative - 0.40) <= 0.05 && std::abs(r8.linf_relative - 0.27) <= 0.05 &&
                    std::abs(proj.linf_relative - 0.29) <= 0.05;
    const auto pct = [](double x) { return fmt(100.0 * x, 4) + "%"; };
    report(ok, "localized experiment",
           "disk region; modified r6 " + pct(r6.modified_fraction) + ", r8 " + pct(r8.modified_fraction) + ", projection " +
               pct(proj.modified_fraction) + "; relative Linf r6 " + pct(r6.linf_relative) + ", r8 " + pct(r8.linf_relative) +
               ", projection " + pct(proj.linf_relative));
}

void projection_oracle() {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    double worst = 0.0;
    int instances = 0;
    for (int k = 0; k < 20; ++k) {
        const int p = 2 + k % 2;
        const int N = 2 + k % (12 - p);  // n_hat = p + N - 1 <= 12
        const SplineSpace coarse(0, 1, N, p);
        const SplineSpace fine = coarse.refined();
        const auto tc = oracle::open_knots(0, 1, N, p), tf = oracle::open_knots(0, 1, 2 * N - 1, p);
        std::vector<double> breaks;
        for (double x : tf)
            if (breaks.empty() || x != breaks.back()) breaks.push_back(x);
        const auto gram = [&](const std::vector<double>& t1, const std::vector<double>& t2) {
            const int n1 = static_cast<int>(t1.size()) - p - 1, n2 = static_cast<int>(t2.size()) - p - 1;
            Eigen::MatrixXd M(n1, n2);
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j)
                    M(i, j) = oracle::integrate_gauss(breaks, [&](double x) {
                        return oracle::cox_de_boor(t1, i, p, x) * oracle::cox_de_boor(t2, j, p, x);
                    });
            return M;
        };
        Eigen::VectorXd c(fine.dim());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = g(rng);
        const Eigen::VectorXd ref = gram(tc, tc).ldlt().solve(gram(tc, tf) * c);
        const auto got = l2_project_spline(std::vector<double>(c.data(), c.data() + c.size()), coarse, fine,
                                           build_subdivision_matrix(coarse, fine));
        for (Eigen::Index i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got[static_cast<std::size_t>(i)] - ref(i)));
        ++instances;
    }
    report(worst <= 1e-10, "projection oracle", std::to_string(instances) + " instances p=2,3, max deviation " + fmt(worst));
}

} // namespace

int main() {
    subdivision_matrices();
    eta_vectors();
    omega_vectors();
    corner_blocks();
    left_inverse_identity();
    norm_tables_1d();
    norm_tables_2d();
    kronecker_correctness();
    consistency_identity();
    ancestor_count_formula();
    minimum_norm_ordering();
    coarsening_curves_check();
    localized_check();
    projection_oracle();
    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
