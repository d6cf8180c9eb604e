#include "bsc/experiments.hpp"

#include <cmath>
#include <future>

#include "bsc/error.hpp"

namespace bsc {

namespace {

TensorSpace square_space(int breakpoints, int p) {
    return TensorSpace({SplineSpace(0.0, 1.0, breakpoints, p), SplineSpace(0.0, 1.0, breakpoints, p)});
}

/// Runs jobs in order, or concurrently when threads > 1; results keep the job order.
template <typename T, typename F>
std::vector<T> run_jobs(std::size_t count, int threads, F job) {
    std::vector<T> out;
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(job(i));
        return out;
    }
    std::vector<std::future<T>> pending;
    for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(threads)) {
        pending.clear();
        for (std::size_t i = start; i < std::min(count, start + static_cast<std::size_t>(threads)); ++i)
            pending.push_back(std::async(std::launch::async, job, i));
        for (auto& f : pending) out.push_back(f.get());
    }
    return out;
}

} // namespace

double arctan_ring(double x, double y) {
    const double u = 4.0 * x - 3.5, v = 4.0 * y - 3.0;
    return std::atan(5.0 * (u * u + v * v - 5.0));
}

std::vector<int> tabulated_widths(int p) {
    std::vector<int> w;
    for (const auto& row : tabulated_parameters())
        if (row.p == p) w.push_back(row.r);
    if (w.empty()) throw Error(ErrorKind::unsupported_width, "no tabulated widths for p=" + std::to_string(p));
    return w;
}

std::vector<NormReport> norm_table(std::span<const int> degrees, int dims, int coarse_breakpoints, int threads,
                                   const SpectralOptions& options) {
    if (dims != 1 && dims != 2) throw Error(ErrorKind::invalid_argument, "norm tables exist for 1 or 2 directions");
    std::vector<std::pair<int, int>> rows;
    for (int p : degrees)
        for (int r : tabulated_widths(p)) rows.emplace_back(p, r);
    return run_jobs<NormReport>(rows.size(), threads, [&](std::size_t i) {
        const auto [p, r] = rows[i];
        return dims == 1 ? norm_report(p, r, coarse_breakpoints, options) : norm_report_2d(p, r, coarse_breakpoints, options);
    });
}

std::vector<ErrorCurve> coarsening_curves(const CurveConfig& config) {
    if (config.levels < 1) throw Error(ErrorKind::invalid_argument, "levels must be at least 1");
    if (config.fine_elements < 1 || config.fine_elements % (1 << config.levels) != 0)
        throw Error(ErrorKind::invalid_argument, "fine element count must be divisible by 2^levels");
    for (int r : config.widths) (void)lookup_parameters(config.p, r);

    std::vector<int> breakpoints{config.fine_elements + 1};
    for (int k = 0; k < config.levels; ++k) breakpoints.push_back((breakpoints.back() + 1) / 2);

    const TensorSpace finest = square_space(breakpoints[0], config.p);
    const CoefficientGrid start = l2_project_function(config.f, finest);

    // Job 0 is the projection baseline, job k the k-th width.
    return run_jobs<ErrorCurve>(config.widths.size() + 1, config.threads, [&](std::size_t job) {
        ErrorCurve curve;
        curve.p = config.p;
        curve.width = job == 0 ? 0 : config.widths[job - 1];
        curve.method = job == 0 ? "l2-projection" : "local-r" + std::to_string(curve.width);
        CoefficientGrid C = start;
        for (int level = 0; level <= config.levels; ++level) {
            const TensorSpace space = square_space(breakpoints[static_cast<std::size_t>(level)], config.p);
            if (level > 0) {
                if (job == 0) {
                    C = l2_project_function(config.f, space);
                } else {
                    const std::array<int, 2> N{breakpoints[static_cast<std::size_t>(level)], breakpoints[static_cast<std::size_t>(level)]};
                    C = coarsen_grid(C, build_tensor_coarsening(config.p, curve.width, N));
                }
            }
            curve.points.push_back({level, static_cast<long long>(space.dim()), l2_error(C, space, config.f)});
        }
        return curve;
    });
}

CoefficientGrid localized_coefficients(int n, const LocalizedRegion& region) {
    CoefficientGrid C({n, n});
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double di = i - region.center_i, dj = j - region.center_j;
            if (di * di + dj * dj <= region.radius * region.radius) C.at(i, j) = 1.0;
        }
    return C;
}

std::vector<LocalizedResult> localized_experiment(const LocalizedConfig& config) {
    if (config.fine_elements < 2 || config.fine_elements % 2 != 0)
        throw Error(ErrorKind::invalid_argument, "fine element count must be even");
    const int coarse_breakpoints = config.fine_elements / 2 + 1;
    const TensorSpace coarse = square_space(coarse_breakpoints, config.p);
    const TensorSpace fine = coarse.refined();
    const SubdivisionMatrix A = build_subdivision_matrix(config.p, coarse_breakpoints);
    const std::array<SubdivisionMatrix, 2> As{A, A};
    const CoefficientGrid C = localized_coefficients(fine.direction(0).dim(), config.region);

    auto finish = [&](std::string method, int width, CoefficientGrid coarse_c) {
        LocalizedResult res;
        res.method = std::move(method);
        res.width = width;
        const CoefficientGrid back = refine_grid(coarse_c, As);
        std::vector<double> err(C.size());
        std::size_t modified = 0;
        for (std::size_t k = 0; k < err.size(); ++k) {
            err[k] = C.data()[k] - back.data()[k];
            modified += std::abs(err[k]) > 1e-12;
        }
        res.modified_fraction = static_cast<double>(modified) / static_cast<double>(err.size());
        res.linf_relative = linf_relative_error(back, C, fine);
        res.coarse = std::move(coarse_c);
        res.error_coefficients = CoefficientGrid(C.shape(), std::move(err));
        return res;
    };

    std::vector<LocalizedResult> out;
    out.push_back(finish("l2-projection", 0, l2_project_spline(C, coarse)));
    for (int r : config.widths) {
        const std::array<int, 2> N{coarse_breakpoints, coarse_breakpoints};
        out.push_back(finish("local-r" + std::to_string(r), r, coarsen_grid(C, build_tensor_coarsening(config.p, r, N))));
    }
    return out;
}

} // namespace bsc
