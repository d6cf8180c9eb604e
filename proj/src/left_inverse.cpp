#include "bsc/left_inverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bsc/error.hpp"

namespace bsc {

namespace {

constexpr std::array<LocalityParameters, 22> kTable = {{
    // p, r, k, q, t, l, ell, z
    {1, 3, 0, 3, 2, 2, 1, 1},
    {1, 5, 1, 3, 2, 2, 1, 0},
    {1, 7, 2, 5, 4, 3, 2, 1},
    {1, 9, 3, 5, 4, 3, 2, 0},
    {2, 4, 0, 3, 4, 3, 2, 2},
    {2, 6, 1, 5, 6, 4, 3, 3},
    {2, 8, 2, 5, 6, 4, 3, 2},
    {2, 10, 3, 7, 8, 5, 4, 3},
    {2, 12, 4, 7, 8, 5, 4, 2},
    {3, 5, 0, 5, 8, 6, 4, 5},
    {3, 7, 1, 5, 8, 6, 4, 4},
    {3, 9, 2, 7, 10, 7, 5, 5},
    {3, 11, 3, 7, 10, 7, 5, 4},
    {3, 13, 4, 9, 12, 8, 6, 5},
    {3, 15, 5, 9, 12, 8, 6, 4},
    {4, 6, 0, 5, 10, 7, 5, 6},
    {4, 8, 1, 7, 12, 8, 6, 7},
    {4, 10, 2, 7, 12, 8, 6, 6},
    {4, 12, 3, 9, 14, 9, 7, 7},
    {4, 14, 4, 9, 14, 9, 7, 6},
    {4, 16, 5, 11, 16, 10, 8, 7},
    {4, 18, 6, 11, 16, 10, 8, 6},
}};

constexpr double kRankThreshold = 1e-10;

void check_width(int p, int r) {
    if (p < 1) throw Error(ErrorKind::invalid_argument, "degree must be >= 1");
    const int excess = r - p - 2;
    if (excess < 0 || excess % 2 != 0 || excess / 2 > p + 2)
        throw Error(ErrorKind::no_valid_configuration,
                    "width r=" + std::to_string(r) + " is not p+2+2k with 0 <= k <= p+2");
}

int full_column_rank(const Eigen::MatrixXd& M) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(kRankThreshold);
    return static_cast<int>(qr.rank());
}

// Extracts rows [r0, r0+rows) and columns [c0, c0+cols) of A.
Eigen::MatrixXd extract(const SubdivisionMatrix& A, int r0, int rows, int c0, int cols) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
    for (int j = 0; j < cols; ++j) {
        const int col = c0 + j;
        const auto& run = A.column_run(col);
        for (std::size_t m = 0; m < run.size(); ++m) {
            const int row = A.first_row(col) + static_cast<int>(m) - r0;
            if (row >= 0 && row < rows) M(row, j) = run[m];
        }
    }
    return M;
}

// Nonzero column range [lo, hi] of A restricted to rows [r0, r1); {-1,-1} if empty.
std::pair<int, int> nonzero_columns(const SubdivisionMatrix& A, int r0, int r1) {
    int lo = -1, hi = -1;
    for (int j = 0; j < A.cols(); ++j) {
        const auto& run = A.column_run(j);
        for (std::size_t m = 0; m < run.size(); ++m) {
            const int row = A.first_row(j) + static_cast<int>(m);
            if (row >= r0 && row < r1 && run[m] != 0.0) {
                if (lo < 0) lo = j;
                hi = j;
                break;
            }
        }
    }
    return {lo, hi};
}

} // namespace

std::span<const LocalityParameters> tabulated_parameters() { return kTable; }

int interior_column_count(int p, int r) {
    check_width(p, r);
    const int k = (r - p - 2) / 2;
    return (p % 2 == 1) ? (p + 2) + 2 * (k / 2) : (p + 1) + 2 * ((k + 1) / 2);
}

LocalityParameters lookup_parameters(int p, int r, bool allow_derivation) {
    for (const auto& row : kTable)
        if (row.p == p && row.r == r) return row;
    if (!allow_derivation)
        throw Error(ErrorKind::unsupported_width,
                    "(p=" + std::to_string(p) + ", r=" + std::to_string(r) + ") is not tabulated");
    return derive_parameters(p, r);
}

Eigen::MatrixXd build_interior_block(const LocalityParameters& params) {
    check_width(params.p, params.r);
    const int p = params.p, r = params.r, k = (r - p - 2) / 2;
    const auto eta = eta_vector(p);

    // Column offset m (relative to the centre) covers window rows k+2m .. k+2m+p+1.
    const int m_lo = -((k + p + 1) / 2);
    const int m_hi = (r - 1 - k) / 2;
    std::vector<int> offsets;
    for (int m = m_lo; m <= m_hi; ++m) {
        const int first = k + 2 * m, last = first + p + 1;
        if (last >= 0 && first <= r - 1) offsets.push_back(m);
    }
    const int q = static_cast<int>(offsets.size());
    if (q != interior_column_count(p, r) || (params.q != 0 && params.q != q))
        throw Error(ErrorKind::no_valid_configuration, "interior window column count disagrees with q");

    Eigen::MatrixXd Ain = Eigen::MatrixXd::Zero(r, q);
    for (int c = 0; c < q; ++c) {
        const int first = k + 2 * offsets[static_cast<std::size_t>(c)];
        for (int i = 0; i <= p + 1; ++i) {
            const int row = first + i;
            if (row >= 0 && row < r) Ain(row, c) = eta[static_cast<std::size_t>(i)];
        }
    }
    if (full_column_rank(Ain) < q)
        throw Error(ErrorKind::rank_deficient, "A_in lacks full column rank");
    return Ain;
}

CornerBlocks build_corner_blocks(const SubdivisionMatrix& A, const LocalityParameters& params) {
    const int n = A.rows(), nh = A.cols();
    const int t = std::min(params.t, n);
    const auto [lo, hi] = nonzero_columns(A, 0, t);
    const int l = hi + 1;
    if (lo != 0 || l > t)
        throw Error(ErrorKind::too_small_space, "corner block does not fit the subdivision matrix");

    CornerBlocks blocks;
    blocks.top_left = extract(A, 0, t, 0, l);
    const auto [blo, bhi] = nonzero_columns(A, n - t, n);
    if (bhi != nh - 1 || blo < nh - l)
        throw Error(ErrorKind::too_small_space, "bottom-right block is not the mirror of the top-left block");
    blocks.bottom_right = extract(A, n - t, t, nh - l, l);

    if (full_column_rank(blocks.top_left) < l || full_column_rank(blocks.bottom_right) < l)
        throw Error(ErrorKind::rank_deficient, "corner block lacks full column rank");
    return blocks;
}

Eigen::MatrixXd pseudoinverse_rows(const Eigen::MatrixXd& M, std::span<const int> rows) {
    const auto m = M.rows(), q = M.cols();
    if (m < q) throw Error(ErrorKind::rank_deficient, "local matrix is underdetermined");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < q) throw Error(ErrorKind::rank_deficient, "local matrix lacks full column rank");

    // M P = Q R  =>  pinv(M) = P R^{-1} Q^T, so row i is (Q R^{-T} P^T e_i)^T.
    const auto R = qr.matrixQR().topLeftCorner(q, q).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, q);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m);
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        const int i = rows[idx];
        if (i < 0 || i >= q) throw Error(ErrorKind::invalid_argument, "pseudoinverse row out of range");
        Eigen::VectorXd e = Eigen::VectorXd::Zero(q);
        e(i) = 1.0;
        const Eigen::VectorXd pe = qr.colsPermutation().transpose() * e;
        const Eigen::VectorXd y = R.transpose().solve(pe);
        out.row(static_cast<Eigen::Index>(idx)) = (Q * y).transpose();
    }
    return out;
}

std::vector<double> compute_omega(const LocalityParameters& params) {
    const Eigen::MatrixXd Ain = build_interior_block(params);
    const std::array<int, 1> centre{static_cast<int>((Ain.cols() - 1) / 2)};
    const Eigen::MatrixXd row = pseudoinverse_rows(Ain, centre);
    return {row.data(), row.data() + row.size()};
}

std::vector<double> compute_omega(int p, int r) { return compute_omega(lookup_parameters(p, r)); }

LocalityParameters derive_parameters(int p, int r) {
    check_width(p, r);
    LocalityParameters P;
    P.p = p;
    P.r = r;
    P.k = (r - p - 2) / 2;
    P.q = interior_column_count(p, r);
    const Eigen::MatrixXd Ain = build_interior_block(P);
    const int half = (P.q - 1) / 2;

    const SubdivisionMatrix A = build_subdivision_matrix(p, 4 * (r + p) + 8);
    const int n = A.rows(), nh = A.cols();

    // Smallest ell whose window (rows z..z+r) reproduces A_in with column ell at the centre.
    P.ell = -1;
    for (int ell = 0; ell < nh / 2; ++ell) {
        const int start = 2 * ell - p - P.k;
        if (start < 0 || start + r > n || ell - half < 0) continue;
        const auto [lo, hi] = nonzero_columns(A, start, start + r);
        if (lo != ell - half || hi != ell + half) continue;
        const Eigen::MatrixXd W = extract(A, start, r, lo, P.q);
        if ((W - Ain).cwiseAbs().maxCoeff() > 1e-14) continue;
        P.ell = ell;
        P.z = start;
        break;
    }
    if (P.ell < 0) throw Error(ErrorKind::no_valid_configuration, "no interior window reproduces A_in");

    for (int t = 2 * P.ell; t <= n / 2; ++t) {
        const auto [lo, hi] = nonzero_columns(A, 0, t);
        const int l = hi + 1;
        if (lo != 0 || l > t || l < P.ell) continue;
        if (full_column_rank(extract(A, 0, t, 0, l)) < l) continue;
        P.t = t;
        P.l = l;
        return P;
    }
    throw Error(ErrorKind::no_valid_configuration, "no full-rank corner block found");
}

CoarseningOperator::CoarseningOperator(LocalityParameters params, int n_coarse, int n_fine,
                                       Eigen::MatrixXd top, Eigen::MatrixXd bottom, std::vector<double> omega)
    : params_(params), n_coarse_(n_coarse), n_fine_(n_fine), top_(std::move(top)),
      bottom_(std::move(bottom)), omega_(std::move(omega)) {
    if (static_cast<int>(omega_.size()) != params_.r)
        throw Error(ErrorKind::dimension_mismatch, "omega length differs from width r");
    if (top_.cols() > n_fine_ || bottom_.cols() > n_fine_ || top_rows() + bottom_rows() > n_coarse_)
        throw Error(ErrorKind::dimension_mismatch, "corner blocks do not fit the operator");
    for (int j = top_rows(); j < n_coarse_ - bottom_rows(); ++j) {
        const int off = interior_offset(j);
        if (off < 0 || off + params_.r > n_fine_)
            throw Error(ErrorKind::too_small_space, "interior row exceeds the fine index range");
    }
}

void CoarseningOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != n_fine_ || static_cast<int>(y.size()) != n_coarse_)
        throw Error(ErrorKind::dimension_mismatch, "coarsening apply: wrong vector length");
    const auto tw = top_.cols();
    for (int j = 0; j < top_rows(); ++j) {
        double s = 0.0;
        for (Eigen::Index c = 0; c < tw; ++c) s += top_(j, c) * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(j)] = s;
    }
    for (int j = top_rows(); j < n_coarse_ - bottom_rows(); ++j) {
        const auto off = static_cast<std::size_t>(interior_offset(j));
        double s = 0.0;
        for (std::size_t i = 0; i < omega_.size(); ++i) s += omega_[i] * x[off + i];
        y[static_cast<std::size_t>(j)] = s;
    }
    const auto bw = bottom_.cols();
    const auto base = static_cast<std::size_t>(n_fine_ - bw);
    for (int i = 0; i < bottom_rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index c = 0; c < bw; ++c) s += bottom_(i, c) * x[base + static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(n_coarse_ - bottom_rows() + i)] = s;
    }
}

std::vector<double> CoarseningOperator::apply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(n_coarse_));
    apply(x, y);
    return y;
}

Eigen::MatrixXd CoarseningOperator::dense() const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_coarse_, n_fine_);
    B.topLeftCorner(top_rows(), top_.cols()) = top_;
    for (int j = top_rows(); j < n_coarse_ - bottom_rows(); ++j)
        for (int i = 0; i < params_.r; ++i) B(j, interior_offset(j) + i) = omega_[static_cast<std::size_t>(i)];
    B.bottomRightCorner(bottom_rows(), bottom_.cols()) = bottom_;
    return B;
}

CoarseningOperator assemble_left_inverse(const SubdivisionMatrix& A, const LocalityParameters& params) {
    if (A.degree() != params.p)
        throw Error(ErrorKind::invalid_argument, "operator degree differs from subdivision degree");
    const int nh = A.cols(), n = A.rows();
    const CornerBlocks blocks = build_corner_blocks(A, params);

    // Spaces with fewer than 2*ell coarse functions split the rows between the two corners.
    int top = params.ell, bottom = params.ell;
    if (nh < 2 * params.ell) {
        top = (nh + 1) / 2;
        bottom = nh - top;
    }
    const int l = static_cast<int>(blocks.top_left.cols());
    if (top > l) throw Error(ErrorKind::too_small_space, "corner block has fewer columns than rows to fill");

    std::vector<int> top_idx(static_cast<std::size_t>(top)), bottom_idx(static_cast<std::size_t>(bottom));
    for (int i = 0; i < top; ++i) top_idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < bottom; ++i) bottom_idx[static_cast<std::size_t>(i)] = l - bottom + i;

    Eigen::MatrixXd top_block = pseudoinverse_rows(blocks.top_left, top_idx);
    Eigen::MatrixXd bottom_block = pseudoinverse_rows(blocks.bottom_right, bottom_idx);

    // A square corner block is invertible; its pseudoinverse must then be the plain inverse.
    if (blocks.top_left.rows() == blocks.top_left.cols()) {
        const Eigen::MatrixXd inv = blocks.top_left.partialPivLu().inverse();
        if ((inv.topRows(top) - top_block).cwiseAbs().maxCoeff() > 1e-12)
            throw Error(ErrorKind::solver_failure, "pseudoinverse of a square corner block differs from its inverse");
    }
    return CoarseningOperator(params, nh, n, std::move(top_block), std::move(bottom_block), compute_omega(params));
}

CoarseningOperator build_coarsening_operator(int p, int r, int coarse_breakpoints) {
    return assemble_left_inverse(build_subdivision_matrix(p, coarse_breakpoints), lookup_parameters(p, r));
}

std::vector<double> apply_coarsening(const CoarseningOperator& op, std::span<const double> fine) {
    return op.apply(fine);
}

int count_nonzeros(std::span<const double> v, double threshold) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [&](double x) { return std::abs(x) > threshold; }));
}

std::vector<int> ancestor_counts(const CoarseningOperator& op) {
    std::vector<int> counts(static_cast<std::size_t>(op.n_fine()), 0);
    const auto& top = op.top_block();
    for (Eigen::Index j = 0; j < top.rows(); ++j)
        for (Eigen::Index c = 0; c < top.cols(); ++c)
            if (std::abs(top(j, c)) > nonzero_threshold) ++counts[static_cast<std::size_t>(c)];
    for (int j = op.top_rows(); j < op.n_coarse() - op.bottom_rows(); ++j)
        for (int i = 0; i < op.width(); ++i)
            if (std::abs(op.omega()[static_cast<std::size_t>(i)]) > nonzero_threshold)
                ++counts[static_cast<std::size_t>(op.interior_offset(j) + i)];
    const auto& bot = op.bottom_block();
    const auto base = op.n_fine() - bot.cols();
    for (Eigen::Index j = 0; j < bot.rows(); ++j)
        for (Eigen::Index c = 0; c < bot.cols(); ++c)
            if (std::abs(bot(j, c)) > nonzero_threshold) ++counts[static_cast<std::size_t>(base + c)];
    return counts;
}

} // namespace bsc
