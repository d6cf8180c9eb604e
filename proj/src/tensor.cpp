#include "bsc/tensor.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <thread>

#include "bsc/error.hpp"

namespace bsc {

namespace {

std::size_t product(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int e : shape) n *= static_cast<std::size_t>(e);
    return n;
}

void check_shape(const std::vector<int>& shape) {
    if (shape.empty()) throw Error(ErrorKind::invalid_argument, "grid needs at least one direction");
    for (int e : shape)
        if (e < 1) throw Error(ErrorKind::invalid_argument, "grid extents must be positive");
}

} // namespace

TensorSpace::TensorSpace(std::vector<SplineSpace> directions) : directions_(std::move(directions)) {
    if (directions_.empty()) throw Error(ErrorKind::invalid_argument, "tensor space needs at least one direction");
}

std::vector<int> TensorSpace::shape() const {
    std::vector<int> s;
    for (const auto& d : directions_) s.push_back(d.dim());
    return s;
}

std::size_t TensorSpace::dim() const noexcept {
    std::size_t n = 1;
    for (const auto& d : directions_) n *= static_cast<std::size_t>(d.dim());
    return n;
}

TensorSpace TensorSpace::refined() const {
    std::vector<SplineSpace> fine;
    for (const auto& d : directions_) fine.push_back(d.refined());
    return TensorSpace(std::move(fine));
}

CoefficientGrid::CoefficientGrid(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(product(shape_), fill);
}

CoefficientGrid::CoefficientGrid(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != product(shape_))
        throw Error(ErrorKind::dimension_mismatch, "grid data length does not match its shape");
}

std::size_t CoefficientGrid::stride(std::size_t d) const {
    std::size_t s = 1;
    for (std::size_t k = 0; k < d; ++k) s *= static_cast<std::size_t>(shape_.at(k));
    return s;
}

std::size_t CoefficientGrid::linear_index(std::span<const int> index) const {
    if (index.size() != shape_.size()) throw Error(ErrorKind::dimension_mismatch, "index rank differs from grid rank");
    std::size_t lin = 0, s = 1;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        if (index[d] < 0 || index[d] >= shape_[d]) throw Error(ErrorKind::dimension_mismatch, "grid index out of range");
        lin += static_cast<std::size_t>(index[d]) * s;
        s *= static_cast<std::size_t>(shape_[d]);
    }
    return lin;
}

double& CoefficientGrid::at(int i, int j) {
    const std::array<int, 2> idx{i, j};
    return (*this)(idx);
}

double CoefficientGrid::at(int i, int j) const {
    const std::array<int, 2> idx{i, j};
    return (*this)(idx);
}

ModeOperator as_mode_operator(const SubdivisionMatrix& A) {
    return {A.cols(), A.rows(), [&A](std::span<const double> x, std::span<double> y) { A.apply(x, y); }};
}

ModeOperator as_mode_operator(const CoarseningOperator& B) {
    return {B.n_fine(), B.n_coarse(), [&B](std::span<const double> x, std::span<double> y) { B.apply(x, y); }};
}

ModeOperator as_mode_operator(const Eigen::MatrixXd& M) {
    return {static_cast<int>(M.cols()), static_cast<int>(M.rows()),
            [&M](std::span<const double> x, std::span<double> y) {
                Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
                Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
                yv.noalias() = M * xv;
            }};
}

CoefficientGrid apply_mode(const CoefficientGrid& grid, std::size_t d, const ModeOperator& op, int threads) {
    if (d >= grid.dimensions()) throw Error(ErrorKind::dimension_mismatch, "direction index exceeds grid rank");
    if (grid.extent(d) != op.in_size)
        throw Error(ErrorKind::dimension_mismatch, "direction " + std::to_string(d) + " has extent " +
                                                       std::to_string(grid.extent(d)) + ", operator expects " +
                                                       std::to_string(op.in_size));
    std::vector<int> out_shape = grid.shape();
    out_shape[d] = op.out_size;
    CoefficientGrid out(out_shape);

    // A fiber is fixed by (inner, outer): inner < stride(d), outer over the directions after d.
    const std::size_t inner = grid.stride(d);
    std::size_t outer = 1;
    for (std::size_t k = d + 1; k < grid.dimensions(); ++k) outer *= static_cast<std::size_t>(grid.extent(k));
    const std::size_t fibers = inner * outer;
    const auto in_len = static_cast<std::size_t>(op.in_size), out_len = static_cast<std::size_t>(op.out_size);
    const auto src = grid.data();
    const auto dst = out.data();

    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<double> x(in_len), y(out_len);
        for (std::size_t f = begin; f < end; ++f) {
            const std::size_t i = f % inner, o = f / inner;
            const std::size_t in_base = i + o * inner * in_len, out_base = i + o * inner * out_len;
            for (std::size_t m = 0; m < in_len; ++m) x[m] = src[in_base + m * inner];
            op.apply(x, y);
            for (std::size_t m = 0; m < out_len; ++m) dst[out_base + m * inner] = y[m];
        }
    };

    const std::size_t nthreads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, fibers);
    if (nthreads == 1) {
        work(0, fibers);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (fibers + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            const std::size_t b = t * chunk, e = std::min(fibers, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }
    return out;
}

CoefficientGrid apply_modes(const CoefficientGrid& grid, std::span<const ModeOperator> ops,
                            std::span<const std::size_t> order, int threads) {
    if (ops.size() != grid.dimensions())
        throw Error(ErrorKind::dimension_mismatch, "need one operator per grid direction");
    std::vector<std::size_t> seq(order.begin(), order.end());
    if (seq.empty()) {
        seq.resize(ops.size());
        std::iota(seq.begin(), seq.end(), std::size_t{0});
    }
    std::vector<std::size_t> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k)
        if (sorted[k] != k || sorted.size() != ops.size())
            throw Error(ErrorKind::invalid_argument, "mode order must be a permutation of the directions");

    CoefficientGrid cur = grid;
    for (std::size_t d : seq) cur = apply_mode(cur, d, ops[d], threads);
    return cur;
}

CoefficientGrid refine_grid(const CoefficientGrid& coarse, std::span<const SubdivisionMatrix> per_direction, int threads) {
    std::vector<ModeOperator> ops;
    for (const auto& A : per_direction) ops.push_back(as_mode_operator(A));
    return apply_modes(coarse, ops, {}, threads);
}

TensorCoarseningOperator::TensorCoarseningOperator(std::vector<CoarseningOperator> per_direction)
    : factors_(std::move(per_direction)) {
    if (factors_.empty()) throw Error(ErrorKind::invalid_argument, "tensor operator needs at least one factor");
}

std::vector<int> TensorCoarseningOperator::in_shape() const {
    std::vector<int> s;
    for (const auto& f : factors_) s.push_back(f.n_fine());
    return s;
}

std::vector<int> TensorCoarseningOperator::out_shape() const {
    std::vector<int> s;
    for (const auto& f : factors_) s.push_back(f.n_coarse());
    return s;
}

TensorCoarseningOperator build_tensor_coarsening(int p, int r, std::span<const int> coarse_breakpoints) {
    std::vector<CoarseningOperator> factors;
    for (int N : coarse_breakpoints) factors.push_back(build_coarsening_operator(p, r, N));
    return TensorCoarseningOperator(std::move(factors));
}

CoefficientGrid coarsen_grid(const CoefficientGrid& fine, const TensorCoarseningOperator& op, int threads) {
    std::vector<ModeOperator> ops;
    for (const auto& B : op.factors()) ops.push_back(as_mode_operator(B));
    return apply_modes(fine, ops, {}, threads);
}

Eigen::MatrixXd materialize_kronecker(std::span<const Eigen::MatrixXd> factors, double cap) {
    if (factors.empty()) throw Error(ErrorKind::invalid_argument, "Kronecker product of no factors");
    double rows = 1, cols = 1;
    for (const auto& f : factors) {
        rows *= static_cast<double>(f.rows());
        cols *= static_cast<double>(f.cols());
    }
    if (rows * cols > cap) throw Error(ErrorKind::size_cap_exceeded, "Kronecker product exceeds the size cap");

    // K = F_{D-1} x ... x F_0: the first factor ends up innermost.
    Eigen::MatrixXd K = factors[0];
    for (std::size_t d = 1; d < factors.size(); ++d) {
        const Eigen::MatrixXd& F = factors[d];
        Eigen::MatrixXd next(F.rows() * K.rows(), F.cols() * K.cols());
        for (Eigen::Index i = 0; i < F.rows(); ++i)
            for (Eigen::Index j = 0; j < F.cols(); ++j)
                next.block(i * K.rows(), j * K.cols(), K.rows(), K.cols()) = F(i, j) * K;
        K = std::move(next);
    }
    return K;
}

} // namespace bsc
