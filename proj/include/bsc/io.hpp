#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "bsc/left_inverse.hpp"
#include "bsc/subdivision.hpp"
#include "bsc/tensor.hpp"

namespace bsc {

/// Formats a double so that reading it back gives the same value.
std::string format_double(double x);

/// 2D grid as CSV: "rows,cols" then one line per row. A 1D grid is written as a single column.
void write_grid_csv(std::ostream& os, const CoefficientGrid& grid);
/// Lines starting with '#' are skipped. Returns a rows x cols grid.
CoefficientGrid read_grid_csv(std::istream& is);

/// Binary grid: uint64 D, D uint64 extents, then doubles with the last index fastest.
void write_grid_binary(std::ostream& os, const CoefficientGrid& grid);
CoefficientGrid read_grid_binary(std::istream& is);

void save_grid(const std::filesystem::path& path, const CoefficientGrid& grid, bool binary);
CoefficientGrid load_grid(const std::filesystem::path& path, bool binary);

/// {p, r, params, omega, B_tl, B_br} plus the operator sizes.
nlohmann::json operator_to_json(const CoarseningOperator& op);
CoarseningOperator operator_from_json(const nlohmann::json& j);

/// MatrixMarket coordinate format listing the nonzero entries (1-based).
void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& M);
void write_matrix_market(std::ostream& os, const SubdivisionMatrix& A);
Eigen::MatrixXd read_matrix_market(std::istream& is);

/// Dense matrix as CSV without a header.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M);

} // namespace bsc
