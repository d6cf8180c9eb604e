#include "bsc/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bsc/error.hpp"

namespace bsc {

namespace {

double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::io_error, "cannot parse number '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool next_data_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        return true;
    }
    return false;
}

int parse_extent(std::string_view s) {
    const double v = parse_double(s);
    if (v < 1 || v != static_cast<int>(v)) throw Error(ErrorKind::io_error, "invalid grid extent");
    return static_cast<int>(v);
}

template <typename T>
void write_raw(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_raw(std::istream& is) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorKind::io_error, "truncated binary grid");
    return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorKind::io_error, "matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols)
            throw Error(ErrorKind::io_error, "ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
    }
    return M;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

void write_grid_csv(std::ostream& os, const CoefficientGrid& grid) {
    if (grid.dimensions() > 2) throw Error(ErrorKind::dimension_mismatch, "CSV grids hold at most two directions");
    const int rows = grid.extent(0), cols = grid.dimensions() == 2 ? grid.extent(1) : 1;
    const auto data = grid.data();
    os << rows << ',' << cols << '\n';
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j)
            os << (j ? "," : "") << format_double(data[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * rows]);
        os << '\n';
    }
}

CoefficientGrid read_grid_csv(std::istream& is) {
    std::string line;
    if (!next_data_line(is, line)) throw Error(ErrorKind::io_error, "empty grid CSV");
    const auto header = split(line, ',');
    if (header.size() != 2) throw Error(ErrorKind::io_error, "grid CSV header must be 'rows,cols'");
    const int rows = parse_extent(header[0]), cols = parse_extent(header[1]);
    CoefficientGrid grid({rows, cols});
    for (int i = 0; i < rows; ++i) {
        if (!next_data_line(is, line)) throw Error(ErrorKind::io_error, "grid CSV has fewer rows than its header");
        const auto fields = split(line, ',');
        if (static_cast<int>(fields.size()) != cols) throw Error(ErrorKind::io_error, "grid CSV row has the wrong length");
        for (int j = 0; j < cols; ++j) grid.at(i, j) = parse_double(fields[static_cast<std::size_t>(j)]);
    }
    if (next_data_line(is, line)) throw Error(ErrorKind::io_error, "grid CSV has more rows than its header");
    return grid;
}

void write_grid_binary(std::ostream& os, const CoefficientGrid& grid) {
    const std::size_t D = grid.dimensions();
    write_raw<std::uint64_t>(os, D);
    for (std::size_t d = 0; d < D; ++d) write_raw<std::uint64_t>(os, static_cast<std::uint64_t>(grid.extent(d)));
    // Row-major order: walk the index with the last direction fastest.
    std::vector<int> idx(D, 0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        write_raw<double>(os, grid(idx));
        for (std::size_t d = D; d-- > 0;) {
            if (++idx[d] < grid.extent(d)) break;
            idx[d] = 0;
        }
    }
    if (!os) throw Error(ErrorKind::io_error, "failed writing binary grid");
}

CoefficientGrid read_grid_binary(std::istream& is) {
    const auto D = read_raw<std::uint64_t>(is);
    if (D == 0 || D > 16) throw Error(ErrorKind::io_error, "implausible grid rank in binary header");
    std::vector<int> shape;
    for (std::uint64_t d = 0; d < D; ++d) {
        const auto e = read_raw<std::uint64_t>(is);
        if (e == 0 || e > (1u << 30)) throw Error(ErrorKind::io_error, "implausible grid extent in binary header");
        shape.push_back(static_cast<int>(e));
    }
    CoefficientGrid grid(shape);
    std::vector<int> idx(shape.size(), 0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        grid(idx) = read_raw<double>(is);
        for (std::size_t d = shape.size(); d-- > 0;) {
            if (++idx[d] < shape[d]) break;
            idx[d] = 0;
        }
    }
    return grid;
}

void save_grid(const std::filesystem::path& path, const CoefficientGrid& grid, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw Error(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
    binary ? write_grid_binary(os, grid) : write_grid_csv(os, grid);
    if (!os) throw Error(ErrorKind::io_error, "failed writing " + path.string());
}

CoefficientGrid load_grid(const std::filesystem::path& path, bool binary) {
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    return binary ? read_grid_binary(is) : read_grid_csv(is);
}

nlohmann::json operator_to_json(const CoarseningOperator& op) {
    const auto& P = op.params();
    return {
        {"p", P.p},
        {"r", P.r},
        {"params", {{"k", P.k}, {"q", P.q}, {"t", P.t}, {"l", P.l}, {"ell", P.ell}, {"z", P.z}}},
        {"n_coarse", op.n_coarse()},
        {"n_fine", op.n_fine()},
        {"omega", op.omega()},
        {"B_tl", matrix_to_json(op.top_block())},
        {"B_br", matrix_to_json(op.bottom_block())},
    };
}

CoarseningOperator operator_from_json(const nlohmann::json& j) {
    try {
        LocalityParameters P;
        P.p = j.at("p").get<int>();
        P.r = j.at("r").get<int>();
        const auto& pj = j.at("params");
        P.k = pj.at("k").get<int>();
        P.q = pj.at("q").get<int>();
        P.t = pj.at("t").get<int>();
        P.l = pj.at("l").get<int>();
        P.ell = pj.at("ell").get<int>();
        P.z = pj.at("z").get<int>();
        return CoarseningOperator(P, j.at("n_coarse").get<int>(), j.at("n_fine").get<int>(),
                                  matrix_from_json(j.at("B_tl")), matrix_from_json(j.at("B_br")),
                                  j.at("omega").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::io_error, std::string("malformed operator JSON: ") + e.what());
    }
}

void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& M) {
    std::size_t nnz = 0;
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i) nnz += M(i, j) != 0.0;
    os << "%%MatrixMarket matrix coordinate real general\n" << M.rows() << ' ' << M.cols() << ' ' << nnz << '\n';
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            if (M(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << format_double(M(i, j)) << '\n';
}

void write_matrix_market(std::ostream& os, const SubdivisionMatrix& A) { write_matrix_market(os, A.dense()); }

Eigen::MatrixXd read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0)
        throw Error(ErrorKind::io_error, "unsupported MatrixMarket header");
    do {
        if (!std::getline(is, line)) throw Error(ErrorKind::io_error, "MatrixMarket size line missing");
    } while (line.empty() || line.front() == '%');
    std::istringstream size_line(line);
    long rows = 0, cols = 0, nnz = 0;
    if (!(size_line >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
        throw Error(ErrorKind::io_error, "bad MatrixMarket size line");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
    for (long k = 0; k < nnz; ++k) {
        long i = 0, j = 0;
        std::string v;
        if (!(is >> i >> j >> v) || i < 1 || i > rows || j < 1 || j > cols)
            throw Error(ErrorKind::io_error, "bad MatrixMarket entry");
        M(i - 1, j - 1) = parse_double(v);
    }
    return M;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? "," : "") << format_double(M(i, j));
        os << '\n';
    }
}

} // namespace bsc
