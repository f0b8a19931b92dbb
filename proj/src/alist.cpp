#include "qldpc/alist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace qldpc {

namespace {

struct LineReader {
    std::istream& in;
    int line_no = 0;

    // Reads the next line and splits it into non-negative integers.
    std::vector<long long> next_ints(const char* what) {
        std::string line;
        if (!std::getline(in, line)) throw AlistParseError(line_no + 1, std::string("unexpected end of file, expected ") + what);
        ++line_no;
        std::istringstream ss(line);
        std::vector<long long> out;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t pos = 0;
                long long v = std::stoll(tok, &pos);
                if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
                out.push_back(v);
            } catch (const std::exception&) {
                throw AlistParseError(line_no, "invalid token '" + tok + "' in " + what);
            }
        }
        if (out.empty()) throw AlistParseError(line_no, std::string("empty line, expected ") + what);
        return out;
    }
};

// Adjacency line: exactly `degree` positive 1-based entries (each < bound+1),
// optionally followed by zero padding. A zero before the declared entries or a
// trailing non-zero is rejected.
std::vector<std::uint32_t> parse_adjacency(const std::vector<long long>& toks, long long degree, long long bound,
                                           int line_no, const char* kind) {
    std::vector<std::uint32_t> out;
    for (std::size_t t = 0; t < toks.size(); ++t) {
        const long long v = toks[t];
        if (static_cast<long long>(t) < degree) {
            if (v == 0) throw AlistParseError(line_no, std::string("zero entry where a ") + kind + " index was expected");
            if (v > bound) throw AlistParseError(line_no, kind + std::string(" index ") + std::to_string(v) + " out of range");
            out.push_back(static_cast<std::uint32_t>(v - 1));
        } else if (v != 0) {
            throw AlistParseError(line_no, std::string("expected zero padding, found ") + std::to_string(v));
        }
    }
    if (static_cast<long long>(out.size()) != degree)
        throw AlistParseError(line_no, "found " + std::to_string(out.size()) + " entries, declared degree " + std::to_string(degree));
    auto sorted = out;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw AlistParseError(line_no, std::string("duplicate ") + kind + " index in adjacency list");
    return out;
}

} // namespace

std::string to_alist(const BinaryMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const BinaryMatrix mt = m.transposed();
    std::size_t dv_max = 0, dc_max = 0;
    for (std::size_t j = 0; j < cols; ++j) dv_max = std::max(dv_max, mt.row_weight(j));
    for (std::size_t i = 0; i < rows; ++i) dc_max = std::max(dc_max, m.row_weight(i));

    std::ostringstream out;
    out << cols << ' ' << rows << '\n';
    out << dv_max << ' ' << dc_max << '\n';
    for (std::size_t j = 0; j < cols; ++j) out << mt.row_weight(j) << (j + 1 < cols ? ' ' : '\n');
    for (std::size_t i = 0; i < rows; ++i) out << m.row_weight(i) << (i + 1 < rows ? ' ' : '\n');

    auto emit = [&out](const std::vector<std::uint32_t>& support, std::size_t pad_to) {
        // All-zero matrices still need a token per line; pad with a single 0.
        if (pad_to == 0) pad_to = 1;
        for (std::size_t t = 0; t < pad_to; ++t) {
            if (t) out << ' ';
            out << (t < support.size() ? support[t] + 1 : 0);
        }
        out << '\n';
    };
    for (std::size_t j = 0; j < cols; ++j) emit(mt.row_support(j), dv_max);
    for (std::size_t i = 0; i < rows; ++i) emit(m.row_support(i), dc_max);
    return out.str();
}

BinaryMatrix from_alist(std::istream& in) {
    LineReader rd{in};

    auto header = rd.next_ints("matrix dimensions");
    if (header.size() != 2) throw AlistParseError(rd.line_no, "expected exactly two dimensions");
    const long long cols = header[0], rows = header[1];
    if (cols < 1 || rows < 1) throw AlistParseError(rd.line_no, "matrix dimensions must be positive");

    auto maxdeg = rd.next_ints("max degrees");
    if (maxdeg.size() != 2) throw AlistParseError(rd.line_no, "expected exactly two max degrees");
    const long long dv_max = maxdeg[0], dc_max = maxdeg[1];

    auto col_deg = rd.next_ints("column degrees");
    if (static_cast<long long>(col_deg.size()) != cols)
        throw AlistParseError(rd.line_no, "expected " + std::to_string(cols) + " column degrees, found " + std::to_string(col_deg.size()));
    auto row_deg = rd.next_ints("row degrees");
    if (static_cast<long long>(row_deg.size()) != rows)
        throw AlistParseError(rd.line_no, "expected " + std::to_string(rows) + " row degrees, found " + std::to_string(row_deg.size()));
    for (auto d : col_deg)
        if (d > dv_max) throw AlistParseError(3, "column degree " + std::to_string(d) + " exceeds declared maximum");
    for (auto d : row_deg)
        if (d > dc_max) throw AlistParseError(4, "row degree " + std::to_string(d) + " exceeds declared maximum");

    std::vector<std::vector<std::uint32_t>> col_sup(static_cast<std::size_t>(cols));
    for (long long j = 0; j < cols; ++j) {
        auto toks = rd.next_ints("column adjacency");
        col_sup[static_cast<std::size_t>(j)] = parse_adjacency(toks, col_deg[static_cast<std::size_t>(j)], rows, rd.line_no, "row");
    }
    std::vector<std::vector<std::uint32_t>> row_sup(static_cast<std::size_t>(rows));
    for (long long i = 0; i < rows; ++i) {
        auto toks = rd.next_ints("row adjacency");
        row_sup[static_cast<std::size_t>(i)] = parse_adjacency(toks, row_deg[static_cast<std::size_t>(i)], cols, rd.line_no, "column");
    }

    BinaryMatrix from_cols_view = BinaryMatrix::from_rows(static_cast<std::size_t>(cols), static_cast<std::size_t>(rows), col_sup).transposed();
    BinaryMatrix from_rows_view = BinaryMatrix::from_rows(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), row_sup);
    if (!(from_cols_view == from_rows_view))
        throw AlistParseError(rd.line_no, "column and row adjacency lists describe different matrices");
    return from_rows_view;
}

void to_alist_file(const BinaryMatrix& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_alist(m);
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

BinaryMatrix from_alist_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open " + path);
    return from_alist(f);
}

} // namespace qldpc
