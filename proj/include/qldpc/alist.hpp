#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qldpc/gf2.hpp"

namespace qldpc {

struct AlistParseError : std::runtime_error {
    int line;
    AlistParseError(int line_no, const std::string& what)
        : std::runtime_error("alist parse error at line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

// MacKay alist: "n m", max degrees, column/row degree lists, then per-column
// and per-row 1-based adjacency lines padded with zeros to the max degree.
std::string to_alist(const BinaryMatrix& m);
BinaryMatrix from_alist(std::istream& in);

void to_alist_file(const BinaryMatrix& m, const std::string& path);
BinaryMatrix from_alist_file(const std::string& path);

} // namespace qldpc
