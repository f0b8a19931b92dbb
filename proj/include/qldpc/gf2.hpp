#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qldpc {

// Bit-packed vector over GF(2). Out-of-range access and size mismatches throw
// std::invalid_argument / std::out_of_range.
class BinaryVector {
  public:
    BinaryVector() = default;
    explicit BinaryVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    // Parses "0101..."; any other character is rejected.
    static BinaryVector from_string(std::string_view bits);

    std::size_t size() const { return size_; }
    bool get(std::size_t j) const;
    void set(std::size_t j, bool value);
    void flip(std::size_t j);
    void clear();

    std::size_t popcount() const;
    bool is_zero() const;
    // Index of the lowest set bit, or size() if none.
    std::size_t first_set() const;

    BinaryVector& operator^=(const BinaryVector& other);
    friend BinaryVector operator^(BinaryVector a, const BinaryVector& b) { return a ^= b; }
    bool operator==(const BinaryVector&) const = default;

    std::string to_string() const;
    std::span<const std::uint64_t> words() const { return words_; }

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const BinaryVector& a, const BinaryVector& b);

// Parity of <a, b> over GF(2); sizes must match.
int dot_parity(const BinaryVector& a, const BinaryVector& b);

// Matrix over GF(2) kept in two synchronized views: bit-packed dense rows and
// sorted per-row column supports.
class BinaryMatrix {
  public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols);

    // support[i] lists the columns of row i; duplicates/out-of-range rejected.
    static BinaryMatrix from_rows(std::size_t rows, std::size_t cols,
                                  const std::vector<std::vector<std::uint32_t>>& support);
    static BinaryMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, bool value);

    const std::vector<std::uint32_t>& row_support(std::size_t i) const;
    const BinaryVector& row(std::size_t i) const;
    std::size_t row_weight(std::size_t i) const { return row_support(i).size(); }
    std::size_t ones() const;

    BinaryMatrix transposed() const;
    bool operator==(const BinaryMatrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BinaryVector> dense_;
    std::vector<std::vector<std::uint32_t>> support_;
};

// s = e * H^T; e has H.cols() entries, result has H.rows().
BinaryVector syndrome(const BinaryVector& e, const BinaryMatrix& h);

// Incremental row-echelon basis for rank and row-space membership queries.
class RowBasis {
  public:
    RowBasis() = default;
    explicit RowBasis(const BinaryMatrix& m);

    // Returns true if the row enlarged the span.
    bool insert(BinaryVector row);
    bool contains(const BinaryVector& v) const;
    std::size_t rank() const { return pivots_.size(); }

  private:
    // (pivot column, reduced row), unordered; each row's pivot is unique.
    std::vector<std::pair<std::size_t, BinaryVector>> pivots_;
};

std::size_t rank(const BinaryMatrix& m);
bool in_row_space(const BinaryVector& v, const BinaryMatrix& m);

BinaryMatrix multiply(const BinaryMatrix& a, const BinaryMatrix& b);
BinaryMatrix kron(const BinaryMatrix& a, const BinaryMatrix& b);
BinaryMatrix hstack(const BinaryMatrix& a, const BinaryMatrix& b);

} // namespace qldpc
