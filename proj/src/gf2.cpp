#include "qldpc/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qldpc {

namespace {
void check_index(std::size_t j, std::size_t n) {
    if (j >= n) throw std::out_of_range("bit index " + std::to_string(j) + " out of range for size " + std::to_string(n));
}
void check_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("size mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}
} // namespace

BinaryVector BinaryVector::from_string(std::string_view bits) {
    BinaryVector v(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j] == '1')
            v.set(j, true);
        else if (bits[j] != '0')
            throw std::invalid_argument("invalid bit character in bitstring");
    }
    return v;
}

bool BinaryVector::get(std::size_t j) const {
    check_index(j, size_);
    return (words_[j >> 6] >> (j & 63)) & 1u;
}

void BinaryVector::set(std::size_t j, bool value) {
    check_index(j, size_);
    const std::uint64_t mask = std::uint64_t{1} << (j & 63);
    if (value)
        words_[j >> 6] |= mask;
    else
        words_[j >> 6] &= ~mask;
}

void BinaryVector::flip(std::size_t j) {
    check_index(j, size_);
    words_[j >> 6] ^= std::uint64_t{1} << (j & 63);
}

void BinaryVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BinaryVector::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BinaryVector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BinaryVector::first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return size_;
}

BinaryVector& BinaryVector::operator^=(const BinaryVector& other) {
    check_same_size(size_, other.size_);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

std::string BinaryVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t j = 0; j < size_; ++j)
        if (get(j)) s[j] = '1';
    return s;
}

std::size_t hamming_distance(const BinaryVector& a, const BinaryVector& b) {
    check_same_size(a.size(), b.size());
    std::size_t c = 0;
    const auto wa = a.words(), wb = b.words();
    for (std::size_t w = 0; w < wa.size(); ++w) c += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
    return c;
}

int dot_parity(const BinaryVector& a, const BinaryVector& b) {
    check_same_size(a.size(), b.size());
    std::uint64_t acc = 0;
    const auto wa = a.words(), wb = b.words();
    for (std::size_t w = 0; w < wa.size(); ++w) acc ^= wa[w] & wb[w];
    return static_cast<int>(std::popcount(acc) & 1u);
}

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), dense_(rows, BinaryVector(cols)), support_(rows) {}

BinaryMatrix BinaryMatrix::from_rows(std::size_t rows, std::size_t cols,
                                     const std::vector<std::vector<std::uint32_t>>& support) {
    if (support.size() != rows) throw std::invalid_argument("row support list size does not match row count");
    BinaryMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto cs = support[i];
        std::sort(cs.begin(), cs.end());
        for (std::size_t t = 0; t < cs.size(); ++t) {
            if (cs[t] >= cols) throw std::invalid_argument("column index out of range in row support");
            if (t > 0 && cs[t] == cs[t - 1]) throw std::invalid_argument("duplicate column index in row support");
            m.dense_[i].set(cs[t], true);
        }
        m.support_[i] = std::move(cs);
    }
    return m;
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
    BinaryMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

bool BinaryMatrix::at(std::size_t i, std::size_t j) const {
    check_index(i, rows_);
    return dense_[i].get(j);
}

void BinaryMatrix::set(std::size_t i, std::size_t j, bool value) {
    check_index(i, rows_);
    check_index(j, cols_);
    if (dense_[i].get(j) == value) return;
    dense_[i].set(j, value);
    auto& sup = support_[i];
    auto it = std::lower_bound(sup.begin(), sup.end(), static_cast<std::uint32_t>(j));
    if (value)
        sup.insert(it, static_cast<std::uint32_t>(j));
    else
        sup.erase(it);
}

const std::vector<std::uint32_t>& BinaryMatrix::row_support(std::size_t i) const {
    check_index(i, rows_);
    return support_[i];
}

const BinaryVector& BinaryMatrix::row(std::size_t i) const {
    check_index(i, rows_);
    return dense_[i];
}

std::size_t BinaryMatrix::ones() const {
    std::size_t c = 0;
    for (const auto& s : support_) c += s.size();
    return c;
}

BinaryMatrix BinaryMatrix::transposed() const {
    std::vector<std::vector<std::uint32_t>> sup(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto j : support_[i]) sup[j].push_back(static_cast<std::uint32_t>(i));
    return from_rows(cols_, rows_, sup);
}

BinaryVector syndrome(const BinaryVector& e, const BinaryMatrix& h) {
    check_same_size(e.size(), h.cols());
    BinaryVector s(h.rows());
    for (std::size_t i = 0; i < h.rows(); ++i)
        if (dot_parity(e, h.row(i))) s.set(i, true);
    return s;
}

RowBasis::RowBasis(const BinaryMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) insert(m.row(i));
}

bool RowBasis::insert(BinaryVector row) {
    for (const auto& [col, basis_row] : pivots_)
        if (row.size() > col && row.get(col)) row ^= basis_row;
    const std::size_t pivot = row.first_set();
    if (pivot == row.size()) return false;
    pivots_.emplace_back(pivot, std::move(row));
    return true;
}

bool RowBasis::contains(const BinaryVector& v) const {
    BinaryVector r = v;
    for (const auto& [col, basis_row] : pivots_)
        if (r.size() > col && r.get(col)) r ^= basis_row;
    return r.is_zero();
}

std::size_t rank(const BinaryMatrix& m) { return RowBasis(m).rank(); }

bool in_row_space(const BinaryVector& v, const BinaryMatrix& m) {
    check_same_size(v.size(), m.cols());
    return RowBasis(m).contains(v);
}

BinaryMatrix multiply(const BinaryMatrix& a, const BinaryMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions do not match");
    std::vector<std::vector<std::uint32_t>> sup(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        BinaryVector acc(b.cols());
        for (auto j : a.row_support(i)) acc ^= b.row(j);
        for (std::size_t c = 0; c < b.cols(); ++c)
            if (acc.get(c)) sup[i].push_back(static_cast<std::uint32_t>(c));
    }
    return BinaryMatrix::from_rows(a.rows(), b.cols(), sup);
}

BinaryMatrix kron(const BinaryMatrix& a, const BinaryMatrix& b) {
    std::vector<std::vector<std::uint32_t>> sup(a.rows() * b.rows());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ib = 0; ib < b.rows(); ++ib) {
            auto& row = sup[ia * b.rows() + ib];
            for (auto ja : a.row_support(ia))
                for (auto jb : b.row_support(ib))
                    row.push_back(static_cast<std::uint32_t>(ja * b.cols() + jb));
        }
    return BinaryMatrix::from_rows(a.rows() * b.rows(), a.cols() * b.cols(), sup);
}

BinaryMatrix hstack(const BinaryMatrix& a, const BinaryMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("row counts do not match");
    std::vector<std::vector<std::uint32_t>> sup(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        sup[i] = a.row_support(i);
        for (auto j : b.row_support(i)) sup[i].push_back(static_cast<std::uint32_t>(a.cols() + j));
    }
    return BinaryMatrix::from_rows(a.rows(), a.cols() + b.cols(), sup);
}

} // namespace qldpc
