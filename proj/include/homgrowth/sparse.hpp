#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace homgrowth {

// Sparse integer matrix in triplet form. Entries are kept sorted by
// (row, col), deduplicated, with no explicit zeros.
struct SparseIntMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;

    struct Entry {
        std::int64_t r;
        std::int64_t c;
        std::int64_t v;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    SparseIntMatrix() = default;
    SparseIntMatrix(std::int64_t r, std::int64_t c) : rows(r), cols(c) {}

    // Accumulates duplicate positions and drops zero sums.
    static SparseIntMatrix from_triplets(std::int64_t rows, std::int64_t cols,
                                         std::vector<Entry> triplets);

    static SparseIntMatrix identity(std::int64_t n);

    std::int64_t nnz() const { return static_cast<std::int64_t>(entries.size()); }

    SparseIntMatrix transposed() const;
    // perm[i] = new index of row/col i; used by the invariance tests
    SparseIntMatrix permuted(const std::vector<std::int64_t>& row_perm,
                             const std::vector<std::int64_t>& col_perm) const;

    std::vector<std::vector<std::int64_t>> to_dense() const;

    bool operator==(const SparseIntMatrix&) const = default;
};

// Exact product over Z (entries here are tiny; sums are overflow-checked).
SparseIntMatrix sparse_mul(const SparseIntMatrix& a, const SparseIntMatrix& b);

// SMS-like text format: "rows cols M" header, 1-indexed "i j v" triples,
// terminated by "0 0 0".
void save_sms(const SparseIntMatrix& m, std::ostream& out);
SparseIntMatrix load_sms(std::istream& in);

}  // namespace homgrowth
