#include "homgrowth/sparse.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "homgrowth/errors.hpp"

namespace homgrowth {

SparseIntMatrix SparseIntMatrix::from_triplets(std::int64_t rows, std::int64_t cols,
                                               std::vector<Entry> triplets) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    for (const Entry& e : triplets) {
        if (e.r < 0 || e.r >= rows || e.c < 0 || e.c >= cols)
            throw std::invalid_argument("triplet index out of range");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    SparseIntMatrix m(rows, cols);
    m.entries.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        std::int64_t sum = 0;
        while (j < triplets.size() && triplets[j].r == triplets[i].r &&
               triplets[j].c == triplets[i].c) {
            if (__builtin_add_overflow(sum, triplets[j].v, &sum))
                throw std::overflow_error("entry accumulation overflow");
            ++j;
        }
        if (sum != 0) m.entries.push_back({triplets[i].r, triplets[i].c, sum});
        i = j;
    }
    return m;
}

SparseIntMatrix SparseIntMatrix::identity(std::int64_t n) {
    SparseIntMatrix m(n, n);
    m.entries.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) m.entries.push_back({i, i, 1});
    return m;
}

SparseIntMatrix SparseIntMatrix::transposed() const {
    std::vector<Entry> t;
    t.reserve(entries.size());
    for (const Entry& e : entries) t.push_back({e.c, e.r, e.v});
    return from_triplets(cols, rows, std::move(t));
}

SparseIntMatrix SparseIntMatrix::permuted(const std::vector<std::int64_t>& row_perm,
                                          const std::vector<std::int64_t>& col_perm) const {
    if (static_cast<std::int64_t>(row_perm.size()) != rows ||
        static_cast<std::int64_t>(col_perm.size()) != cols)
        throw std::invalid_argument("permutation size mismatch");
    std::vector<Entry> t;
    t.reserve(entries.size());
    for (const Entry& e : entries) t.push_back({row_perm[e.r], col_perm[e.c], e.v});
    return from_triplets(rows, cols, std::move(t));
}

std::vector<std::vector<std::int64_t>> SparseIntMatrix::to_dense() const {
    std::vector<std::vector<std::int64_t>> d(rows, std::vector<std::int64_t>(cols, 0));
    for (const Entry& e : entries) d[e.r][e.c] = e.v;
    return d;
}

SparseIntMatrix sparse_mul(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("sparse_mul: shape mismatch");
    // rows of b, indexed by row
    std::vector<std::size_t> b_row_start(b.rows + 1, 0);
    for (const auto& e : b.entries) b_row_start[e.r + 1]++;
    for (std::int64_t i = 0; i < b.rows; ++i) b_row_start[i + 1] += b_row_start[i];
    // a is sorted by row; walk each row of a, scatter into an accumulator
    std::vector<SparseIntMatrix::Entry> out;
    std::vector<std::int64_t> acc;
    std::vector<std::int64_t> touched;
    acc.assign(static_cast<std::size_t>(b.cols), 0);
    std::size_t i = 0;
    while (i < a.entries.size()) {
        std::int64_t row = a.entries[i].r;
        touched.clear();
        while (i < a.entries.size() && a.entries[i].r == row) {
            const auto& ea = a.entries[i];
            for (std::size_t k = b_row_start[ea.c]; k < b_row_start[ea.c + 1]; ++k) {
                const auto& eb = b.entries[k];
                if (acc[eb.c] == 0) touched.push_back(eb.c);
                std::int64_t prod;
                if (__builtin_mul_overflow(ea.v, eb.v, &prod) ||
                    __builtin_add_overflow(acc[eb.c], prod, &acc[eb.c]))
                    throw std::overflow_error("sparse_mul overflow");
            }
            ++i;
        }
        std::sort(touched.begin(), touched.end());
        for (std::int64_t c : touched) {
            if (acc[c] != 0) out.push_back({row, c, acc[c]});
            acc[c] = 0;
        }
    }
    SparseIntMatrix m(a.rows, b.cols);
    m.entries = std::move(out);
    return m;
}

void save_sms(const SparseIntMatrix& m, std::ostream& out) {
    out << m.rows << " " << m.cols << " M\n";
    for (const auto& e : m.entries) out << e.r + 1 << " " << e.c + 1 << " " << e.v << "\n";
    out << "0 0 0\n";
}

SparseIntMatrix load_sms(std::istream& in) {
    std::int64_t rows, cols;
    std::string tag;
    if (!(in >> rows >> cols >> tag)) throw std::invalid_argument("bad SMS header");
    std::vector<SparseIntMatrix::Entry> trip;
    std::int64_t r, c, v;
    while (in >> r >> c >> v) {
        if (r == 0 && c == 0 && v == 0) return SparseIntMatrix::from_triplets(rows, cols, std::move(trip));
        trip.push_back({r - 1, c - 1, v});
    }
    throw std::invalid_argument("SMS stream missing 0 0 0 terminator");
}

}  // namespace homgrowth
