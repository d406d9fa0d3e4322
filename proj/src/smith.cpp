#include "homgrowth/smith.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace homgrowth {

namespace {
using boost::multiprecision::cpp_int;
using i64 = std::int64_t;
}  // namespace

std::vector<i64> smith_normal_form(const SparseIntMatrix& m) {
    if (m.rows * m.cols > 10'000'000)
        throw std::invalid_argument("smith_normal_form: matrix too large for dense SNF");
    const i64 nr = m.rows, nc = m.cols;
    std::vector<std::vector<cpp_int>> a(nr, std::vector<cpp_int>(nc, 0));
    for (const auto& e : m.entries) a[e.r][e.c] = e.v;

    std::vector<i64> diag;
    i64 t = 0;
    const i64 lim = std::min(nr, nc);
    while (t < lim) {
        // smallest nonzero |entry| in the trailing submatrix, ties by (row, col)
        i64 pr = -1, pc = -1;
        cpp_int best = 0;
        for (i64 i = t; i < nr; ++i)
            for (i64 j = t; j < nc; ++j) {
                if (a[i][j] == 0) continue;
                cpp_int v = abs(a[i][j]);
                if (pr < 0 || v < best) { best = v; pr = i; pc = j; }
            }
        if (pr < 0) break;
        std::swap(a[t], a[pr]);
        if (pc != t)
            for (i64 i = 0; i < nr; ++i) std::swap(a[i][t], a[i][pc]);

        bool dirty = false;
        for (i64 i = t + 1; i < nr; ++i) {
            if (a[i][t] == 0) continue;
            cpp_int q = a[i][t] / a[t][t];
            if (q != 0)
                for (i64 j = t; j < nc; ++j) a[i][j] -= q * a[t][j];
            if (a[i][t] != 0) dirty = true;  // remainder smaller than pivot
        }
        for (i64 j = t + 1; j < nc; ++j) {
            if (a[t][j] == 0) continue;
            cpp_int q = a[t][j] / a[t][t];
            if (q != 0)
                for (i64 i = t; i < nr; ++i) a[i][j] -= q * a[i][t];
            if (a[t][j] != 0) dirty = true;
        }
        if (dirty) continue;  // re-pick: a strictly smaller pivot now exists

        // divisibility repair: fold a bad row into row t and re-run
        bool repaired = false;
        for (i64 i = t + 1; i < nr && !repaired; ++i)
            for (i64 j = t + 1; j < nc; ++j) {
                if (a[i][j] % a[t][t] != 0) {
                    for (i64 k = t; k < nc; ++k) a[t][k] += a[i][k];
                    repaired = true;
                    break;
                }
            }
        if (repaired) continue;

        cpp_int d = abs(a[t][t]);
        if (d > std::numeric_limits<i64>::max())
            throw std::overflow_error("smith_normal_form: invariant factor exceeds 64 bits");
        diag.push_back(d.convert_to<i64>());
        ++t;
    }
    return diag;
}

}  // namespace homgrowth
