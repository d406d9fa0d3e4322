#include "homgrowth/rank.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <queue>
#include <random>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace homgrowth {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i32 = std::int32_t;
using i64 = std::int64_t;

u64 mulmod_small(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_small(r, a, m);
        a = mulmod_small(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // this witness set is deterministic for n < 3.3e24
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_small(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

PrimeField::PrimeField(u64 modulus) {
    if (modulus < 2 || modulus >= (1ull << 31))
        throw std::invalid_argument("prime modulus must satisfy 2 <= p < 2^31");
    if (modulus < (1u << 20)) {  // certify small moduli by trial division
        for (u64 d = 2; d * d <= modulus; ++d)
            if (modulus % d == 0) throw std::invalid_argument("modulus is not prime");
    } else if (!is_prime_u64(modulus)) {
        throw std::invalid_argument("modulus is not prime");
    }
    p = static_cast<u32>(modulus);
}

namespace {

// ---------------------------------------------------------------------------
// modular arithmetic (Barrett-style reduction, p < 2^31)

struct Mod {
    u64 p;
    u64 magic;  // floor(2^64 / p) underestimate; correction loop fixes slack
    explicit Mod(u64 p_) : p(p_), magic(~0ull / p_) {}
    u64 reduce(u64 x) const {
        u64 q = static_cast<u64>((static_cast<unsigned __int128>(x) * magic) >> 64);
        u64 r = x - q * p;
        while (r >= p) r -= p;
        return r;
    }
    u64 mul(u64 a, u64 b) const { return reduce(a * b); }
    u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
    u64 inv(u64 a) const {
        i64 t = 0, nt = 1;
        i64 r = static_cast<i64>(p), nr = static_cast<i64>(a);
        while (nr != 0) {
            i64 q = r / nr;
            t = std::exchange(nt, t - q * nt);
            r = std::exchange(nr, r - q * nr);
        }
        return t < 0 ? static_cast<u64>(t + static_cast<i64>(p)) : static_cast<u64>(t);
    }
};

// static partition; arithmetic is identical for any thread count
void parallel_for(i64 n, int threads, const std::function<void(i64, i64)>& body) {
    if (threads <= 1 || n < 256) {
        body(0, n);
        return;
    }
    i64 t = std::min<i64>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    i64 chunk = (n + t - 1) / t;
    for (i64 k = 0; k < t; ++k) {
        i64 lo = k * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// dense kernels

i64 dense_rank_gf2(std::vector<std::vector<u64>>& rows, i64 ncols, int threads) {
    if (rows.empty() || ncols == 0) return 0;
    const i64 words = static_cast<i64>(rows[0].size());
    const i64 nrows = static_cast<i64>(rows.size());
    i64 rank = 0;
    for (i64 c = 0; c < ncols && rank < nrows; ++c) {
        const i64 w = c >> 6;
        const u64 bit = 1ull << (c & 63);
        i64 piv = -1;
        for (i64 r = rank; r < nrows; ++r) {
            if (rows[r][w] & bit) { piv = r; break; }
        }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        const u64* prow = rows[rank].data();
        const i64 pr = rank;
        parallel_for(nrows, threads, [&](i64 lo, i64 hi) {
            for (i64 r = lo; r < hi; ++r) {
                if (r == pr || !(rows[r][w] & bit)) continue;
                u64* row = rows[r].data();
                for (i64 j = w; j < words; ++j) row[j] ^= prow[j];
            }
        });
        ++rank;
    }
    return rank;
}

i64 dense_rank_fp(std::vector<u32>& a, i64 nrows, i64 ncols, const Mod& mod, int threads) {
    i64 rank = 0;
    for (i64 c = 0; c < ncols && rank < nrows; ++c) {
        i64 piv = -1;
        for (i64 r = rank; r < nrows; ++r) {
            if (a[r * ncols + c] != 0) { piv = r; break; }
        }
        if (piv < 0) continue;
        if (piv != rank)
            for (i64 j = c; j < ncols; ++j) std::swap(a[rank * ncols + j], a[piv * ncols + j]);
        const u64 inv = mod.inv(a[rank * ncols + c]);
        const u32* prow = &a[rank * ncols];
        const i64 pr = rank;
        parallel_for(nrows, threads, [&](i64 lo, i64 hi) {
            for (i64 r = lo; r < hi; ++r) {
                if (r == pr) continue;
                u32* row = &a[r * ncols];
                if (row[c] == 0) continue;
                const u64 m = mod.mul(mod.neg(row[c]), inv);
                for (i64 j = c; j < ncols; ++j)
                    row[j] = static_cast<u32>(mod.reduce(row[j] + m * prow[j]));
            }
        });
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// sparse phase
//
// Rows are sorted vectors; column counts are maintained incrementally and a
// lazy min-heap over (count, col) yields the deterministic pivot order:
// minimum column count, then (among that column's rows) minimum row length,
// ties broken by lowest index.

struct F2Row {
    std::vector<i32> cols;  // sorted
};

struct FpRow {
    std::vector<std::pair<i32, u32>> ent;  // sorted by col
};

template <class Row>
struct SparseElim {
    i64 nrows = 0, ncols = 0;
    std::vector<Row> rows;
    std::vector<char> row_active, col_active;
    std::vector<i64> col_count;
    std::vector<std::vector<i32>> col_rows;  // may contain stale row ids
    using HeapItem = std::pair<i64, i64>;    // (count, col)
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;
    i64 active_rows = 0, active_cols = 0;
    i64 nnz = 0;
    i64 rank = 0;

    static i64 row_len(const F2Row& r) { return static_cast<i64>(r.cols.size()); }
    static i64 row_len(const FpRow& r) { return static_cast<i64>(r.ent.size()); }
    static void row_cols(const F2Row& r, std::vector<i32>& out) { out = r.cols; }
    static void row_cols(const FpRow& r, std::vector<i32>& out) {
        out.clear();
        for (auto& e : r.ent) out.push_back(e.first);
    }
    static bool row_has(const F2Row& r, i32 c) {
        return std::binary_search(r.cols.begin(), r.cols.end(), c);
    }
    static bool row_has(const FpRow& r, i32 c) {
        auto it = std::lower_bound(r.ent.begin(), r.ent.end(), c,
                                   [](const auto& e, i32 x) { return e.first < x; });
        return it != r.ent.end() && it->first == c;
    }

    void init_counts() {
        row_active.assign(nrows, 1);
        col_active.assign(ncols, 1);
        col_count.assign(ncols, 0);
        col_rows.assign(ncols, {});
        std::vector<i32> cols;
        for (i64 r = 0; r < nrows; ++r) {
            row_cols(rows[r], cols);
            if (cols.empty()) { row_active[r] = 0; continue; }
            nnz += static_cast<i64>(cols.size());
            for (i32 c : cols) {
                col_count[c]++;
                col_rows[c].push_back(static_cast<i32>(r));
            }
        }
        active_rows = 0;
        for (i64 r = 0; r < nrows; ++r) active_rows += row_active[r];
        active_cols = ncols;
        for (i64 c = 0; c < ncols; ++c) heap.push({col_count[c], c});
    }

    void touch_col(i64 c) { heap.push({col_count[c], c}); }

    // lazy heap grows with update churn; rebuild when it dwarfs the matrix
    void maybe_rebuild_heap() {
        if (static_cast<i64>(heap.size()) < 4 * ncols + (1 << 20)) return;
        std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> fresh;
        for (i64 c = 0; c < ncols; ++c)
            if (col_active[c]) fresh.push({col_count[c], c});
        heap.swap(fresh);
    }

    void retire_row(i64 r, std::vector<i32>& scratch) {
        row_cols(rows[r], scratch);
        for (i32 c : scratch) {
            if (col_active[c]) {
                col_count[c]--;
                touch_col(c);
            }
        }
        nnz -= static_cast<i64>(scratch.size());
        row_active[r] = 0;
        active_rows--;
        rows[r] = Row{};
    }
};

// F2: dst ^= src
void axpy(F2Row& dst, const F2Row& src, u32 /*m*/, const Mod* /*mod*/,
          std::vector<i32>& added, std::vector<i32>& removed, std::vector<i32>& scratch) {
    added.clear();
    removed.clear();
    scratch.clear();
    std::size_t i = 0, j = 0;
    while (i < dst.cols.size() || j < src.cols.size()) {
        if (j >= src.cols.size() || (i < dst.cols.size() && dst.cols[i] < src.cols[j])) {
            scratch.push_back(dst.cols[i++]);
        } else if (i >= dst.cols.size() || src.cols[j] < dst.cols[i]) {
            scratch.push_back(src.cols[j]);
            added.push_back(src.cols[j]);
            ++j;
        } else {
            removed.push_back(dst.cols[i]);
            ++i;
            ++j;
        }
    }
    dst.cols.swap(scratch);
}

// Fp: dst += m * src
void axpy(FpRow& dst, const FpRow& src, u32 m, const Mod* mod,
          std::vector<i32>& added, std::vector<i32>& removed,
          std::vector<std::pair<i32, u32>>& scratch) {
    added.clear();
    removed.clear();
    scratch.clear();
    std::size_t i = 0, j = 0;
    while (i < dst.ent.size() || j < src.ent.size()) {
        if (j >= src.ent.size() || (i < dst.ent.size() && dst.ent[i].first < src.ent[j].first)) {
            scratch.push_back(dst.ent[i++]);
        } else if (i >= dst.ent.size() || src.ent[j].first < dst.ent[i].first) {
            u32 v = static_cast<u32>(mod->mul(m, src.ent[j].second));
            if (v != 0) {
                scratch.push_back({src.ent[j].first, v});
                added.push_back(src.ent[j].first);
            }
            ++j;
        } else {
            u32 v = static_cast<u32>(
                mod->reduce(dst.ent[i].second + static_cast<u64>(m) * src.ent[j].second));
            if (v == 0)
                removed.push_back(dst.ent[i].first);
            else
                scratch.push_back({dst.ent[i].first, v});
            ++i;
            ++j;
        }
    }
    dst.ent.swap(scratch);
}

u32 entry_value(const F2Row&, i32) { return 1; }
u32 entry_value(const FpRow& r, i32 c) {
    auto it = std::lower_bound(r.ent.begin(), r.ent.end(), c,
                               [](const auto& e, i32 x) { return e.first < x; });
    return it->second;
}

struct DenseSwitch {
    double min_density;  // switch when nnz / (active rows * cols) exceeds this
    i64 max_cells;       // and the dense matrix fits
    i64 force_cols;      // always switch when active cols drop below
};

template <class Row, class DenseFinish>
i64 run_elimination(SparseElim<Row>& st, const Mod* mod, const DenseSwitch& sw,
                    DenseFinish dense_finish) {
    std::vector<i32> added, removed, scratch;
    typename std::conditional<std::is_same_v<Row, F2Row>, std::vector<i32>,
                              std::vector<std::pair<i32, u32>>>::type merge_scratch;
    std::vector<i32> cand;
    i64 since_check = 0;
    while (!st.heap.empty()) {
        auto [cnt, c] = st.heap.top();
        st.heap.pop();
        if (!st.col_active[c] || st.col_count[c] != cnt) continue;
        if (cnt == 0) {
            st.col_active[c] = 0;
            st.active_cols--;
            continue;
        }
        if (++since_check >= 64 || st.active_cols <= sw.force_cols) {
            since_check = 0;
            st.maybe_rebuild_heap();
            double cells = static_cast<double>(st.active_rows) * static_cast<double>(st.active_cols);
            bool fits = cells > 0 && cells <= static_cast<double>(sw.max_cells);
            bool wins = st.active_cols <= sw.force_cols ||
                        static_cast<double>(st.nnz) >= sw.min_density * cells;
            if (fits && wins) {
                st.heap.push({cnt, c});
                return st.rank + dense_finish(st);
            }
        }
        // candidate rows: drop stale ids, keep deterministic ascending order
        cand.clear();
        for (i32 r : st.col_rows[c])
            if (st.row_active[r] && SparseElim<Row>::row_has(st.rows[r], static_cast<i32>(c)))
                cand.push_back(r);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        st.col_rows[c].assign(cand.begin(), cand.end());
        if (static_cast<i64>(cand.size()) != cnt) {  // count was stale; resync
            st.col_count[c] = static_cast<i64>(cand.size());
            st.touch_col(c);
            continue;
        }
        i64 piv = cand[0];
        for (i32 r : cand)
            if (SparseElim<Row>::row_len(st.rows[r]) < SparseElim<Row>::row_len(st.rows[piv]))
                piv = r;
        const u32 pinv =
            mod ? static_cast<u32>(mod->inv(entry_value(st.rows[piv], static_cast<i32>(c)))) : 1u;
        for (i32 r : cand) {
            if (r == piv) continue;
            u32 m = 1;
            if (mod)
                m = static_cast<u32>(
                    mod->mul(mod->neg(entry_value(st.rows[r], static_cast<i32>(c))), pinv));
            i64 before = SparseElim<Row>::row_len(st.rows[r]);
            axpy(st.rows[r], st.rows[piv], m, mod, added, removed, merge_scratch);
            st.nnz += SparseElim<Row>::row_len(st.rows[r]) - before;
            for (i32 ac : added) {
                if (!st.col_active[ac]) continue;
                st.col_count[ac]++;
                st.col_rows[ac].push_back(r);
                st.touch_col(ac);
            }
            for (i32 rc : removed) {
                if (!st.col_active[rc]) continue;
                st.col_count[rc]--;
                st.touch_col(rc);
            }
            if (SparseElim<Row>::row_len(st.rows[r]) == 0) {
                st.row_active[r] = 0;
                st.active_rows--;
            }
        }
        st.retire_row(piv, scratch);
        st.col_active[c] = 0;
        st.active_cols--;
        st.rank++;
    }
    return st.rank;
}

template <class Row>
std::vector<i64> active_col_map(SparseElim<Row>& s, std::vector<i64>& act_cols) {
    act_cols.clear();
    for (i64 c = 0; c < s.ncols; ++c)
        if (s.col_active[c] && s.col_count[c] > 0) act_cols.push_back(c);
    std::vector<i64> col_map(s.ncols, -1);
    for (std::size_t k = 0; k < act_cols.size(); ++k) col_map[act_cols[k]] = static_cast<i64>(k);
    return col_map;
}

i64 sparse_rank_gf2(const SparseIntMatrix& m, int threads) {
    SparseElim<F2Row> st;
    st.nrows = m.rows;
    st.ncols = m.cols;
    st.rows.assign(m.rows, {});
    {
        std::vector<i32> cur;  // entries arrive sorted by (r, c)
        std::size_t i = 0;
        while (i < m.entries.size()) {
            i64 r = m.entries[i].r;
            cur.clear();
            while (i < m.entries.size() && m.entries[i].r == r) {
                if (m.entries[i].v & 1) cur.push_back(static_cast<i32>(m.entries[i].c));
                ++i;
            }
            st.rows[r].cols = cur;
        }
    }
    st.init_counts();
    DenseSwitch sw{1.0 / 96.0, 1'600'000'000, 512};
    return run_elimination(st, nullptr, sw, [&](SparseElim<F2Row>& s) -> i64 {
        std::vector<i64> act_cols;
        auto col_map = active_col_map(s, act_cols);
        if (act_cols.empty()) return 0;
        const i64 ac = static_cast<i64>(act_cols.size());
        const i64 words = (ac + 63) / 64;
        std::vector<std::vector<u64>> dense;
        for (i64 r = 0; r < s.nrows; ++r) {
            if (!s.row_active[r] || s.rows[r].cols.empty()) continue;
            std::vector<u64> row(words, 0);
            for (i32 c : s.rows[r].cols) {
                i64 j = col_map[c];
                if (j >= 0) row[j >> 6] |= 1ull << (j & 63);
            }
            dense.push_back(std::move(row));
            s.rows[r] = F2Row{};
        }
        return dense_rank_gf2(dense, ac, threads);
    });
}

i64 sparse_rank_fp(const SparseIntMatrix& m, const Mod& mod, int threads) {
    SparseElim<FpRow> st;
    st.nrows = m.rows;
    st.ncols = m.cols;
    st.rows.assign(m.rows, {});
    {
        std::vector<std::pair<i32, u32>> cur;
        std::size_t i = 0;
        while (i < m.entries.size()) {
            i64 r = m.entries[i].r;
            cur.clear();
            while (i < m.entries.size() && m.entries[i].r == r) {
                i64 v = m.entries[i].v % static_cast<i64>(mod.p);
                if (v < 0) v += static_cast<i64>(mod.p);
                if (v != 0) cur.push_back({static_cast<i32>(m.entries[i].c), static_cast<u32>(v)});
                ++i;
            }
            st.rows[r].ent = cur;
        }
    }
    st.init_counts();
    DenseSwitch sw{1.0 / 16.0, 120'000'000, 256};
    return run_elimination(st, &mod, sw, [&](SparseElim<FpRow>& s) -> i64 {
        std::vector<i64> act_cols;
        auto col_map = active_col_map(s, act_cols);
        if (act_cols.empty()) return 0;
        const i64 ac = static_cast<i64>(act_cols.size());
        i64 nr = 0;
        for (i64 r = 0; r < s.nrows; ++r)
            if (s.row_active[r] && !s.rows[r].ent.empty()) nr++;
        std::vector<u32> dense(static_cast<std::size_t>(nr * ac), 0);
        i64 dr = 0;
        for (i64 r = 0; r < s.nrows; ++r) {
            if (!s.row_active[r] || s.rows[r].ent.empty()) continue;
            for (auto& e : s.rows[r].ent) {
                i64 j = col_map[e.first];
                if (j >= 0) dense[dr * ac + j] = e.second;
            }
            s.rows[r] = FpRow{};
            ++dr;
        }
        return dense_rank_fp(dense, nr, ac, mod, threads);
    });
}

}  // namespace

i64 gfp_rank(const SparseIntMatrix& m, const PrimeField& f, const RankOptions& opts) {
    if (m.entries.empty()) return 0;
    if (f.p == 2) return sparse_rank_gf2(m, opts.threads);
    Mod mod(f.p);
    return sparse_rank_fp(m, mod, opts.threads);
}

std::uint32_t random_prime_stream(u64 seed, int k) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    const u64 lo = 1ull << 29, hi = 1ull << 31;
    const u64 range = hi - lo;
    const u64 bound = (~0ull / range) * range;  // rejection keeps the draw unbiased
    u32 prime = 0;
    for (int i = 0; i <= k; ++i) {
        u64 x;
        do {
            x = rng();
        } while (x >= bound);
        u64 cand = lo + x % range;
        if ((cand & 1) == 0) ++cand;
        while (!is_prime_u64(cand)) {
            cand += 2;
            if (cand >= hi) cand = lo + 1;
        }
        prime = static_cast<u32>(cand);
    }
    return prime;
}

i64 rational_rank(const SparseIntMatrix& m, u64 seed, const RankOptions& opts) {
    if (m.entries.empty()) return 0;
    std::vector<std::pair<u32, i64>> ranks;
    i64 best = -1;
    for (int k = 0;; ++k) {
        if (k > 64) throw InconsistencyError("rational_rank: primes keep disagreeing");
        u32 p = random_prime_stream(seed, k);
        bool seen = false;
        for (auto& pr : ranks)
            if (pr.first == p) seen = true;
        if (seen) continue;
        i64 r = gfp_rank(m, PrimeField(p), opts);
        ranks.push_back({p, r});
        best = std::max(best, r);
        int agree = 0;
        for (auto& pr : ranks)
            if (pr.second == best) ++agree;
        if (ranks.size() >= 2 && agree >= 2) return best;
    }
}

std::vector<std::vector<u32>> gfp_nullspace(const SparseIntMatrix& m, const PrimeField& f) {
    if (m.rows * m.cols > 34'000'000)
        throw BudgetError("gfp_nullspace: matrix too large for dense elimination");
    const i64 nr = m.rows, nc = m.cols;
    Mod mod(f.p);
    std::vector<u32> a(static_cast<std::size_t>(nr * nc), 0);
    for (const auto& e : m.entries) {
        i64 v = e.v % static_cast<i64>(f.p);
        if (v < 0) v += f.p;
        a[e.r * nc + e.c] = static_cast<u32>(v);
    }
    // reduced row echelon form
    std::vector<i64> pivot_col;
    i64 rank = 0;
    for (i64 c = 0; c < nc && rank < nr; ++c) {
        i64 piv = -1;
        for (i64 r = rank; r < nr; ++r)
            if (a[r * nc + c] != 0) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (i64 j = 0; j < nc; ++j) std::swap(a[rank * nc + j], a[piv * nc + j]);
        const u64 inv = mod.inv(a[rank * nc + c]);
        for (i64 j = 0; j < nc; ++j)
            a[rank * nc + j] = static_cast<u32>(mod.mul(a[rank * nc + j], inv));
        for (i64 r = 0; r < nr; ++r) {
            if (r == rank || a[r * nc + c] == 0) continue;
            const u64 mfac = mod.neg(a[r * nc + c]);
            for (i64 j = 0; j < nc; ++j)
                a[r * nc + j] =
                    static_cast<u32>(mod.reduce(a[r * nc + j] + mfac * a[rank * nc + j]));
        }
        pivot_col.push_back(c);
        ++rank;
    }
    std::vector<char> is_pivot(nc, 0);
    for (i64 c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<u32>> basis;
    for (i64 c = 0; c < nc; ++c) {
        if (is_pivot[c]) continue;
        std::vector<u32> vec(nc, 0);
        vec[c] = 1;
        for (i64 r = 0; r < rank; ++r)
            if (a[r * nc + c] != 0) vec[pivot_col[r]] = static_cast<u32>(mod.neg(a[r * nc + c]));
        basis.push_back(std::move(vec));
    }
    return basis;
}

}  // namespace homgrowth
