#include "surfdyn/algebra.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>

namespace surfdyn::algebra {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mat_mul shape mismatch");
    IntMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            long long v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

bool mat_equal(const IntMatrix& x, const IntMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

long long det_bareiss(IntMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
    int n = m.rows;
    std::vector<__int128> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i * n + j] = m.at(i, j);
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k * n + k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i * n + k] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
        prev = a[k * n + k];
    }
    return static_cast<long long>(sign * a[(n - 1) * n + (n - 1)]);
}

int rank_over_q(IntMatrix m) {
    int r = m.rows, c = m.cols;
    if (r == 0 || c == 0) return 0;
    std::vector<__int128> a(static_cast<size_t>(r) * c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) a[i * c + j] = m.at(i, j);
    __int128 prev = 1;
    int rank = 0;
    for (int col = 0; col < c && rank < r; ++col) {
        int p = -1;
        for (int i = rank; i < r; ++i)
            if (a[i * c + col] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != rank)
            for (int j = 0; j < c; ++j) std::swap(a[rank * c + j], a[p * c + j]);
        for (int i = rank + 1; i < r; ++i)
            for (int j = col + 1; j < c; ++j)
                a[i * c + j] =
                    (a[i * c + j] * a[rank * c + col] - a[i * c + col] * a[rank * c + j]) / prev;
        for (int i = rank + 1; i < r; ++i) a[i * c + col] = 0;
        prev = a[rank * c + col];
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

namespace {

// Round-to-nearest integer division; keeps remainders (and transform entries)
// small during the reduction.
long long div_nearest(long long a, long long b) {
    long long q = a / b;
    long long rem = a - q * b;
    if (std::llabs(rem) * 2 > std::llabs(b)) q += ((rem < 0) == (b < 0)) ? 1 : -1;
    return q;
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& a) {
    int r = a.rows, c = a.cols;
    SnfResult s;
    s.u = IntMatrix::identity(r);
    s.u_inv = IntMatrix::identity(r);
    s.v = IntMatrix::identity(c);
    s.v_inv = IntMatrix::identity(c);
    s.d = a;
    IntMatrix& D = s.d;

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < c; ++k) std::swap(D.at(i, k), D.at(j, k));
        for (int k = 0; k < r; ++k) std::swap(s.u.at(i, k), s.u.at(j, k));
        for (int k = 0; k < r; ++k) std::swap(s.u_inv.at(k, i), s.u_inv.at(k, j));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < r; ++k) std::swap(D.at(k, i), D.at(k, j));
        for (int k = 0; k < c; ++k) std::swap(s.v.at(k, i), s.v.at(k, j));
        for (int k = 0; k < c; ++k) std::swap(s.v_inv.at(i, k), s.v_inv.at(j, k));
    };
    // row_dst -= q * row_src
    auto row_axpy = [&](int dst, int src, long long q) {
        if (q == 0) return;
        for (int k = 0; k < c; ++k) D.at(dst, k) -= q * D.at(src, k);
        for (int k = 0; k < r; ++k) s.u.at(dst, k) -= q * s.u.at(src, k);
        for (int k = 0; k < r; ++k) s.u_inv.at(k, src) += q * s.u_inv.at(k, dst);
    };
    // col_dst -= q * col_src
    auto col_axpy = [&](int dst, int src, long long q) {
        if (q == 0) return;
        for (int k = 0; k < r; ++k) D.at(k, dst) -= q * D.at(k, src);
        for (int k = 0; k < c; ++k) s.v.at(k, dst) -= q * s.v.at(k, src);
        for (int k = 0; k < c; ++k) s.v_inv.at(src, k) += q * s.v_inv.at(dst, k);
    };
    auto negate_row = [&](int i) {
        for (int k = 0; k < c; ++k) D.at(i, k) = -D.at(i, k);
        for (int k = 0; k < r; ++k) s.u.at(i, k) = -s.u.at(i, k);
        for (int k = 0; k < r; ++k) s.u_inv.at(k, i) = -s.u_inv.at(k, i);
    };

    int mn = std::min(r, c);
    for (int t = 0; t < mn; ++t) {
        bool done = false;
        while (!done) {
            // Global minimum-magnitude pivot in the working block.
            int pi = -1, pj = -1;
            long long best = 0;
            for (int i = t; i < r && best != 1; ++i)
                for (int j = t; j < c; ++j) {
                    long long v = std::llabs(D.at(i, j));
                    if (v != 0 && (pi < 0 || v < best)) {
                        pi = i;
                        pj = j;
                        best = v;
                        if (best == 1) break;
                    }
                }
            if (pi < 0) {
                done = true;
                break;
            }
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool cleared = true;
            for (int i = t + 1; i < r; ++i) {
                if (D.at(i, t) == 0) continue;
                row_axpy(i, t, div_nearest(D.at(i, t), D.at(t, t)));
                if (D.at(i, t) != 0) cleared = false;
            }
            for (int j = t + 1; j < c; ++j) {
                if (D.at(t, j) == 0) continue;
                col_axpy(j, t, div_nearest(D.at(t, j), D.at(t, t)));
                if (D.at(t, j) != 0) cleared = false;
            }
            if (!cleared) continue;  // smaller remainders exist; re-pick pivot
            bool divisible = true;
            for (int i = t + 1; i < r && divisible; ++i)
                for (int j = t + 1; j < c && divisible; ++j)
                    if (D.at(i, j) % D.at(t, t) != 0) {
                        row_axpy(t, i, -1);
                        divisible = false;
                    }
            if (divisible) {
                if (D.at(t, t) < 0) negate_row(t);
                break;
            }
        }
        if (done) break;
    }
    s.rank = 0;
    for (int i = 0; i < mn; ++i)
        if (D.at(i, i) != 0) ++s.rank;
    return s;
}

std::vector<long long> SnfResult::divisors() const {
    std::vector<long long> out;
    int mn = std::min(d.rows, d.cols);
    for (int i = 0; i < mn; ++i)
        if (d.at(i, i) != 0) out.push_back(d.at(i, i));
    return out;
}

bool snf_solve(const SnfResult& s, const std::vector<long long>& b,
               std::vector<long long>* x) {
    int r = s.d.rows, c = s.d.cols;
    if (static_cast<int>(b.size()) != r) throw std::invalid_argument("snf_solve rhs size");
    std::vector<long long> ub(r, 0);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k) ub[i] += s.u.at(i, k) * b[k];
    std::vector<long long> y(c, 0);
    int mn = std::min(r, c);
    for (int i = 0; i < r; ++i) {
        long long di = i < mn ? s.d.at(i, i) : 0;
        if (di == 0) {
            if (ub[i] != 0) return false;
        } else {
            if (ub[i] % di != 0) return false;
            y[i] = ub[i] / di;
        }
    }
    x->assign(c, 0);
    for (int i = 0; i < c; ++i)
        for (int k = 0; k < c; ++k) (*x)[i] += s.v.at(i, k) * y[k];
    return true;
}

// ---------------------------------------------------------------------------
// GF(2) helpers
// ---------------------------------------------------------------------------

namespace {

struct Z2Vec {
    int n = 0;
    std::vector<uint64_t> w;
    explicit Z2Vec(int n_ = 0) : n(n_), w((n_ + 63) / 64, 0) {}
    bool get(int i) const { return (w[i / 64] >> (i % 64)) & 1u; }
    void set(int i) { w[i / 64] |= 1ULL << (i % 64); }
    void operator^=(const Z2Vec& o) {
        for (size_t k = 0; k < w.size(); ++k) w[k] ^= o.w[k];
    }
    int leading() const {
        for (size_t k = 0; k < w.size(); ++k)
            if (w[k]) return static_cast<int>(k * 64 + __builtin_ctzll(w[k]));
        return -1;
    }
};

struct Z2Basis {
    std::map<int, Z2Vec> by_lead;
    // Reduce v against the basis; keep it if nonzero. True when inserted.
    bool insert(Z2Vec v) {
        int l = v.leading();
        while (l >= 0) {
            auto it = by_lead.find(l);
            if (it == by_lead.end()) {
                by_lead.emplace(l, std::move(v));
                return true;
            }
            v ^= it->second;
            l = v.leading();
        }
        return false;
    }
};

Z2Matrix to_z2(const IntMatrix& m) {
    Z2Matrix z(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) % 2 != 0) z.set(i, j, true);
    return z;
}

std::vector<int> z2_rref(Z2Matrix& m) {
    std::vector<int> pivots;
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int p = -1;
        for (int i = rank; i < m.rows; ++i)
            if (m.get(i, col)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != rank)
            for (int w = 0; w < m.words; ++w)
                std::swap(m.bits[static_cast<size_t>(p) * m.words + w],
                          m.bits[static_cast<size_t>(rank) * m.words + w]);
        for (int i = 0; i < m.rows; ++i)
            if (i != rank && m.get(i, col)) m.xor_row(i, rank);
        pivots.push_back(col);
        ++rank;
    }
    return pivots;
}

// Kernel basis of an integer matrix reduced mod 2; vectors of length cols.
std::vector<Z2Vec> z2_kernel_basis(const IntMatrix& mat) {
    Z2Matrix m = to_z2(mat);
    std::vector<int> pivots = z2_rref(m);
    std::vector<char> is_pivot(mat.cols, 0);
    for (int p : pivots) is_pivot[p] = 1;
    std::vector<Z2Vec> basis;
    for (int f = 0; f < mat.cols; ++f) {
        if (is_pivot[f]) continue;
        Z2Vec v(mat.cols);
        v.set(f);
        for (size_t i = 0; i < pivots.size(); ++i)
            if (m.get(static_cast<int>(i), f)) v.set(pivots[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

int z2_rank(Z2Matrix m) {
    return static_cast<int>(z2_rref(m).size());
}

// ---------------------------------------------------------------------------
// Chain data
// ---------------------------------------------------------------------------

ChainData chain_data(const mesh::TriMesh& m) {
    return chain_data(m, mesh::Subcomplex::whole(m));
}

ChainData chain_data(const mesh::TriMesh& m, const mesh::Subcomplex& s) {
    ChainData c;
    c.vert_local.assign(m.nv, -1);
    c.edge_local.assign(m.edges.size(), -1);
    c.tri_local.assign(m.tris.size(), -1);
    for (int v = 0; v < m.nv; ++v)
        if (s.verts[v]) {
            c.vert_local[v] = static_cast<int>(c.vert_ids.size());
            c.vert_ids.push_back(v);
        }
    for (size_t e = 0; e < m.edges.size(); ++e)
        if (s.edges[e]) {
            c.edge_local[e] = static_cast<int>(c.edge_ids.size());
            c.edge_ids.push_back(static_cast<int>(e));
        }
    for (size_t t = 0; t < m.tris.size(); ++t)
        if (s.tris[t]) {
            c.tri_local[t] = static_cast<int>(c.tri_ids.size());
            c.tri_ids.push_back(static_cast<int>(t));
        }
    c.nv = static_cast<int>(c.vert_ids.size());
    c.ne = static_cast<int>(c.edge_ids.size());
    c.nt = static_cast<int>(c.tri_ids.size());
    c.delta0 = IntMatrix(c.ne, c.nv);
    for (int el = 0; el < c.ne; ++el) {
        const auto& e = m.edges[c.edge_ids[el]];
        c.delta0.at(el, c.vert_local[e[0]]) = -1;
        c.delta0.at(el, c.vert_local[e[1]]) = 1;
    }
    c.delta1 = IntMatrix(c.nt, c.ne);
    for (int tl = 0; tl < c.nt; ++tl) {
        int t = c.tri_ids[tl];
        for (int j = 0; j < 3; ++j) {
            int u = m.tris[t][j];
            int e = m.tri_edges[t][j];
            int sign = (u == m.edges[e][0]) ? 1 : -1;  // +1 when traversed min->max
            c.delta1.at(tl, c.edge_local[e]) += sign;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Cohomology
// ---------------------------------------------------------------------------

namespace {

std::vector<Z2Vec> z2_h1_reps(const ChainData& c, int expected) {
    // Basis of ker(delta1 mod 2) complementary to the column space of delta0.
    Z2Basis basis;
    for (int v = 0; v < c.nv; ++v) {
        Z2Vec col(c.ne);
        for (int e = 0; e < c.ne; ++e)
            if (c.delta0.at(e, v) % 2 != 0) col.set(e);
        basis.insert(std::move(col));
    }
    std::vector<Z2Vec> reps;
    for (Z2Vec& k : z2_kernel_basis(c.delta1)) {
        Z2Vec copy = k;
        if (basis.insert(std::move(copy))) reps.push_back(std::move(k));
    }
    if (static_cast<int>(reps.size()) != expected)
        throw std::runtime_error("H1 representative count mismatch");
    return reps;
}

}  // namespace

CohomologyResult cohomology(const ChainData& c, Coeff coeff) {
    CohomologyResult out;
    out.coeff = coeff;
    if (c.nv == 0) return out;
    if (coeff == Coeff::Z2) {
        Z2Matrix d0 = to_z2(c.delta0);
        Z2Matrix d1 = to_z2(c.delta1);
        int r0 = z2_rank(std::move(d0));
        int r1 = z2_rank(std::move(d1));
        out.betti = {c.nv - r0, (c.ne - r1) - r0, c.nt - r1};
        for (const Z2Vec& v : z2_h1_reps(c, out.betti[1])) {
            std::vector<long long> rep(c.ne, 0);
            for (int e = 0; e < c.ne; ++e) rep[e] = v.get(e) ? 1 : 0;
            out.h1_reps.push_back(std::move(rep));
        }
        return out;
    }
    // Integer coefficients via Smith normal form.
    SnfResult s0 = smith_normal_form(c.delta0);
    SnfResult s1 = smith_normal_form(c.delta1);
    int r0 = s0.rank, r1 = s1.rank;
    out.betti = {c.nv - r0, (c.ne - r1) - r0, c.nt - r1};
    for (long long d : s1.divisors())
        if (d > 1) out.torsion[2].push_back(d);
    // The kernel lattice of delta1 is spanned by columns r1.. of V1. Express
    // the delta0 image in those coordinates and quotient.
    int kdim = c.ne - r1;
    IntMatrix bz(kdim, c.nv);
    for (int v = 0; v < c.nv; ++v) {
        std::vector<long long> y(c.ne, 0);
        for (int i = 0; i < c.ne; ++i)
            for (int e = 0; e < c.ne; ++e) y[i] += s1.v_inv.at(i, e) * c.delta0.at(e, v);
        for (int i = 0; i < r1; ++i)
            if (y[i] != 0) throw std::runtime_error("delta0 image not inside ker delta1");
        for (int i = 0; i < kdim; ++i) bz.at(i, v) = y[r1 + i];
    }
    SnfResult sq = smith_normal_form(bz);
    for (long long d : sq.divisors())
        if (d > 1) out.torsion[1].push_back(d);
    // Free generators of the quotient, mapped back through the kernel basis.
    for (int i = sq.rank; i < kdim; ++i) {
        std::vector<long long> rep(c.ne, 0);
        for (int e = 0; e < c.ne; ++e) {
            long long acc = 0;
            for (int k = 0; k < kdim; ++k) acc += s1.v.at(e, r1 + k) * sq.u_inv.at(k, i);
            rep[e] = acc;
        }
        out.h1_reps.push_back(std::move(rep));
    }
    if (static_cast<int>(out.h1_reps.size()) != out.betti[1])
        throw std::runtime_error("integer H1 representative count mismatch");
    return out;
}

// ---------------------------------------------------------------------------
// Induced maps
// ---------------------------------------------------------------------------

namespace {

// Solve A x = b over GF(2) for several right-hand sides; A given by columns.
// Throws when inconsistent. Returns one solution per rhs.
std::vector<std::vector<char>> z2_solve_columns(const std::vector<Z2Vec>& a_cols, int nrows,
                                                const std::vector<Z2Vec>& rhs) {
    int nc = static_cast<int>(a_cols.size());
    int nr = static_cast<int>(rhs.size());
    Z2Matrix m(nrows, nc + nr);
    for (int j = 0; j < nc; ++j)
        for (int i = 0; i < nrows; ++i)
            if (a_cols[j].get(i)) m.set(i, j, true);
    for (int j = 0; j < nr; ++j)
        for (int i = 0; i < nrows; ++i)
            if (rhs[j].get(i)) m.set(i, nc + j, true);
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < nc && rank < nrows; ++col) {
        int p = -1;
        for (int i = rank; i < nrows; ++i)
            if (m.get(i, col)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != rank)
            for (int w = 0; w < m.words; ++w)
                std::swap(m.bits[static_cast<size_t>(p) * m.words + w],
                          m.bits[static_cast<size_t>(rank) * m.words + w]);
        for (int i = 0; i < nrows; ++i)
            if (i != rank && m.get(i, col)) m.xor_row(i, rank);
        pivot_col.push_back(col);
        ++rank;
    }
    for (int i = rank; i < nrows; ++i)
        for (int j = 0; j < nr; ++j)
            if (m.get(i, nc + j)) throw std::runtime_error("inconsistent GF(2) system");
    std::vector<std::vector<char>> xs(nr, std::vector<char>(nc, 0));
    for (int j = 0; j < nr; ++j)
        for (int i = 0; i < rank; ++i)
            if (m.get(i, nc + j)) xs[j][pivot_col[i]] = 1;
    return xs;
}

int z2_rank_of_int_matrix(const IntMatrix& m) {
    return z2_rank(to_z2(m));
}

}  // namespace

InducedMap induced_map(const mesh::TriMesh& m, const mesh::Subcomplex& k, Coeff coeff) {
    ChainData cm = chain_data(m);
    ChainData ck = chain_data(m, k);
    CohomologyResult hm = cohomology(cm, coeff);
    CohomologyResult hk = cohomology(ck, coeff);
    InducedMap out;
    out.coeff = coeff;
    out.b1_domain = hm.betti[1];
    out.b1_codomain = hk.betti[1];
    out.matrix = IntMatrix(out.b1_codomain, out.b1_domain);

    if (out.b1_domain > 0) {
        if (coeff == Coeff::Z2) {
            std::vector<Z2Vec> a_cols;
            for (const auto& rep : hk.h1_reps) {
                Z2Vec col(ck.ne);
                for (int e = 0; e < ck.ne; ++e)
                    if (rep[e] % 2 != 0) col.set(e);
                a_cols.push_back(std::move(col));
            }
            for (int v = 0; v < ck.nv; ++v) {
                Z2Vec col(ck.ne);
                for (int e = 0; e < ck.ne; ++e)
                    if (ck.delta0.at(e, v) % 2 != 0) col.set(e);
                a_cols.push_back(std::move(col));
            }
            std::vector<Z2Vec> rhs;
            for (const auto& rep : hm.h1_reps) {
                Z2Vec r(ck.ne);
                for (int e = 0; e < ck.ne; ++e)
                    if (rep[ck.edge_ids[e]] % 2 != 0) r.set(e);
                rhs.push_back(std::move(r));
            }
            auto xs = z2_solve_columns(a_cols, ck.ne, rhs);
            for (int j = 0; j < out.b1_domain; ++j)
                for (int i = 0; i < out.b1_codomain; ++i) out.matrix.at(i, j) = xs[j][i];
        } else {
            IntMatrix a(ck.ne, out.b1_codomain + ck.nv);
            for (int i = 0; i < out.b1_codomain; ++i)
                for (int e = 0; e < ck.ne; ++e) a.at(e, i) = hk.h1_reps[i][e];
            for (int v = 0; v < ck.nv; ++v)
                for (int e = 0; e < ck.ne; ++e) a.at(e, out.b1_codomain + v) = ck.delta0.at(e, v);
            SnfResult s = smith_normal_form(a);
            for (int j = 0; j < out.b1_domain; ++j) {
                std::vector<long long> b(ck.ne), x;
                for (int e = 0; e < ck.ne; ++e) b[e] = hm.h1_reps[j][ck.edge_ids[e]];
                if (!snf_solve(s, b, &x))
                    throw std::runtime_error("restricted cocycle not expressible in K basis");
                for (int i = 0; i < out.b1_codomain; ++i) out.matrix.at(i, j) = x[i];
            }
        }
    }
    out.image_rank =
        coeff == Coeff::Z2 ? z2_rank_of_int_matrix(out.matrix) : rank_over_q(out.matrix);
    out.kernel_rank = out.b1_domain - out.image_rank;
    out.cokernel_rank = out.b1_codomain - out.image_rank;
    return out;
}

bool is_monomorphism(const InducedMap& im) { return im.kernel_rank == 0; }
int kernel_rank(const InducedMap& im) { return im.kernel_rank; }
int image_rank(const InducedMap& im) { return im.image_rank; }

namespace {

// GF(2) representatives of H^d, d in {0,1,2}.
std::vector<Z2Vec> z2_degree_reps(const ChainData& c, int degree, int betti) {
    if (degree == 1) return z2_h1_reps(c, betti);
    if (degree == 0) {
        std::vector<Z2Vec> reps = z2_kernel_basis(c.delta0);
        if (static_cast<int>(reps.size()) != betti)
            throw std::runtime_error("H0 representative count mismatch");
        return reps;
    }
    Z2Basis basis;
    for (int e = 0; e < c.ne; ++e) {
        Z2Vec col(c.nt);
        for (int t = 0; t < c.nt; ++t)
            if (c.delta1.at(t, e) % 2 != 0) col.set(t);
        basis.insert(std::move(col));
    }
    std::vector<Z2Vec> reps;
    for (int t = 0; t < c.nt && static_cast<int>(reps.size()) < betti; ++t) {
        Z2Vec v(c.nt);
        v.set(t);
        Z2Vec copy = v;
        if (basis.insert(std::move(copy))) reps.push_back(std::move(v));
    }
    if (static_cast<int>(reps.size()) != betti)
        throw std::runtime_error("H2 representative count mismatch");
    return reps;
}

}  // namespace

DegreeMapRanks induced_map_degree(const mesh::TriMesh& m, const mesh::Subcomplex& sup,
                                  const mesh::Subcomplex& sub, int degree) {
    ChainData cs = chain_data(m, sup);
    ChainData cb = chain_data(m, sub);
    CohomologyResult hs = cohomology(cs, Coeff::Z2);
    CohomologyResult hb = cohomology(cb, Coeff::Z2);
    DegreeMapRanks out;
    out.b_sup = hs.betti[degree];
    out.b_sub = hb.betti[degree];
    if (out.b_sup == 0) return out;

    int nsimp_sub = degree == 0 ? cb.nv : degree == 1 ? cb.ne : cb.nt;
    const std::vector<int>& sub_ids =
        degree == 0 ? cb.vert_ids : degree == 1 ? cb.edge_ids : cb.tri_ids;
    const std::vector<int>& sup_local =
        degree == 0 ? cs.vert_local : degree == 1 ? cs.edge_local : cs.tri_local;

    std::vector<Z2Vec> sup_reps = z2_degree_reps(cs, degree, out.b_sup);
    std::vector<Z2Vec> sub_reps = z2_degree_reps(cb, degree, out.b_sub);

    std::vector<Z2Vec> a_cols = sub_reps;
    if (degree == 1) {
        for (int v = 0; v < cb.nv; ++v) {
            Z2Vec col(cb.ne);
            for (int e = 0; e < cb.ne; ++e)
                if (cb.delta0.at(e, v) % 2 != 0) col.set(e);
            a_cols.push_back(std::move(col));
        }
    } else if (degree == 2) {
        for (int e = 0; e < cb.ne; ++e) {
            Z2Vec col(cb.nt);
            for (int t = 0; t < cb.nt; ++t)
                if (cb.delta1.at(t, e) % 2 != 0) col.set(t);
            a_cols.push_back(std::move(col));
        }
    }
    std::vector<Z2Vec> rhs;
    for (const Z2Vec& rep : sup_reps) {
        Z2Vec r(nsimp_sub);
        for (int i = 0; i < nsimp_sub; ++i) {
            int sup_idx = sup_local[sub_ids[i]];
            if (sup_idx >= 0 && rep.get(sup_idx)) r.set(i);
        }
        rhs.push_back(std::move(r));
    }
    auto xs = z2_solve_columns(a_cols, nsimp_sub, rhs);
    IntMatrix coords(out.b_sub, out.b_sup);
    for (int j = 0; j < out.b_sup; ++j)
        for (int i = 0; i < out.b_sub; ++i) coords.at(i, j) = xs[j][i];
    out.rank = z2_rank_of_int_matrix(coords);
    return out;
}

bool inclusion_induces_isomorphisms(const mesh::TriMesh& m, const mesh::Subcomplex& sup,
                                    const mesh::Subcomplex& sub) {
    for (int d = 0; d < 3; ++d)
        if (!induced_map_degree(m, sup, sub, d).isomorphism()) return false;
    return true;
}

}  // namespace surfdyn::algebra
