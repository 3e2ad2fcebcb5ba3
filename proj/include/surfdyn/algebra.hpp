#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "surfdyn/mesh.hpp"

namespace surfdyn::algebra {

// Dense integer matrix with exact entries.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<long long> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    long long& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    long long at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMatrix identity(int n);
};

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y);
bool mat_equal(const IntMatrix& x, const IntMatrix& y);
// Exact determinant (fraction-free Bareiss, 128-bit intermediates).
long long det_bareiss(IntMatrix m);
// Rank over the rationals.
int rank_over_q(IntMatrix m);

// Smith normal form D = U * A * V with U, V unimodular and the diagonal of D
// a divisibility chain d1 | d2 | ...
struct SnfResult {
    IntMatrix u, d, v;
    IntMatrix u_inv, v_inv;  // integer inverses, maintained alongside
    int rank = 0;
    std::vector<long long> divisors() const;  // nonzero diagonal entries
};
SnfResult smith_normal_form(const IntMatrix& a);

// Solve A x = b over the integers via a precomputed SNF of A.
// Returns false when no integer solution exists.
bool snf_solve(const SnfResult& s, const std::vector<long long>& b,
               std::vector<long long>* x);

// Bit-packed GF(2) matrix.
struct Z2Matrix {
    int rows = 0;
    int cols = 0;
    int words = 0;
    std::vector<uint64_t> bits;

    Z2Matrix() = default;
    Z2Matrix(int r, int c)
        : rows(r), cols(c), words((c + 63) / 64), bits(static_cast<size_t>(r) * words, 0) {}

    bool get(int i, int j) const {
        return (bits[static_cast<size_t>(i) * words + j / 64] >> (j % 64)) & 1u;
    }
    void set(int i, int j, bool v) {
        uint64_t& w = bits[static_cast<size_t>(i) * words + j / 64];
        uint64_t m = 1ULL << (j % 64);
        if (v)
            w |= m;
        else
            w &= ~m;
    }
    void xor_row(int dst, int src) {
        for (int w = 0; w < words; ++w)
            bits[static_cast<size_t>(dst) * words + w] ^= bits[static_cast<size_t>(src) * words + w];
    }
};

int z2_rank(Z2Matrix m);

enum class Coeff { Z, Z2 };

// Coboundary data of a simplicial 2-complex (a mesh or a subcomplex of one).
struct ChainData {
    int nv = 0, ne = 0, nt = 0;
    IntMatrix delta0;  // ne x nv, entries +-1
    IntMatrix delta1;  // nt x ne, entries +-1
    std::vector<int> vert_ids, edge_ids, tri_ids;    // local -> parent
    std::vector<int> vert_local, edge_local, tri_local;  // parent -> local or -1
};
ChainData chain_data(const mesh::TriMesh& m);
ChainData chain_data(const mesh::TriMesh& m, const mesh::Subcomplex& s);

struct CohomologyResult {
    Coeff coeff = Coeff::Z2;
    std::array<int, 3> betti{0, 0, 0};
    std::array<std::vector<long long>, 3> torsion;  // divisors > 1, Z only
    // Representative cocycles for an H^1 basis, indexed by local edge id.
    std::vector<std::vector<long long>> h1_reps;
};
CohomologyResult cohomology(const ChainData& c, Coeff coeff);

// Matrix of the inclusion-induced map H^1(M) -> H^1(K) in chosen bases.
struct InducedMap {
    Coeff coeff = Coeff::Z2;
    int b1_domain = 0;    // b1 of the ambient surface
    int b1_codomain = 0;  // b1 of the subcomplex
    IntMatrix matrix;     // b1_codomain x b1_domain
    int kernel_rank = 0;
    int image_rank = 0;
    int cokernel_rank = 0;
};
InducedMap induced_map(const mesh::TriMesh& m, const mesh::Subcomplex& k, Coeff coeff);
bool is_monomorphism(const InducedMap& im);
int kernel_rank(const InducedMap& im);
int image_rank(const InducedMap& im);

// Inclusion sub -> sup of subcomplexes of the same mesh: rank data of the
// induced map in one degree; over Z2.
struct DegreeMapRanks {
    int b_sup = 0;
    int b_sub = 0;
    int rank = 0;
    bool isomorphism() const { return b_sup == b_sub && rank == b_sup; }
};
DegreeMapRanks induced_map_degree(const mesh::TriMesh& m, const mesh::Subcomplex& sup,
                                  const mesh::Subcomplex& sub, int degree);
bool inclusion_induces_isomorphisms(const mesh::TriMesh& m, const mesh::Subcomplex& sup,
                                    const mesh::Subcomplex& sub);

}  // namespace surfdyn::algebra
