#include "surfdyn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace surfdyn::mesh {

namespace {

uint64_t fnv1a(uint64_t h, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xFFu;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<uint64_t>(u) << 32) | static_cast<uint64_t>(v);
}

}  // namespace

void TriMesh::finalize() {
    edges.clear();
    tri_edges.assign(tris.size(), {-1, -1, -1});
    std::unordered_map<uint64_t, int> edge_ids;
    edge_ids.reserve(tris.size() * 2);
    for (size_t t = 0; t < tris.size(); ++t) {
        for (int j = 0; j < 3; ++j) {
            int u = tris[t][j];
            int v = tris[t][(j + 1) % 3];
            uint64_t key = edge_key(u, v);
            auto it = edge_ids.find(key);
            int id;
            if (it == edge_ids.end()) {
                id = static_cast<int>(edges.size());
                edge_ids.emplace(key, id);
                edges.push_back({std::min(u, v), std::max(u, v)});
            } else {
                id = it->second;
            }
            tri_edges[t][j] = id;
        }
    }
    edge_tris.assign(edges.size(), {-1, -1});
    for (size_t t = 0; t < tris.size(); ++t) {
        for (int j = 0; j < 3; ++j) {
            auto& et = edge_tris[tri_edges[t][j]];
            if (et[0] < 0) {
                et[0] = static_cast<int>(t);
            } else if (et[1] < 0) {
                et[1] = static_cast<int>(t);
            } else {
                throw std::runtime_error("edge incident to more than two triangles");
            }
        }
    }
    tri_neighbors.assign(tris.size(), {-1, -1, -1});
    for (size_t t = 0; t < tris.size(); ++t) {
        for (int j = 0; j < 3; ++j) {
            const auto& et = edge_tris[tri_edges[t][j]];
            tri_neighbors[t][j] = (et[0] == static_cast<int>(t)) ? et[1] : et[0];
        }
    }
}

bool TriMesh::is_closed() const {
    for (const auto& et : edge_tris)
        if (et[1] < 0) return false;
    return true;
}

bool TriMesh::is_closed_orientable_connected(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (const auto& et : edge_tris)
        if (et[0] < 0 || et[1] < 0) return fail("edge with fewer than two triangles");
    // Orientation: each edge must be traversed in opposite directions by its
    // two triangles.
    for (size_t e = 0; e < edges.size(); ++e) {
        int dir_count[2] = {0, 0};
        for (int s = 0; s < 2; ++s) {
            int t = edge_tris[e][s];
            for (int j = 0; j < 3; ++j) {
                int u = tris[t][j];
                int v = tris[t][(j + 1) % 3];
                if (edge_key(u, v) == edge_key(edges[e][0], edges[e][1]) &&
                    tri_edges[t][j] == static_cast<int>(e)) {
                    dir_count[u == edges[e][0] ? 0 : 1]++;
                }
            }
        }
        if (dir_count[0] != 1 || dir_count[1] != 1)
            return fail("inconsistent orientation across an edge");
    }
    // Connectivity of the 1-skeleton.
    if (nv == 0) return fail("empty mesh");
    std::vector<char> seen(nv, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    std::vector<std::vector<int>> adj(nv);
    for (const auto& e : edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                count++;
                q.push(v);
            }
    }
    if (count != nv) return fail("1-skeleton not connected");
    return true;
}

int TriMesh::genus() const {
    std::string why;
    if (!is_closed_orientable_connected(&why))
        throw std::runtime_error("genus requires a closed orientable surface: " + why);
    int chi = euler_characteristic();
    if ((2 - chi) % 2 != 0) throw std::runtime_error("odd Euler characteristic");
    return (2 - chi) / 2;
}

std::vector<int> TriMesh::boundary_edge_ids() const {
    std::vector<int> out;
    for (size_t e = 0; e < edges.size(); ++e)
        if (edge_tris[e][1] < 0) out.push_back(static_cast<int>(e));
    return out;
}

std::vector<std::vector<int>> TriMesh::boundary_cycles() const {
    // Directed boundary edges, direction induced by the unique triangle.
    std::map<int, int> succ;  // from vertex -> to vertex
    for (size_t t = 0; t < tris.size(); ++t) {
        for (int j = 0; j < 3; ++j) {
            if (tri_neighbors[t][j] < 0) {
                int u = tris[t][j];
                int v = tris[t][(j + 1) % 3];
                succ[u] = v;
            }
        }
    }
    std::vector<std::vector<int>> cycles;
    std::map<int, char> used;
    for (const auto& [start, _] : succ) {
        if (used.count(start)) continue;
        std::vector<int> cyc;
        int v = start;
        while (!used.count(v)) {
            used[v] = 1;
            cyc.push_back(v);
            auto it = succ.find(v);
            if (it == succ.end()) throw std::runtime_error("broken boundary cycle");
            v = it->second;
        }
        // Rotate so the least vertex comes first.
        auto mn = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), mn, cyc.end());
        cycles.push_back(std::move(cyc));
    }
    std::sort(cycles.begin(), cycles.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return cycles;
}

int TriMesh::edge_id(int u, int v) const {
    if (u > v) std::swap(u, v);
    for (size_t e = 0; e < edges.size(); ++e)
        if (edges[e][0] == u && edges[e][1] == v) return static_cast<int>(e);
    return -1;
}

uint64_t TriMesh::canonical_hash() const {
    // Weisfeiler-Leman style refinement on the triangle adjacency graph,
    // combined with the vertex degree multiset. Invariant under relabeling.
    std::vector<uint64_t> color(tris.size(), 0x9e3779b97f4a7c15ULL);
    for (int round = 0; round < 3; ++round) {
        std::vector<uint64_t> next(tris.size());
        for (size_t t = 0; t < tris.size(); ++t) {
            std::array<uint64_t, 3> nb{};
            for (int j = 0; j < 3; ++j) {
                int n = tri_neighbors[t][j];
                nb[j] = n < 0 ? 0x1234ULL : color[n];
            }
            std::sort(nb.begin(), nb.end());
            uint64_t h = fnv1a(1469598103934665603ULL, color[t]);
            for (auto v : nb) h = fnv1a(h, v);
            next[t] = h;
        }
        color = std::move(next);
    }
    std::sort(color.begin(), color.end());
    uint64_t h = 1469598103934665603ULL;
    h = fnv1a(h, static_cast<uint64_t>(nv));
    h = fnv1a(h, edges.size());
    h = fnv1a(h, tris.size());
    for (auto c : color) h = fnv1a(h, c);
    std::vector<int> deg(nv, 0);
    for (const auto& e : edges) {
        deg[e[0]]++;
        deg[e[1]]++;
    }
    std::sort(deg.begin(), deg.end());
    for (int d : deg) h = fnv1a(h, static_cast<uint64_t>(d));
    return h;
}

// ---------------------------------------------------------------------------
// Subcomplex
// ---------------------------------------------------------------------------

Subcomplex Subcomplex::empty(const TriMesh& m) {
    Subcomplex s;
    s.verts.assign(m.nv, 0);
    s.edges.assign(m.edges.size(), 0);
    s.tris.assign(m.tris.size(), 0);
    return s;
}

Subcomplex Subcomplex::whole(const TriMesh& m) {
    Subcomplex s;
    s.verts.assign(m.nv, 1);
    s.edges.assign(m.edges.size(), 1);
    s.tris.assign(m.tris.size(), 1);
    return s;
}

Subcomplex Subcomplex::from_triangles(const TriMesh& m, const std::vector<int>& tri_ids) {
    Subcomplex s = empty(m);
    for (int t : tri_ids) s.add_triangle(m, t);
    return s;
}

void Subcomplex::add_triangle(const TriMesh& m, int t) {
    tris[t] = 1;
    for (int j = 0; j < 3; ++j) {
        edges[m.tri_edges[t][j]] = 1;
        verts[m.tris[t][j]] = 1;
    }
}

void Subcomplex::add_edge(const TriMesh& m, int e) {
    edges[e] = 1;
    verts[m.edges[e][0]] = 1;
    verts[m.edges[e][1]] = 1;
}

int Subcomplex::tri_count() const {
    return static_cast<int>(std::count(tris.begin(), tris.end(), 1));
}

bool Subcomplex::is_face_closed(const TriMesh& m) const {
    for (size_t t = 0; t < tris.size(); ++t) {
        if (!tris[t]) continue;
        for (int j = 0; j < 3; ++j)
            if (!edges[m.tri_edges[t][j]] || !verts[m.tris[t][j]]) return false;
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        if (!edges[e]) continue;
        if (!verts[m.edges[e][0]] || !verts[m.edges[e][1]]) return false;
    }
    return true;
}

std::vector<int> Subcomplex::triangle_list() const {
    std::vector<int> out;
    for (size_t t = 0; t < tris.size(); ++t)
        if (tris[t]) out.push_back(static_cast<int>(t));
    return out;
}

Subcomplex star_neighborhood(const TriMesh& m, const Subcomplex& s, int rings) {
    Subcomplex cur = s;
    for (int r = 0; r < rings; ++r) {
        Subcomplex next = cur;
        for (size_t t = 0; t < m.tris.size(); ++t) {
            if (next.tris[t]) continue;
            for (int j = 0; j < 3; ++j) {
                if (cur.verts[m.tris[t][j]]) {
                    next.add_triangle(m, t);
                    break;
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

Subcomplex subcomplex_complement_triangles(const TriMesh& m, const Subcomplex& s) {
    std::vector<int> tri_ids;
    for (size_t t = 0; t < m.tris.size(); ++t)
        if (!s.tris[t]) tri_ids.push_back(static_cast<int>(t));
    return Subcomplex::from_triangles(m, tri_ids);
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace {

constexpr int kCircleVerts = 12;

struct Builder {
    TriMesh m;
    int add_vertex() { return m.nv++; }
    void add_tri(int a, int b, int c, int piece, Vec2 ua, Vec2 ub, Vec2 uc) {
        m.tris.push_back({a, b, c});
        m.tri_piece.push_back(piece);
        m.tri_uv.push_back({ua, ub, uc});
    }
};

struct Loop {
    std::vector<int> ids;
    std::vector<Vec2> uv;
};

Loop make_circle_loop(Builder& b, Vec2 center, double radius, int n) {
    Loop l;
    for (int i = 0; i < n; ++i) {
        double a = kTwoPi * i / n;
        l.ids.push_back(b.add_vertex());
        l.uv.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return l;
}

// Triangulate the annular region between two nested loops (both CCW, both
// star-shaped about `center`) by merging their vertices in angular order.
void stitch_annulus(Builder& b, const Loop& outer, const Loop& inner, Vec2 center,
                    int piece) {
    int na = static_cast<int>(outer.ids.size());
    int nb = static_cast<int>(inner.ids.size());
    auto angles = [&](const Loop& l) {
        std::vector<double> raw(l.ids.size());
        for (size_t i = 0; i < l.ids.size(); ++i)
            raw[i] = wrap_angle(std::atan2(l.uv[i].y - center.y, l.uv[i].x - center.x));
        return raw;
    };
    std::vector<double> ra = angles(outer), rb = angles(inner);
    int sa = static_cast<int>(std::min_element(ra.begin(), ra.end()) - ra.begin());
    std::vector<double> ua(na + 1), ub(nb + 1);
    std::vector<int> ia(na + 1), ib(nb + 1);
    ua[0] = ra[sa];
    ia[0] = sa;
    for (int i = 1; i <= na; ++i) {
        int idx = (sa + i) % na;
        double d = wrap_angle(ra[idx] - ra[(sa + i - 1) % na]);
        if (d <= 0) d += kTwoPi;  // guard against exact duplicates
        ua[i] = ua[i - 1] + d;
        ia[i] = idx;
    }
    // Rotate inner loop so its first unwrapped angle lands in [ua[0], ua[0]+2pi).
    int sb = 0;
    double best = 1e300;
    for (int j = 0; j < nb; ++j) {
        double d = rb[j] - ua[0];
        while (d < 0) d += kTwoPi;
        if (d < best) {
            best = d;
            sb = j;
        }
    }
    ub[0] = ua[0] + best;
    ib[0] = sb;
    for (int j = 1; j <= nb; ++j) {
        int idx = (sb + j) % nb;
        double d = wrap_angle(rb[idx] - rb[(sb + j - 1) % nb]);
        if (d <= 0) d += kTwoPi;
        ub[j] = ub[j - 1] + d;
        ib[j] = idx;
    }
    int i = 0, j = 0;
    while (i < na || j < nb) {
        bool adv_a = (j == nb) || (i < na && ua[i + 1] <= ub[j + 1]);
        int bi = inner.ids[ib[j % nb]];
        Vec2 buv = inner.uv[ib[j % nb]];
        int ai = outer.ids[ia[i % na]];
        Vec2 auv = outer.uv[ia[i % na]];
        if (adv_a) {
            int an = outer.ids[ia[(i + 1) % na]];
            b.add_tri(bi, ai, an, piece, buv, auv, outer.uv[ia[(i + 1) % na]]);
            ++i;
        } else {
            int bn = inner.ids[ib[(j + 1) % nb]];
            b.add_tri(bi, ai, bn, piece, buv, auv, inner.uv[ib[(j + 1) % nb]]);
            ++j;
        }
    }
}

SurfacePiece finish_piece(Builder& b, PieceDomain dom, PieceKind kind, int handle_k) {
    b.m.pieces.push_back(std::move(dom));
    b.m.finalize();
    SurfacePiece p;
    p.mesh = std::move(b.m);
    p.boundary_circles = p.mesh.boundary_cycles();
    p.kind = kind;
    p.handle_k = handle_k;
    return p;
}

// Plain disk: polar fan, boundary is the outer circle.
SurfacePiece base_disk() {
    Builder b;
    int center = b.add_vertex();
    Loop r1 = make_circle_loop(b, {0, 0}, 0.5, kCircleVerts);
    Loop r2 = make_circle_loop(b, {0, 0}, 1.0, kCircleVerts);
    for (int i = 0; i < kCircleVerts; ++i) {
        int k = (i + 1) % kCircleVerts;
        b.add_tri(center, r1.ids[i], r1.ids[k], 0, {0, 0}, r1.uv[i], r1.uv[k]);
    }
    stitch_annulus(b, r2, r1, {0, 0}, 0);
    PieceDomain dom;
    dom.kind = PieceDomain::Kind::DiskWithHoles;
    dom.name = "disk";
    return finish_piece(b, std::move(dom), PieceKind::Disk, 0);
}

// Annulus: hole circle first (so it stays boundary circle 0), outer last.
SurfacePiece base_annulus() {
    Builder b;
    const double r_in = 0.35;
    Loop rin = make_circle_loop(b, {0, 0}, r_in, kCircleVerts);
    Loop rmid = make_circle_loop(b, {0, 0}, (r_in + 1.0) / 2, kCircleVerts);
    Loop rout = make_circle_loop(b, {0, 0}, 1.0, kCircleVerts);
    stitch_annulus(b, rmid, rin, {0, 0}, 0);
    stitch_annulus(b, rout, rmid, {0, 0}, 0);
    PieceDomain dom;
    dom.kind = PieceDomain::Kind::DiskWithHoles;
    dom.name = "annulus";
    dom.hole_centers = {{0, 0}};
    dom.hole_radii = {r_in};
    return finish_piece(b, std::move(dom), PieceKind::Annulus, 1);
}

// Disk with m >= 2 collinear holes: each hole sits in a square collar, the
// squares tile a row, and the row is stitched to the outer circle.
SurfacePiece base_necklace(int m, PieceKind kind, int handle_k) {
    Builder b;
    const double w = std::min(0.55, 1.1 / m);
    const double W = m * w;
    const double r_hole = 0.30 * w;
    std::vector<Vec2> centers(m);
    for (int j = 0; j < m; ++j) centers[j] = {-W / 2 + (j + 0.5) * w, 0.0};

    // Hole circles first so they remain the lowest-id boundary cycles.
    std::vector<Loop> holes(m);
    for (int j = 0; j < m; ++j) holes[j] = make_circle_loop(b, centers[j], r_hole, kCircleVerts);

    // Vertical grid lines X_k, four vertices each (y = -w/2, -w/6, w/6, w/2).
    const std::array<double, 4> ys = {-w / 2, -w / 6, w / 6, w / 2};
    std::vector<std::array<int, 4>> vline(m + 1);
    std::vector<std::array<Vec2, 4>> vline_uv(m + 1);
    for (int k = 0; k <= m; ++k) {
        double x = -W / 2 + k * w;
        for (int q = 0; q < 4; ++q) {
            vline[k][q] = b.add_vertex();
            vline_uv[k][q] = {x, ys[q]};
        }
    }
    // Horizontal thirds on top and bottom of every square.
    std::vector<std::array<int, 2>> top(m), bot(m);
    std::vector<std::array<Vec2, 2>> top_uv(m), bot_uv(m);
    for (int j = 0; j < m; ++j) {
        double x0 = -W / 2 + j * w;
        for (int q = 0; q < 2; ++q) {
            double x = x0 + w * (q + 1) / 3.0;
            bot[j][q] = b.add_vertex();
            bot_uv[j][q] = {x, -w / 2};
            top[j][q] = b.add_vertex();
            top_uv[j][q] = {x, w / 2};
        }
    }
    // Square perimeter (CCW): bottom left corner -> bottom mids -> bottom
    // right corner -> right mids -> top right corner -> top mids reversed ->
    // top left corner -> left mids reversed.
    for (int j = 0; j < m; ++j) {
        Loop sq;
        auto push = [&](int id, Vec2 uv) {
            sq.ids.push_back(id);
            sq.uv.push_back(uv);
        };
        push(vline[j][0], vline_uv[j][0]);
        push(bot[j][0], bot_uv[j][0]);
        push(bot[j][1], bot_uv[j][1]);
        push(vline[j + 1][0], vline_uv[j + 1][0]);
        push(vline[j + 1][1], vline_uv[j + 1][1]);
        push(vline[j + 1][2], vline_uv[j + 1][2]);
        push(vline[j + 1][3], vline_uv[j + 1][3]);
        push(top[j][1], top_uv[j][1]);
        push(top[j][0], top_uv[j][0]);
        push(vline[j][3], vline_uv[j][3]);
        push(vline[j][2], vline_uv[j][2]);
        push(vline[j][1], vline_uv[j][1]);
        stitch_annulus(b, sq, holes[j], centers[j], 0);
    }
    // Rectangle perimeter (CCW), then the outer circle around it.
    Loop rect;
    auto pushr = [&](int id, Vec2 uv) {
        rect.ids.push_back(id);
        rect.uv.push_back(uv);
    };
    for (int j = 0; j < m; ++j) {
        pushr(vline[j][0], vline_uv[j][0]);
        pushr(bot[j][0], bot_uv[j][0]);
        pushr(bot[j][1], bot_uv[j][1]);
    }
    pushr(vline[m][0], vline_uv[m][0]);
    pushr(vline[m][1], vline_uv[m][1]);
    pushr(vline[m][2], vline_uv[m][2]);
    for (int j = m - 1; j >= 0; --j) {
        pushr(vline[j + 1][3], vline_uv[j + 1][3]);
        pushr(top[j][1], top_uv[j][1]);
        pushr(top[j][0], top_uv[j][0]);
    }
    pushr(vline[0][3], vline_uv[0][3]);
    pushr(vline[0][2], vline_uv[0][2]);
    pushr(vline[0][1], vline_uv[0][1]);

    // An intermediate ring keeps the triangles touching the outer circle
    // well-shaped (skinny corner fans would invert under circle snapping).
    Loop ring = make_circle_loop(b, {0, 0}, 0.78, kCircleVerts);
    stitch_annulus(b, ring, rect, {0, 0}, 0);
    Loop outer = make_circle_loop(b, {0, 0}, 1.0, kCircleVerts);
    stitch_annulus(b, outer, ring, {0, 0}, 0);

    PieceDomain dom;
    dom.kind = PieceDomain::Kind::DiskWithHoles;
    dom.name = "holes" + std::to_string(m + 1);
    dom.hole_centers = centers;
    dom.hole_radii.assign(m, r_hole);
    return finish_piece(b, std::move(dom), kind, handle_k);
}

}  // namespace

SurfacePiece sphere_with_holes(int holes, int subdiv) {
    if (holes < 1)
        throw std::invalid_argument("sphere_with_holes requires holes >= 1 (use build_sphere)");
    SurfacePiece p;
    if (holes == 1) {
        p = base_disk();
    } else if (holes == 2) {
        p = base_annulus();
    } else {
        p = base_necklace(holes - 1, PieceKind::Core, 0);
    }
    for (int i = 0; i < subdiv; ++i) p = subdivide_piece(p);
    return p;
}

TriMesh build_sphere(int subdiv) {
    TriMesh m;
    m.nv = 6;  // 0 north, 1..4 equator, 5 south
    const int top[4][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}};
    const int bot[4][3] = {{5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
    PieceDomain dom;
    dom.kind = PieceDomain::Kind::Abstract;
    dom.name = "octa";
    m.pieces.push_back(dom);
    int f = 0;
    auto add = [&](const int(&t)[3]) {
        double off = 1.25 * f;
        m.tris.push_back({t[0], t[1], t[2]});
        m.tri_piece.push_back(0);
        m.tri_uv.push_back({Vec2{off, 0}, Vec2{off + 1, 0}, Vec2{off + 0.5, 0.9}});
        ++f;
    };
    for (auto& t : top) add(t);
    for (auto& t : bot) add(t);
    m.finalize();
    for (int i = 0; i < subdiv; ++i) m = subdivide(m);
    return m;
}

TriMesh build_band_sphere(int cols, int rows) {
    if (rows % 2 != 0) throw std::invalid_argument("rows must be even");
    TriMesh m;
    auto vid = [&](int i, int j) { return (i - 1) * cols + (j % cols); };
    int interior = (rows - 1) * cols;
    int north = interior, south = interior + 1;
    m.nv = interior + 2;
    PieceDomain dom;
    dom.kind = PieceDomain::Kind::Cylinder;
    dom.name = "bandsphere";
    m.pieces.push_back(dom);
    auto uv = [&](int i, int j) -> Vec2 {
        return {kTwoPi * j / cols, -1.0 + 2.0 * i / rows};
    };
    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 0; j < cols; ++j) {
            Vec2 a = uv(i, j), bq = uv(i, j + 1), c = uv(i + 1, j + 1), d = uv(i + 1, j);
            m.tris.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j)});
            m.tri_piece.push_back(0);
            m.tri_uv.push_back({a, bq, d});
            m.tris.push_back({vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)});
            m.tri_piece.push_back(0);
            m.tri_uv.push_back({bq, c, d});
        }
    }
    for (int j = 0; j < cols; ++j) {
        Vec2 a = uv(rows - 1, j), bq = uv(rows - 1, j + 1);
        m.tris.push_back({vid(rows - 1, j), vid(rows - 1, j + 1), north});
        m.tri_piece.push_back(0);
        m.tri_uv.push_back({a, bq, Vec2{(a.x + bq.x) / 2, 1.0}});
        Vec2 c = uv(1, j), d = uv(1, j + 1);
        m.tris.push_back({vid(1, j + 1), vid(1, j), south});
        m.tri_piece.push_back(0);
        m.tri_uv.push_back({d, c, Vec2{(c.x + d.x) / 2, -1.0}});
    }
    m.finalize();
    return m;
}

TriMesh subdivide(const TriMesh& m) {
    return subdivide(m, {}, nullptr);
}

TriMesh subdivide(const TriMesh& m, const std::vector<const Subcomplex*>& subs_in,
                  std::vector<Subcomplex>* subs_out) {
    TriMesh out;
    out.nv = m.nv + m.edge_count();
    out.pieces = m.pieces;
    auto mid_id = [&](int e) { return m.nv + e; };
    for (size_t t = 0; t < m.tris.size(); ++t) {
        int a = m.tris[t][0], bq = m.tris[t][1], c = m.tris[t][2];
        int mab = mid_id(m.tri_edges[t][0]);
        int mbc = mid_id(m.tri_edges[t][1]);
        int mca = mid_id(m.tri_edges[t][2]);
        Vec2 ua = m.tri_uv[t][0], ub = m.tri_uv[t][1], uc = m.tri_uv[t][2];
        Vec2 uab = (ua + ub) / 2, ubc = (ub + uc) / 2, uca = (uc + ua) / 2;
        int piece = m.tri_piece[t];
        auto add = [&](int x, int y, int z, Vec2 u1, Vec2 u2, Vec2 u3) {
            out.tris.push_back({x, y, z});
            out.tri_piece.push_back(piece);
            out.tri_uv.push_back({u1, u2, u3});
        };
        add(a, mab, mca, ua, uab, uca);
        add(mab, bq, mbc, uab, ub, ubc);
        add(mca, mbc, c, uca, ubc, uc);
        add(mab, mbc, mca, uab, ubc, uca);
    }
    out.finalize();
    if (subs_out) {
        subs_out->clear();
        for (const Subcomplex* s : subs_in) {
            Subcomplex ns = Subcomplex::empty(out);
            for (int v = 0; v < m.nv; ++v)
                if (s->verts[v]) ns.verts[v] = 1;
            for (size_t e = 0; e < m.edges.size(); ++e) {
                if (!s->edges[e]) continue;
                int u = m.edges[e][0], v = m.edges[e][1], mid = mid_id(static_cast<int>(e));
                ns.verts[mid] = 1;
                int e1 = out.edge_id(u, mid), e2 = out.edge_id(mid, v);
                if (e1 < 0 || e2 < 0) throw std::runtime_error("lost edge in subdivision");
                ns.add_edge(out, e1);
                ns.add_edge(out, e2);
            }
            for (size_t t = 0; t < m.tris.size(); ++t) {
                if (!s->tris[t]) continue;
                for (int k = 0; k < 4; ++k) ns.add_triangle(out, static_cast<int>(t) * 4 + k);
            }
            subs_out->push_back(std::move(ns));
        }
    }
    return out;
}

SurfacePiece subdivide_piece(const SurfacePiece& p) {
    SurfacePiece out;
    out.mesh = subdivide(p.mesh);
    // Keep the boundary circles regular polygons: new midpoints of circle
    // edges are re-projected radially onto their circle.
    const PieceDomain& dom = p.mesh.pieces[0];
    if (dom.kind == PieceDomain::Kind::DiskWithHoles) {
        std::vector<Vec2> centers = {{0, 0}};
        std::vector<double> radii = {dom.outer_radius};
        for (size_t h = 0; h < dom.hole_centers.size(); ++h) {
            centers.push_back(dom.hole_centers[h]);
            radii.push_back(dom.hole_radii[h]);
        }
        // Which parent edges lie on a circle? Decide from endpoint coordinates.
        std::vector<int> edge_circle(p.mesh.edges.size(), -1);
        for (size_t t = 0; t < p.mesh.tris.size(); ++t) {
            for (int j = 0; j < 3; ++j) {
                Vec2 a = p.mesh.tri_uv[t][j], b = p.mesh.tri_uv[t][(j + 1) % 3];
                for (size_t k = 0; k < centers.size(); ++k) {
                    double ra = (a - centers[k]).norm(), rb = (b - centers[k]).norm();
                    if (std::fabs(ra - radii[k]) < 1e-9 * radii[k] &&
                        std::fabs(rb - radii[k]) < 1e-9 * radii[k]) {
                        edge_circle[p.mesh.tri_edges[t][j]] = static_cast<int>(k);
                    }
                }
            }
        }
        for (size_t t = 0; t < out.mesh.tris.size(); ++t) {
            for (int j = 0; j < 3; ++j) {
                int vid = out.mesh.tris[t][j];
                if (vid < p.mesh.nv) continue;
                int circ = edge_circle[vid - p.mesh.nv];
                if (circ < 0) continue;
                Vec2 d = out.mesh.tri_uv[t][j] - centers[circ];
                double dn = d.norm();
                if (dn > 0) out.mesh.tri_uv[t][j] = centers[circ] + d * (radii[circ] / dn);
            }
        }
    }
    out.boundary_circles = out.mesh.boundary_cycles();
    out.kind = p.kind;
    out.handle_k = p.handle_k;
    return out;
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;  // keep the smaller id as representative
    }
};

}  // namespace

GlueResult glue_pieces(const std::vector<SurfacePiece>& pieces,
                       const std::vector<GlueJoint>& joints) {
    std::vector<int> vbase(pieces.size() + 1, 0);
    for (size_t p = 0; p < pieces.size(); ++p)
        vbase[p + 1] = vbase[p] + pieces[p].mesh.nv;
    UnionFind uf(vbase.back());
    for (const auto& j : joints) {
        const auto& ca = pieces[j.piece_a].boundary_circles.at(j.circle_a);
        const auto& cb = pieces[j.piece_b].boundary_circles.at(j.circle_b);
        if (ca.size() != cb.size())
            throw std::runtime_error("glue: matched circles have different edge counts (" +
                                     std::to_string(ca.size()) + " vs " +
                                     std::to_string(cb.size()) + ")");
        int n = static_cast<int>(ca.size());
        // Identify with opposite traversal so the glued surface is orientable.
        for (int i = 0; i < n; ++i)
            uf.unite(vbase[j.piece_a] + ca[i], vbase[j.piece_b] + cb[(n - i) % n]);
    }
    // Compact ids ordered by representative.
    std::vector<int> rep(vbase.back());
    std::vector<int> reps;
    for (int v = 0; v < vbase.back(); ++v) {
        rep[v] = uf.find(v);
        if (rep[v] == v) reps.push_back(v);
    }
    std::vector<int> compact(vbase.back(), -1);
    for (size_t i = 0; i < reps.size(); ++i) compact[reps[i]] = static_cast<int>(i);

    GlueResult res;
    res.mesh.nv = static_cast<int>(reps.size());
    res.vertex_maps.resize(pieces.size());
    res.tri_offsets.resize(pieces.size() + 1, 0);
    for (size_t p = 0; p < pieces.size(); ++p) {
        const TriMesh& pm = pieces[p].mesh;
        if (pm.pieces.size() != 1)
            throw std::runtime_error("glue: piece must carry exactly one chart");
        res.vertex_maps[p].resize(pm.nv);
        for (int v = 0; v < pm.nv; ++v)
            res.vertex_maps[p][v] = compact[rep[vbase[p] + v]];
        res.tri_offsets[p] = static_cast<int>(res.mesh.tris.size());
        for (size_t t = 0; t < pm.tris.size(); ++t) {
            res.mesh.tris.push_back({res.vertex_maps[p][pm.tris[t][0]],
                                     res.vertex_maps[p][pm.tris[t][1]],
                                     res.vertex_maps[p][pm.tris[t][2]]});
            res.mesh.tri_piece.push_back(static_cast<int>(p));
            res.mesh.tri_uv.push_back(pm.tri_uv[t]);
        }
        res.mesh.pieces.push_back(pm.pieces[0]);
    }
    res.tri_offsets[pieces.size()] = static_cast<int>(res.mesh.tris.size());
    res.mesh.finalize();
    return res;
}

Subcomplex GlueResult::piece_subcomplex(int piece) const {
    std::vector<int> ids;
    for (int t = tri_offsets[piece]; t < tri_offsets[piece + 1]; ++t) ids.push_back(t);
    return Subcomplex::from_triangles(mesh, ids);
}

GluedSurface glue(const SurfacePiece& core, const std::vector<SurfacePiece>& others,
                  const std::vector<CoreMatching>& matching) {
    size_t total_other_circles = 0;
    for (const auto& p : others) total_other_circles += p.boundary_circles.size();
    if (matching.size() != core.boundary_circles.size() ||
        matching.size() != total_other_circles)
        throw std::runtime_error("glue: matching must pair every circle exactly once");
    std::vector<char> core_used(core.boundary_circles.size(), 0);
    std::vector<SurfacePiece> all;
    all.push_back(core);
    for (const auto& p : others) all.push_back(p);
    std::vector<GlueJoint> joints;
    for (const auto& mt : matching) {
        if (core_used.at(mt.core_circle)) throw std::runtime_error("glue: core circle reused");
        core_used[mt.core_circle] = 1;
        joints.push_back({0, mt.core_circle, mt.piece + 1, mt.piece_circle});
    }
    GlueResult raw = glue_pieces(all, joints);
    std::string why;
    if (!raw.mesh.is_closed_orientable_connected(&why))
        throw std::runtime_error("glue: result is not a closed orientable surface: " + why);
    GluedSurface out{std::move(raw.mesh), Subcomplex{}, GlueResult{}};
    out.raw.vertex_maps = std::move(raw.vertex_maps);
    out.raw.tri_offsets = std::move(raw.tri_offsets);
    // piece_subcomplex needs the mesh back in place
    out.raw.mesh = out.mesh;
    out.core = out.raw.piece_subcomplex(0);
    return out;
}

// ---------------------------------------------------------------------------
// Point location
// ---------------------------------------------------------------------------

bool point_in_triangle(const std::array<Vec2, 3>& uv, const Vec2& p, double tol) {
    double area2 = cross(uv[1] - uv[0], uv[2] - uv[0]);
    double eps = tol * std::max(1.0, std::fabs(area2));
    double s0 = cross(uv[1] - uv[0], p - uv[0]);
    double s1 = cross(uv[2] - uv[1], p - uv[1]);
    double s2 = cross(uv[0] - uv[2], p - uv[2]);
    return s0 >= -eps && s1 >= -eps && s2 >= -eps;
}

Vec2 triangle_centroid(const std::array<Vec2, 3>& uv) {
    return (uv[0] + uv[1] + uv[2]) / 3.0;
}

CellLocator::CellLocator(const TriMesh& m) : mesh_(&m) {
    grids_.resize(m.pieces.size());
    std::vector<std::vector<int>> by_piece(m.pieces.size());
    for (size_t t = 0; t < m.tris.size(); ++t) by_piece[m.tri_piece[t]].push_back(static_cast<int>(t));
    for (size_t p = 0; p < m.pieces.size(); ++p) {
        PieceGrid& g = grids_[p];
        g.all = by_piece[p];
        if (g.all.empty()) continue;
        double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
        for (int t : g.all)
            for (const Vec2& v : m.tri_uv[t]) {
                x0 = std::min(x0, v.x);
                y0 = std::min(y0, v.y);
                x1 = std::max(x1, v.x);
                y1 = std::max(y1, v.y);
            }
        int n = std::max(2, static_cast<int>(std::sqrt(g.all.size() / 2.0)));
        g.nx = g.ny = n;
        g.x0 = x0;
        g.y0 = y0;
        g.dx = std::max(1e-12, (x1 - x0) / n);
        g.dy = std::max(1e-12, (y1 - y0) / n);
        g.bins.assign(n * n, {});
        for (int t : g.all) {
            double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
            for (const Vec2& v : m.tri_uv[t]) {
                bx0 = std::min(bx0, v.x);
                by0 = std::min(by0, v.y);
                bx1 = std::max(bx1, v.x);
                by1 = std::max(by1, v.y);
            }
            int i0 = std::clamp(static_cast<int>((bx0 - g.x0) / g.dx), 0, n - 1);
            int i1 = std::clamp(static_cast<int>((bx1 - g.x0) / g.dx), 0, n - 1);
            int j0 = std::clamp(static_cast<int>((by0 - g.y0) / g.dy), 0, n - 1);
            int j1 = std::clamp(static_cast<int>((by1 - g.y0) / g.dy), 0, n - 1);
            for (int i = i0; i <= i1; ++i)
                for (int j = j0; j <= j1; ++j) g.bins[i * n + j].push_back(t);
        }
    }
}

int CellLocator::probe(int piece, const Vec2& p) const {
    const PieceGrid& g = grids_[piece];
    if (g.all.empty()) return -1;
    int i = static_cast<int>((p.x - g.x0) / g.dx);
    int j = static_cast<int>((p.y - g.y0) / g.dy);
    if (i < 0 || i >= g.nx || j < 0 || j >= g.ny) return -1;
    for (int t : g.bins[i * g.nx + j])
        if (point_in_triangle(mesh_->tri_uv[t], p)) return t;
    return -1;
}

int CellLocator::locate(int piece, const Vec2& p) const {
    int t = probe(piece, p);
    if (t >= 0) return t;
    if (mesh_->pieces[piece].kind == PieceDomain::Kind::Cylinder) {
        t = probe(piece, {p.x + kTwoPi, p.y});
        if (t >= 0) return t;
        t = probe(piece, {p.x - kTwoPi, p.y});
        if (t >= 0) return t;
    }
    return -1;
}

int CellLocator::locate_or_nearest(int piece, const Vec2& p) const {
    int t = locate(piece, p);
    if (t >= 0) return t;
    const PieceGrid& g = grids_[piece];
    double best = 1e300;
    int arg = -1;
    bool cyl = mesh_->pieces[piece].kind == PieceDomain::Kind::Cylinder;
    for (int cand : g.all) {
        Vec2 c = triangle_centroid(mesh_->tri_uv[cand]);
        double d = (c - p).norm2();
        if (cyl) {
            d = std::min(d, (c - Vec2{p.x + kTwoPi, p.y}).norm2());
            d = std::min(d, (c - Vec2{p.x - kTwoPi, p.y}).norm2());
        }
        if (d < best) {
            best = d;
            arg = cand;
        }
    }
    return arg;
}

}  // namespace surfdyn::mesh
