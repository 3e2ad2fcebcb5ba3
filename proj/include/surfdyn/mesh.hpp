#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surfdyn/geometry.hpp"

namespace surfdyn::mesh {

// Chart domain attached to a piece of the surface. Every triangle of a piece
// carries 2D coordinates in the piece's chart; flows are evaluated there.
struct PieceDomain {
    enum class Kind { DiskWithHoles, Cylinder, Abstract };
    Kind kind = Kind::Abstract;
    std::string name;
    double outer_radius = 1.0;        // DiskWithHoles
    std::vector<Vec2> hole_centers;   // DiskWithHoles
    std::vector<double> hole_radii;   // DiskWithHoles
};

// Triangle mesh, possibly with boundary. Triangles are wound CCW in their
// chart. Incidence tables are filled in by finalize().
struct TriMesh {
    int nv = 0;
    std::vector<std::array<int, 3>> tris;
    std::vector<int> tri_piece;
    std::vector<std::array<Vec2, 3>> tri_uv;
    std::vector<PieceDomain> pieces;

    // Derived incidence data.
    std::vector<std::array<int, 2>> edges;          // (min,max) vertex pairs
    std::vector<std::array<int, 3>> tri_edges;      // edge j joins corners j, j+1
    std::vector<std::array<int, 2>> edge_tris;      // incident triangles, -1 if none
    std::vector<std::array<int, 3>> tri_neighbors;  // across tri_edges[j], -1 at boundary

    void finalize();

    int vertex_count() const { return nv; }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int triangle_count() const { return static_cast<int>(tris.size()); }

    int euler_characteristic() const {
        return nv - edge_count() + triangle_count();
    }

    bool is_closed() const;
    // Every edge on exactly two triangles with opposite induced directions,
    // and the 1-skeleton connected.
    bool is_closed_orientable_connected(std::string* why = nullptr) const;
    int genus() const;  // requires closed orientable; throws otherwise

    std::vector<int> boundary_edge_ids() const;
    // Boundary cycles as vertex loops, each directed with the surface on the
    // left (the direction induced by the winding of the unique incident
    // triangle). Cycles start at their least vertex; list sorted by that id.
    std::vector<std::vector<int>> boundary_cycles() const;

    int edge_id(int u, int v) const;  // -1 if absent

    uint64_t canonical_hash() const;
};

// Face-closed set of simplices of a parent mesh.
struct Subcomplex {
    std::vector<char> verts;
    std::vector<char> edges;
    std::vector<char> tris;

    static Subcomplex empty(const TriMesh& m);
    static Subcomplex from_triangles(const TriMesh& m, const std::vector<int>& tri_ids);
    static Subcomplex whole(const TriMesh& m);

    void add_triangle(const TriMesh& m, int t);
    void add_edge(const TriMesh& m, int e);
    void add_vertex(int v) { verts[v] = 1; }

    bool has_tri(int t) const { return tris[t] != 0; }
    bool has_edge(int e) const { return edges[e] != 0; }
    bool has_vertex(int v) const { return verts[v] != 0; }

    int tri_count() const;
    bool is_face_closed(const TriMesh& m) const;
    std::vector<int> triangle_list() const;
};

// Iterated closed star: all triangles meeting the current set in at least a
// vertex, taken `rings` times. rings = 0 returns S unchanged.
Subcomplex star_neighborhood(const TriMesh& m, const Subcomplex& s, int rings);

Subcomplex subcomplex_complement_triangles(const TriMesh& m, const Subcomplex& s);

enum class PieceKind { Core, Disk, Annulus, Handle };

struct SurfacePiece {
    TriMesh mesh;
    std::vector<std::vector<int>> boundary_circles;
    PieceKind kind = PieceKind::Core;
    int handle_k = 0;
};

// A sphere with `holes` disjoint open disks removed, triangulated in a planar
// chart (outer circle plus holes-1 inner circles). Boundary circles are
// 12 * 2^subdiv gons so that pieces built at equal subdivision always match.
SurfacePiece sphere_with_holes(int holes, int subdiv);

// Closed octahedral sphere, midpoint-subdivided `subdiv` times.
TriMesh build_sphere(int subdiv);

// Sphere triangulated as a theta/u cylinder with polar caps; the equator is
// the vertex row u = 0. cols, rows control resolution (rows must be even).
TriMesh build_band_sphere(int cols, int rows);

// Midpoint 1->4 subdivision. `sub_in/sub_out` optionally transports a
// subcomplex onto the refined mesh.
TriMesh subdivide(const TriMesh& m);
TriMesh subdivide(const TriMesh& m, const std::vector<const Subcomplex*>& subs_in,
                  std::vector<Subcomplex>* subs_out);

SurfacePiece subdivide_piece(const SurfacePiece& p);

struct GlueJoint {
    int piece_a = 0;
    int circle_a = 0;
    int piece_b = 0;
    int circle_b = 0;
};

struct GlueResult {
    TriMesh mesh;
    // Per input piece: local vertex id -> glued id, and triangle id offset.
    std::vector<std::vector<int>> vertex_maps;
    std::vector<int> tri_offsets;

    Subcomplex piece_subcomplex(int piece) const;
};

// Glue pieces along matched boundary circles (equal length required; cycles
// are identified with opposite orientation so the result stays orientable).
GlueResult glue_pieces(const std::vector<SurfacePiece>& pieces,
                       const std::vector<GlueJoint>& joints);

struct CoreMatching {
    int piece = 0;        // index into the non-core piece list
    int piece_circle = 0;
    int core_circle = 0;
};

// Spec-shaped gluing: a core plus caps/handles, matching every core circle
// exactly once. Returns the closed surface and the glued image of the core.
struct GluedSurface {
    TriMesh mesh;
    Subcomplex core;
    GlueResult raw;
};
GluedSurface glue(const SurfacePiece& core, const std::vector<SurfacePiece>& others,
                  const std::vector<CoreMatching>& matching);

// Point location in a piece chart with a background grid per piece.
class CellLocator {
  public:
    explicit CellLocator(const TriMesh& m);
    // Containing triangle of a chart point, or -1. Cylinder charts are probed
    // with theta shifts of +-2pi as well.
    int locate(int piece, const Vec2& p) const;
    // Nearest triangle of the piece by centroid distance (never -1 for a
    // piece that owns triangles).
    int locate_or_nearest(int piece, const Vec2& p) const;

  private:
    struct PieceGrid {
        double x0 = 0, y0 = 0, dx = 1, dy = 1;
        int nx = 1, ny = 1;
        std::vector<std::vector<int>> bins;
        std::vector<int> all;
    };
    const TriMesh* mesh_;
    std::vector<PieceGrid> grids_;
    int probe(int piece, const Vec2& p) const;
};

// Barycentric point-in-triangle test in chart coordinates.
bool point_in_triangle(const std::array<Vec2, 3>& uv, const Vec2& p, double tol = 1e-9);
Vec2 triangle_centroid(const std::array<Vec2, 3>& uv);

}  // namespace surfdyn::mesh
