#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "surfdyn/mesh.hpp"

using namespace surfdyn;
using namespace surfdyn::mesh;

namespace {

// Independent count of V/E/F straight from the triangle list.
void check_euler_by_direct_count(const TriMesh& m, int expected_chi) {
    std::set<int> vs;
    std::set<std::pair<int, int>> es;
    for (const auto& t : m.tris) {
        for (int j = 0; j < 3; ++j) {
            vs.insert(t[j]);
            int u = t[j], v = t[(j + 1) % 3];
            es.insert({std::min(u, v), std::max(u, v)});
        }
    }
    int chi = static_cast<int>(vs.size()) - static_cast<int>(es.size()) +
              static_cast<int>(m.tris.size());
    CHECK(chi == expected_chi);
    CHECK(m.euler_characteristic() == expected_chi);
    CHECK(static_cast<int>(vs.size()) == m.nv);
}

void check_valid_piece(const SurfacePiece& p, int expected_circles) {
    // Boundary edges on exactly one triangle, interior edges on two.
    for (const auto& et : p.mesh.edge_tris) CHECK(et[0] >= 0);
    CHECK(static_cast<int>(p.boundary_circles.size()) == expected_circles);
    // Boundary circles are disjoint simple cycles.
    std::set<int> seen;
    for (const auto& c : p.boundary_circles) {
        std::set<int> cs(c.begin(), c.end());
        CHECK(cs.size() == c.size());
        for (int v : c) {
            CHECK(!seen.count(v));
            seen.insert(v);
        }
    }
}

GluedSurface make_genus2_fixture() {
    SurfacePiece core = sphere_with_holes(4, 0);
    SurfacePiece h1 = sphere_with_holes(2, 0);
    SurfacePiece h2 = sphere_with_holes(2, 0);
    std::vector<CoreMatching> match = {
        {0, 0, 0}, {0, 1, 1}, {1, 0, 2}, {1, 1, 3}};
    return glue(core, {h1, h2}, match);
}

}  // namespace

TEST_CASE("sphere_with_holes basic counts") {
    SUBCASE("disk") {
        SurfacePiece p = sphere_with_holes(1, 0);
        check_valid_piece(p, 1);
        check_euler_by_direct_count(p.mesh, 1);
    }
    SUBCASE("annulus") {
        SurfacePiece p = sphere_with_holes(2, 2);
        check_valid_piece(p, 2);
        check_euler_by_direct_count(p.mesh, 0);
    }
    SUBCASE("four holes subdivided") {
        SurfacePiece p = sphere_with_holes(4, 1);
        check_valid_piece(p, 4);
        check_euler_by_direct_count(p.mesh, -2);
    }
    SUBCASE("seven holes") {
        SurfacePiece p = sphere_with_holes(7, 0);
        check_valid_piece(p, 7);
        check_euler_by_direct_count(p.mesh, -5);
    }
    SUBCASE("holes=0 refused") {
        CHECK_THROWS(sphere_with_holes(0, 0));
    }
    SUBCASE("boundary circles of equal-subdiv pieces match in length") {
        SurfacePiece a = sphere_with_holes(3, 1);
        SurfacePiece b = sphere_with_holes(2, 1);
        CHECK(a.boundary_circles[0].size() == b.boundary_circles[0].size());
        CHECK(a.boundary_circles[1].size() == b.boundary_circles[2 - 1].size());
    }
}

TEST_CASE("build_sphere") {
    TriMesh s0 = build_sphere(0);
    CHECK(s0.nv == 6);
    CHECK(s0.triangle_count() == 8);
    check_euler_by_direct_count(s0, 2);
    CHECK(s0.is_closed_orientable_connected());
    CHECK(s0.genus() == 0);

    TriMesh s1 = build_sphere(1);
    check_euler_by_direct_count(s1, 2);
    CHECK(s1.is_closed_orientable_connected());

    TriMesh s3 = build_sphere(3);
    check_euler_by_direct_count(s3, 2);
    CHECK(s3.triangle_count() == 8 * 4 * 4 * 4);
}

TEST_CASE("band sphere") {
    TriMesh m = build_band_sphere(24, 16);
    CHECK(m.is_closed_orientable_connected());
    check_euler_by_direct_count(m, 2);
    CHECK(m.genus() == 0);
}

TEST_CASE("subdivide preserves chi and quadruples faces") {
    SurfacePiece p = sphere_with_holes(3, 0);
    TriMesh m2 = subdivide(p.mesh);
    CHECK(m2.euler_characteristic() == p.mesh.euler_characteristic());
    CHECK(m2.triangle_count() == 4 * p.mesh.triangle_count());

    TriMesh s = build_sphere(1);
    TriMesh s2 = subdivide(s);
    CHECK(s2.euler_characteristic() == s.euler_characteristic());
    CHECK(s2.is_closed_orientable_connected());
}

TEST_CASE("subdivide transports subcomplex tags face-closed") {
    GluedSurface g = make_genus2_fixture();
    std::vector<Subcomplex> out;
    TriMesh fine = subdivide(g.mesh, {&g.core}, &out);
    REQUIRE(out.size() == 1);
    CHECK(out[0].is_face_closed(fine));
    CHECK(out[0].tri_count() == 4 * g.core.tri_count());
}

TEST_CASE("glue arithmetic") {
    SUBCASE("core(4) + two annuli -> genus 2") {
        GluedSurface g = make_genus2_fixture();
        CHECK(g.mesh.is_closed_orientable_connected());
        check_euler_by_direct_count(g.mesh, -2);
        CHECK(g.mesh.genus() == 2);
        CHECK(g.core.is_face_closed(g.mesh));
    }
    SUBCASE("core(1 hole) + disk -> sphere") {
        SurfacePiece core = sphere_with_holes(1, 0);
        SurfacePiece cap = sphere_with_holes(1, 0);
        GluedSurface g = glue(core, {cap}, {{0, 0, 0}});
        check_euler_by_direct_count(g.mesh, 2);
        CHECK(g.mesh.genus() == 0);
    }
    SUBCASE("core(4) + disk + 3-holed handle -> genus 2") {
        SurfacePiece core = sphere_with_holes(4, 0);
        SurfacePiece cap = sphere_with_holes(1, 0);
        SurfacePiece handle = sphere_with_holes(3, 0);
        GluedSurface g = glue(core, {cap, handle},
                              {{0, 0, 0}, {1, 0, 1}, {1, 1, 2}, {1, 2, 3}});
        check_euler_by_direct_count(g.mesh, -2);
        CHECK(g.mesh.genus() == 2);
    }
    SUBCASE("mismatched circle lengths rejected") {
        SurfacePiece core = sphere_with_holes(1, 0);
        SurfacePiece cap = sphere_with_holes(1, 1);
        CHECK_THROWS(glue(core, {cap}, {{0, 0, 0}}));
    }
}

TEST_CASE("glue order-invariance via canonical hash") {
    SurfacePiece core = sphere_with_holes(4, 0);
    SurfacePiece h1 = sphere_with_holes(2, 0);
    SurfacePiece h2 = sphere_with_holes(2, 0);
    GluedSurface a = glue(core, {h1, h2}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 2}, {1, 1, 3}});
    GluedSurface b = glue(core, {h2, h1}, {{1, 0, 0}, {1, 1, 1}, {0, 0, 2}, {0, 1, 3}});
    CHECK(a.mesh.canonical_hash() == b.mesh.canonical_hash());
    CHECK(a.mesh.nv == b.mesh.nv);
    CHECK(a.mesh.edge_count() == b.mesh.edge_count());
}

TEST_CASE("star neighborhood") {
    TriMesh octa = build_sphere(0);
    SUBCASE("star of a vertex in the octahedron is its four incident triangles") {
        Subcomplex s = Subcomplex::empty(octa);
        s.add_vertex(0);
        Subcomplex st = star_neighborhood(octa, s, 1);
        CHECK(st.tri_count() == 4);
        CHECK(st.is_face_closed(octa));
    }
    SUBCASE("rings=0 is identity") {
        Subcomplex s = Subcomplex::empty(octa);
        s.add_vertex(0);
        Subcomplex st = star_neighborhood(octa, s, 0);
        CHECK(st.tri_count() == 0);
        CHECK(st.has_vertex(0));
    }
}

TEST_CASE("chart triangles stay positively oriented under subdivision") {
    for (int holes : {1, 2, 3, 4, 5, 7}) {
        for (int subdiv : {0, 1, 2}) {
            SurfacePiece p = sphere_with_holes(holes, subdiv);
            for (const auto& uv : p.mesh.tri_uv)
                REQUIRE(cross(uv[1] - uv[0], uv[2] - uv[0]) > 0);
        }
    }
    TriMesh band = build_band_sphere(48, 32);
    for (const auto& uv : band.tri_uv) REQUIRE(cross(uv[1] - uv[0], uv[2] - uv[0]) > 0);
}

TEST_CASE("locator finds containing triangles") {
    SurfacePiece p = sphere_with_holes(3, 1);
    CellLocator loc(p.mesh);
    int hits = 0;
    for (size_t t = 0; t < p.mesh.tris.size(); ++t) {
        Vec2 c = triangle_centroid(p.mesh.tri_uv[t]);
        int found = loc.locate(0, c);
        REQUIRE(found >= 0);
        if (found == static_cast<int>(t)) ++hits;
        CHECK(point_in_triangle(p.mesh.tri_uv[found], c));
    }
    CHECK(hits == static_cast<int>(p.mesh.tris.size()));

    TriMesh band = build_band_sphere(24, 16);
    CellLocator bl(band);
    CHECK(bl.locate(0, {0.01, 0.0}) >= 0);
    CHECK(bl.locate(0, {-0.05, 0.3}) >= 0);  // wraps across the seam
}
