#include "surfdyn/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace surfdyn::builtins {

using flow::FixedPoint;
using flow::FixedPointType;
using flow::Flow;
using mesh::PieceDomain;
using mesh::Subcomplex;
using mesh::SurfacePiece;
using mesh::TriMesh;

namespace {

constexpr double kFreezeRadius = 0.15;   // bump cap radius next to frozen circles
constexpr double kDegenRadius = 0.12;    // degenerate-saddle quadratic window
constexpr double kSaddleRadiusMid = 0.688;
constexpr double kSaddleAngle = 0.37;

int circle_verts(int subdiv) { return 12 << subdiv; }

double chart_diameter(const TriMesh& m) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& uv : m.tri_uv)
        for (const Vec2& v : uv) {
            x0 = std::min(x0, v.x);
            y0 = std::min(y0, v.y);
            x1 = std::max(x1, v.x);
            y1 = std::max(y1, v.y);
        }
    return std::hypot(x1 - x0, y1 - y0);
}

// Quantize near-roundoff squared distances to an exact zero so frozen
// simplices evaluate to the zero vector.
double bump(double d, double d0) {
    double d2 = d * d;
    if (d2 <= 1e-24) return 0.0;
    return std::min(1.0, d2 / (d0 * d0));
}

// Distance to every frozen circle of a disk-with-holes chart, combined as a
// product of bumps; `frozen_holes` / `frozen_outer` select which circles are
// actually frozen for the flow at hand.
struct CircleSet {
    std::vector<Vec2> centers;
    std::vector<double> radii;
    int ngon = 12;
    double sagitta = 0;  // max distance between each circle and its chord polygon

    double bump_all(const Vec2& p) const {
        double b = 1.0;
        for (size_t i = 0; i < centers.size(); ++i) {
            // Fast path: outside the collar zone of this circle the bump
            // saturates at 1 and the exact polygon distance is not needed.
            double band = std::fabs((p - centers[i]).norm() - radii[i]);
            if (band >= kFreezeRadius + sagitta) continue;
            b *= bump(flow::regular_polygon_dist(p, centers[i], radii[i], ngon, 0.0),
                      kFreezeRadius);
            if (b == 0.0) return 0.0;
        }
        return b;
    }
};

CircleSet frozen_circles(const PieceDomain& dom, int subdiv, bool include_outer) {
    CircleSet cs;
    cs.ngon = circle_verts(subdiv);
    for (size_t h = 0; h < dom.hole_centers.size(); ++h) {
        cs.centers.push_back(dom.hole_centers[h]);
        cs.radii.push_back(dom.hole_radii[h]);
    }
    if (include_outer) {
        cs.centers.push_back({0, 0});
        cs.radii.push_back(dom.outer_radius);
    }
    double rmax = 0;
    for (double r : cs.radii) rmax = std::max(rmax, r);
    cs.sagitta = rmax * (1.0 - std::cos(kTwoPi / (2.0 * cs.ngon)));
    return cs;
}

Vec2 disk_cap_field(const CircleSet& cs, const Vec2& p) {
    return p * -cs.bump_all(p);
}

Vec2 annulus_field(const CircleSet& cs, const Vec2& p, bool degenerate, const Vec2& zpt) {
    double r = p.norm();
    if (r < 1e-12) return {0, 0};
    double s = cs.bump_all(p);
    if (degenerate) s *= bump((p - zpt).norm(), kDegenRadius);
    return p * (s / r);
}

Vec2 handle_field(const CircleSet& cs, const std::vector<Vec2>& sources, const Vec2& p) {
    Vec2 v{0, 0};
    for (const Vec2& c : sources) {
        Vec2 d = p - c;
        double n2 = d.norm2();
        if (n2 < 1e-12) return {0, 0};
        v += d / n2;
    }
    double vn = v.norm();
    return v * (cs.bump_all(p) / (1.0 + vn));
}

// Saddle abscissas of sum_j 1/(x - x_j) between consecutive collinear sources.
std::vector<double> collinear_saddles(const std::vector<Vec2>& sources, double r_hole) {
    std::vector<double> xs;
    for (const Vec2& c : sources) xs.push_back(c.x);
    std::sort(xs.begin(), xs.end());
    std::vector<double> roots;
    auto f = [&](double x) {
        double s = 0;
        for (double xj : xs) s += 1.0 / (x - xj);
        return s;
    };
    for (size_t g = 0; g + 1 < xs.size(); ++g) {
        double lo = xs[g] + r_hole * 1.05, hi = xs[g + 1] - r_hole * 1.05;
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2;
            (f(mid) > 0 ? lo : hi) = mid;
        }
        roots.push_back((lo + hi) / 2);
    }
    return roots;
}

// Role of a glued piece in a builtin flow.
struct PieceRole {
    enum class Kind { Frozen, DiskCap, Annulus, Handle } kind = Kind::Frozen;
    bool degenerate = false;  // Annulus only
    Vec2 zpt;                 // degenerate saddle position
    CircleSet circles;
    std::vector<Vec2> sources;  // Handle only
};

Flow assemble_flow(std::shared_ptr<const TriMesh> surf, std::vector<PieceRole> roles,
                   Subcomplex frozen, std::vector<FixedPoint> fps, std::string name) {
    Flow f;
    f.surface = std::move(surf);
    f.frozen = std::move(frozen);
    f.fixed_points = std::move(fps);
    f.name = std::move(name);
    f.default_step = 1e-3 * chart_diameter(*f.surface);
    auto shared_roles = std::make_shared<std::vector<PieceRole>>(std::move(roles));
    f.field = [shared_roles](int piece, const Vec2& p) -> Vec2 {
        const PieceRole& r = (*shared_roles)[piece];
        switch (r.kind) {
            case PieceRole::Kind::Frozen:
                return {0, 0};
            case PieceRole::Kind::DiskCap:
                return disk_cap_field(r.circles, p);
            case PieceRole::Kind::Annulus:
                return annulus_field(r.circles, p, r.degenerate, r.zpt);
            case PieceRole::Kind::Handle:
                return handle_field(r.circles, r.sources, p);
        }
        return {0, 0};
    };
    return f;
}

PieceRole role_for_piece(const SurfacePiece& piece, int subdiv, bool degenerate_annulus) {
    PieceRole r;
    const PieceDomain& dom = piece.mesh.pieces[0];
    size_t holes = dom.hole_centers.size();
    if (holes == 0) {
        r.kind = PieceRole::Kind::DiskCap;
        r.circles = frozen_circles(dom, subdiv, true);
    } else if (holes == 1) {
        r.kind = PieceRole::Kind::Annulus;
        r.degenerate = degenerate_annulus;
        r.zpt = {kSaddleRadiusMid * std::cos(kSaddleAngle),
                 kSaddleRadiusMid * std::sin(kSaddleAngle)};
        r.circles = frozen_circles(dom, subdiv, true);
    } else {
        r.kind = PieceRole::Kind::Handle;
        r.circles = frozen_circles(dom, subdiv, true);
        r.sources = dom.hole_centers;
    }
    return r;
}

std::vector<FixedPoint> role_fixed_points(const PieceRole& r, int piece, double r_hole) {
    std::vector<FixedPoint> fps;
    if (r.kind == PieceRole::Kind::DiskCap) {
        fps.push_back({piece, {0, 0}, FixedPointType::Attracting});
    } else if (r.kind == PieceRole::Kind::Annulus && r.degenerate) {
        fps.push_back({piece, r.zpt, FixedPointType::DegenerateSaddle});
    } else if (r.kind == PieceRole::Kind::Handle) {
        for (double x : collinear_saddles(r.sources, r_hole))
            fps.push_back({piece, {x, 0}, FixedPointType::HyperbolicSaddle});
    }
    return fps;
}

}  // namespace

System make_generator(int g, const std::vector<int>& ks, int subdiv) {
    long long sum = std::accumulate(ks.begin(), ks.end(), 0LL);
    if (sum != g) throw std::invalid_argument("generator: partition must sum to the genus");
    for (int k : ks)
        if (k < 0) throw std::invalid_argument("generator: parts must be non-negative");
    int n = static_cast<int>(ks.size());
    System sys;
    sys.genus = g;
    sys.ks = ks;
    sys.generator = true;
    sys.name = "generator";

    if (n == 0) {
        // Degenerate input: a fully frozen sphere, K the whole surface.
        auto m = std::make_shared<TriMesh>(mesh::build_sphere(std::max(subdiv, 1)));
        sys.k = Subcomplex::whole(*m);
        std::vector<PieceRole> roles(m->pieces.size());
        sys.flow = assemble_flow(m, std::move(roles), Subcomplex::whole(*m), {}, "generator-0");
        sys.surface = m;
        sys.degenerate = true;
        return sys;
    }

    int holes = g + n;
    SurfacePiece core = mesh::sphere_with_holes(holes, subdiv);
    std::vector<SurfacePiece> pieces;
    std::vector<mesh::CoreMatching> matching;
    int next_circle = 0;
    for (int i = 0; i < n; ++i) {
        int k = ks[i];
        SurfacePiece p = mesh::sphere_with_holes(k == 0 ? 1 : k + 1, subdiv);
        int pc = static_cast<int>(p.boundary_circles.size());
        int pi = static_cast<int>(pieces.size());
        for (int c = 0; c < pc; ++c) matching.push_back({pi, c, next_circle++});
        pieces.push_back(std::move(p));
    }
    mesh::GluedSurface glued = mesh::glue(core, pieces, matching);
    auto m = std::make_shared<TriMesh>(std::move(glued.mesh));

    std::vector<PieceRole> roles;
    roles.push_back(PieceRole{});  // frozen core
    std::vector<FixedPoint> fps;
    for (int i = 0; i < n; ++i) {
        PieceRole r = role_for_piece(pieces[i], subdiv, /*degenerate_annulus=*/true);
        double r_hole =
            pieces[i].mesh.pieces[0].hole_radii.empty() ? 0.0 : pieces[i].mesh.pieces[0].hole_radii[0];
        for (FixedPoint fp : role_fixed_points(r, i + 1, r_hole)) fps.push_back(fp);
        roles.push_back(std::move(r));
    }
    sys.k = glued.raw.piece_subcomplex(0);
    // Reparent the subcomplex onto the shared mesh (same incidence data).
    sys.flow = assemble_flow(m, std::move(roles), sys.k, std::move(fps), "generator");
    sys.surface = m;
    return sys;
}

namespace {

System genus2_example_common(int subdiv, bool degenerate) {
    SurfacePiece core = mesh::sphere_with_holes(4, subdiv);
    SurfacePiece a1 = mesh::sphere_with_holes(2, subdiv);
    SurfacePiece a2 = mesh::sphere_with_holes(2, subdiv);
    mesh::GluedSurface glued = mesh::glue(
        core, {a1, a2}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 2}, {1, 1, 3}});
    auto m = std::make_shared<TriMesh>(std::move(glued.mesh));
    System sys;
    sys.genus = 2;
    sys.k = glued.raw.piece_subcomplex(0);
    std::vector<PieceRole> roles;
    roles.push_back(PieceRole{});
    std::vector<FixedPoint> fps;
    for (const SurfacePiece* p : {&a1, &a2}) {
        PieceRole r = role_for_piece(*p, subdiv, degenerate);
        int piece = static_cast<int>(roles.size());
        for (FixedPoint fp : role_fixed_points(r, piece, p->mesh.pieces[0].hole_radii[0]))
            fps.push_back(fp);
        roles.push_back(std::move(r));
    }
    sys.name = degenerate ? "generator(2,[1,1])" : "genus2-fibered";
    sys.flow = assemble_flow(m, std::move(roles), sys.k, std::move(fps), sys.name);
    sys.surface = m;
    return sys;
}

}  // namespace

System genus2_fibered_example(int subdiv) {
    System s = genus2_example_common(subdiv, false);
    s.genus = 2;
    return s;
}

System genus2_dissonant_example(int subdiv) {
    SurfacePiece core = mesh::sphere_with_holes(4, subdiv);
    SurfacePiece w2 = mesh::sphere_with_holes(3, subdiv);   // carries the saddle
    SurfacePiece ann = mesh::sphere_with_holes(2, subdiv);  // purely repelled channel
    SurfacePiece cap = mesh::sphere_with_holes(1, subdiv);  // frozen far cap
    std::vector<SurfacePiece> all = {core, w2, ann, cap};
    std::vector<mesh::GlueJoint> joints = {
        {0, 0, 1, 0}, {0, 1, 1, 1}, {0, 2, 1, 2}, {0, 3, 2, 0}, {2, 1, 3, 0}};
    mesh::GlueResult raw = mesh::glue_pieces(all, joints);
    std::string why;
    if (!raw.mesh.is_closed_orientable_connected(&why))
        throw std::runtime_error("dissonant example surface invalid: " + why);
    auto m = std::make_shared<TriMesh>(std::move(raw.mesh));
    raw.mesh = *m;

    System sys;
    sys.genus = m->genus();
    sys.k = raw.piece_subcomplex(0);
    Subcomplex frozen = sys.k;
    Subcomplex capsub = raw.piece_subcomplex(3);
    for (size_t v = 0; v < frozen.verts.size(); ++v) frozen.verts[v] |= capsub.verts[v];
    for (size_t e = 0; e < frozen.edges.size(); ++e) frozen.edges[e] |= capsub.edges[e];
    for (size_t t = 0; t < frozen.tris.size(); ++t) frozen.tris[t] |= capsub.tris[t];

    std::vector<PieceRole> roles(4);
    roles[0].kind = PieceRole::Kind::Frozen;
    roles[1] = role_for_piece(w2, subdiv, false);
    roles[2] = role_for_piece(ann, subdiv, false);  // plain outward channel
    roles[3].kind = PieceRole::Kind::Frozen;
    std::vector<FixedPoint> fps =
        role_fixed_points(roles[1], 1, w2.mesh.pieces[0].hole_radii[0]);
    sys.name = "genus2-dissonant";
    sys.flow = assemble_flow(m, std::move(roles), std::move(frozen), std::move(fps), sys.name);
    sys.surface = m;
    return sys;
}

System torus_star_repeller(int subdiv) {
    SurfacePiece core = mesh::sphere_with_holes(2, subdiv);
    SurfacePiece handle = mesh::sphere_with_holes(2, subdiv);
    mesh::GluedSurface glued = mesh::glue(core, {handle}, {{0, 0, 0}, {0, 1, 1}});
    auto m = std::make_shared<TriMesh>(std::move(glued.mesh));

    // Pick a mid-ring interior vertex of the core chart, remove its two-ring
    // star disk from K, and pull the disk toward the vertex; everything else
    // stays frozen. K is then a torus minus an open disk: non-separating
    // with rk H1(K;Z2) = rk H1(M;Z2) = 2.
    int vsel = -1;
    Vec2 vpos;
    double best = 1e300;
    for (size_t t = 0; t < m->tris.size(); ++t) {
        if (m->tri_piece[t] != 0) continue;
        for (int j = 0; j < 3; ++j) {
            Vec2 q = m->tri_uv[t][j];
            double score = std::fabs(q.norm() - 0.675) + std::fabs(std::atan2(q.y, q.x) - 1.0);
            if (score < best) {
                best = score;
                vsel = m->tris[t][j];
                vpos = q;
            }
        }
    }
    Subcomplex seed = Subcomplex::empty(*m);
    seed.add_vertex(vsel);
    Subcomplex disk = mesh::star_neighborhood(*m, seed, 2);
    auto region_tris = std::make_shared<std::vector<std::array<Vec2, 3>>>();
    std::vector<char> in_region(m->tris.size(), 0);
    for (size_t t = 0; t < m->tris.size(); ++t)
        if (disk.tris[t]) {
            in_region[t] = 1;
            region_tris->push_back(m->tri_uv[t]);
        }
    // Rim of the disk: edges of region triangles whose other side is outside.
    auto rim = std::make_shared<std::vector<std::array<Vec2, 2>>>();
    for (size_t t = 0; t < m->tris.size(); ++t) {
        if (!in_region[t]) continue;
        for (int j = 0; j < 3; ++j) {
            int nb = m->tri_neighbors[t][j];
            if (nb >= 0 && !in_region[nb])
                rim->push_back({m->tri_uv[t][j], m->tri_uv[t][(j + 1) % 3]});
        }
    }
    std::vector<int> k_tris;
    for (size_t t = 0; t < m->tris.size(); ++t)
        if (!in_region[t]) k_tris.push_back(static_cast<int>(t));

    System sys;
    sys.genus = 1;
    sys.k = Subcomplex::from_triangles(*m, k_tris);
    sys.name = "torus-star-repeller";

    Flow f;
    f.surface = m;
    f.frozen = sys.k;
    f.fixed_points = {{0, vpos, FixedPointType::Attracting}};
    f.default_step = 1e-3 * chart_diameter(*m);
    f.name = sys.name;
    Vec2 center = vpos;
    f.field = [region_tris, rim, center](int piece, const Vec2& p) -> Vec2 {
        if (piece != 0) return {0, 0};
        bool inside = false;
        for (const auto& uv : *region_tris)
            if (mesh::point_in_triangle(uv, p)) {
                inside = true;
                break;
            }
        if (!inside) return {0, 0};
        double d = 1e300;
        for (const auto& sg : *rim) d = std::min(d, point_segment_dist(p, sg[0], sg[1]));
        return (p - center) * (-2.0 * bump(d, 0.08));
    };
    sys.flow = std::move(f);
    sys.surface = m;
    return sys;
}

System expansion_disk() {
    // Polar-exact disk chart of radius 4: rings at j/4, 96 sectors.
    TriMesh m;
    const int rings = 16, sectors = 96;
    const double radius = 4.0;
    m.nv = 1 + rings * sectors;
    PieceDomain dom;
    dom.kind = PieceDomain::Kind::DiskWithHoles;
    dom.name = "expansion-disk";
    dom.outer_radius = radius;
    m.pieces.push_back(dom);
    auto vid = [&](int j, int i) { return 1 + (j - 1) * sectors + (i % sectors); };
    auto uv = [&](int j, int i) -> Vec2 {
        double r = radius * j / rings, a = kTwoPi * i / sectors;
        return {r * std::cos(a), r * std::sin(a)};
    };
    for (int i = 0; i < sectors; ++i) {
        m.tris.push_back({0, vid(1, i), vid(1, i + 1)});
        m.tri_piece.push_back(0);
        m.tri_uv.push_back({Vec2{0, 0}, uv(1, i), uv(1, i + 1)});
    }
    for (int j = 1; j < rings; ++j)
        for (int i = 0; i < sectors; ++i) {
            m.tris.push_back({vid(j, i), vid(j + 1, i), vid(j + 1, i + 1)});
            m.tri_piece.push_back(0);
            m.tri_uv.push_back({uv(j, i), uv(j + 1, i), uv(j + 1, i + 1)});
            m.tris.push_back({vid(j, i), vid(j + 1, i + 1), vid(j, i + 1)});
            m.tri_piece.push_back(0);
            m.tri_uv.push_back({uv(j, i), uv(j + 1, i + 1), uv(j, i + 1)});
        }
    m.finalize();
    auto mp = std::make_shared<TriMesh>(std::move(m));
    System sys;
    sys.k = Subcomplex::empty(*mp);
    sys.name = "expansion-disk";
    Flow f;
    f.surface = mp;
    f.frozen = Subcomplex::empty(*mp);
    f.contained = false;
    f.default_step = 1e-3 * chart_diameter(*mp);
    f.name = sys.name;
    f.field = [](int, const Vec2& p) { return p; };
    sys.flow = std::move(f);
    sys.surface = mp;
    return sys;
}

namespace {

System piece_system(SurfacePiece piece, int subdiv, PieceRole role, std::string name) {
    auto m = std::make_shared<TriMesh>(std::move(piece.mesh));
    System sys;
    sys.name = name;
    // K is the frozen boundary: every boundary circle.
    Subcomplex frozen = Subcomplex::empty(*m);
    for (int e : m->boundary_edge_ids()) frozen.add_edge(*m, e);
    sys.k = frozen;
    double r_hole = m->pieces[0].hole_radii.empty() ? 0.0 : m->pieces[0].hole_radii[0];
    std::vector<FixedPoint> fps = role_fixed_points(role, 0, r_hole);
    sys.flow = assemble_flow(m, {std::move(role)}, frozen, std::move(fps), std::move(name));
    sys.surface = m;
    return sys;
}

}  // namespace

System disk_flow(int subdiv) {
    SurfacePiece p = mesh::sphere_with_holes(1, subdiv);
    PieceRole r = role_for_piece(p, subdiv, false);
    return piece_system(std::move(p), subdiv, std::move(r), "disk-flow");
}

System annulus_flow(AnnulusVariant variant, int subdiv) {
    SurfacePiece p = mesh::sphere_with_holes(2, subdiv);
    PieceRole r = role_for_piece(p, subdiv, variant == AnnulusVariant::DegenerateSaddle);
    return piece_system(std::move(p), subdiv, std::move(r),
                        variant == AnnulusVariant::DegenerateSaddle ? "annulus-degenerate"
                                                                    : "annulus-fibered");
}

System handle_flow(int k, int subdiv) {
    if (k < 2) throw std::invalid_argument("handle_flow requires k >= 2 (use annulus_flow)");
    SurfacePiece p = mesh::sphere_with_holes(k + 1, subdiv);
    PieceRole r = role_for_piece(p, subdiv, false);
    return piece_system(std::move(p), subdiv, std::move(r), "handle-" + std::to_string(k));
}

// ---------------------------------------------------------------------------
// Parametrized families on the band sphere
// ---------------------------------------------------------------------------

namespace {

constexpr int kBandCols = 48;
constexpr int kBandRows = 32;
constexpr double kEscapeGain = 40.0;  // transverse escape coefficient

struct BandMesh {
    std::shared_ptr<const TriMesh> mesh;
    Subcomplex equator;
};

BandMesh make_band_mesh() {
    auto m = std::make_shared<TriMesh>(mesh::build_band_sphere(kBandCols, kBandRows));
    Subcomplex eq = Subcomplex::empty(*m);
    int row = kBandRows / 2;
    auto vid = [&](int j) { return (row - 1) * kBandCols + (j % kBandCols); };
    for (int j = 0; j < kBandCols; ++j) {
        int e = m->edge_id(std::min(vid(j), vid(j + 1)), std::max(vid(j), vid(j + 1)));
        if (e < 0) throw std::runtime_error("equator edge missing");
        eq.add_edge(*m, e);
    }
    return {m, eq};
}

const BandMesh& band_mesh() {
    static BandMesh bm = make_band_mesh();
    return bm;
}

Flow band_flow(std::shared_ptr<const TriMesh> m, const Subcomplex& equator, double lambda,
               std::function<Vec2(double, const Vec2&)> field, std::string name,
               std::vector<FixedPoint> fps) {
    Flow f;
    f.surface = std::move(m);
    f.frozen = equator;
    bool frozen_equator = true;
    {
        // The equator stays frozen only when the field vanishes along u = 0.
        Vec2 probe = field(lambda, {2.0, 0.0});
        frozen_equator = probe.x == 0 && probe.y == 0;
    }
    if (!frozen_equator) f.frozen = Subcomplex::empty(*f.surface);
    f.fixed_points = std::move(fps);
    f.default_step = 2e-3;
    f.name = std::move(name);
    f.field = [field, lambda](int, const Vec2& p) { return field(lambda, p); };
    return f;
}

FlowFamily make_family(std::string name, std::function<Vec2(double, const Vec2&)> field,
                       std::function<std::vector<FixedPoint>(double)> fps) {
    const BandMesh& bm = band_mesh();
    FlowFamily fam;
    fam.surface = bm.mesh;
    fam.k0 = bm.equator;
    fam.name = name;
    fam.at = [=, mesh = bm.mesh, eq = bm.equator](double lambda) {
        return band_flow(mesh, eq, lambda, field,
                         name + "@" + std::to_string(lambda), fps(lambda));
    };
    return fam;
}

std::vector<FixedPoint> pole_fps(double) {
    return {{0, {0.0, 1.0}, FixedPointType::Repelling},
            {0, {0.0, -1.0}, FixedPointType::Repelling}};
}

// Tangential drift proportional to lambda*(1-cos theta) along the equator
// direction plus a one-signed transverse escape term with the same angular
// profile; both damped by (1-u^2) so the poles stay fixed and excursions
// turn back toward the equator instead of parking at a pole. For lambda > 0
// the unstable manifold of the collapsed point at theta = 0 is a homoclinic
// loop whose excursion leaves the equatorial band; every speed scales with
// lambda, so the cell-level picture is the same at each positive grid value.
constexpr double kDriftGain = 8.0;

Vec2 collapse_field(double lambda, const Vec2& p) {
    double th = p.x, u = p.y;
    double w = 1.0 - u * u;
    double hump = 1.0 - std::cos(th);
    return {kDriftGain * lambda * hump * w,
            w * (0.5 * kEscapeGain * lambda * hump * w * w - u)};
}

}  // namespace

FlowFamily equator_collapse_family() {
    return make_family("equator-collapse", collapse_field, [](double lambda) {
        std::vector<FixedPoint> fps = pole_fps(lambda);
        if (lambda > 0)
            fps.push_back({0, {0.0, 0.0}, FixedPointType::DegenerateSaddle});
        return fps;
    });
}

FlowFamily equator_escape_family() {
    return make_family(
        "equator-escape",
        [](double lambda, const Vec2& p) -> Vec2 {
            double u = p.y, w = 1.0 - u * u;
            return {0.0, w * (10.0 * lambda - u)};
        },
        pole_fps);
}

FlowFamily band_reversal_family() {
    return make_family(
        "band-reversal",
        [](double lambda, const Vec2& p) -> Vec2 {
            double u = p.y, w = 1.0 - u * u;
            return {0.0, w * u * (1.0 - 2.0 * lambda)};
        },
        pole_fps);
}

FlowFamily equator_constant_family() {
    return make_family(
        "equator-constant",
        [](double, const Vec2& p) -> Vec2 {
            double u = p.y;
            return {0.0, -(1.0 - u * u) * u};
        },
        pole_fps);
}

FlowFamily saddle_constant_family() {
    FlowFamily fam = make_family(
        "saddle-constant",
        [](double, const Vec2& p) { return collapse_field(0.3, p); },
        [](double) {
            std::vector<FixedPoint> fps = pole_fps(0);
            fps.push_back({0, {0.0, 0.0}, FixedPointType::DegenerateSaddle});
            return fps;
        });
    return fam;
}

FlowFamily family_by_name(const std::string& name) {
    if (name == "equator-collapse") return equator_collapse_family();
    if (name == "equator-escape") return equator_escape_family();
    if (name == "band-reversal") return band_reversal_family();
    if (name == "equator-constant") return equator_constant_family();
    if (name == "saddle-constant") return saddle_constant_family();
    throw std::invalid_argument("unknown family: " + name);
}

std::vector<std::string> family_names() {
    return {"equator-collapse", "equator-escape", "band-reversal", "equator-constant",
            "saddle-constant"};
}

System fixture_by_name(const std::string& name, int subdiv) {
    if (name == "genus2-fibered") return genus2_fibered_example(subdiv);
    if (name == "genus2-dissonant") return genus2_dissonant_example(subdiv);
    if (name == "torus-star-repeller") return torus_star_repeller(subdiv);
    if (name == "expansion-disk") return expansion_disk();
    if (name == "disk-flow") return disk_flow(subdiv);
    if (name == "annulus-fibered") return annulus_flow(AnnulusVariant::HomoclinicFibered, subdiv);
    if (name == "annulus-degenerate")
        return annulus_flow(AnnulusVariant::DegenerateSaddle, subdiv);
    if (name == "handle-2") return handle_flow(2, subdiv);
    if (name == "handle-3") return handle_flow(3, subdiv);
    if (name == "sphere-cap-1") return make_generator(0, {0}, subdiv);
    if (name == "sphere-cap-2") return make_generator(0, {0, 0}, subdiv);
    if (name == "torus-generator") return make_generator(1, {1}, subdiv);
    throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
    return {"genus2-fibered",  "genus2-dissonant", "torus-star-repeller", "expansion-disk",
            "disk-flow",       "annulus-fibered",  "annulus-degenerate",  "handle-2",
            "handle-3",        "sphere-cap-1",     "sphere-cap-2",        "torus-generator"};
}

}  // namespace surfdyn::builtins
