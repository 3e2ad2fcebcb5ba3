#include "surfdyn/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace surfdyn::flow {

namespace {

// Keep the state inside the chart domain. Cylinder charts wrap theta and
// clamp u; disk charts clamp only when the flow is declared contained.
bool normalize_state(const Flow& f, int piece, Vec2& p) {
    const mesh::PieceDomain& dom = f.surface->pieces[piece];
    if (dom.kind == mesh::PieceDomain::Kind::Cylinder) {
        p.x = wrap_angle(p.x);
        p.y = std::clamp(p.y, -1.0, 1.0);
        return true;
    }
    if (dom.kind == mesh::PieceDomain::Kind::DiskWithHoles) {
        double r = p.norm();
        bool inside = r <= dom.outer_radius + 1e-12;
        for (size_t h = 0; h < dom.hole_centers.size() && inside; ++h)
            if ((p - dom.hole_centers[h]).norm() < dom.hole_radii[h] - 1e-12) inside = false;
        if (inside) return true;
        if (!f.contained) return false;
        if (r > dom.outer_radius) p = p * (dom.outer_radius / r);
        for (size_t h = 0; h < dom.hole_centers.size(); ++h) {
            Vec2 d = p - dom.hole_centers[h];
            double dr = d.norm();
            if (dr < dom.hole_radii[h] && dr > 0)
                p = dom.hole_centers[h] + d * (dom.hole_radii[h] / dr);
        }
        return true;
    }
    return true;
}

Vec2 rk4_step(const Flow& f, int piece, const Vec2& x, double h) {
    Vec2 k1 = f.eval(piece, x);
    Vec2 k2 = f.eval(piece, x + k1 * (h / 2));
    Vec2 k3 = f.eval(piece, x + k2 * (h / 2));
    Vec2 k4 = f.eval(piece, x + k3 * h);
    return x + (k1 + k2 * 2 + k3 * 2 + k4) * (h / 6);
}

}  // namespace

Termination integrate_callback(const Flow& f, int piece, Vec2 x, double T, double step,
                               const std::function<StepAction(double, const Vec2&)>& cb) {
    if (step <= 0) throw std::invalid_argument("integrate: step must be positive");
    double dir = T >= 0 ? 1.0 : -1.0;
    double horizon = std::fabs(T);
    double h = step * dir;
    normalize_state(f, piece, x);
    if (cb) {
        StepAction a = cb(0.0, x);
        if (a == StepAction::StopTarget) return Termination::EnteredTarget;
        if (a == StepAction::StopDomain) return Termination::LeftDomain;
    }
    double t = 0.0;
    while (t < horizon) {
        double hh = std::min(step, horizon - t) * dir;
        Vec2 nx = rk4_step(f, piece, x, hh);
        if (!normalize_state(f, piece, nx)) {
            if (cb) cb(t + std::fabs(hh) * dir, nx);
            return Termination::LeftDomain;
        }
        t += std::fabs(hh);
        x = nx;
        if (cb) {
            StepAction a = cb(t * dir, x);
            if (a == StepAction::StopTarget) return Termination::EnteredTarget;
            if (a == StepAction::StopDomain) return Termination::LeftDomain;
        }
    }
    return Termination::TimeHorizon;
}

Trajectory integrate(const Flow& f, int piece, Vec2 x, double T, double step,
                     int record_every) {
    Trajectory tr;
    tr.piece = piece;
    int count = 0;
    tr.termination = integrate_callback(
        f, piece, x, T, step, [&](double t, const Vec2& p) {
            if (count++ % record_every == 0) {
                tr.times.push_back(t);
                tr.points.push_back(p);
            }
            return StepAction::Continue;
        });
    return tr;
}

Vec2 time_tau_map(const Flow& f, int piece, Vec2 x, double tau, double step) {
    Vec2 last = x;
    integrate_callback(f, piece, x, tau, step, [&](double, const Vec2& p) {
        last = p;
        return StepAction::Continue;
    });
    return last;
}

namespace {

std::optional<double> crossing_time(const Flow& f, const mesh::CellLocator& loc,
                                    const mesh::Subcomplex& n, int piece, Vec2 x,
                                    double step, double t_max, bool backward) {
    Vec2 v = f.eval(piece, x);
    if (v.x == 0 && v.y == 0) return std::nullopt;  // stationary point never exits
    int c0 = loc.locate_or_nearest(piece, x);
    if (c0 < 0 || !n.tris[c0]) return 0.0;  // already outside

    const Flow* fp = &f;
    Flow rev;
    if (backward) {
        rev = f;
        auto base = f.field;
        rev.field = [base](int pc, const Vec2& p) { return base(pc, p) * -1.0; };
        fp = &rev;
    }
    double t_in = 0.0;
    Vec2 p_in = x;
    bool crossed = false;
    double t_out = 0.0;
    integrate_callback(*fp, piece, x, t_max, step, [&](double t, const Vec2& p) {
        int c = loc.locate_or_nearest(piece, p);
        if (c >= 0 && n.tris[c]) {
            t_in = t;
            p_in = p;
            return StepAction::Continue;
        }
        crossed = true;
        t_out = t;
        return StepAction::StopTarget;
    });
    if (!crossed) return std::nullopt;
    // Bisect the final step interval on the sub-step length.
    double lo = 0.0, hi = t_out - t_in;
    for (int it = 0; it < 50 && hi - lo > 1e-12; ++it) {
        double mid = (lo + hi) / 2;
        Vec2 pm = mid > 0 ? time_tau_map(*fp, piece, p_in, mid, std::min(step, mid)) : p_in;
        int c = loc.locate_or_nearest(piece, pm);
        if (c >= 0 && n.tris[c])
            lo = mid;
        else
            hi = mid;
    }
    return t_in + (lo + hi) / 2;
}

}  // namespace

std::optional<double> exit_time(const Flow& f, const mesh::CellLocator& loc,
                                const mesh::Subcomplex& n, int piece, Vec2 x,
                                double step, double t_max) {
    return crossing_time(f, loc, n, piece, x, step, t_max, false);
}

std::optional<double> entrance_time(const Flow& f, const mesh::CellLocator& loc,
                                    const mesh::Subcomplex& n, int piece, Vec2 x,
                                    double step, double t_max) {
    auto t = crossing_time(f, loc, n, piece, x, step, t_max, true);
    if (!t) return std::nullopt;
    return -*t;
}

Flow beck_freeze(const Flow& f, const mesh::Subcomplex& s, double d0) {
    // Chart segments of S per piece, for exact distance evaluation.
    struct Seg {
        Vec2 a, b;
    };
    auto segs = std::make_shared<std::vector<std::vector<Seg>>>(f.surface->pieces.size());
    auto pts = std::make_shared<std::vector<std::vector<Vec2>>>(f.surface->pieces.size());
    const mesh::TriMesh& m = *f.surface;
    for (size_t e = 0; e < m.edges.size(); ++e) {
        if (!s.edges[e]) continue;
        int t = m.edge_tris[e][0];
        for (int j = 0; j < 3; ++j) {
            if (m.tri_edges[t][j] != static_cast<int>(e)) continue;
            (*segs)[m.tri_piece[t]].push_back({m.tri_uv[t][j], m.tri_uv[t][(j + 1) % 3]});
        }
    }
    std::vector<char> vertex_on_edge(m.nv, 0);
    for (size_t e = 0; e < m.edges.size(); ++e)
        if (s.edges[e]) {
            vertex_on_edge[m.edges[e][0]] = 1;
            vertex_on_edge[m.edges[e][1]] = 1;
        }
    for (size_t t = 0; t < m.tris.size(); ++t)
        for (int j = 0; j < 3; ++j) {
            int v = m.tris[t][j];
            if (s.verts[v] && !vertex_on_edge[v]) (*pts)[m.tri_piece[t]].push_back(m.tri_uv[t][j]);
        }

    Flow out = f;
    out.frozen = s;
    for (size_t v = 0; v < f.frozen.verts.size(); ++v) out.frozen.verts[v] |= f.frozen.verts[v];
    for (size_t e = 0; e < f.frozen.edges.size(); ++e) out.frozen.edges[e] |= f.frozen.edges[e];
    for (size_t t = 0; t < f.frozen.tris.size(); ++t) out.frozen.tris[t] |= f.frozen.tris[t];
    auto base = f.field;
    out.field = [base, segs, pts, d0](int piece, const Vec2& p) -> Vec2 {
        double d2 = 1e300;
        for (const auto& sg : (*segs)[piece]) {
            double d = point_segment_dist(p, sg.a, sg.b);
            d2 = std::min(d2, d * d);
        }
        for (const auto& q : (*pts)[piece]) d2 = std::min(d2, (p - q).norm2());
        double factor = d2 >= 1e300 ? 1.0 : std::min(1.0, d2 / (d0 * d0));
        return base(piece, p) * factor;
    };
    out.name = f.name + "+frozen";
    return out;
}

double regular_polygon_dist(const Vec2& p, const Vec2& c, double r, int n, double phase) {
    Vec2 d = p - c;
    double ang = std::atan2(d.y, d.x) - phase;
    double sector = kTwoPi / n;
    double kf = std::floor(ang / sector);
    double best = 1e300;
    for (int dk = -1; dk <= 1; ++dk) {
        double a0 = phase + (kf + dk) * sector;
        double a1 = a0 + sector;
        Vec2 v0{c.x + r * std::cos(a0), c.y + r * std::sin(a0)};
        Vec2 v1{c.x + r * std::cos(a1), c.y + r * std::sin(a1)};
        best = std::min(best, point_segment_dist(p, v0, v1));
    }
    return best;
}

}  // namespace surfdyn::flow
