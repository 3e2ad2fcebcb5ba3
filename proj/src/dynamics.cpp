#include "surfdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <thread>

namespace surfdyn::dynamics {

using flow::Flow;
using flow::StepAction;
using mesh::CellLocator;
using mesh::Subcomplex;
using mesh::TriMesh;

CellSet cellset_from_subcomplex(const Subcomplex& s) {
    return CellSet(s.tris.begin(), s.tris.end());
}

Subcomplex subcomplex_from_cellset(const TriMesh& m, const CellSet& cells) {
    std::vector<int> ids;
    for (size_t t = 0; t < cells.size(); ++t)
        if (cells[t]) ids.push_back(static_cast<int>(t));
    return Subcomplex::from_triangles(m, ids);
}

int cellset_count(const CellSet& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), 1));
}

std::vector<double> piece_cell_width(const TriMesh& m) {
    std::vector<std::vector<double>> lens(m.pieces.size());
    for (size_t t = 0; t < m.tris.size(); ++t) {
        double l = 0;
        for (int j = 0; j < 3; ++j)
            l = std::max(l, (m.tri_uv[t][j] - m.tri_uv[t][(j + 1) % 3]).norm());
        lens[m.tri_piece[t]].push_back(l);
    }
    std::vector<double> out(m.pieces.size(), 0.0);
    for (size_t p = 0; p < lens.size(); ++p) {
        if (lens[p].empty()) continue;
        std::sort(lens[p].begin(), lens[p].end());
        out[p] = lens[p][lens[p].size() / 2];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid map
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> vertex_star_table(const TriMesh& m) {
    std::vector<std::vector<int>> by_vertex(m.nv);
    for (size_t t = 0; t < m.tris.size(); ++t)
        for (int j = 0; j < 3; ++j) by_vertex[m.tris[t][j]].push_back(static_cast<int>(t));
    return by_vertex;
}

}  // namespace

GridDynamics build_grid(const Flow& f, const CellLocator& loc, const GridOptions& opt) {
    const TriMesh& m = *f.surface;
    GridDynamics g;
    g.mesh = f.surface;
    g.step = opt.step > 0 ? opt.step : f.default_step;

    std::vector<double> width = piece_cell_width(m);
    double tau = opt.tau;
    if (tau <= 0) {
        // Calibrate so most cells of the region of interest advance
        // ~tau_cells widths: the drift must dominate the one-ring bloat or
        // pruning degenerates into self-loops.
        std::vector<double> speed_per_width;
        for (size_t t = 0; t < m.tris.size(); ++t) {
            if (!opt.region.empty() && !opt.region[t]) continue;
            Vec2 c = mesh::triangle_centroid(m.tri_uv[t]);
            double v = f.eval(m.tri_piece[t], c).norm();
            if (v > 1e-12) speed_per_width.push_back(v / width[m.tri_piece[t]]);
        }
        if (speed_per_width.empty()) {
            tau = 1.0;
        } else {
            std::sort(speed_per_width.begin(), speed_per_width.end());
            double q =
                speed_per_width[static_cast<size_t>(opt.percentile * (speed_per_width.size() - 1))];
            tau = opt.tau_cells / std::max(q, 1e-9);
        }
    }
    g.tau = tau;

    auto star = vertex_star_table(m);
    g.f.assign(m.tris.size(), {});
    for (size_t t = 0; t < m.tris.size(); ++t) {
        int piece = m.tri_piece[t];
        std::set<int> hit;
        std::array<Vec2, 7> samples;
        for (int j = 0; j < 3; ++j) {
            samples[j] = m.tri_uv[t][j];
            samples[3 + j] = (m.tri_uv[t][j] + m.tri_uv[t][(j + 1) % 3]) / 2;
        }
        samples[6] = mesh::triangle_centroid(m.tri_uv[t]);
        for (const Vec2& s : samples) {
            Vec2 y = flow::time_tau_map(f, piece, s, tau, g.step);
            int c = loc.locate_or_nearest(piece, y);
            if (c >= 0) hit.insert(c);
        }
        std::set<int> bloat;
        for (int c : hit)
            for (int j = 0; j < 3; ++j)
                for (int s : star[m.tris[c][j]]) bloat.insert(s);
        g.f[t].assign(bloat.begin(), bloat.end());
    }
    g.finv.assign(m.tris.size(), {});
    for (size_t t = 0; t < m.tris.size(); ++t)
        for (int c : g.f[t]) g.finv[c].push_back(static_cast<int>(t));
    for (auto& v : g.finv) std::sort(v.begin(), v.end());
    return g;
}

// ---------------------------------------------------------------------------
// Invariant sets and blocks
// ---------------------------------------------------------------------------

namespace {

// Greatest subset of n whose cells keep an image inside the set under each
// of the given maps (forward, backward, or both).
CellSet prune_to_fixpoint(const GridDynamics& g, const CellSet& n, bool use_fwd, bool use_bwd) {
    CellSet s = n;
    std::queue<int> dirty;
    auto alive = [&](int c, const std::vector<std::vector<int>>& map) {
        for (int d : map[c])
            if (s[d]) return true;
        return false;
    };
    for (size_t c = 0; c < s.size(); ++c)
        if (s[c]) dirty.push(static_cast<int>(c));
    while (!dirty.empty()) {
        int c = dirty.front();
        dirty.pop();
        if (!s[c]) continue;
        bool ok = (!use_fwd || alive(c, g.f)) && (!use_bwd || alive(c, g.finv));
        if (ok) continue;
        s[c] = 0;
        for (int d : g.finv[c])
            if (s[d]) dirty.push(d);
        for (int d : g.f[c])
            if (s[d]) dirty.push(d);
    }
    return s;
}

}  // namespace

CellSet invariant_part(const GridDynamics& g, const CellSet& n) {
    return prune_to_fixpoint(g, n, true, true);
}

CellSet boundary_collar(const TriMesh& m, const CellSet& n) {
    CellSet out(n.size(), 0);
    for (size_t t = 0; t < n.size(); ++t) {
        if (!n[t]) continue;
        for (int j = 0; j < 3; ++j) {
            int nb = m.tri_neighbors[t][j];
            if (nb >= 0 && !n[nb]) {
                out[t] = 1;
                break;
            }
        }
    }
    return out;
}

bool is_isolating_neighborhood(const GridDynamics& g, const CellSet& n) {
    CellSet inv = invariant_part(g, n);
    CellSet collar = boundary_collar(*g.mesh, n);
    for (size_t t = 0; t < n.size(); ++t)
        if (inv[t] && collar[t]) return false;
    return true;
}

// Flow direction across the boundary edges of a collar cell: +1 outflow,
// -1 inflow, 0 tangent or stationary, per sampled edge midpoint.
static void classify_boundary_crossing(const flow::Flow& f, const TriMesh& m, const CellSet& n,
                                       int t, bool* out, bool* in) {
    *out = *in = false;
    for (int j = 0; j < 3; ++j) {
        int nb = m.tri_neighbors[t][j];
        if (nb < 0 || n[nb]) continue;
        Vec2 a = m.tri_uv[t][j], bq = m.tri_uv[t][(j + 1) % 3];
        Vec2 mid = (a + bq) / 2;
        // Outward normal: the triangle is CCW, so the interior lies left of
        // the directed edge and the right-hand normal points out.
        Vec2 nrm{bq.y - a.y, -(bq.x - a.x)};
        double s = dot(f.eval(m.tri_piece[t], mid), nrm);
        if (s > 1e-14) *out = true;
        if (s < -1e-14) *in = true;
    }
}

IsolatingBlock isolating_block_refine(const GridDynamics& g, const flow::Flow& f,
                                      const CellSet& n) {
    IsolatingBlock b;
    b.n = n;
    b.inv = invariant_part(g, n);
    b.n_plus = prune_to_fixpoint(g, n, true, false);
    b.n_minus = prune_to_fixpoint(g, n, false, true);
    const TriMesh& m = *g.mesh;
    CellSet collar = boundary_collar(m, n);
    b.isolating = true;
    for (size_t t = 0; t < n.size(); ++t)
        if (b.inv[t] && collar[t]) b.isolating = false;
    b.certificate = true;
    for (size_t t = 0; t < n.size(); ++t)
        if (n[t] && !b.n_plus[t] && !b.n_minus[t]) b.certificate = false;
    b.entrance.assign(n.size(), 0);
    b.exit_.assign(n.size(), 0);
    for (size_t t = 0; t < n.size(); ++t) {
        if (!collar[t]) continue;
        bool out = false, in = false;
        classify_boundary_crossing(f, m, n, static_cast<int>(t), &out, &in);
        if (out) b.exit_[t] = 1;
        if (in) b.entrance[t] = 1;
    }
    return b;
}

// ---------------------------------------------------------------------------
// Trichotomy classification
// ---------------------------------------------------------------------------

namespace {

enum class LimitKind { ReachedK, ReachedOther, Unresolved };

LimitKind limit_estimate(const Flow& f, const CellLocator& loc, const CellSet& eps_k,
                         const CellSet& frozen_other, int piece, const Vec2& x, double dir,
                         const AnalysisOptions& opt, double step,
                         const std::vector<double>& fp_radius_by_piece) {
    double fp_r = fp_radius_by_piece[piece];
    // Instant hit: starting on top of an isolated fixed point.
    for (const auto& fp : f.fixed_points)
        if (fp.piece == piece && fp.type != flow::FixedPointType::FixedCircle &&
            (x - fp.pos).norm() < fp_r)
            return LimitKind::ReachedOther;
    Vec2 v0 = f.eval(piece, x);
    if (v0.x == 0 && v0.y == 0) {
        int c0 = loc.locate_or_nearest(piece, x);
        return (c0 >= 0 && eps_k[c0]) ? LimitKind::ReachedK : LimitKind::ReachedOther;
    }

    LimitKind result = LimitKind::Unresolved;
    double in_k_since = -1, in_other_since = -1;
    int tick = 0;
    flow::integrate_callback(
        f, piece, x, dir * opt.t_max, step, [&](double t, const Vec2& p) {
            for (const auto& fp : f.fixed_points) {
                if (fp.piece == piece && fp.type != flow::FixedPointType::FixedCircle &&
                    (p - fp.pos).norm() < fp_r) {
                    result = LimitKind::ReachedOther;
                    return StepAction::StopTarget;
                }
            }
            if (tick++ % 5 != 0) return StepAction::Continue;
            int c = loc.locate_or_nearest(piece, p);
            if (c < 0) return StepAction::Continue;
            double at = std::fabs(t);
            if (eps_k[c]) {
                if (in_k_since < 0) in_k_since = at;
                if (at - in_k_since >= opt.dwell) {
                    result = LimitKind::ReachedK;
                    return StepAction::StopTarget;
                }
            } else {
                in_k_since = -1;
            }
            if (frozen_other[c]) {
                if (in_other_since < 0) in_other_since = at;
                if (at - in_other_since >= opt.dwell) {
                    result = LimitKind::ReachedOther;
                    return StepAction::StopTarget;
                }
            } else {
                in_other_since = -1;
            }
            return StepAction::Continue;
        });
    return result;
}

}  // namespace

PointLabel classify_point(const Flow& f, const CellLocator& loc, const CellSet& eps_k,
                          const CellSet& frozen_other, int piece, const Vec2& x,
                          const AnalysisOptions& opt,
                          const std::vector<double>& fp_radius_by_piece) {
    double step = opt.step > 0 ? opt.step : f.default_step;
    LimitKind fwd =
        limit_estimate(f, loc, eps_k, frozen_other, piece, x, 1.0, opt, step, fp_radius_by_piece);
    LimitKind bwd =
        limit_estimate(f, loc, eps_k, frozen_other, piece, x, -1.0, opt, step, fp_radius_by_piece);
    if (fwd == LimitKind::Unresolved || bwd == LimitKind::Unresolved)
        return PointLabel::Undetermined;
    if (fwd == LimitKind::ReachedK && bwd == LimitKind::ReachedK) return PointLabel::Homoclinic;
    if (fwd == LimitKind::ReachedK) return PointLabel::PurelyAttracted;
    if (bwd == LimitKind::ReachedK) return PointLabel::PurelyRepelled;
    return PointLabel::Outside;
}

std::vector<int> detect_dissonant(const TriMesh& m, const std::vector<PointLabel>& labels) {
    std::vector<int> out;
    for (size_t t = 0; t < labels.size(); ++t) {
        if (labels[t] != PointLabel::PurelyAttracted && labels[t] != PointLabel::PurelyRepelled)
            continue;
        for (int j = 0; j < 3; ++j) {
            int nb = m.tri_neighbors[t][j];
            if (nb >= 0 && labels[nb] == PointLabel::Homoclinic) {
                out.push_back(static_cast<int>(t));
                break;
            }
        }
    }
    return out;
}

FixedPointCensus fixed_point_census(const Flow& f) {
    FixedPointCensus c;
    for (const auto& fp : f.fixed_points) {
        switch (fp.type) {
            case flow::FixedPointType::Attracting:
                c.attracting++;
                break;
            case flow::FixedPointType::HyperbolicSaddle:
                c.hyperbolic_saddles++;
                break;
            case flow::FixedPointType::DegenerateSaddle:
                c.degenerate_saddles++;
                break;
            default:
                break;
        }
    }
    return c;
}

std::vector<std::vector<int>> cell_components(const TriMesh& m, const CellSet& cells) {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(cells.size(), 0);
    for (size_t start = 0; start < cells.size(); ++start) {
        if (!cells[start] || seen[start]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(static_cast<int>(start));
        seen[start] = 1;
        while (!q.empty()) {
            int c = q.front();
            q.pop();
            comp.push_back(c);
            for (int j = 0; j < 3; ++j) {
                int nb = m.tri_neighbors[c][j];
                if (nb >= 0 && cells[nb] && !seen[nb]) {
                    seen[nb] = 1;
                    q.push(nb);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

InfluenceReport influence_decomposition(const Flow& f, const Subcomplex& k,
                                        const AnalysisOptions& opt) {
    const TriMesh& m = *f.surface;
    CellLocator loc(m);
    InfluenceReport rep;
    rep.step = opt.step > 0 ? opt.step : f.default_step;
    rep.t_max = opt.t_max;

    CellSet k_cells = cellset_from_subcomplex(k);
    Subcomplex eps_sub = mesh::star_neighborhood(m, k, opt.eps_rings);
    CellSet eps_k = cellset_from_subcomplex(eps_sub);
    // Frozen simplices outside K act as their own limit targets.
    Subcomplex frozen_other_sub = mesh::Subcomplex::empty(m);
    bool have_other = false;
    for (size_t t = 0; t < m.tris.size(); ++t)
        if (f.frozen.tris[t] && !k.tris[t]) {
            frozen_other_sub.add_triangle(m, static_cast<int>(t));
            have_other = true;
        }
    for (size_t e = 0; e < m.edges.size(); ++e)
        if (f.frozen.edges[e] && !k.edges[e]) {
            frozen_other_sub.add_edge(m, static_cast<int>(e));
            have_other = true;
        }
    CellSet frozen_other =
        cellset_from_subcomplex(mesh::star_neighborhood(m, frozen_other_sub, have_other ? 1 : 0));

    std::vector<double> width = piece_cell_width(m);
    std::vector<double> fp_radius(width.size());
    for (size_t p = 0; p < width.size(); ++p) fp_radius[p] = opt.fp_radius_cells * width[p];

    // Per-cell labels from the centroid trajectory, in parallel.
    rep.labels.assign(m.tris.size(), PointLabel::Undetermined);
    int nthreads = opt.threads > 0 ? opt.threads
                                   : std::max(1u, std::thread::hardware_concurrency());
    auto work = [&](int lo, int hi) {
        for (int t = lo; t < hi; ++t) {
            if (k_cells[t]) {
                rep.labels[t] = PointLabel::InK;
                continue;
            }
            Vec2 c = mesh::triangle_centroid(m.tri_uv[t]);
            rep.labels[t] = classify_point(f, loc, eps_k, frozen_other, m.tri_piece[t], c, opt,
                                           fp_radius);
        }
    };
    if (nthreads <= 1) {
        work(0, static_cast<int>(m.tris.size()));
    } else {
        std::vector<std::thread> pool;
        int chunk = static_cast<int>((m.tris.size() + nthreads - 1) / nthreads);
        for (int i = 0; i < nthreads; ++i) {
            int lo = i * chunk, hi = std::min<int>(static_cast<int>(m.tris.size()), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    int undetermined = 0, sampled = 0;
    for (size_t t = 0; t < m.tris.size(); ++t) {
        if (k_cells[t]) continue;
        ++sampled;
        if (rep.labels[t] == PointLabel::Undetermined) ++undetermined;
    }
    rep.undetermined_fraction = sampled > 0 ? static_cast<double>(undetermined) / sampled : 0.0;
    if (rep.undetermined_fraction >= 0.01) {
        rep.valid = false;
        rep.invalid_reason = "undetermined fraction above 1%";
    }

    // Grid dynamics and the block around K; tau is calibrated on the block.
    Subcomplex n_sub = mesh::star_neighborhood(m, k, opt.block_rings);
    CellSet n = cellset_from_subcomplex(n_sub);
    GridOptions gopt = opt.grid;
    if (gopt.step <= 0) gopt.step = rep.step;
    if (gopt.region.empty()) gopt.region = n;
    GridDynamics grid = build_grid(f, loc, gopt);
    rep.tau = grid.tau;
    rep.block = isolating_block_refine(grid, f, n);

    // Components of I(K) \ K and their K-ends.
    CellSet influence(m.tris.size(), 0);
    for (size_t t = 0; t < m.tris.size(); ++t)
        influence[t] = rep.labels[t] == PointLabel::PurelyAttracted ||
                       rep.labels[t] == PointLabel::PurelyRepelled ||
                       rep.labels[t] == PointLabel::Homoclinic;
    auto comps = cell_components(m, influence);
    rep.component_of.assign(m.tris.size(), -1);
    for (size_t i = 0; i < comps.size(); ++i) {
        ComponentInfo info;
        info.id = static_cast<int>(i);
        info.cells = comps[i];
        for (int c : comps[i]) {
            rep.component_of[c] = static_cast<int>(i);
            info.has_homoclinic |= rep.labels[c] == PointLabel::Homoclinic;
        }
        rep.components.push_back(std::move(info));
    }
    // K-ends: components of N \ K, each assigned to the influence component
    // holding most of its cells.
    CellSet n_minus_k(m.tris.size(), 0);
    for (size_t t = 0; t < m.tris.size(); ++t) n_minus_k[t] = n[t] && !k_cells[t];
    auto ends = cell_components(m, n_minus_k);
    rep.k_ends = static_cast<int>(ends.size());
    for (const auto& end : ends) {
        std::vector<int> votes(rep.components.size(), 0);
        for (int c : end)
            if (rep.component_of[c] >= 0) votes[rep.component_of[c]]++;
        int best = -1, bestv = 0;
        for (size_t i = 0; i < votes.size(); ++i)
            if (votes[i] > bestv) {
                bestv = votes[i];
                best = static_cast<int>(i);
            }
        if (best >= 0) rep.components[best].ends++;
    }
    rep.complexity = 0;
    for (auto& comp : rep.components) {
        comp.local_complexity = std::max(0, comp.ends - 1);
        rep.complexity += comp.local_complexity;
    }
    int ends_assigned = 0;
    for (const auto& comp : rep.components) ends_assigned += comp.ends;
    if (ends_assigned != rep.k_ends ||
        rep.complexity != rep.k_ends - static_cast<int>(rep.components.size())) {
        rep.valid = false;
        rep.invalid_reason = "end bookkeeping mismatch";
    }

    rep.dissonant_cells = detect_dissonant(m, rep.labels);
    for (int c : rep.dissonant_cells)
        if (rep.component_of[c] >= 0) rep.components[rep.component_of[c]].has_dissonant = true;
    rep.census = fixed_point_census(f);
    return rep;
}

}  // namespace surfdyn::dynamics
