#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "surfdyn/mesh.hpp"

namespace surfdyn::flow {

enum class FixedPointType {
    Attracting,
    Repelling,
    HyperbolicSaddle,
    DegenerateSaddle,
    FixedCircle,
};

struct FixedPoint {
    int piece = 0;
    Vec2 pos;
    FixedPointType type = FixedPointType::Attracting;
};

// Vector field on (the charts of) a triangulated surface. The frozen
// subcomplex is where the field vanishes identically; builtin flows keep
// every trajectory inside its starting chart, so integration never needs a
// chart transition.
struct Flow {
    std::shared_ptr<const mesh::TriMesh> surface;
    std::function<Vec2(int piece, const Vec2&)> field;
    mesh::Subcomplex frozen;
    std::vector<FixedPoint> fixed_points;
    bool contained = true;      // false: trajectories may leave the chart domain
    double default_step = 1e-3;
    std::string name;

    Vec2 eval(int piece, const Vec2& p) const { return field(piece, p); }
};

enum class Termination { TimeHorizon, EnteredTarget, LeftDomain };

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec2> points;
    int piece = 0;
    Termination termination = Termination::TimeHorizon;
};

enum class StepAction { Continue, StopTarget, StopDomain };

// Fixed-step RK4 in the active chart. `T` may be negative (backward time).
// The callback sees every accepted sample and may stop the run.
Termination integrate_callback(const Flow& f, int piece, Vec2 x, double T, double step,
                               const std::function<StepAction(double t, const Vec2&)>& cb);

Trajectory integrate(const Flow& f, int piece, Vec2 x, double T, double step,
                     int record_every = 1);

Vec2 time_tau_map(const Flow& f, int piece, Vec2 x, double tau, double step);

// First exit time sup{t >= 0 | x[0,t] subset N} refined by bisection.
// nullopt when the horizon is reached inside N (or the start is frozen).
std::optional<double> exit_time(const Flow& f, const mesh::CellLocator& loc,
                                const mesh::Subcomplex& n, int piece, Vec2 x,
                                double step, double t_max);
// Entrance time inf{t <= 0 | x[t,0] subset N}; value returned is <= 0.
std::optional<double> entrance_time(const Flow& f, const mesh::CellLocator& loc,
                                    const mesh::Subcomplex& n, int piece, Vec2 x,
                                    double step, double t_max);

// Orbit-preserving surgery: multiply the field by a bump that vanishes
// exactly on S (squared chart distance to S, capped at 1 at radius d0).
Flow beck_freeze(const Flow& f, const mesh::Subcomplex& s, double d0);

// Exact distance from p to the regular n-gon inscribed in the circle
// (center c, radius r) with vertex 0 at angle `phase`.
double regular_polygon_dist(const Vec2& p, const Vec2& c, double r, int n, double phase);

}  // namespace surfdyn::flow
