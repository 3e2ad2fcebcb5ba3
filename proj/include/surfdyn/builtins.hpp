#pragma once

#include <memory>
#include <string>
#include <vector>

#include "surfdyn/flow.hpp"
#include "surfdyn/mesh.hpp"

namespace surfdyn::builtins {

// A surface together with its distinguished invariant subcomplex and flow.
struct System {
    std::shared_ptr<const mesh::TriMesh> surface;
    mesh::Subcomplex k;
    flow::Flow flow;
    std::string name;
    int genus = 0;
    std::vector<int> ks;       // partition used by the generator, when applicable
    bool generator = false;
    bool degenerate = false;   // fully frozen sphere (g = 0, empty partition)
};

// Glued surface of genus g = sum(ks) with a stationary core K; each part
// k_i = 0 caps a hole with an attracting disk, k_i = 1 inserts an annulus
// with one degenerate saddle, k_i >= 2 inserts a gradient-like handle piece
// with k_i - 1 hyperbolic saddles.
System make_generator(int g, const std::vector<int>& ks, int subdiv = 1);

// Genus-2 worked examples: the all-homoclinic one (two fibered annuli, no
// dissonance) and the dissonant one (one repelled annulus ending on a frozen
// cap, one component carrying a hyperbolic saddle).
System genus2_fibered_example(int subdiv = 1);
System genus2_dissonant_example(int subdiv = 1);

// Torus with K = complement of a vertex star, cap flow pulled to the star
// center: K is a repeller with rk H1(K;Z2) = rk H1(M;Z2).
System torus_star_repeller(int subdiv = 1);

// Radial expansion r' = r on a disk chart of radius 4 (uncontained), for
// exit-time checks against the closed-form crossing times.
System expansion_disk();

enum class AnnulusVariant { HomoclinicFibered, DegenerateSaddle };

// Piece-level flows on a single chart, boundary circles frozen.
System disk_flow(int subdiv);
System annulus_flow(AnnulusVariant variant, int subdiv);
System handle_flow(int k, int subdiv);

struct FlowFamily {
    std::shared_ptr<const mesh::TriMesh> surface;
    std::function<flow::Flow(double)> at;
    mesh::Subcomplex k0;     // invariant subcomplex at lambda = 0 (equator row)
    int block_rings = 8;     // default isolating band half-width in triangle rings
    double grid_tau = 2.6;   // fixed grid-map horizon for the band dynamics
    std::string name;
};

// Equator circle of fixed points attracting from both sides; for lambda > 0 a
// tangential drift proportional to lambda*(1-cos theta) plus a transverse
// escape term collapse the invariant set of the band to a single saddle
// point at theta = 0.
FlowFamily equator_collapse_family();
// The band empties out for lambda >= 0.05 (uniform outward push).
FlowFamily equator_escape_family();
// Equator repeller whose exit set flips to entrance by lambda = 1.
FlowFamily band_reversal_family();
// Constant-in-lambda attractor band.
FlowFamily equator_constant_family();
// Constant-in-lambda collapsed saddle (the collapse family pinned at 0.3).
FlowFamily saddle_constant_family();

FlowFamily family_by_name(const std::string& name);
std::vector<std::string> family_names();

// Named fixtures for the CLI; throws std::invalid_argument on unknown names.
System fixture_by_name(const std::string& name, int subdiv = 1);
std::vector<std::string> fixture_names();

}  // namespace surfdyn::builtins
