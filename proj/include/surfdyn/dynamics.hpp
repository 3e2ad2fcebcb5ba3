#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "surfdyn/flow.hpp"
#include "surfdyn/mesh.hpp"

namespace surfdyn::dynamics {

using CellSet = std::vector<char>;

CellSet cellset_from_subcomplex(const mesh::Subcomplex& s);
mesh::Subcomplex subcomplex_from_cellset(const mesh::TriMesh& m, const CellSet& cells);
int cellset_count(const CellSet& s);

// Combinatorial multivalued map: F(c) covers the time-tau image of cell c
// (sampled at vertices, edge midpoints and the centroid), bloated by one
// vertex-ring. finv is the exact transpose.
struct GridDynamics {
    std::shared_ptr<const mesh::TriMesh> mesh;
    double tau = 0;
    double step = 0;
    std::vector<std::vector<int>> f;
    std::vector<std::vector<int>> finv;
};

struct GridOptions {
    double tau = 0;          // 0: calibrate so typical cells advance ~3 cell widths
    double step = 0;         // 0: flow default
    double tau_cells = 3.5;  // calibration target in cell widths
    double percentile = 0.25;  // protect all but the slowest quarter of cells
    CellSet region;          // calibration region; empty = every cell
};

GridDynamics build_grid(const flow::Flow& f, const mesh::CellLocator& loc,
                        const GridOptions& opt = {});

// Largest S inside N whose cells all have forward and backward images
// meeting S (iterated pruning to the greatest fixed point).
CellSet invariant_part(const GridDynamics& g, const CellSet& n);

// Cells of N edge-adjacent to the complement of N.
CellSet boundary_collar(const mesh::TriMesh& m, const CellSet& n);

// The invariant part avoids the boundary collar. A set without collar
// (the whole surface) is isolating by convention.
bool is_isolating_neighborhood(const GridDynamics& g, const CellSet& n);

struct IsolatingBlock {
    CellSet n;
    CellSet inv;
    CellSet n_plus, n_minus;   // cells with an infinite forward/backward chain in N
    CellSet entrance, exit_;   // collar cells classified by boundary crossing direction
    bool certificate = false;  // N = N+ u N- at cell level
    bool isolating = false;
};

// Boundary crossing directions are read off the field at the midpoints of
// the collar's outer edges (the sampled transversality of the block axioms).
IsolatingBlock isolating_block_refine(const GridDynamics& g, const flow::Flow& f,
                                      const CellSet& n);

enum class PointLabel {
    InK,
    PurelyAttracted,
    PurelyRepelled,
    Homoclinic,
    Outside,
    Undetermined,
};

struct AnalysisOptions {
    double step = 0;          // 0: flow default
    double t_max = 400.0;
    double dwell = 4.0;       // residence time inside the K collar to declare convergence
    double fp_radius_cells = 1.5;  // fixed-point pass radius in local cell widths
    int block_rings = 3;
    int eps_rings = 2;        // K-proximity collar for convergence detection
    GridOptions grid;
    int threads = 0;          // 0: hardware concurrency
};

struct ComponentInfo {
    int id = 0;
    std::vector<int> cells;
    int ends = 0;
    int local_complexity = 0;
    bool has_homoclinic = false;
    bool has_dissonant = false;
};

struct FixedPointCensus {
    int attracting = 0;
    int hyperbolic_saddles = 0;
    int degenerate_saddles = 0;
};

struct InfluenceReport {
    std::vector<PointLabel> labels;  // per cell
    std::vector<int> component_of;   // per cell; -1 outside I(K) \ K
    std::vector<ComponentInfo> components;
    int k_ends = 0;
    int complexity = 0;
    std::vector<int> dissonant_cells;
    FixedPointCensus census;
    double undetermined_fraction = 0;
    bool valid = true;
    std::string invalid_reason;
    IsolatingBlock block;
    double tau = 0, step = 0, t_max = 0;
};

// Trichotomy label of one point from forward/backward integration.
PointLabel classify_point(const flow::Flow& f, const mesh::CellLocator& loc,
                          const CellSet& eps_k, const CellSet& frozen_other, int piece,
                          const Vec2& x, const AnalysisOptions& opt,
                          const std::vector<double>& fp_radius_by_piece);

// Full region-of-influence analysis of a flow with distinguished subcomplex K.
InfluenceReport influence_decomposition(const flow::Flow& f, const mesh::Subcomplex& k,
                                        const AnalysisOptions& opt = {});

// Purely attracted/repelled cells edge-adjacent to homoclinic cells.
std::vector<int> detect_dissonant(const mesh::TriMesh& m, const std::vector<PointLabel>& labels);

FixedPointCensus fixed_point_census(const flow::Flow& f);

// Edge-adjacency components of a cell set, deterministic least-cell order.
std::vector<std::vector<int>> cell_components(const mesh::TriMesh& m, const CellSet& cells);

// Median triangle edge length per piece (local cell width).
std::vector<double> piece_cell_width(const mesh::TriMesh& m);

}  // namespace surfdyn::dynamics
