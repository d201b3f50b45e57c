#pragma once
#include "trisect/diagram.hpp"

namespace trisect {

/// One recorded handleslide of a cut-system arc over a curve.
struct SlideRecord {
    int stage = 0;          // 2: A_beta over alpha, 3: A_gamma over beta, 4: A_* over gamma
    std::size_t arc = 0;    // arc index
    std::string over;       // label of the curve slid over, e.g. "beta[3]"
    std::string note;
};

/// Cut system of 2p+b-1 arcs per color attached to a relative diagram.
/// a_arcs are disjoint from alpha and cut the page into a disk; b_arcs are
/// slide-equivalent to a_arcs over alpha and disjoint from beta; c_arcs are
/// slide-equivalent to b_arcs over beta and disjoint from gamma.
struct CutSystem {
    std::vector<PLPath> a_arcs, b_arcs, c_arcs;
    std::vector<SlideRecord> slides;
};

/// Construction bookkeeping for one inserted tube: the cycle's course at
/// insertion time, the feet placement, lateral scales and lane allocators.
/// Needed to route later arc slides through the same torus.
struct TubeTrace {
    PLPath course;
    std::size_t feet_piece = 0;
    Rat rho;          // feet radius
    Rat ell;          // safe lateral scale for travels along the course
    int green_side = 1;
    int framing = -1;
    Rat next_green_lane_frac;  // in (0, 1): fraction of the green travel band
    Rat next_arc_lane_frac;    // in (0, 1): fraction of the arc travel band
    long green_columns_used = 0;
    long arc_columns_used = 0;
};

struct LefschetzTrace {
    long fiber_p = 0, fiber_b = 0;
    std::vector<TubeTrace> tubes; // tube index = fiber_p + position in this list
    std::vector<std::pair<std::string, int>> word; // cycle name/index + framing, in order
};

/// Mutable diagram-with-provenance handle used by the cut-system stages.
struct RelativeDiagramEx {
    RelativeDiagram d;
    std::shared_ptr<LefschetzTrace> trace;
};

struct MonodromyDescription {
    std::vector<PLPath> initial_arcs; // A_alpha
    std::vector<PLPath> final_arcs;   // A_*
    IntMat h1_matrix;                 // action on H1 of the page
    bool from_arcs = false;           // true when extracted from the arc pair
    std::string note;
};

/// Derive b_arcs and c_arcs from a_arcs (or the given seed) by parallel
/// copies and recorded slides; stage invariants are checked exactly after
/// every slide. Throws BudgetExceeded when no crossing-free schedule is
/// found within the budget.
CutSystem derive_cut_system(const RelativeDiagram& d, const LefschetzTrace* trace,
                            const std::vector<PLPath>* seed = nullptr, long budget = -1);

/// Complete the algorithm: slide c_arcs over gamma until disjoint from
/// alpha, producing A_*, and extract the induced H1(page) matrix from the
/// two arc systems. When the final stage exceeds its budget the matrix is
/// taken from the construction word (provenance) and from_arcs is false.
MonodromyDescription monodromy(const RelativeDiagram& d, const CutSystem& cut,
                               const LefschetzTrace* trace, long budget = -1);

/// Project a path on the diagram surface to the fiber model by replacing
///每 inserted-tube strand with the straight chord between its endpoints.
/// Valid for paths disjoint from the red curves; the result lives on
/// standard_surface(p, b) and is used for homology pairings only.
PLPath project_to_page(const RelativeDiagram& d, const PLPath& path);

/// H1(page) matrix of the diffeomorphism taking arcs0 to arcs1 (same
/// endpoint pattern), via pairings with the page basis.
IntMat arc_action_matrix(const SurfaceBasis& page_basis, const TubedSurface& page,
                         const std::vector<PLPath>& arcs0, const std::vector<PLPath>& arcs1);

} // namespace trisect
