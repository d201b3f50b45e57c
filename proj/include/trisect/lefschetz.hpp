#pragma once
#include "trisect/cutsystem.hpp"
#include "trisect/diagram.hpp"

namespace trisect {

/// An ordered vanishing cycle: an embedded closed curve on the fiber model
/// with page framing +1 or -1. The order is significant; reordering the
/// same set gives a different diagram in general.
struct VanishingCycle {
    PLPath curve;
    int framing = -1; // -1: right-handed twist contribution; +1: left-handed
    std::string name; // optional label for serialization
};

struct LefschetzData {
    long p = 0, b = 1;             // fiber profile
    std::vector<VanishingCycle> cycles;
    bool section_flag = false;     // W-piece of a closed fibration with a -1 section

    long n() const { return static_cast<long>(cycles.size()); }
    TrisectionParams diagram_params() const {
        return {p + n(), 2 * p + b - 1, p, b};
    }
};

struct NonEmbeddedCycle : std::runtime_error {
    explicit NonEmbeddedCycle(const std::string& w) : std::runtime_error(w) {}
};
struct ReroutingObstructed : std::runtime_error {
    explicit ReroutingObstructed(const std::string& w) : std::runtime_error(w) {}
};

/// chi(B^2) chi(Sigma_{p,b}) + n = 2 - 2p - b + n.
long total_space_euler(const LefschetzData& l);

/// Named curves in standard position on standard_surface(p,b).
PLPath cycle_a(long p);                 // through-curve of tube 0
PLPath cycle_b(long p);                 // loop around the first foot of tube 0
PLPath cycle_delta(long p, long b);     // parallel to the first boundary circle
PLPath cycle_delta_i(long p, long b, long hole); // parallel to a chosen boundary circle
PLPath cycle_epsilon(long p, long b);   // small null-homotopic circle
PLPath cycle_annulus_core(long b);      // core of Sigma_{0,b}, b >= 2
std::vector<PLPath> chain_curves(long p, long b); // c_1..c_{2p+1} chain

/// Cap piece V around a -1 section union a fiber: fiber (p,1),
/// cycles = [epsilon with framing -1, delta with framing +1].
LefschetzData cap_piece(long p);
/// Blown-down cap: one boundary-parallel cycle with framing +1.
LefschetzData blown_down_cap(long p);

struct TwistWord {
    // twists in application order: first element acts first
    struct Twist {
        HomologyClass cls;
        int sign; // +1 right-handed transvection direction, -1 inverse
        std::string name;
    };
    std::vector<Twist> twists;
    /// Ordered product of the transvection matrices on the fiber basis.
    IntMat h1_matrix(const SurfaceBasis& fiber_basis) const;
};

/// The monodromy word D(lambda_n) ... D(lambda_1) with signs taken from the
/// framings (framing -1 gives a right-handed twist).
TwistWord monodromy_word(const LefschetzData& l, const SurfaceBasis& fiber_basis);

/// The relative trisection diagram of the achiral Lefschetz fibration,
/// params (p+n, 2p+b-1; p, b), built by replacing an annular neighborhood
/// of each cycle in order by a two-holed torus carrying one red, one blue
/// and one green curve, with crossings of earlier green curves rerouted
/// through the new torus across the new red curve. The cut system's
/// red arcs are carried through every step.
struct LefschetzBuild {
    RelativeDiagram diagram;
    CutSystem cut;
    LefschetzData data;
    std::shared_ptr<LefschetzTrace> trace;
};
LefschetzBuild relative_diagram(const LefschetzData& l);

} // namespace trisect
