#pragma once
#include "trisect/lefschetz.hpp"

namespace trisect {

struct PageMismatch : std::runtime_error {
    explicit PageMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct ArcMismatch : std::runtime_error {
    explicit ArcMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct ValidationFailed : std::runtime_error {
    explicit ValidationFailed(const std::string& w) : std::runtime_error(w) {}
};
struct MonodromyMismatch : std::runtime_error {
    explicit MonodromyMismatch(const std::string& w) : std::runtime_error(w) {}
};

/// Pairing of the b boundary circles of two diagrams. The canonical
/// matching pairs hole i with hole i and identifies each circle pair by the
/// reflection map realized by the side-by-side placement; the last pair is
/// joined by planar connectors, all earlier pairs by new tubes.
struct BoundaryMatching {
    std::vector<std::pair<long, long>> pairs;
    static BoundaryMatching canonical(long b);
};

/// (G, K) = (g + g' + b - 1, k + k' - (2p + b - 1)).
ClosedParams glue_params(const TrisectionParams& p1, const TrisectionParams& p2);

/// Mirror image of a diagram with its cut system.
struct MirroredPiece {
    RelativeDiagram diagram;
    CutSystem cut;
};
MirroredPiece mirror_piece(const RelativeDiagram& d, const CutSystem& cut);

/// Glue two relative diagrams along their boundaries. The second diagram
/// must face the first (its boundary corridor on the west side, as produced
/// by mirror_piece); both cut systems must have corresponding arc endpoints
/// under the canonical reflection. The result carries
/// alpha* = alpha, barred alphas, alpha' in that order, and is validated;
/// a failed certificate throws ValidationFailed.
ClosedDiagram glue(const RelativeDiagram& d, const CutSystem& cut, const RelativeDiagram& dm,
                   const CutSystem& cutm, const BoundaryMatching& m);

/// Double of a relative diagram: glue with its own mirror image under the
/// identity matching.
ClosedDiagram double_diagram(const RelativeDiagram& d, const CutSystem& cut);

/// Closed-manifold pipelines: glue the fibration piece with the (mirrored)
/// cap. Requires b = 1, all framings -1 and a monodromy word acting like the
/// boundary twist on homology.
ClosedDiagram trisect_closed_lf(const LefschetzData& l);
ClosedDiagram trisect_blown_down_lf(const LefschetzData& l);

} // namespace trisect
