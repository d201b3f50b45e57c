#pragma once
#include "trisect/matrix.hpp"
#include "trisect/numeric.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trisect {

struct Circle {
    QPt center;
    Rat radius;
    bool contains_strictly(const QPt& p) const { return dist2(p, center) < radius * radius; }
    bool on_circle(const QPt& p) const { return dist2(p, center) == radius * radius; }
};

/// Compact oriented surface drawn in the plane (plus the point at infinity):
/// a base sphere minus disjoint round disks, where `holes` are boundary
/// circles and each tube joins two `feet` circles by a cylinder.
/// Feet are identified by the reflection across the perpendicular bisector
/// direction of the segment between the centers (the untwisted convention);
/// genus = tubes.size(), boundary count = holes.size(),
/// chi = 2 - 2*genus - boundary.
class TubedSurface {
  public:
    std::vector<Circle> holes;
    std::vector<std::array<Circle, 2>> tubes;

    bool closed() const { return holes.empty(); }
    long genus() const { return static_cast<long>(tubes.size()); }
    long boundary_count() const { return static_cast<long>(holes.size()); }
    long euler_characteristic() const { return 2 - 2 * genus() - boundary_count(); }

    /// Image of a point on one foot circle under the tube identification.
    QPt identify(std::size_t tube, int from_foot, const QPt& p) const;

    /// Every hole/foot circle, for disjointness and containment checks.
    std::vector<Circle> all_disks() const;

    void validate() const; // throws on overlapping disks / nonpositive radii
};

/// Reflection of v across the line through the origin perpendicular to d.
QPt reflect_across_perp(const QPt& d, const QPt& v);

/// Pythagorean parametrization of rational points on a circle.
/// t -> center + radius * ((1-t^2), 2t) / (1+t^2); t = infinity is (-r, 0).
QPt circle_point(const Circle& c, const Rat& t);
/// Inverse of circle_point for a rational point on the circle (t, or nullopt for the -x pole).
std::optional<Rat> circle_param(const Circle& c, const QPt& p);
/// Exact cyclic comparison of two circle points (counterclockwise order from +x axis).
int circle_cyclic_compare(const Circle& c, const QPt& p, const QPt& q);

/// A connector between consecutive path vertices: either a straight planar
/// segment or a strand through a tube. A strand leaves vertex i (on the
/// entering foot circle) and arrives at vertex i+1, which must be the exact
/// identification image of vertex i.
struct Conn {
    bool is_strand = false;
    int tube = -1;
    int enter_foot = -1; // 0 or 1
};

/// Exact piecewise linear closed curve or properly embedded arc.
struct PLPath {
    bool closed = true;
    std::vector<QPt> pts;
    std::vector<Conn> conns; // size == pts.size() for closed, pts.size()-1 for arcs
    int start_hole = -1;     // arcs only: hole index carrying each endpoint
    int end_hole = -1;

    std::size_t piece_count() const { return conns.size(); }
    QPt piece_a(std::size_t i) const { return pts[i]; }
    QPt piece_b(std::size_t i) const { return pts[(i + 1) % pts.size()]; }

    static PLPath closed_polygon(std::vector<QPt> vertices);
    static PLPath arc_polyline(std::vector<QPt> vertices, int start_hole, int end_hole);

    void push_vertex(const QPt& p); // extends with a planar segment
    void push_strand(const TubedSurface& s, int tube, int enter_foot, const QPt& enter_pt);
};

enum class Side { Left, Right };

/// Validity of one path on a surface: vertices outside every open disk
/// (attachment points exactly on their circles), segments clear of disk
/// interiors, strands consistent with the identification, embeddedness.
void validate_path(const TubedSurface& s, const PLPath& p);

/// Transverse crossing count of the given representatives (not minimized).
/// Strands in one tube never cross under the straight-strand convention;
/// coincident strand points are non-generic. Throws NonGenericOverlap.
long geometric_crossings(const TubedSurface& s, const PLPath& c1, const PLPath& c2);

/// Signed sum of the same crossings; antisymmetric.
long algebraic_intersection(const TubedSurface& s, const PLPath& c1, const PLPath& c2);

/// True if the path has no self-crossings (adjacent pieces share joints only).
bool is_embedded(const TubedSurface& s, const PLPath& p);

/// Mirror image: planar reflection x -> -x carrying all data.
TubedSurface mirror(const TubedSurface& s);
PLPath mirror_path(const PLPath& p);

/// Translate all planar data (surfaces and paths are placed together).
TubedSurface translate(const TubedSurface& s, const QPt& by);
PLPath translate_path(const PLPath& p, const QPt& by);

/// Disjoint push-off on the chosen side. Endpoints of arcs and strand
/// points are pushed along their circles. Post: zero crossings with source.
PLPath parallel_copy(const TubedSurface& s, const PLPath& p, Side side);
/// Same, with explicit lateral scale (retry ladder handled by caller).
PLPath parallel_copy_scaled(const TubedSurface& s, const PLPath& p, Side side, const Rat& eps,
                            const Rat& anchor_step);

/// Band slide: target banded with a parallel copy of `over` at the anchor
/// vertex. The band and the copy must not cross `context` paths.
/// Throws BandObstructed (as std::runtime_error subclass) when no
/// crossing-free band exists along the requested anchor.
struct BandObstructed : std::runtime_error {
    explicit BandObstructed(const std::string& w) : std::runtime_error(w) {}
};
PLPath band_slide(const TubedSurface& s, const PLPath& target, const PLPath& over,
                  std::size_t anchor_vertex, Side side,
                  const std::vector<const PLPath*>& context);

/// Ordered family of disjoint closed curves sharing a surface.
enum class Color { Alpha, Beta, Gamma, Untagged };
struct CurveSystem {
    Color color = Color::Untagged;
    std::vector<PLPath> curves;
};

/// Exact minimum squared distance between a path and a set of obstacles
/// (other paths' planar pieces and disk circles); 0 means contact.
Rat path_clearance2(const TubedSurface& s, const PLPath& p,
                    const std::vector<const PLPath*>& others);

/// Move a point along its circle by a parameter step; ccw > 0 is
/// counterclockwise. Handles the west-pole chart switch.
QPt push_along_circle(const Circle& c, const QPt& pt, int ccw, const Rat& step);

/// Canonical homology measuring system for a surface: explicit loops
/// whose exact crossing numbers with any path give its class coordinates.
/// Basis of H1: per tube a through-loop t_j and a foot-encircling loop k_j;
/// per hole beyond the first a boundary-encircling loop h_i.
/// Functionals: pairing with k_j extracts the t_j coordinate, pairing with
/// t_j extracts -k_j, and proper arcs delta_i extract hole coordinates.
class SurfaceBasis {
  public:
    explicit SurfaceBasis(const TubedSurface& s,
                          const std::vector<const PLPath*>& probes = {});

    long rank() const { return static_cast<long>(basis_loops_.size()); }
    const TubedSurface& surface() const { return *surf_; }
    const std::vector<PLPath>& basis_loops() const { return basis_loops_; }

    /// Signed crossings of p with every functional path, in order.
    std::vector<Int> pairing_vector(const PLPath& p) const;
    /// Coordinates of a closed curve in the basis (solves the calibration system).
    std::vector<Int> class_vector(const PLPath& closed_curve) const;
    /// Intersection form on the basis: <t_j,k_j> = 1, holes in the radical.
    const IntMat& form() const { return form_; }

  private:
    const TubedSurface* surf_;
    std::vector<PLPath> basis_loops_;  // t_0..t_{g-1}, k_0..k_{g-1}, h_1..h_{b-1}
    std::vector<PLPath> functionals_;  // k-reps, t-reps, delta arcs
    IntMat calib_;                     // functionals x basis pairing matrix
    IntMat form_;
};

/// Number of tubes, holes and the standard layout of Sigma_{p,b}:
/// tubes left to right, holes to the right of the tubes, all circles on the
/// x axis with radius 1/4 and spacing 2.
TubedSurface standard_surface(long p, long b);

/// x coordinate of foot f of tube j / hole i in the standard layout.
QPt standard_foot_center(long tube, int foot);
QPt standard_hole_center(long p, long hole);

} // namespace trisect
