#pragma once
#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trisect {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when two paths meet non-transversally (shared sub-segment,
// endpoint touching another segment, tangency). Constructions are
// required to stay generic; we never perturb silently.
struct NonGenericOverlap : std::runtime_error {
    explicit NonGenericOverlap(const std::string& what) : std::runtime_error(what) {}
};

inline int sgn(const Rat& x) { return sgn(x.get_num()) ; }
inline int sgn(const Int& x) { return mpz_sgn(x.get_mpz_t()); }

Rat rat_of_string(const std::string& s);
std::string to_string(const Rat& q);

/// Canonicalized fraction (mpq_class's two-argument constructor does not reduce).
inline Rat frac(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Exact planar point with rational coordinates.
struct QPt {
    Rat x, y;
    QPt() : x(0), y(0) {}
    QPt(Rat xx, Rat yy) : x(std::move(xx)), y(std::move(yy)) {}
    QPt(long xx, long yy) : x(xx), y(yy) {}
    bool operator==(const QPt& o) const { return x == o.x && y == o.y; }
    bool operator!=(const QPt& o) const { return !(*this == o); }
    QPt operator+(const QPt& o) const { return {x + o.x, y + o.y}; }
    QPt operator-(const QPt& o) const { return {x - o.x, y - o.y}; }
    QPt operator*(const Rat& s) const { return {x * s, y * s}; }
};

inline Rat cross(const QPt& a, const QPt& b) { return a.x * b.y - a.y * b.x; }
inline Rat dot(const QPt& a, const QPt& b) { return a.x * b.x + a.y * b.y; }
inline QPt rot90(const QPt& a) { return {-a.y, a.x}; }
inline Rat dist2(const QPt& a, const QPt& b) { return dot(a - b, a - b); }

/// Orientation of c relative to directed line a->b: +1 left, -1 right, 0 collinear.
inline int orient(const QPt& a, const QPt& b, const QPt& c) {
    return sgn(cross(b - a, c - a));
}

/// Closed segment with rational endpoints.
struct QSeg {
    QPt a, b;
};

enum class SegMeet { Empty, Proper, NonGeneric };

/// Classify the intersection of two closed segments.
/// Proper means a single interior-interior transverse point.
/// Anything touching an endpoint or collinear-overlapping is NonGeneric.
SegMeet seg_meet(const QSeg& s, const QSeg& t);

/// Sign of a proper crossing: orientation of t's direction against s's.
/// Pre: seg_meet(s,t) == Proper.
int seg_cross_sign(const QSeg& s, const QSeg& t);

/// Does the segment intersect the closed disk |p-c| <= r?
bool seg_meets_disk(const QSeg& s, const QPt& c, const Rat& r);

/// Squared distance from point p to segment s.
Rat seg_dist2(const QSeg& s, const QPt& p);

/// Squared distance between two segments (0 if they intersect).
Rat seg_seg_dist2(const QSeg& s, const QSeg& t);

/// Conservative double-precision bounding box used only as a rejection
/// filter; exact predicates confirm every surviving candidate.
struct BBox {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    void add(const QPt& p);
    void add(const BBox& o);
    bool disjoint(const BBox& o) const {
        return xhi < o.xlo || o.xhi < xlo || yhi < o.ylo || o.yhi < ylo;
    }
    bool empty() const { return xhi < xlo; }
};

} // namespace trisect
