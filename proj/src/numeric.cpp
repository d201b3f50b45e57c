#include "trisect/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace trisect {

Rat rat_of_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::runtime_error("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const Rat& q) { return q.get_str(); }

SegMeet seg_meet(const QSeg& s, const QSeg& t) {
    int o1 = orient(s.a, s.b, t.a);
    int o2 = orient(s.a, s.b, t.b);
    int o3 = orient(t.a, t.b, s.a);
    int o4 = orient(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
        return SegMeet::Proper;
    auto on_seg = [](const QSeg& u, const QPt& p) {
        if (orient(u.a, u.b, p) != 0) return false;
        return std::min(u.a.x, u.b.x) <= p.x && p.x <= std::max(u.a.x, u.b.x) &&
               std::min(u.a.y, u.b.y) <= p.y && p.y <= std::max(u.a.y, u.b.y);
    };
    if (o1 != o2 && o3 != o4) return SegMeet::NonGeneric; // endpoint touches interior
    if (on_seg(s, t.a) || on_seg(s, t.b) || on_seg(t, s.a) || on_seg(t, s.b))
        return SegMeet::NonGeneric;
    return SegMeet::Empty;
}

int seg_cross_sign(const QSeg& s, const QSeg& t) {
    return sgn(cross(s.b - s.a, t.b - t.a));
}

Rat seg_dist2(const QSeg& s, const QPt& p) {
    QPt d = s.b - s.a;
    Rat dd = dot(d, d);
    if (sgn(dd) == 0) return dist2(s.a, p);
    Rat u = dot(p - s.a, d) / dd;
    if (u < 0) u = 0;
    if (u > 1) u = 1;
    QPt proj = s.a + d * u;
    return dist2(proj, p);
}

bool seg_meets_disk(const QSeg& s, const QPt& c, const Rat& r) {
    return seg_dist2(s, c) <= r * r;
}

Rat seg_seg_dist2(const QSeg& s, const QSeg& t) {
    if (seg_meet(s, t) != SegMeet::Empty) return 0;
    Rat m = seg_dist2(s, t.a);
    m = std::min(m, seg_dist2(s, t.b));
    m = std::min(m, seg_dist2(t, s.a));
    m = std::min(m, seg_dist2(t, s.b));
    return m;
}

namespace {
double lo_d(const Rat& q) {
    double v = q.get_d();
    return std::nextafter(v - 1e-12 * (std::fabs(v) + 1.0), -1e300);
}
double hi_d(const Rat& q) {
    double v = q.get_d();
    return std::nextafter(v + 1e-12 * (std::fabs(v) + 1.0), 1e300);
}
} // namespace

void BBox::add(const QPt& p) {
    xlo = std::min(xlo, lo_d(p.x));
    xhi = std::max(xhi, hi_d(p.x));
    ylo = std::min(ylo, lo_d(p.y));
    yhi = std::max(yhi, hi_d(p.y));
}

void BBox::add(const BBox& o) {
    xlo = std::min(xlo, o.xlo);
    xhi = std::max(xhi, o.xhi);
    ylo = std::min(ylo, o.ylo);
    yhi = std::max(yhi, o.yhi);
}

} // namespace trisect
