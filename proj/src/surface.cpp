#include "trisect/surface.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace trisect {

namespace {

std::string pt_str(const QPt& p) {
    return "(" + p.x.get_str() + "," + p.y.get_str() + ")";
}

Rat linf(const QPt& v) {
    Rat ax = abs(v.x), ay = abs(v.y);
    return ax > ay ? ax : ay;
}

} // namespace

QPt reflect_across_perp(const QPt& d, const QPt& v) {
    Rat dd = dot(d, d);
    assert(sgn(dd) > 0);
    Rat k = Rat(2) * dot(v, d) / dd;
    return v - d * k;
}

QPt TubedSurface::identify(std::size_t tube, int from_foot, const QPt& p) const {
    const auto& t = tubes[tube];
    const Circle& a = t[from_foot];
    const Circle& b = t[1 - from_foot];
    QPt d = t[1].center - t[0].center;
    return b.center + reflect_across_perp(d, p - a.center);
}

std::vector<Circle> TubedSurface::all_disks() const {
    std::vector<Circle> out = holes;
    for (const auto& t : tubes) {
        out.push_back(t[0]);
        out.push_back(t[1]);
    }
    return out;
}

void TubedSurface::validate() const {
    auto disks = all_disks();
    for (const auto& c : disks)
        if (sgn(c.radius) <= 0) throw std::runtime_error("nonpositive disk radius");
    for (std::size_t i = 0; i < disks.size(); ++i)
        for (std::size_t j = i + 1; j < disks.size(); ++j) {
            Rat rr = disks[i].radius + disks[j].radius;
            if (dist2(disks[i].center, disks[j].center) <= rr * rr)
                throw std::runtime_error("disks touch or overlap");
        }
    for (const auto& t : tubes)
        if (t[0].radius != t[1].radius)
            throw std::runtime_error("tube feet radii differ");
}

QPt circle_point(const Circle& c, const Rat& t) {
    Rat den = 1 + t * t;
    return c.center + QPt(c.radius * (1 - t * t) / den, c.radius * 2 * t / den);
}

std::optional<Rat> circle_param(const Circle& c, const QPt& p) {
    QPt v = p - c.center;
    if (v.x == -c.radius) return std::nullopt; // west pole, t = infinity
    return v.y / (v.x + c.radius);
}

int circle_cyclic_compare(const Circle& c, const QPt& p, const QPt& q) {
    QPt u = p - c.center, v = q - c.center;
    auto half = [](const QPt& w) { return (sgn(w.y) > 0 || (sgn(w.y) == 0 && sgn(w.x) > 0)) ? 0 : 1; };
    int hu = half(u), hv = half(v);
    if (hu != hv) return hu < hv ? -1 : 1;
    return -sgn(cross(u, v)); // same half-turn: ccw order by cross sign
}

PLPath PLPath::closed_polygon(std::vector<QPt> vertices) {
    PLPath p;
    p.closed = true;
    p.pts = std::move(vertices);
    p.conns.assign(p.pts.size(), Conn{});
    return p;
}

PLPath PLPath::arc_polyline(std::vector<QPt> vertices, int start_hole, int end_hole) {
    PLPath p;
    p.closed = false;
    p.pts = std::move(vertices);
    p.conns.assign(p.pts.size() - 1, Conn{});
    p.start_hole = start_hole;
    p.end_hole = end_hole;
    return p;
}

void PLPath::push_vertex(const QPt& p) {
    if (!pts.empty() && pts.back() == p) return;
    if (!pts.empty()) conns.push_back(Conn{});
    pts.push_back(p);
}

void PLPath::push_strand(const TubedSurface& s, int tube, int enter_foot, const QPt& enter_pt) {
    if (pts.empty() || pts.back() != enter_pt) push_vertex(enter_pt);
    conns.push_back(Conn{true, tube, enter_foot});
    pts.push_back(s.identify(tube, enter_foot, enter_pt));
}

namespace {

/// Planar pieces of a path as segments, with piece indices.
struct Pieces {
    std::vector<QSeg> segs;
    std::vector<std::size_t> idx; // original piece index
    std::vector<BBox> boxes;
    BBox all;
    // strands: (tube, canonical point on foot 0)
    std::vector<std::pair<int, QPt>> strands;
    std::vector<std::size_t> strand_idx;
};

Pieces collect_pieces(const TubedSurface& s, const PLPath& p) {
    Pieces out;
    for (std::size_t i = 0; i < p.piece_count(); ++i) {
        if (p.conns[i].is_strand) {
            const Conn& c = p.conns[i];
            QPt a = p.piece_a(i);
            QPt canon = c.enter_foot == 0 ? a : s.identify(c.tube, 1, a);
            out.strands.emplace_back(c.tube, canon);
            out.strand_idx.push_back(i);
        } else {
            QSeg seg{p.piece_a(i), p.piece_b(i)};
            BBox b;
            b.add(seg.a);
            b.add(seg.b);
            out.all.add(b);
            out.segs.push_back(seg);
            out.boxes.push_back(b);
            out.idx.push_back(i);
        }
    }
    return out;
}

} // namespace

void validate_path(const TubedSurface& s, const PLPath& p) {
    if (p.closed) {
        if (p.pts.size() < 2 || p.conns.size() != p.pts.size())
            throw std::runtime_error("malformed closed path");
    } else {
        if (p.pts.size() < 2 || p.conns.size() + 1 != p.pts.size())
            throw std::runtime_error("malformed arc");
        if (p.start_hole < 0 || p.end_hole < 0 ||
            p.start_hole >= static_cast<int>(s.holes.size()) ||
            p.end_hole >= static_cast<int>(s.holes.size()))
            throw std::runtime_error("arc endpoints must name holes");
        if (!s.holes[p.start_hole].on_circle(p.pts.front()) ||
            !s.holes[p.end_hole].on_circle(p.pts.back()))
            throw std::runtime_error("arc endpoint not on its hole circle");
    }
    auto disks = s.all_disks();
    std::size_t n = p.piece_count();
    for (std::size_t i = 0; i < n; ++i) {
        QPt a = p.piece_a(i), b = p.piece_b(i);
        if (p.conns[i].is_strand) {
            const Conn& c = p.conns[i];
            if (c.tube < 0 || c.tube >= static_cast<int>(s.tubes.size()))
                throw std::runtime_error("strand names missing tube");
            const Circle& in = s.tubes[c.tube][c.enter_foot];
            if (!in.on_circle(a)) throw std::runtime_error("strand entry not on foot circle");
            if (s.identify(c.tube, c.enter_foot, a) != b)
                throw std::runtime_error("strand exit inconsistent with tube identification");
        } else {
            if (a == b) throw std::runtime_error("zero length segment");
            QSeg seg{a, b};
            for (const auto& d : disks) {
                // Interior of the segment must not enter or touch the open disk;
                // endpoints may sit exactly on a circle (attachments).
                Rat r2 = d.radius * d.radius;
                Rat da = dist2(a, d.center), db = dist2(b, d.center);
                if (da < r2 || db < r2)
                    throw std::runtime_error("path vertex inside disk at " + pt_str(a));
                QPt dir = b - a;
                Rat dd = dot(dir, dir);
                Rat u = dot(d.center - a, dir);
                if (sgn(u) > 0 && u < dd) {
                    QPt proj = a + dir * (u / dd);
                    if (dist2(proj, d.center) < r2)
                        throw std::runtime_error("segment " + pt_str(a) + "->" + pt_str(b) +
                                                 " crosses disk at " + pt_str(d.center));
                    if (dist2(proj, d.center) == r2)
                        throw NonGenericOverlap("segment tangent to disk");
                }
            }
        }
    }
    if (!is_embedded(s, p)) throw std::runtime_error("path is not embedded");
}

namespace {

long crossings_impl(const TubedSurface& s, const PLPath& c1, const PLPath& c2, bool signed_sum) {
    Pieces p1 = collect_pieces(s, c1);
    Pieces p2 = collect_pieces(s, c2);
    long total = 0;
    if (!p1.all.disjoint(p2.all)) {
        for (std::size_t i = 0; i < p1.segs.size(); ++i) {
            if (p1.boxes[i].disjoint(p2.all)) continue;
            for (std::size_t j = 0; j < p2.segs.size(); ++j) {
                if (p1.boxes[i].disjoint(p2.boxes[j])) continue;
                SegMeet m = seg_meet(p1.segs[i], p2.segs[j]);
                if (m == SegMeet::Proper)
                    total += signed_sum ? seg_cross_sign(p1.segs[i], p2.segs[j]) : 1;
                else if (m == SegMeet::NonGeneric)
                    throw NonGenericOverlap("paths meet non-transversally: segment " +
                                            pt_str(p1.segs[i].a) + "->" + pt_str(p1.segs[i].b) +
                                            " vs " + pt_str(p2.segs[j].a) + "->" +
                                            pt_str(p2.segs[j].b));
            }
        }
    }
    for (const auto& [t1, q1] : p1.strands)
        for (const auto& [t2, q2] : p2.strands)
            if (t1 == t2 && q1 == q2)
                throw NonGenericOverlap("coincident strands in tube");
    return total;
}

} // namespace

long geometric_crossings(const TubedSurface& s, const PLPath& c1, const PLPath& c2) {
    return crossings_impl(s, c1, c2, false);
}

long algebraic_intersection(const TubedSurface& s, const PLPath& c1, const PLPath& c2) {
    return crossings_impl(s, c1, c2, true);
}

bool is_embedded(const TubedSurface& s, const PLPath& p) {
    Pieces ps = collect_pieces(s, p);
    std::size_t n = p.piece_count();
    auto adjacent = [&](std::size_t i, std::size_t j) {
        if (i == j) return true;
        std::size_t lo = std::min(i, j), hi = std::max(i, j);
        if (hi == lo + 1) return true;
        if (p.closed && lo == 0 && hi == n - 1) return true;
        return false;
    };
    for (std::size_t a = 0; a < ps.segs.size(); ++a)
        for (std::size_t b = a + 1; b < ps.segs.size(); ++b) {
            if (ps.boxes[a].disjoint(ps.boxes[b])) continue;
            SegMeet m = seg_meet(ps.segs[a], ps.segs[b]);
            if (adjacent(ps.idx[a], ps.idx[b])) {
                // Shared joint only: forbid collinear overlap through the joint.
                const QSeg &s1 = ps.segs[a], &s2 = ps.segs[b];
                QPt shared, u, v;
                if (s1.b == s2.a) { shared = s1.b; u = s1.a; v = s2.b; }
                else if (s2.b == s1.a) { shared = s2.b; u = s2.a; v = s1.b; }
                else if (m != SegMeet::Empty) return false;
                else continue;
                if (orient(u, shared, v) == 0 && sgn(dot(shared - u, v - shared)) < 0)
                    return false; // immediate reversal overlaps itself
                continue;
            }
            if (m != SegMeet::Empty) {
                if (getenv("TRISECT_DEBUG_EMB"))
                    fprintf(stderr, "embed fail: pieces %zu and %zu (%s)\n", ps.idx[a], ps.idx[b],
                            m == SegMeet::Proper ? "proper" : "nongeneric");
                return false;
            }
        }
    for (std::size_t a = 0; a < ps.strands.size(); ++a)
        for (std::size_t b = a + 1; b < ps.strands.size(); ++b)
            if (ps.strands[a] == ps.strands[b]) return false;
    return true;
}

namespace {
QPt mirror_pt(const QPt& p) { return {-p.x, p.y}; }
Circle mirror_circle(const Circle& c) { return {mirror_pt(c.center), c.radius}; }
} // namespace

TubedSurface mirror(const TubedSurface& s) {
    TubedSurface m;
    for (const auto& h : s.holes) m.holes.push_back(mirror_circle(h));
    for (const auto& t : s.tubes)
        m.tubes.push_back({mirror_circle(t[0]), mirror_circle(t[1])});
    return m;
}

PLPath mirror_path(const PLPath& p) {
    PLPath m = p;
    for (auto& q : m.pts) q = mirror_pt(q);
    return m;
}

TubedSurface translate(const TubedSurface& s, const QPt& by) {
    TubedSurface m = s;
    for (auto& h : m.holes) h.center = h.center + by;
    for (auto& t : m.tubes) {
        t[0].center = t[0].center + by;
        t[1].center = t[1].center + by;
    }
    return m;
}

PLPath translate_path(const PLPath& p, const QPt& by) {
    PLPath m = p;
    for (auto& q : m.pts) q = q + by;
    return m;
}

QPt push_along_circle(const Circle& c, const QPt& pt, int ccw, const Rat& step) {
    auto t = circle_param(c, pt);
    if (t && abs(*t) <= 1) {
        Rat nt = *t + (ccw > 0 ? step : -step);
        return circle_point(c, nt);
    }
    // Alternate chart around the west pole: s = 1/t, ccw = decreasing s.
    Rat sv = t ? Rat(1) / *t : Rat(0);
    Rat ns = sv - (ccw > 0 ? step : -step);
    Rat den = ns * ns + 1;
    return c.center + QPt(c.radius * (ns * ns - 1) / den, c.radius * 2 * ns / den);
}

namespace {

struct CircleAt {
    const Circle* c = nullptr;
    bool is_hole = false;
    int tube = -1, foot = -1, hole = -1;
};

CircleAt circle_of_attachment(const TubedSurface& s, const PLPath& p, std::size_t vertex_idx) {
    CircleAt out;
    // Strand endpoints: look at conns around this vertex.
    std::size_t n = p.piece_count();
    auto check_conn = [&](std::size_t ci, bool at_start) {
        const Conn& c = p.conns[ci];
        if (!c.is_strand) return;
        int foot = at_start ? c.enter_foot : 1 - c.enter_foot;
        out.c = &s.tubes[c.tube][foot];
        out.tube = c.tube;
        out.foot = foot;
    };
    if (p.closed) {
        check_conn(vertex_idx % n, true);
        check_conn((vertex_idx + n - 1) % n, false);
    } else {
        if (vertex_idx < n) check_conn(vertex_idx, true);
        if (vertex_idx > 0) check_conn(vertex_idx - 1, false);
        if (vertex_idx == 0 && p.start_hole >= 0) {
            out.c = &s.holes[p.start_hole];
            out.is_hole = true;
            out.hole = p.start_hole;
        }
        if (vertex_idx + 1 == p.pts.size() && p.end_hole >= 0) {
            out.c = &s.holes[p.end_hole];
            out.is_hole = true;
            out.hole = p.end_hole;
        }
    }
    return out;
}

} // namespace

PLPath parallel_copy_scaled(const TubedSurface& s, const PLPath& p, Side side, const Rat& eps,
                            const Rat& anchor_step) {
    // Sequential side tracking: planar pieces offset to the current side;
    // the side after a strand is read off the exit displacement, since the
    // tube identification may or may not flip the planar side.
    std::size_t n = p.piece_count();
    std::size_t m = p.pts.size();
    int sign = (side == Side::Left) ? 1 : -1;
    std::vector<int> piece_sign(n, 0);
    std::vector<QPt> strand_entry(n), strand_exit(n);
    {
        int cur = sign;
        for (std::size_t i = 0; i < n; ++i) {
            const Conn& c = p.conns[i];
            if (!c.is_strand) {
                piece_sign[i] = cur;
                continue;
            }
            const Circle& in = s.tubes[c.tube][c.enter_foot];
            QPt entry_orig = p.piece_a(i);
            QPt exit_orig = p.piece_b(i);
            // push the entry along the circle toward the offset side of the
            // incoming planar piece
            QPt tangent = rot90(entry_orig - in.center);
            int ccw = cur;
            std::size_t prev = (i + n - 1) % n;
            bool has_prev = p.closed || i > 0;
            if (has_prev && !p.conns[prev].is_strand) {
                QPt d_prev = p.piece_b(prev) - p.piece_a(prev);
                QPt off_prev = rot90(d_prev) * Rat(piece_sign[prev]);
                int sg = sgn(dot(off_prev, tangent));
                if (sg != 0) ccw = sg;
            }
            QPt entry = push_along_circle(in, entry_orig, ccw, anchor_step);
            QPt exit = s.identify(c.tube, c.enter_foot, entry);
            strand_entry[i] = entry;
            strand_exit[i] = exit;
            // side after the strand: where the exit displacement lies
            // relative to the outgoing planar direction
            std::size_t nxt = (i + 1) % n;
            bool has_next = p.closed || i + 1 < n;
            int next_sign = -cur;
            if (has_next && !p.conns[nxt].is_strand) {
                QPt d_next = p.piece_b(nxt) - p.piece_a(nxt);
                int sg = sgn(dot(rot90(d_next), exit - exit_orig));
                if (sg != 0) next_sign = sg;
            }
            piece_sign[i] = cur; // unused for strands
            cur = next_sign;
        }
    }
    std::vector<QPt> off(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (p.conns[i].is_strand) continue;
        QPt d = p.piece_b(i) - p.piece_a(i);
        Rat ax = abs(d.x), ay = abs(d.y);
        Rat l = ax > ay ? ax : ay;
        off[i] = rot90(d) * (eps * piece_sign[i] / l);
    }

    PLPath out;
    out.closed = p.closed;
    out.start_hole = p.start_hole;
    out.end_hole = p.end_hole;

    std::vector<QPt> nv(m);
    std::vector<bool> fixed(m, false);
    // arc endpoints move along their hole circles
    if (!p.closed) {
        for (std::size_t vi : {std::size_t(0), m - 1}) {
            const Circle& hc = s.holes.at(vi == 0 ? p.start_hole : p.end_hole);
            QPt tangent = rot90(p.pts[vi] - hc.center);
            std::size_t ci = vi == 0 ? 0 : n - 1;
            int ccw = sign;
            if (!p.conns[ci].is_strand) {
                int sg = sgn(dot(off[ci], tangent));
                if (sg != 0) ccw = sg;
            }
            nv[vi] = push_along_circle(hc, p.pts[vi], ccw, anchor_step);
            fixed[vi] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!p.conns[i].is_strand) continue;
        nv[i] = strand_entry[i];
        fixed[i] = true;
        nv[(i + 1) % m] = strand_exit[i];
        fixed[(i + 1) % m] = true;
    }
    std::vector<std::vector<QPt>> expanded(m);
    for (std::size_t vi = 0; vi < m; ++vi) {
        if (fixed[vi]) {
            expanded[vi] = {nv[vi]};
            continue;
        }
        std::size_t prev = (vi + m - 1) % m;
        bool has_prev = p.closed || vi > 0;
        bool has_next = p.closed || vi + 1 < m;
        std::size_t ci_prev = prev % std::max<std::size_t>(n, 1);
        std::size_t ci_next = vi % std::max<std::size_t>(n, 1);
        if (!has_prev) {
            expanded[vi] = {p.pts[vi] + off[ci_next]};
            continue;
        }
        if (!has_next) {
            expanded[vi] = {p.pts[vi] + off[ci_prev]};
            continue;
        }
        QPt a1 = p.piece_a(ci_prev) + off[ci_prev], b1 = p.piece_b(ci_prev) + off[ci_prev];
        QPt a2 = p.piece_a(ci_next) + off[ci_next], b2 = p.piece_b(ci_next) + off[ci_next];
        QPt d1 = b1 - a1, d2 = b2 - a2;
        Rat den = cross(d1, d2);
        if (sgn(den) == 0) {
            if (b1 == a2) expanded[vi] = {b1};
            else expanded[vi] = {b1, a2};
            continue;
        }
        // always miter so nested copies stay nested
        Rat t = cross(a2 - a1, d2) / den;
        expanded[vi] = {a1 + d1 * t};
    }

    for (std::size_t vi = 0; vi < m; ++vi) {
        for (const QPt& q : expanded[vi]) {
            if (!out.pts.empty() && out.pts.back() == q) continue;
            if (!out.pts.empty()) out.conns.push_back(Conn{});
            out.pts.push_back(q);
        }
        std::size_t ci = vi;
        if (ci < n && p.conns[ci].is_strand) {
            out.conns.push_back(p.conns[ci]);
            out.pts.push_back(nv[(vi + 1) % m]);
            ++vi;
        }
    }
    if (p.closed) out.conns.push_back(Conn{});
    if (p.closed && out.pts.size() > 1 && out.pts.front() == out.pts.back()) {
        out.pts.pop_back();
        out.conns.pop_back();
    }
    return out;
}

PLPath parallel_copy(const TubedSurface& s, const PLPath& p, Side side) {
    // prime-denominator ladder: offsets stay off the dyadic grids used by
    // constructed curves and arc tiers
    Rat eps(1, 37), step(1, 53);
    for (int attempt = 0; attempt < 48; ++attempt) {
        try {
            PLPath c = parallel_copy_scaled(s, p, side, eps, step);
            validate_path(s, c);
            if (geometric_crossings(s, p, c) == 0) return c;
            if (getenv("TRISECT_DEBUG_COPY")) fprintf(stderr, "copy attempt %d: crossings\n", attempt);
        } catch (const std::exception& e) {
            if (getenv("TRISECT_DEBUG_COPY"))
                fprintf(stderr, "copy attempt %d: %s\n", attempt, e.what());
        }
        eps /= 2;
        step /= 2;
    }
    throw std::runtime_error("parallel_copy: no clear offset found");
}

Rat path_clearance2(const TubedSurface& s, const PLPath& p,
                    const std::vector<const PLPath*>& others) {
    Pieces mine = collect_pieces(s, p);
    Rat best(-1);
    auto consider = [&](const Rat& v) {
        if (sgn(best) < 0 || v < best) best = v;
    };
    for (const auto& seg : mine.segs) {
        for (const auto& d : s.all_disks()) {
            Rat d2c = seg_dist2(seg, d.center);
            Rat r2 = d.radius * d.radius;
            if (d2c <= r2) { consider(Rat(0)); continue; }
            Rat num = (d2c - r2) * (d2c - r2);
            Rat den = Rat(4) * std::max(d2c, r2);
            consider(num / den);
        }
        for (const PLPath* o : others) {
            Pieces po = collect_pieces(s, *o);
            for (const auto& os : po.segs) consider(seg_seg_dist2(seg, os));
        }
    }
    return sgn(best) < 0 ? Rat(1) : best;
}

namespace {

struct WalkStep {
    Conn conn; // planar if !conn.is_strand
    QPt to;
};

/// The copy opened at vertex `best`: vertices best+1 .. best+cm-1 with the
/// connectors between them, as a forward walk.
std::vector<WalkStep> open_loop_walk(const PLPath& copy, std::size_t best) {
    std::size_t cm = copy.pts.size();
    std::vector<WalkStep> walk;
    for (std::size_t k = 1; k + 1 < cm + 1; ++k) {
        std::size_t from = (best + k) % cm;
        if (k > 1) {
            std::size_t conn_idx = (best + k - 1) % cm;
            walk.push_back({copy.conns[conn_idx], copy.pts[from]});
        } else {
            walk.push_back({Conn{}, copy.pts[from]});
        }
    }
    return walk; // first step's conn is unused by callers (entry edge replaces it)
}

std::vector<WalkStep> reverse_walk(const std::vector<WalkStep>& w) {
    std::vector<WalkStep> out;
    for (std::size_t i = w.size(); i-- > 0;) {
        WalkStep st;
        st.to = w[i].to;
        if (i + 1 < w.size()) {
            st.conn = w[i + 1].conn;
            if (st.conn.is_strand) st.conn.enter_foot = 1 - st.conn.enter_foot;
        }
        out.push_back(st);
    }
    // shift conns: step i's conn describes the connector INTO step i's vertex
    return out;
}

} // namespace

PLPath band_slide(const TubedSurface& s, const PLPath& target, const PLPath& over,
                  std::size_t anchor_vertex, Side side,
                  const std::vector<const PLPath*>& context) {
    if (!over.closed) throw std::runtime_error("band_slide: 'over' must be closed");
    if (geometric_crossings(s, target, over) != 0)
        throw std::runtime_error("band_slide: target and over must be disjoint");
    std::size_t m = target.pts.size(), n = target.piece_count();
    std::size_t prev = (anchor_vertex + m - 1) % m;
    bool has_prev = target.closed || anchor_vertex > 0;
    bool has_next = target.closed || anchor_vertex + 1 < m;
    if (!has_prev || !has_next) throw BandObstructed("anchor at arc endpoint");
    if (target.conns[prev % n].is_strand || target.conns[anchor_vertex % n].is_strand)
        throw BandObstructed("anchor adjacent to a strand");

    Rat eps(1, 32), delta(1, 8);
    for (int attempt = 0; attempt < 24; ++attempt, eps /= 2, delta /= 2) {
        PLPath copy;
        try {
            copy = parallel_copy_scaled(s, over, side, eps, eps / 2);
            validate_path(s, copy);
            if (geometric_crossings(s, over, copy) != 0) continue;
        } catch (const std::exception&) {
            continue;
        }
        QPt va = target.pts[prev], vb = target.pts[anchor_vertex],
            vc = target.pts[(anchor_vertex + 1) % m];
        QPt u0 = vb + (va - vb) * delta; // trimmed end of the incoming piece
        QPt u1 = vb + (vc - vb) * delta; // trimmed start of the outgoing piece

        // Candidate opening joints on the copy, nearest to the anchor first.
        std::size_t cm = copy.pts.size();
        std::vector<std::pair<Rat, std::size_t>> joints;
        for (std::size_t i = 0; i < cm; ++i) {
            if (copy.conns[(i + cm - 1) % cm].is_strand || copy.conns[i].is_strand) continue;
            joints.emplace_back(dist2(copy.pts[i], vb), i);
        }
        if (joints.empty()) throw BandObstructed("copy has no planar joint");
        std::sort(joints.begin(), joints.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (joints.size() > 8) joints.resize(8);

        for (const auto& [jd, best] : joints) {
        std::size_t cprev = (best + cm - 1) % cm;
        QPt wa = copy.pts[cprev], wb = copy.pts[best], wc = copy.pts[(best + 1) % cm];
        QPt w_in = wb + (wa - wb) * delta;  // on the incoming copy piece
        QPt w_out = wb + (wc - wb) * delta; // on the outgoing copy piece

        std::vector<WalkStep> fwd = open_loop_walk(copy, best);
        std::vector<WalkStep> bwd = reverse_walk(fwd);

        for (int orientation = 0; orientation < 2; ++orientation) {
            // orientation 0: u0 -> w_in, walk copy backward, leave at w_out -> u1
            // orientation 1: u0 -> w_out, walk copy forward, leave at w_in -> u1
            const std::vector<WalkStep>& walk = orientation == 0 ? bwd : fwd;
            QPt enter = orientation == 0 ? w_in : w_out;
            QPt leave = orientation == 0 ? w_out : w_in;

            PLPath res;
            res.closed = target.closed;
            res.start_hole = target.start_hole;
            res.end_hole = target.end_hole;
            auto emit_v = [&](const QPt& q) {
                if (!res.pts.empty() && res.pts.back() == q) return;
                if (!res.pts.empty()) res.conns.push_back(Conn{});
                res.pts.push_back(q);
            };
            auto emit_step = [&](const WalkStep& st) {
                if (st.conn.is_strand) {
                    res.conns.push_back(st.conn);
                    res.pts.push_back(st.to);
                } else emit_v(st.to);
            };
            auto emit_detour = [&]() {
                emit_v(u0);
                emit_v(enter);
                for (std::size_t k = 0; k < walk.size(); ++k) {
                    if (k == 0) emit_v(walk[k].to);
                    else emit_step(walk[k]);
                }
                emit_v(leave);
                emit_v(u1);
            };
            // Walk the target, replacing the anchor corner by the detour.
            std::size_t start = target.closed ? (anchor_vertex + 1) % m : 0;
            std::size_t count = m;
            for (std::size_t k = 0; k < count; ++k) {
                std::size_t vi = (start + k) % m;
                if (vi == anchor_vertex) {
                    emit_detour();
                    continue;
                }
                std::size_t conn_in = (vi + m - 1) % m;
                bool has_in = target.closed || vi > 0;
                if (has_in && k > 0 && target.conns[conn_in % n].is_strand &&
                    conn_in != anchor_vertex) {
                    res.conns.push_back(target.conns[conn_in % n]);
                    res.pts.push_back(target.pts[vi]);
                } else {
                    emit_v(target.pts[vi]);
                }
            }
            if (target.closed) {
                res.conns.push_back(Conn{});
                if (res.pts.size() > 1 && res.pts.front() == res.pts.back()) {
                    res.pts.pop_back();
                    res.conns.pop_back();
                }
            }
            try {
                validate_path(s, res);
                if (geometric_crossings(s, res, over) != 0) {
                    if (getenv("TRISECT_DEBUG_BAND")) fprintf(stderr, "band reject: crosses over (joint %zu orient %d)\n", best, orientation);
                    continue;
                }
                bool ok = true;
                for (const PLPath* ctx : context) {
                    long before = 0, after = 0;
                    try {
                        before = geometric_crossings(s, target, *ctx) +
                                 geometric_crossings(s, copy, *ctx);
                        after = geometric_crossings(s, res, *ctx);
                    } catch (const NonGenericOverlap&) { ok = false; break; }
                    if (after > before) { ok = false; break; }
                }
                if (!ok) continue;
                return res;
            } catch (const std::exception& e) {
                if (getenv("TRISECT_DEBUG_BAND")) {
                    fprintf(stderr, "band reject: %s (joint %zu orient %d)\n", e.what(), best, orientation);
                    if (std::string(e.what()).find("not embedded") != std::string::npos && getenv("TRISECT_DEBUG_BAND_PTS")) {
                        for (std::size_t z = 0; z < res.pts.size(); ++z)
                            fprintf(stderr, "   res[%zu] = (%g, %g)%s\n", z, res.pts[z].x.get_d(), res.pts[z].y.get_d(),
                                    z < res.conns.size() && res.conns[z].is_strand ? " strand" : "");
                    }
                }
                continue;
            }
        }
        }
    }
    throw BandObstructed("no crossing-free band found at anchor");
}

namespace {

/// Octagon strictly containing the circle, inside radius factor*r, with
/// vertices off the coordinate axes (3-4-5 style directions).
PLPath octagon_loop(const Circle& c, const Rat& factor) {
    Rat R = c.radius * factor;
    Rat s = R * 3 / 4;
    auto rot = [&](const QPt& v) { // rigid rotation by the 12-35-37 angle,
        // which is not among the attachment fan directions
        return c.center + QPt((v.x * 35 - v.y * 12) / 37, (v.x * 12 + v.y * 35) / 37);
    };
    std::vector<QPt> v = {rot(QPt(R, 0)),  rot(QPt(s, s)),   rot(QPt(0, R)),
                          rot(QPt(-s, s)), rot(QPt(-R, 0)),  rot(QPt(-s, -s)),
                          rot(QPt(0, -R)), rot(QPt(s, -s))};
    return PLPath::closed_polygon(std::move(v));
}

struct RouteHelper {
    const TubedSurface& s;
    std::vector<Circle> disks;
    Rat top;

    explicit RouteHelper(const TubedSurface& surf) : s(surf), disks(surf.all_disks()) {
        top = 0;
        for (const auto& d : disks) {
            Rat t = d.center.y + d.radius;
            if (t > top) top = t;
        }
    }

    bool seg_clear(const QSeg& seg) const {
        for (const auto& d : disks) {
            Rat r2 = d.radius * d.radius;
            if (seg_dist2(seg, d.center) <= r2) return false;
        }
        return true;
    }

    /// Polyline from a point up to (x_col, lane): tries small x offsets
    /// until both the slant and the column are clear of all disks. The
    /// jitter keeps representatives off the coordinate grid of constructed
    /// curves.
    std::optional<std::vector<QPt>> climb(const QPt& from, const Rat& lane, const Rat& scale,
                                          const Rat& jitter, int prefer) const {
        static const int offs[] = {1, 2, 3, 4, 6, 8, 12, 16};
        auto attempt = [&](const Rat& dx) -> std::optional<std::vector<QPt>> {
            Rat x = from.x + dx;
            Rat rise = scale * (Rat(1, 4) + jitter / 5) + abs(dx) / 4;
            QPt knee(x, from.y + rise);
            QPt topp(x, lane);
            if (!seg_clear({from, knee})) return std::nullopt;
            if (!seg_clear({knee, topp})) return std::nullopt;
            if (from == knee || knee == topp) return std::nullopt;
            return std::vector<QPt>{knee, topp};
        };
        // local offsets on the preferred side first, then coarse ones that
        // can clear large disks; the two climbs of a loop prefer opposite
        // sides so their columns never meet
        for (int k : offs) {
            if (auto r = attempt(scale * (frac(k * prefer, 4) + jitter / 3))) return r;
        }
        for (int k = 1; k <= 24; ++k) {
            if (auto r = attempt(frac(k * prefer, 8) + scale * jitter / 3)) return r;
            if (auto r = attempt(frac(-k * prefer, 8) + scale * jitter / 3)) return r;
        }
        return std::nullopt;
    }
};

} // namespace

SurfaceBasis::SurfaceBasis(const TubedSurface& s, const std::vector<const PLPath*>& probes)
    : surf_(&s) {
    RouteHelper rh(s);
    long g = s.genus();
    long b = s.boundary_count();
    long n = 2 * g + std::max<long>(0, b - 1);
    basis_loops_.reserve(n);
    functionals_.reserve(n);

    for (Rat jiggle(0); ; jiggle += Rat(1, 97)) {
        if (jiggle > Rat(12, 97))
            throw std::runtime_error("SurfaceBasis: could not build generic representatives");
        basis_loops_.clear();
        functionals_.clear();
        bool ok = true;
        Rat lane = rh.top + 1 + jiggle;
        Rat lane_step(1, 4);
        auto next_lane = [&]() {
            Rat l = lane;
            lane += lane_step;
            return l;
        };
        auto make_through = [&](long j, const Rat& fan, const Rat& radial) -> std::optional<PLPath> {
            const Circle& f0 = s.tubes[j][0];
            const Circle& f1 = s.tubes[j][1];
            QPt entry = circle_point(f0, fan);
            QPt exit = s.identify(j, 0, entry);
            QPt entry_out = f0.center + (entry - f0.center) * radial;
            QPt exit_out = f1.center + (exit - f1.center) * radial;
            Rat l = next_lane();
            auto c1 = rh.climb(exit_out, l, f0.radius, jiggle + Rat(1, 101), 1);
            auto c2 = rh.climb(entry_out, l, f0.radius, jiggle + Rat(1, 103), -1);
            if (!c1 || !c2) return std::nullopt;
            PLPath t;
            t.closed = true;
            t.push_vertex(entry);
            t.push_strand(s, static_cast<int>(j), 0, entry);
            t.push_vertex(exit_out);
            for (const QPt& q : *c1) t.push_vertex(q);
            for (std::size_t i = c2->size(); i-- > 0;) t.push_vertex((*c2)[i]);
            t.push_vertex(entry_out);
            t.conns.push_back(Conn{});
            return t;
        };
        // t_j: through-loop of tube j.
        for (long j = 0; j < g && ok; ++j) {
            auto t = make_through(j, Rat(1, 2) + jiggle, Rat(3, 2) + jiggle / 7);
            if (!t) { ok = false; break; }
            basis_loops_.push_back(std::move(*t));
        }
        // k_j: loop around foot 0 of tube j.
        for (long j = 0; j < g && ok; ++j)
            basis_loops_.push_back(octagon_loop(s.tubes[j][0], Rat(9, 8) + jiggle / 8));
        // h_i: loop around hole i, i >= 1.
        for (long i = 1; i < b && ok; ++i)
            basis_loops_.push_back(octagon_loop(s.holes[i], Rat(9, 8) + jiggle / 8));
        if (!ok) continue;

        // Functionals are independent representatives of the same classes so
        // that the calibration pairings are generic.
        for (long j = 0; j < g && ok; ++j)
            functionals_.push_back(octagon_loop(s.tubes[j][0], Rat(21, 16) + jiggle / 8));
        for (long j = 0; j < g && ok; ++j) {
            auto t = make_through(j, Rat(2, 5) + jiggle, Rat(13, 8) + jiggle / 9);
            if (!t) { ok = false; break; }
            functionals_.push_back(std::move(*t));
        }
        if (!ok) continue;
        for (long i = 1; i < b && ok; ++i) {
            const Circle& hi = s.holes[i];
            const Circle& h0 = s.holes[0];
            Rat fan = Rat(1, 3) + jiggle;
            QPt a = circle_point(hi, fan);
            QPt z = circle_point(h0, Rat(2, 5) + jiggle);
            QPt a_out = hi.center + (a - hi.center) * (Rat(5, 4) + jiggle / 11);
            QPt z_out = h0.center + (z - h0.center) * (Rat(5, 4) + jiggle / 13);
            Rat l = next_lane();
            auto c1 = rh.climb(a_out, l, hi.radius, jiggle + Rat(1, 107), 1);
            auto c2 = rh.climb(z_out, l, h0.radius, jiggle + Rat(1, 109), -1);
            if (!c1 || !c2) { ok = false; break; }
            std::vector<QPt> pts;
            pts.push_back(a);
            pts.push_back(a_out);
            for (const QPt& q : *c1) pts.push_back(q);
            for (std::size_t k = c2->size(); k-- > 0;) pts.push_back((*c2)[k]);
            pts.push_back(z_out);
            pts.push_back(z);
            functionals_.push_back(
                PLPath::arc_polyline(std::move(pts), static_cast<int>(i), 0));
        }
        if (!ok) continue;

        // Validate representatives and compute the calibration matrix.
        try {
            for (std::size_t bi = 0; bi < basis_loops_.size(); ++bi) {
                try {
                    validate_path(s, basis_loops_[bi]);
                } catch (const std::exception& e) {
                    if (getenv("TRISECT_DEBUG_BASIS")) {
                        fprintf(stderr, "basis loop %zu invalid: %s\n", bi, e.what());
                        if (getenv("TRISECT_DEBUG_BASIS_PTS"))
                            for (std::size_t z = 0; z < basis_loops_[bi].pts.size(); ++z)
                                fprintf(stderr, "  pt[%zu] = (%.6g, %.6g)\n", z,
                                        basis_loops_[bi].pts[z].x.get_d(),
                                        basis_loops_[bi].pts[z].y.get_d());
                    }
                    throw;
                }
            }
            for (std::size_t fi = 0; fi < functionals_.size(); ++fi) {
                try {
                    validate_path(s, functionals_[fi]);
                } catch (const std::exception& e) {
                    if (getenv("TRISECT_DEBUG_BASIS"))
                        fprintf(stderr, "functional %zu invalid: %s\n", fi, e.what());
                    throw;
                }
            }
            calib_ = IntMat(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
            for (long fi = 0; fi < n; ++fi)
                for (long bi = 0; bi < n; ++bi)
                    calib_.at(fi, bi) =
                        algebraic_intersection(s, functionals_[fi], basis_loops_[bi]);
            Int d = calib_.det();
            if (d != 1 && d != -1)
                throw std::runtime_error("degenerate homology calibration");
            form_ = IntMat(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
            for (long i = 0; i < n; ++i)
                for (long j = i + 1; j < n; ++j) {
                    Int v = algebraic_intersection(s, basis_loops_[i], basis_loops_[j]);
                    form_.at(i, j) = v;
                    form_.at(j, i) = -v;
                }
            // representatives must be generic against the caller's paths
            for (const PLPath* pr : probes) {
                for (std::size_t bi = 0; bi < basis_loops_.size(); ++bi) {
                    try { algebraic_intersection(s, basis_loops_[bi], *pr); }
                    catch (const NonGenericOverlap& e) {
                        if (getenv("TRISECT_DEBUG_BASIS"))
                            fprintf(stderr, "probe clash with basis loop %zu: %s\n", bi, e.what());
                        throw;
                    }
                }
                for (std::size_t fi = 0; fi < functionals_.size(); ++fi) {
                    try { algebraic_intersection(s, functionals_[fi], *pr); }
                    catch (const NonGenericOverlap& e) {
                        if (getenv("TRISECT_DEBUG_BASIS"))
                            fprintf(stderr, "probe clash with functional %zu: %s\n", fi, e.what());
                        throw;
                    }
                }
            }
            return;
        } catch (const std::exception& e) {
            if (getenv("TRISECT_DEBUG_BASIS")) fprintf(stderr, "basis retry: %s\n", e.what());
            continue;
        }
    }
}

std::vector<Int> SurfaceBasis::pairing_vector(const PLPath& p) const {
    std::vector<Int> out;
    out.reserve(basis_loops_.size());
    for (const auto& bl : basis_loops_)
        out.push_back(algebraic_intersection(*surf_, bl, p));
    return out;
}

std::vector<Int> SurfaceBasis::class_vector(const PLPath& c) const {
    if (!c.closed) throw std::runtime_error("class_vector expects a closed curve");
    std::size_t n = basis_loops_.size();
    std::vector<Int> rhs(n);
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] = algebraic_intersection(*surf_, functionals_[i], c);
    auto sol = solve_integer(calib_, rhs);
    if (!sol) throw std::runtime_error("non-integral homology coordinates");
    return *sol;
}

TubedSurface standard_surface(long p, long b) {
    if (p < 0 || b < 0) throw std::runtime_error("standard_surface: negative parameters");
    TubedSurface s;
    Rat r(1, 4);
    for (long j = 0; j < p; ++j)
        s.tubes.push_back({Circle{standard_foot_center(j, 0), r},
                           Circle{standard_foot_center(j, 1), r}});
    for (long i = 0; i < b; ++i) s.holes.push_back(Circle{standard_hole_center(p, i), r});
    s.validate();
    return s;
}

QPt standard_foot_center(long tube, int foot) { return QPt(4 * tube + 2 * foot, 0); }
QPt standard_hole_center(long p, long hole) { return QPt(4 * p + 2 * hole, 0); }

} // namespace trisect
