#include "trisect/lefschetz.hpp"

#include "course_ops.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace trisect {

long total_space_euler(const LefschetzData& l) { return 2 - 2 * l.p - l.b + l.n(); }

// ---------------------------------------------------------------------------
// Named cycles on the standard fiber.
// ---------------------------------------------------------------------------

namespace {

/// Octagon with vertices off the coordinate axes (named cycles, so that
/// axis-aligned arc columns and boundary attachments stay generic).
PLPath octagon(const QPt& cc, const Rat& R) {
    Rat s = R * 3 / 4;
    auto rot = [&](const QPt& v) { // rigid rotation keeps vertices off the axes
        return cc + QPt((v.x * 15 - v.y * 8) / 17, (v.x * 8 + v.y * 15) / 17);
    };
    return PLPath::closed_polygon({rot(QPt(R, 0)), rot(QPt(s, s)), rot(QPt(0, R)),
                                   rot(QPt(-s, s)), rot(QPt(-R, 0)), rot(QPt(-s, -s)),
                                   rot(QPt(0, -R)), rot(QPt(s, -s))});
}

/// Axis-aligned octagon (blue curves; the red and green attachment fans are
/// chosen off these axes).
PLPath octagon_axis(const QPt& c, const Rat& R) {
    Rat d = R * 3 / 4;
    return PLPath::closed_polygon({c + QPt(R, 0), c + QPt(d, d), c + QPt(0, R),
                                   c + QPt(-d, d), c + QPt(-R, 0), c + QPt(-d, -d),
                                   c + QPt(0, -R), c + QPt(d, -d)});
}

Rat linf(const QPt& v) {
    Rat ax = abs(v.x), ay = abs(v.y);
    return ax > ay ? ax : ay;
}

} // namespace

PLPath cycle_a(long p) {
    TubedSurface s = standard_surface(p, 1);
    PLPath a;
    a.closed = true;
    QPt entry = s.tubes[0][1].center + QPt(Rat(1, 4), 0);
    a.push_vertex(entry);
    a.push_strand(s, 0, 1, entry);
    a.push_vertex(QPt(Rat(-3, 4), Rat(-3, 4)));
    a.push_vertex(QPt(Rat(11, 4), Rat(-3, 4)));
    a.push_vertex(QPt(Rat(11, 4), 0));
    a.conns.push_back(Conn{});
    return a;
}

PLPath cycle_b(long p) {
    TubedSurface s = standard_surface(p, 1);
    return octagon(s.tubes[0][0].center, Rat(3, 8));
}

PLPath cycle_delta_i(long p, long b, long hole) {
    TubedSurface s = standard_surface(p, b);
    return octagon(s.holes.at(hole).center, Rat(3, 8));
}

PLPath cycle_delta(long p, long b) { return cycle_delta_i(p, b, 0); }

PLPath cycle_epsilon(long p, long b) { return octagon(QPt(4 * p + 2 * b, -2), Rat(1, 4)); }

PLPath cycle_annulus_core(long b) {
    if (b < 2) throw std::runtime_error("annulus core needs b >= 2");
    return cycle_delta_i(0, b, 0);
}

std::vector<PLPath> chain_curves(long p, long b) {
    TubedSurface s = standard_surface(p, b);
    std::vector<PLPath> out;
    auto through = [&](long j) {
        QPt c1 = s.tubes[j][1].center;
        QPt entry = c1 + QPt(Rat(3, 20), Rat(-1, 5));
        PLPath t;
        t.closed = true;
        t.push_vertex(entry);
        t.push_strand(s, static_cast<int>(j), 1, entry);
        t.push_vertex(QPt(4 * j - Rat(3, 4), Rat(-3, 4)));
        t.push_vertex(QPt(4 * j + Rat(11, 4), Rat(-3, 4)));
        t.push_vertex(QPt(4 * j + Rat(11, 4), Rat(-1, 5)));
        t.conns.push_back(Conn{});
        return t;
    };
    out.push_back(octagon(s.tubes[0][0].center, Rat(3, 8)));
    for (long j = 0; j < p; ++j) {
        out.push_back(through(j));
        if (j + 1 < p) {
            // waist around the facing feet of tubes j and j+1
            Rat x0 = 4 * j + 1, x1 = 4 * j + 5;
            out.push_back(PLPath::closed_polygon({QPt(x0, Rat(1, 2)), QPt(x1, Rat(1, 2)),
                                                  QPt(x1, Rat(-1, 2)), QPt(x0, Rat(-1, 2))}));
        }
    }
    if (p > 0) out.push_back(octagon(QPt(4 * (p - 1), 0), Rat(5, 16)));
    return out;
}

LefschetzData cap_piece(long p) {
    LefschetzData l;
    l.p = p;
    l.b = 1;
    l.cycles.push_back({cycle_epsilon(p, 1), -1, "epsilon"});
    l.cycles.push_back({cycle_delta(p, 1), +1, "delta"});
    return l;
}

LefschetzData blown_down_cap(long p) {
    LefschetzData l;
    l.p = p;
    l.b = 1;
    l.cycles.push_back({cycle_delta(p, 1), +1, "delta"});
    return l;
}

IntMat TwistWord::h1_matrix(const SurfaceBasis& fiber_basis) const {
    std::size_t n = fiber_basis.basis_loops().size();
    IntMat m = IntMat::identity(n);
    for (const Twist& t : twists) m = transvection_matrix(fiber_basis, t.cls, t.sign) * m;
    return m;
}

TwistWord monodromy_word(const LefschetzData& l, const SurfaceBasis& fiber_basis) {
    TwistWord w;
    for (const auto& vc : l.cycles) {
        TwistWord::Twist t;
        t.cls = homology_class(fiber_basis, vc.curve);
        t.sign = vc.framing == -1 ? +1 : -1; // right-handed twist for framing -1
        t.name = vc.name;
        w.twists.push_back(std::move(t));
    }
    return w;
}

// ---------------------------------------------------------------------------
// Shared course machinery (also used by the cut-system stages).
// ---------------------------------------------------------------------------

namespace detail {

OffsetChain offset_subpath(const TubedSurface& s, const PLPath& course, CoursePos from,
                           CoursePos to, const Rat& h0, const Rat& slot) {
    std::size_t n = course.piece_count();
    struct Part {
        std::size_t piece;
        Rat t0, t1;
    };
    std::vector<Part> parts;
    if (from.piece == to.piece && from.t < to.t) {
        parts.push_back({from.piece, from.t, to.t});
    } else {
        parts.push_back({from.piece, from.t, Rat(1)});
        for (std::size_t k = (from.piece + 1) % n; k != to.piece; k = (k + 1) % n)
            parts.push_back({k, Rat(0), Rat(1)});
        parts.push_back({to.piece, Rat(0), to.t});
    }
    OffsetChain out;
    Rat side = h0;
    bool have_carry = false;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        const Part& part = parts[pi];
        const Conn& c = course.conns[part.piece];
        QPt pa = course.piece_a(part.piece), pb = course.piece_b(part.piece);
        if (c.is_strand) {
            if (!(part.t0 == 0 && part.t1 == 1))
                throw std::runtime_error("offset chain cannot cut a strand");
            const Circle& in = s.tubes[c.tube][c.enter_foot];
            QPt tangent = rot90(pa - in.center);
            int ccw = 1;
            if (!out.pts.empty()) {
                int sg = sgn(dot(out.pts.back() - pa, tangent));
                if (sg != 0) ccw = sg;
            }
            QPt entry = push_along_circle(in, pa, ccw, slot);
            QPt exit = s.identify(c.tube, c.enter_foot, entry);
            if (out.pts.empty()) out.pts.push_back(entry);
            else out.pts.back() = entry;
            out.conns.push_back(c);
            out.pts.push_back(exit);
            have_carry = true;
            // the side after the strand follows the exit displacement
            {
                int flipped = 0;
                if (pi + 1 < parts.size()) {
                    const Conn& cn = course.conns[parts[pi + 1].piece];
                    if (!cn.is_strand) {
                        QPt d_next = course.piece_b(parts[pi + 1].piece) -
                                     course.piece_a(parts[pi + 1].piece);
                        flipped = sgn(dot(rot90(d_next), exit - pb));
                    }
                }
                if (flipped != 0) side = abs(side) * flipped;
                else side = -side;
            }
            continue;
        }
        QPt a = pa + (pb - pa) * part.t0;
        QPt b = pa + (pb - pa) * part.t1;
        QPt dir = pb - pa;
        QPt off = rot90(dir) * (side / linf(dir));
        QPt sa = a + off, sb = b + off;
        if (have_carry) {
            sa = out.pts.back();
            have_carry = false;
        } else if (out.pts.size() >= 2) {
            // always miter: bevels would break the nesting of parallel lanes
            QPt prev_a = out.pts[out.pts.size() - 2], prev_b = out.pts.back();
            QPt d1 = prev_b - prev_a, d2 = sb - sa;
            Rat den = cross(d1, d2);
            if (sgn(den) != 0) {
                Rat t = cross(sa - prev_a, d2) / den;
                QPt mi = prev_a + d1 * t;
                out.pts.back() = mi;
                sa = mi;
            } else if (prev_b == sa) {
                sa = prev_b;
            }
        }
        if (out.pts.empty() || out.pts.back() != sa) {
            if (!out.pts.empty()) out.conns.push_back(Conn{});
            out.pts.push_back(sa);
        }
        if (out.pts.back() != sb) {
            out.conns.push_back(Conn{});
            out.pts.push_back(sb);
        }
    }
    return out;
}

std::vector<CutEvent> collect_cuts(const PLPath& path, const OffsetChain& chain, int line_id) {
    std::vector<CutEvent> out;
    for (std::size_t i = 0; i < path.piece_count(); ++i) {
        if (path.conns[i].is_strand) continue;
        QSeg ps{path.piece_a(i), path.piece_b(i)};
        for (std::size_t j = 0; j + 1 < chain.pts.size(); ++j) {
            if (chain.conns[j].is_strand) continue;
            QSeg cs{chain.pts[j], chain.pts[j + 1]};
            if (seg_meet(ps, cs) != SegMeet::Proper) continue;
            QPt d1 = ps.b - ps.a, d2 = cs.b - cs.a;
            Rat den = cross(d1, d2);
            Rat t = cross(cs.a - ps.a, d2) / den;
            out.push_back({i, t, ps.a + d1 * t, line_id, j});
        }
    }
    return out;
}

PLPath splice_detours(const PLPath& path, std::vector<Detour> detours) {
    std::sort(detours.begin(), detours.end(), [](const Detour& a, const Detour& b) {
        return a.in.piece != b.in.piece ? a.in.piece < b.in.piece : a.in.t < b.in.t;
    });
    PLPath res;
    res.closed = path.closed;
    res.start_hole = path.start_hole;
    res.end_hole = path.end_hole;
    auto emit_v = [&](const QPt& q) {
        if (!res.pts.empty() && res.pts.back() == q) return;
        if (!res.pts.empty()) res.conns.push_back(Conn{});
        res.pts.push_back(q);
    };
    std::size_t n = path.piece_count();
    std::size_t m = path.pts.size();
    std::size_t di = 0;
    emit_v(path.pts[0]);
    std::size_t ci = 0;
    Rat pos(0);
    while (ci < n) {
        if (di < detours.size() && detours[di].in.piece == ci && detours[di].in.t >= pos) {
            const Detour& d = detours[di];
            emit_v(d.in.point);
            for (std::size_t k = 0; k < d.pts.size(); ++k) {
                if (k > 0 && d.conns[k - 1].is_strand) {
                    res.conns.push_back(d.conns[k - 1]);
                    res.pts.push_back(d.pts[k]);
                } else {
                    emit_v(d.pts[k]);
                }
            }
            if (d.out.piece < d.in.piece || (d.out.piece == d.in.piece && d.out.t < d.in.t))
                throw std::runtime_error("detour exits behind its entry");
            ci = d.out.piece;
            pos = d.out.t;
            emit_v(d.out.point);
            ++di;
            continue;
        }
        if (path.conns[ci].is_strand) {
            res.conns.push_back(path.conns[ci]);
            res.pts.push_back(path.pts[(ci + 1) % m]);
        } else {
            emit_v(path.pts[(ci + 1) % m]);
        }
        ++ci;
        pos = 0;
    }
    if (path.closed) {
        res.conns.push_back(Conn{});
        if (res.pts.size() > 1 && res.pts.front() == res.pts.back()) {
            res.pts.pop_back();
            res.conns.pop_back();
        }
    }
    return res;
}

void append_chain_from(const OffsetChain& chain, std::size_t seg, const QPt& from,
                       std::vector<QPt>& pts, std::vector<Conn>& conns) {
    auto push = [&](const QPt& q) {
        if (!pts.empty() && pts.back() == q) return;
        if (!pts.empty()) conns.push_back(Conn{});
        pts.push_back(q);
    };
    push(from);
    for (std::size_t j = seg + 1; j < chain.pts.size(); ++j) {
        if (chain.conns[j - 1].is_strand && j >= 1) {
            if (pts.back() != chain.pts[j - 1])
                throw std::runtime_error("chain trim lost a strand entry");
            conns.push_back(chain.conns[j - 1]);
            pts.push_back(chain.pts[j]);
        } else {
            push(chain.pts[j]);
        }
    }
}

void append_chain_reversed_to(const OffsetChain& chain, std::size_t stop_seg,
                              const QPt& stop_pt, std::vector<QPt>& pts,
                              std::vector<Conn>& conns) {
    auto push = [&](const QPt& q) {
        if (!pts.empty() && pts.back() == q) return;
        if (!pts.empty()) conns.push_back(Conn{});
        pts.push_back(q);
    };
    for (std::size_t j = chain.pts.size(); j-- > stop_seg + 1;) {
        if (j >= 1 && j - 1 < chain.conns.size() && chain.conns[j - 1].is_strand) {
            push(chain.pts[j]);
            Conn rev = chain.conns[j - 1];
            rev.enter_foot = 1 - rev.enter_foot;
            conns.push_back(rev);
            pts.push_back(chain.pts[j - 1]);
        } else {
            push(chain.pts[j]);
        }
    }
    push(stop_pt);
}

long reroute_through_gap(const TubedSurface& s, const TubeTrace& tt, PLPath& path,
                         Rat& slot_state) {
    const PLPath& course = tt.course;
    std::size_t n = course.piece_count();
    std::size_t feet = tt.feet_piece;
    QPt P = course.piece_a(feet);
    QPt dvec = course.piece_b(feet) - P;
    QPt e2 = rot90(dvec);
    Rat sc = linf(dvec);
    auto LATC = [&](const Rat& t, const Rat& h) { return P + dvec * t + e2 * (h / sc); };

    // crossings of `path` with the course, forward-ordered from the feet piece
    struct Crossing {
        std::size_t cpiece;
        Rat ct;
        QPt point;
    };
    std::vector<Crossing> crossings;
    for (std::size_t ci = 0; ci < n; ++ci) {
        if (course.conns[ci].is_strand) continue;
        QSeg cs{course.piece_a(ci), course.piece_b(ci)};
        for (std::size_t pj = 0; pj < path.piece_count(); ++pj) {
            if (path.conns[pj].is_strand) continue;
            QSeg gs{path.piece_a(pj), path.piece_b(pj)};
            SegMeet mm = seg_meet(cs, gs);
            if (mm == SegMeet::NonGeneric)
                throw ReroutingObstructed("corridor crossing is non-transverse");
            if (mm != SegMeet::Proper) continue;
            QPt d1 = cs.b - cs.a, d2 = gs.b - gs.a;
            Rat den = cross(d1, d2);
            Rat t = cross(gs.a - cs.a, d2) / den;
            crossings.push_back({ci, t, cs.a + d1 * t});
        }
    }
    if (crossings.empty()) return 0;
    long M = static_cast<long>(crossings.size());
    std::vector<Detour> detours;
    for (long r = 0; r < M; ++r) {
        const Crossing& cr = crossings[r];
        // forward position of the crossing, measured from the feet piece;
        // crossings nearer the west junction get deeper lanes and more
        // easterly columns, a time-independent nesting rule
        Rat key = Rat(static_cast<long>((cr.cpiece + n - feet) % n)) + cr.ct;
        if (cr.cpiece == feet && cr.ct < Rat(6, 24)) key = Rat(static_cast<long>(n)) + cr.ct;
        Rat f = key / Rat(static_cast<long>(n) + 1);
        Rat lane = tt.ell * (Rat(1, 2) + f / 4);
        Rat feet_lat = tt.rho * (Rat(2) + f / 2);
        Rat column_t = Rat(11, 24) + f * Rat(2, 24);
        CoursePos from = cr.cpiece == feet ? CoursePos{feet, Rat(18, 24)}
                                           : CoursePos{cr.cpiece, Rat(0)};
        CoursePos to{feet, Rat(6, 24)};
        Rat slot = slot_state;
        slot_state = slot_state * 61 / 64;
        OffsetChain plus = offset_subpath(s, course, from, to, lane, slot);
        OffsetChain minus = offset_subpath(s, course, from, to, -lane, slot);
        std::vector<CutEvent> evs = collect_cuts(path, plus, 0);
        for (auto& e : collect_cuts(path, minus, 1)) evs.push_back(e);
        std::sort(evs.begin(), evs.end(), [](const CutEvent& a, const CutEvent& b) {
            return a.piece != b.piece ? a.piece < b.piece : a.t < b.t;
        });
        // position of this crossing along the path
        std::size_t gpiece = 0;
        Rat gt;
        bool found = false;
        for (std::size_t pj = 0; pj < path.piece_count() && !found; ++pj) {
            if (path.conns[pj].is_strand) continue;
            QSeg gs{path.piece_a(pj), path.piece_b(pj)};
            QSeg cs{course.piece_a(cr.cpiece), course.piece_b(cr.cpiece)};
            if (seg_meet(cs, gs) != SegMeet::Proper) continue;
            QPt d1 = gs.b - gs.a, d2 = cs.b - cs.a;
            Rat den = cross(d1, d2);
            Rat t = cross(cs.a - gs.a, d2) / den;
            if (gs.a + d1 * t == cr.point) {
                gpiece = pj;
                gt = t;
                found = true;
            }
        }
        if (!found) throw ReroutingObstructed("lost a corridor crossing");
        const CutEvent* before = nullptr;
        const CutEvent* after = nullptr;
        for (const auto& e : evs) {
            bool earlier = e.piece < gpiece || (e.piece == gpiece && e.t < gt);
            if (earlier) before = &e;
            else if (!after) after = &e;
        }
        if (!before || !after || before->line == after->line)
            throw ReroutingObstructed("could not bracket a corridor crossing");
        Rat fl_in = before->line == 0 ? feet_lat : -feet_lat;
        Rat fl_out = after->line == 0 ? feet_lat : -feet_lat;
        const OffsetChain& chain_in = before->line == 0 ? plus : minus;
        const OffsetChain& chain_out = after->line == 0 ? plus : minus;
        Detour det;
        det.in = *before;
        det.out = *after;
        append_chain_from(chain_in, before->chain_seg, before->point, det.pts, det.conns);
        auto push = [&](const QPt& q) {
            if (!det.pts.empty() && det.pts.back() == q) return;
            if (!det.pts.empty()) det.conns.push_back(Conn{});
            det.pts.push_back(q);
        };
        push(LATC(Rat(7, 24), fl_in));
        push(LATC(column_t, fl_in));
        push(LATC(column_t, fl_out));
        push(LATC(Rat(7, 24), fl_out));
        append_chain_reversed_to(chain_out, after->chain_seg, after->point, det.pts, det.conns);
        detours.push_back(std::move(det));
    }
    path = splice_detours(path, std::move(detours));
    return M;
}

} // namespace detail

// ---------------------------------------------------------------------------
// The insertion engine.
//
// Geometry of one handle attachment, in units of the reserved piece P + t*d:
// feet at t = 10/24 and 14/24, radius rho; the middle half [6,18]/24 of the
// piece is kept clear. Lateral heights are rho multiples near the feet and
// ell multiples along the rest of the course. The green side sigma selects
// the Fig-5 variant for the framing; crossings of older green curves are
// rerouted through the gap across the new red curve at nested lanes.
// ---------------------------------------------------------------------------

namespace {

using detail::CoursePos;
using detail::OffsetChain;

Rat dyadic_below_sqrt(const Rat& bound2, const char* what = "construction") {
    if (sgn(bound2) <= 0)
        throw ReroutingObstructed(std::string("no clearance left: ") + what);
    Rat v(1);
    while (v * v * 4 > bound2) v /= 2;
    return v;
}

std::vector<QPt> fan_directions() {
    std::vector<QPt> dirs;
    static const long nums[] = {0, 1, -1, 1, -1, 3, -3, 2, -2, 4, -4};
    static const long dens[] = {1, 4, 4, 2, 2, 4, 4, 1, 1, 1, 1};
    for (std::size_t i = 0; i < sizeof(nums) / sizeof(nums[0]); ++i) {
        Rat t = frac(nums[i], dens[i]);
        Rat den = 1 + t * t;
        dirs.push_back(QPt((1 - t * t) / den, 2 * t / den));
    }
    dirs.push_back(QPt(-1, 0));
    return dirs;
}

QPt fan_point(const Circle& c, const QPt& toward) {
    static const std::vector<QPt> dirs = fan_directions();
    std::size_t best = 0;
    for (std::size_t i = 1; i < dirs.size(); ++i)
        if (dot(dirs[i], toward) > dot(dirs[best], toward)) best = i;
    return c.center + dirs[best] * c.radius;
}

struct Builder {
    TubedSurface surf;
    std::vector<PLPath> reds, blues, greens, arcs, pendings;
    std::shared_ptr<LefschetzTrace> trace = std::make_shared<LefschetzTrace>();
    Rat next_slot = Rat(1, 1024);

    Rat fresh_slot() {
        Rat cur = next_slot;
        next_slot = next_slot * 61 / 64;
        return cur;
    }

    std::vector<const PLPath*> everything() const {
        std::vector<const PLPath*> out;
        for (const auto* fam : {&reds, &blues, &greens, &arcs, &pendings})
            for (const auto& p : *fam) out.push_back(&p);
        return out;
    }
};

Rat circle_margin2(const QSeg& seg, const Circle& c) {
    Rat d2c = seg_dist2(seg, c.center);
    Rat r2 = c.radius * c.radius;
    if (d2c <= r2) return Rat(0);
    Rat num = (d2c - r2) * (d2c - r2);
    Rat den = Rat(4) * (d2c > r2 ? d2c : r2);
    return num / den;
}

Rat seg_world_clearance2(const Builder& bld, const PLPath& course, const QSeg& seg,
                         std::size_t skip_piece) {
    Rat best(-1);
    auto consider = [&](const Rat& v) {
        if (sgn(best) < 0 || v < best) best = v;
    };
    for (const Circle& c : bld.surf.all_disks()) consider(circle_margin2(seg, c));
    auto scan = [&](const PLPath& path, bool is_course) {
        for (std::size_t i = 0; i < path.piece_count(); ++i) {
            if (path.conns[i].is_strand) continue;
            if (is_course && i == skip_piece) continue;
            consider(seg_seg_dist2({path.piece_a(i), path.piece_b(i)}, seg));
        }
    };
    for (const PLPath* path : bld.everything()) scan(*path, false);
    scan(course, true);
    return sgn(best) < 0 ? Rat(1) : best;
}

Rat course_safe_lateral2(const Builder& bld, const PLPath& course) {
    Rat best(-1);
    auto consider = [&](const Rat& v) {
        if (sgn(best) < 0 || v < best) best = v;
    };
    std::size_t n = course.piece_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (course.conns[i].is_strand) continue;
        QSeg cs{course.piece_a(i), course.piece_b(i)};
        for (const Circle& c : bld.surf.all_disks()) {
            if (c.on_circle(cs.a) || c.on_circle(cs.b)) {
                // attachment segment of a strand: the offset follows the
                // circle via the slot push; just keep laterals below the
                // radius scale
                consider(c.radius * c.radius / 16);
                continue;
            }
            Rat m2 = circle_margin2(cs, c);
            if (sgn(m2) == 0 && getenv("TRISECT_DEBUG_CLEAR"))
                fprintf(stderr, "zero clearance: course piece %zu touches disk at (%g,%g)\n", i,
                        c.center.x.get_d(), c.center.y.get_d());
            consider(m2);
        }
        for (const PLPath* path : bld.everything()) {
            for (std::size_t j = 0; j < path->piece_count(); ++j) {
                if (path->conns[j].is_strand) continue;
                QSeg ps{path->piece_a(j), path->piece_b(j)};
                if (seg_meet(cs, ps) == SegMeet::Proper) continue;
                Rat d2 = seg_seg_dist2(cs, ps);
                if (sgn(d2) == 0 && getenv("TRISECT_DEBUG_CLEAR"))
                    fprintf(stderr, "zero clearance: course piece %zu (%g,%g)-(%g,%g) vs path piece %zu (%g,%g)-(%g,%g)\n",
                            i, cs.a.x.get_d(), cs.a.y.get_d(), cs.b.x.get_d(), cs.b.y.get_d(),
                            j, ps.a.x.get_d(), ps.a.y.get_d(), ps.b.x.get_d(), ps.b.y.get_d());
                consider(d2);
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (course.conns[j].is_strand) continue;
            std::size_t lo = std::min(i, j), hi = std::max(i, j);
            if (i == j || hi == lo + 1 || (lo == 0 && hi == n - 1)) continue;
            Rat d2 = seg_seg_dist2(cs, {course.piece_a(j), course.piece_b(j)});
            if (sgn(d2) == 0 && getenv("TRISECT_DEBUG_CLEAR"))
                fprintf(stderr, "zero clearance: course self pieces %zu and %zu\n", i, j);
            consider(d2);
        }
    }
    return sgn(best) < 0 ? Rat(1) : best;
}

void insert_handle(Builder& bld, const PLPath& course, int framing, const std::string& name) {
    std::size_t n = course.piece_count();
    for (const auto& r : bld.reds)
        if (geometric_crossings(bld.surf, course, r) != 0)
            throw ReroutingObstructed("cycle crosses a red curve");
    for (const auto& bl : bld.blues)
        if (geometric_crossings(bld.surf, course, bl) != 0)
            throw ReroutingObstructed("cycle crosses a blue curve");

    std::size_t feet_piece = n;
    Rat best_cl(-1);
    for (std::size_t i = 0; i < n; ++i) {
        if (course.conns[i].is_strand) continue;
        QPt a = course.piece_a(i), b = course.piece_b(i);
        QSeg mid{a + (b - a) * Rat(6, 24), a + (b - a) * Rat(18, 24)};
        Rat cl = seg_world_clearance2(bld, course, mid, i);
        if (sgn(cl) > 0 && (feet_piece == n || cl > best_cl)) {
            best_cl = cl;
            feet_piece = i;
        }
    }
    if (feet_piece == n) throw ReroutingObstructed("no clear stretch for the feet");

    QPt P = course.piece_a(feet_piece);
    QPt dvec = course.piece_b(feet_piece) - P;
    QPt e2 = rot90(dvec);
    Rat sc = linf(dvec);
    auto LATC = [&](const Rat& t, const Rat& h) { return P + dvec * t + e2 * (h / sc); };
    Rat rho = dyadic_below_sqrt(best_cl, "feet stretch");
    while (rho * 64 > sc) rho /= 2;
    while (rho * rho * 64 > best_cl) rho /= 2;
    Rat ell = dyadic_below_sqrt(course_safe_lateral2(bld, course), "course lateral");
    int sigma = framing == -1 ? +1 : -1;

    TubeTrace tt;
    tt.course = course;
    tt.feet_piece = feet_piece;
    tt.rho = rho;
    tt.ell = ell;
    tt.green_side = sigma;
    tt.framing = framing;

    // Reroute crossed green curves through the gap (Remark-3.6 move).
    for (auto& g : bld.greens) detail::reroute_through_gap(bld.surf, tt, g, bld.next_slot);

    // New tube and its three curves.
    Circle N1{LATC(Rat(10, 24), Rat(0)), rho};
    Circle N2{LATC(Rat(14, 24), Rat(0)), rho};
    int tube = static_cast<int>(bld.surf.tubes.size());
    bld.surf.tubes.push_back({N1, N2});
    bld.surf.validate();
    const TubedSurface& s = bld.surf;

    QPt q1 = fan_point(N1, dvec + e2 * Rat(1, 3)); // off the octagon axes
    PLPath red;
    red.closed = true;
    red.push_vertex(q1);
    red.push_strand(s, tube, 0, q1);
    QPt q2 = red.pts.back();
    red.push_vertex(N2.center + (q2 - N2.center) * Rat(9, 8));
    red.push_vertex(N1.center + (q1 - N1.center) * Rat(9, 8));
    red.conns.push_back(Conn{});

    PLPath blue = octagon_axis(N1.center, rho * 5 / 4);

    QPt g1 = fan_point(N1, e2 * sigma + dvec * Rat(1, 3));
    PLPath green;
    green.closed = true;
    green.push_vertex(g1);
    green.push_strand(s, tube, 0, g1);
    QPt g2 = green.pts.back();
    green.push_vertex(N2.center + (g2 - N2.center) * Rat(9, 8));
    Rat sig(sigma);
    green.push_vertex(LATC(Rat(14, 24), sig * rho * 13 / 8));
    green.push_vertex(LATC(Rat(53, 96), sig * rho * 13 / 8));
    green.push_vertex(LATC(Rat(53, 96), -sig * rho * 2));
    green.push_vertex(LATC(Rat(14, 24), -sig * rho * 2));
    green.push_vertex(LATC(Rat(17, 24), -sig * rho * 2));
    OffsetChain wrap = detail::offset_subpath(s, course, {feet_piece, Rat(18, 24)},
                                              {feet_piece, Rat(6, 24)}, -sig * ell / 2,
                                              bld.fresh_slot());
    for (std::size_t k = 0; k < wrap.pts.size(); ++k) {
        if (k > 0 && wrap.conns[k - 1].is_strand) {
            green.conns.push_back(wrap.conns[k - 1]);
            green.pts.push_back(wrap.pts[k]);
        } else {
            green.push_vertex(wrap.pts[k]);
        }
    }
    green.push_vertex(LATC(Rat(7, 24), -sig * rho * 2));
    green.push_vertex(LATC(Rat(17, 48), -sig * rho * 2));
    green.push_vertex(LATC(Rat(17, 48), sig * rho * 13 / 8));
    green.push_vertex(LATC(Rat(10, 24), sig * rho * 13 / 8));
    green.push_vertex(N1.center + (g1 - N1.center) * Rat(11, 8));
    green.conns.push_back(Conn{});

    validate_path(s, red);
    validate_path(s, blue);
    validate_path(s, green);
    for (const auto& g : bld.greens) validate_path(s, g);
    if (geometric_crossings(s, red, blue) != 1 || geometric_crossings(s, red, green) != 1 ||
        geometric_crossings(s, blue, green) != 1)
        throw std::runtime_error("handle curves miss their single crossings at " + name);
    for (const auto& r : bld.reds)
        if (geometric_crossings(s, red, r) != 0 || geometric_crossings(s, blue, r) != 0 ||
            geometric_crossings(s, green, r) != 0)
            throw std::runtime_error("new curves touch an old red at " + name);
    for (const auto& bb : bld.blues)
        if (geometric_crossings(s, red, bb) != 0 || geometric_crossings(s, blue, bb) != 0 ||
            geometric_crossings(s, green, bb) != 0)
            throw std::runtime_error("new curves touch an old blue at " + name);
    for (std::size_t gi = 0; gi < bld.greens.size(); ++gi) {
        if (geometric_crossings(s, green, bld.greens[gi]) != 0)
            throw std::runtime_error("green family not disjoint after rerouting at " + name +
                                     " (new green vs green " + std::to_string(gi) + ")");
        for (std::size_t gj = gi + 1; gj < bld.greens.size(); ++gj) {
            long c = geometric_crossings(s, bld.greens[gi], bld.greens[gj]);
            if (c != 0) {
                if (getenv("TRISECT_DEBUG_GG")) {
                    for (std::size_t pi = 0; pi < bld.greens[gi].piece_count(); ++pi) {
                        if (bld.greens[gi].conns[pi].is_strand) continue;
                        QSeg s1{bld.greens[gi].piece_a(pi), bld.greens[gi].piece_b(pi)};
                        for (std::size_t pj = 0; pj < bld.greens[gj].piece_count(); ++pj) {
                            if (bld.greens[gj].conns[pj].is_strand) continue;
                            QSeg s2{bld.greens[gj].piece_a(pj), bld.greens[gj].piece_b(pj)};
                            if (seg_meet(s1, s2) == SegMeet::Proper)
                                fprintf(stderr,
                                        "green %zu piece %zu (%g,%g)-(%g,%g) X green %zu piece %zu (%g,%g)-(%g,%g)\n",
                                        gi, pi, s1.a.x.get_d(), s1.a.y.get_d(), s1.b.x.get_d(),
                                        s1.b.y.get_d(), gj, pj, s2.a.x.get_d(), s2.a.y.get_d(),
                                        s2.b.x.get_d(), s2.b.y.get_d());
                        }
                    }
                }
                throw std::runtime_error("old greens collide after rerouting at " + name +
                                         " (greens " + std::to_string(gi) + "," +
                                         std::to_string(gj) + " cross " + std::to_string(c) +
                                         ")");
            }
        }
    }
    for (const auto& pnd : bld.pendings) validate_path(s, pnd);
    for (const auto& arc : bld.arcs) validate_path(s, arc);

    bld.reds.push_back(std::move(red));
    bld.blues.push_back(std::move(blue));
    bld.greens.push_back(std::move(green));
    bld.trace->tubes.push_back(std::move(tt));
    bld.trace->word.emplace_back(name, framing);
}

} // namespace

LefschetzBuild relative_diagram(const LefschetzData& l) {
    Builder bld;
    bld.surf = standard_surface(l.p, l.b);
    bld.arcs = standard_arc_system(l.p, l.b);
    bld.trace->fiber_p = l.p;
    bld.trace->fiber_b = l.b;
    for (const auto& vc : l.cycles) {
        validate_path(bld.surf, vc.curve);
        if (!vc.curve.closed || !is_embedded(bld.surf, vc.curve))
            throw NonEmbeddedCycle("vanishing cycle must be an embedded closed curve");
        // Repeated cycles arrive as identical curves; separate them into
        // parallel copies so every pending pair is in generic position.
        PLPath candidate = vc.curve;
        for (int guard = 0; guard < 100; ++guard) {
            const PLPath* collides = nullptr;
            for (const auto& q : bld.pendings) {
                try {
                    geometric_crossings(bld.surf, candidate, q);
                } catch (const NonGenericOverlap&) {
                    collides = &q;
                }
            }
            if (!collides) break;
            candidate = parallel_copy(bld.surf, *collides, Side::Left);
        }
        bld.pendings.push_back(std::move(candidate));
    }
    for (std::size_t step = 0; step < l.cycles.size(); ++step) {
        PLPath course = bld.pendings.front();
        bld.pendings.erase(bld.pendings.begin());
        try {
            insert_handle(bld, course, l.cycles[step].framing, l.cycles[step].name);
        } catch (const std::exception& e) {
            throw std::runtime_error("handle " + std::to_string(step + 1) + " (" +
                                     l.cycles[step].name + "): " + e.what());
        }
    }
    LefschetzBuild out;
    out.data = l;
    out.diagram.params = l.diagram_params();
    out.diagram.surface = bld.surf;
    out.diagram.fiber_tubes = l.p;
    out.diagram.alpha = {Color::Alpha, bld.reds};
    out.diagram.beta = {Color::Beta, bld.blues};
    out.diagram.gamma = {Color::Gamma, bld.greens};
    out.cut.a_arcs = bld.arcs;
    out.trace = bld.trace;
    return out;
}

} // namespace trisect
