#include "trisect/assembly.hpp"

#include <algorithm>
#include <cassert>

namespace trisect {

BoundaryMatching BoundaryMatching::canonical(long b) {
    BoundaryMatching m;
    for (long i = 0; i < b; ++i) m.pairs.emplace_back(i, i);
    return m;
}

ClosedParams glue_params(const TrisectionParams& p1, const TrisectionParams& p2) {
    if (p1.p != p2.p || p1.b != p2.b)
        throw PageMismatch("glue requires matching page profiles");
    return {p1.g + p2.g + p1.b - 1, p1.k + p2.k - (2 * p1.p + p1.b - 1)};
}

MirroredPiece mirror_piece(const RelativeDiagram& d, const CutSystem& cut) {
    MirroredPiece out;
    out.diagram.params = d.params;
    out.diagram.fiber_tubes = d.fiber_tubes;
    out.diagram.surface = mirror(d.surface);
    auto mirror_family = [&](const CurveSystem& fam) {
        CurveSystem m;
        m.color = fam.color;
        for (const auto& c : fam.curves) m.curves.push_back(mirror_path(c));
        return m;
    };
    out.diagram.alpha = mirror_family(d.alpha);
    out.diagram.beta = mirror_family(d.beta);
    out.diagram.gamma = mirror_family(d.gamma);
    for (const auto& a : cut.a_arcs) out.cut.a_arcs.push_back(mirror_path(a));
    for (const auto& a : cut.b_arcs) out.cut.b_arcs.push_back(mirror_path(a));
    for (const auto& a : cut.c_arcs) out.cut.c_arcs.push_back(mirror_path(a));
    out.cut.slides = cut.slides;
    return out;
}

namespace {

struct Extent {
    Rat lo = 0, hi = 0;
    bool any = false;
    void add(const Rat& v) {
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
    }
};

Rat x_extent_hi(const RelativeDiagram& d, const CutSystem& cut) {
    Extent e;
    for (const Circle& c : d.surface.all_disks()) {
        e.add(c.center.x - c.radius);
        e.add(c.center.x + c.radius);
    }
    auto addp = [&](const PLPath& p) {
        for (const auto& q : p.pts) e.add(q.x);
    };
    for (const auto* fam : {&d.alpha, &d.beta, &d.gamma})
        for (const auto& c : fam->curves) addp(c);
    for (const auto* arcs : {&cut.a_arcs, &cut.b_arcs, &cut.c_arcs})
        for (const auto& a : *arcs) addp(a);
    return e.hi;
}

Rat x_extent_lo(const RelativeDiagram& d, const CutSystem& cut) {
    Extent e;
    for (const Circle& c : d.surface.all_disks()) {
        e.add(c.center.x - c.radius);
        e.add(c.center.x + c.radius);
    }
    auto addp = [&](const PLPath& p) {
        for (const auto& q : p.pts) e.add(q.x);
    };
    for (const auto* fam : {&d.alpha, &d.beta, &d.gamma})
        for (const auto& c : fam->curves) addp(c);
    for (const auto* arcs : {&cut.a_arcs, &cut.b_arcs, &cut.c_arcs})
        for (const auto& a : *arcs) addp(a);
    return e.lo;
}

RelativeDiagram translate_piece(const RelativeDiagram& d, const QPt& by) {
    RelativeDiagram out = d;
    out.basis_cache.reset();
    out.surface = translate(d.surface, by);
    auto tf = [&](CurveSystem& fam) {
        for (auto& c : fam.curves) c = translate_path(c, by);
    };
    tf(out.alpha);
    tf(out.beta);
    tf(out.gamma);
    return out;
}

CutSystem translate_cut(const CutSystem& cut, const QPt& by) {
    CutSystem out = cut;
    for (auto* arcs : {&out.a_arcs, &out.b_arcs, &out.c_arcs})
        for (auto& a : *arcs) a = translate_path(a, by);
    return out;
}

/// The closed curve a_i u (join) u a'_i u (join): devices are tube strands
/// for tubed pairs and overhead lane connectors for the matched pair.
/// A lane connector rises from the endpoint, crosses the corridor at its
/// assigned height and descends onto the partner endpoint.
PLPath join_arcs(const TubedSurface& glued, const PLPath& a, const PLPath& am,
                 const std::vector<int>& hole_device /* tube id or -1 */,
                 const Rat& lane_end, const Rat& lane_start) {
    PLPath out;
    out.closed = true;
    for (std::size_t i = 0; i < a.pts.size(); ++i) {
        out.push_vertex(a.pts[i]);
        if (i < a.piece_count() && a.conns[i].is_strand) {
            out.conns.push_back(a.conns[i]);
            out.pts.push_back(a.pts[i + 1]);
            ++i;
        }
    }
    int dev = hole_device.at(a.end_hole);
    if (dev >= 0) {
        Conn c;
        c.is_strand = true;
        c.tube = dev;
        c.enter_foot = 0;
        out.conns.push_back(c);
        out.pts.push_back(glued.identify(dev, 0, out.pts.back()));
    } else {
        QPt pa = a.pts.back(), pb = am.pts.back();
        out.push_vertex(QPt(pa.x, lane_end));
        out.push_vertex(QPt(pb.x, lane_end));
    }
    for (std::size_t i = am.pts.size(); i-- > 0;) {
        out.push_vertex(am.pts[i]);
        if (i > 0 && am.conns[i - 1].is_strand) {
            Conn rev = am.conns[i - 1];
            rev.enter_foot = 1 - rev.enter_foot;
            out.conns.push_back(rev);
            out.pts.push_back(am.pts[i - 1]);
            --i;
        }
    }
    int dev2 = hole_device.at(a.start_hole);
    if (dev2 >= 0) {
        Conn c;
        c.is_strand = true;
        c.tube = dev2;
        c.enter_foot = 1;
        QPt exit = glued.identify(dev2, 1, out.pts.back());
        if (exit != out.pts.front())
            throw ArcMismatch("joined arcs do not close up through the tube");
        out.conns.push_back(c);
    } else {
        QPt pa = am.pts.front(), pb = a.pts.front();
        out.push_vertex(QPt(pa.x, lane_start));
        out.push_vertex(QPt(pb.x, lane_start));
        out.conns.push_back(Conn{});
    }
    return out;
}

} // namespace

ClosedDiagram glue(const RelativeDiagram& d, const CutSystem& cut, const RelativeDiagram& dm_in,
                   const CutSystem& cutm_in, const BoundaryMatching& m) {
    if (d.params.p != dm_in.params.p || d.params.b != dm_in.params.b)
        throw PageMismatch("glue requires matching page profiles");
    long b = d.params.b;
    if (static_cast<long>(m.pairs.size()) != b)
        throw std::runtime_error("matching must pair every boundary circle");
    long l = d.params.l();
    if (static_cast<long>(cut.a_arcs.size()) != l || static_cast<long>(cutm_in.a_arcs.size()) != l ||
        static_cast<long>(cut.b_arcs.size()) != l || static_cast<long>(cutm_in.b_arcs.size()) != l ||
        static_cast<long>(cut.c_arcs.size()) != l || static_cast<long>(cutm_in.c_arcs.size()) != l)
        throw std::runtime_error("glue needs both full cut systems");

    // place dm east of d
    Rat shift = x_extent_hi(d, cut) - x_extent_lo(dm_in, cutm_in) + 4;
    QPt by(shift, 0);
    RelativeDiagram dm = translate_piece(dm_in, by);
    CutSystem cutm = translate_cut(cutm_in, by);

    // matched circles must correspond under the placement reflection:
    // f(P) = translate(mirror(P)) must map each of d's matched circles onto
    // dm's and each arc endpoint onto its partner arc's endpoint
    ClosedDiagram out;
    out.params = glue_params(d.params, dm.params);
    out.surface.holes.clear();
    out.surface.tubes = d.surface.tubes;
    long base_tubes = static_cast<long>(d.surface.tubes.size());
    for (const auto& t : dm.surface.tubes) out.surface.tubes.push_back(t);
    long joint_base = static_cast<long>(out.surface.tubes.size());
    std::vector<int> hole_device(b, -1);
    for (long i = 0; i + 1 < b; ++i) {
        auto [h1, h2] = m.pairs[i];
        out.surface.tubes.push_back({d.surface.holes.at(h1), dm.surface.holes.at(h2)});
        hole_device[h1] = static_cast<int>(joint_base + i);
    }
    out.surface.validate();

    // arc endpoint correspondence for every family and index
    auto check_arcs = [&](const std::vector<PLPath>& as, const std::vector<PLPath>& ams,
                          const char* fam) {
        for (long i = 0; i < l; ++i) {
            const PLPath& a = as[i];
            const PLPath& am = ams[i];
            auto [p1, p2] = m.pairs[0];
            (void)p1;
            (void)p2;
            for (auto [hole_a, pt_a, hole_b, pt_b] :
                 {std::tuple{a.start_hole, a.pts.front(), am.start_hole, am.pts.front()},
                  std::tuple{a.end_hole, a.pts.back(), am.end_hole, am.pts.back()}}) {
                long want = -1;
                for (const auto& pr : m.pairs)
                    if (pr.first == hole_a) want = pr.second;
                if (want != hole_b)
                    throw ArcMismatch(std::string(fam) + " arc " + std::to_string(i) +
                                      ": endpoint holes not matched");
                const Circle& c1 = d.surface.holes.at(hole_a);
                const Circle& c2 = dm.surface.holes.at(hole_b);
                QPt dvec = c2.center - c1.center;
                QPt image = c2.center + reflect_across_perp(dvec, pt_a - c1.center);
                if (image != pt_b)
                    throw ArcMismatch(std::string(fam) + " arc " + std::to_string(i) +
                                      ": endpoints do not correspond under the matching");
            }
        }
    };
    check_arcs(cut.a_arcs, cutm.a_arcs, "alpha");
    check_arcs(cut.b_arcs, cutm.b_arcs, "beta");
    check_arcs(cut.c_arcs, cutm.c_arcs, "gamma");

    // curve families: d's (tube ids unchanged), barred, dm's (tube ids shifted)
    auto shift_tubes = [&](PLPath p) {
        for (auto& c : p.conns)
            if (c.is_strand) c.tube += static_cast<int>(base_tubes);
        return p;
    };
    // lane heights: above everything, families separated, and within a
    // family ordered with the attachment x so that risers and lanes nest
    Rat ztop(0);
    {
        Extent ey;
        for (const Circle& c : out.surface.all_disks()) ey.add(c.center.y + c.radius);
        auto addp = [&](const PLPath& pth) {
            for (const auto& q : pth.pts) ey.add(q.y);
        };
        for (const auto* fam : {&d.alpha, &d.beta, &d.gamma})
            for (const auto& c : fam->curves) addp(c);
        for (const auto* fam : {&dm.alpha, &dm.beta, &dm.gamma})
            for (const auto& c : fam->curves) addp(c);
        for (const auto* as : {&cut.a_arcs, &cut.b_arcs, &cut.c_arcs})
            for (const auto& c : *as) addp(c);
        for (const auto* as : {&cutm.a_arcs, &cutm.b_arcs, &cutm.c_arcs})
            for (const auto& c : *as) addp(c);
        ztop = ey.hi + 1;
    }
    long conn_hole = m.pairs.back().first;
    auto build_family = [&](const CurveSystem& f1, const std::vector<PLPath>& arcs,
                            const CurveSystem& f2, const std::vector<PLPath>& arcsm,
                            Color color, int fam_idx) {
        CurveSystem fam;
        fam.color = color;
        // rank the window endpoints of this family by x, eastmost lowest
        std::vector<std::pair<Rat, std::pair<long, int>>> ends; // (x, (arc, end))
        for (long i = 0; i < l; ++i) {
            if (arcs[i].end_hole == conn_hole)
                ends.push_back({arcs[i].pts.back().x, {i, 1}});
            if (arcs[i].start_hole == conn_hole)
                ends.push_back({arcs[i].pts.front().x, {i, 0}});
        }
        std::sort(ends.begin(), ends.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<std::array<Rat, 2>> lane(l, {Rat(0), Rat(0)});
        for (std::size_t r = 0; r < ends.size(); ++r) {
            auto [i, e] = ends[r].second;
            lane[i][e] = ztop + Rat(fam_idx) + frac(static_cast<long>(r) + 1,
                                                    static_cast<long>(8 * ends.size() + 8));
        }
        for (const auto& c : f1.curves) fam.curves.push_back(c);
        for (long i = 0; i < l; ++i) {
            PLPath am = shift_tubes(arcsm[i]);
            fam.curves.push_back(
                join_arcs(out.surface, arcs[i], am, hole_device, lane[i][1], lane[i][0]));
        }
        for (const auto& c : f2.curves) fam.curves.push_back(shift_tubes(c));
        return fam;
    };
    out.alpha = build_family(d.alpha, cut.a_arcs, dm.alpha, cutm.a_arcs, Color::Alpha, 0);
    out.beta = build_family(d.beta, cut.b_arcs, dm.beta, cutm.b_arcs, Color::Beta, 1);
    out.gamma = build_family(d.gamma, cut.c_arcs, dm.gamma, cutm.c_arcs, Color::Gamma, 2);

    CertificateReport rep = validate_closed(out);
    if (!rep.passed())
        throw ValidationFailed("glued diagram failed validation:\n" + rep.text());
    return out;
}

ClosedDiagram double_diagram(const RelativeDiagram& d, const CutSystem& cut) {
    MirroredPiece mp = mirror_piece(d, cut);
    return glue(d, cut, mp.diagram, mp.cut, BoundaryMatching::canonical(d.params.b));
}

namespace {

ClosedDiagram closed_from_lf(const LefschetzData& l, const LefschetzData& cap) {
    if (l.b != 1) throw std::runtime_error("closed pipelines need fiber boundary b = 1");
    for (const auto& vc : l.cycles)
        if (vc.framing != -1)
            throw std::runtime_error("closed Lefschetz pipeline needs all framings -1");
    // homological chain-relation check: the word must act like the boundary
    // twist, which is trivial on H1 since the boundary curve bounds
    TubedSurface fiber = standard_surface(l.p, 1);
    SurfaceBasis fb(fiber);
    TwistWord w = monodromy_word(l, fb);
    if (!(w.h1_matrix(fb) == IntMat::identity(fb.basis_loops().size())))
        throw MonodromyMismatch(
            "monodromy word does not act like the boundary twist on homology");
    LefschetzBuild wpiece = relative_diagram(l);
    LefschetzBuild vpiece = relative_diagram(cap);
    CutSystem wcut = derive_cut_system(wpiece.diagram, wpiece.trace.get(), &wpiece.cut.a_arcs);
    CutSystem vcut = derive_cut_system(vpiece.diagram, vpiece.trace.get(), &vpiece.cut.a_arcs);
    MirroredPiece vm = mirror_piece(vpiece.diagram, vcut);
    return glue(wpiece.diagram, wcut, vm.diagram, vm.cut, BoundaryMatching::canonical(1));
}

} // namespace

ClosedDiagram trisect_closed_lf(const LefschetzData& l) {
    return closed_from_lf(l, cap_piece(l.p));
}

ClosedDiagram trisect_blown_down_lf(const LefschetzData& l) {
    return closed_from_lf(l, blown_down_cap(l.p));
}

} // namespace trisect
