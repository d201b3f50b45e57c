#include "trisect/cutsystem.hpp"

#include "course_ops.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace trisect {

namespace {

long crossings_with_family(const TubedSurface& s, const PLPath& p,
                           const std::vector<PLPath>& fam) {
    long total = 0;
    for (const auto& c : fam) total += geometric_crossings(s, p, c);
    return total;
}

void require_disjoint_family(const TubedSurface& s, const std::vector<PLPath>& arcs,
                             const char* what) {
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            long c = geometric_crossings(s, arcs[i], arcs[j]);
            if (c != 0)
                throw std::runtime_error(std::string(what) + ": arcs " + std::to_string(i) +
                                         " and " + std::to_string(j) + " cross " +
                                         std::to_string(c) + " times");
        }
}

} // namespace

PLPath project_to_page(const RelativeDiagram& d, const PLPath& path) {
    PLPath out;
    out.closed = path.closed;
    out.start_hole = path.start_hole;
    out.end_hole = path.end_hole;
    std::size_t m = path.pts.size();
    for (std::size_t vi = 0; vi < m; ++vi) {
        out.push_vertex(path.pts[vi]);
        std::size_t ci = vi;
        if (ci >= path.piece_count()) break;
        const Conn& c = path.conns[ci];
        if (c.is_strand && c.tube < d.fiber_tubes) {
            out.conns.push_back(c);
            out.pts.push_back(path.pts[(vi + 1) % m]);
            ++vi;
        }
        // inserted-tube strands become the straight chord: the next vertex is
        // simply pushed as a planar segment endpoint on the following round
    }
    if (path.closed) {
        if (out.conns.size() + 1 == out.pts.size()) out.conns.push_back(Conn{});
        if (out.pts.size() > 1 && out.pts.front() == out.pts.back()) {
            out.pts.pop_back();
            out.conns.pop_back();
        }
    }
    return out;
}

IntMat arc_action_matrix(const SurfaceBasis& page_basis, const TubedSurface& page,
                         const std::vector<PLPath>& arcs0, const std::vector<PLPath>& arcs1) {
    std::size_t n = page_basis.basis_loops().size();
    if (arcs0.size() != n || arcs1.size() != n)
        throw std::runtime_error("arc_action_matrix: arc count must equal the H1 rank");
    IntMat a0(n, n), a1(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            a0.at(k, i) = algebraic_intersection(page, page_basis.basis_loops()[k], arcs0[i]);
            a1.at(k, i) = algebraic_intersection(page, page_basis.basis_loops()[k], arcs1[i]);
        }
    // mu_* satisfies  A1^T * T = A0^T  (intersection numbers are preserved)
    IntMat a1t = a1.transposed();
    IntMat t(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Int> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = a0.at(k, i);
        auto col = solve_integer(a1t, rhs);
        if (!col) throw std::runtime_error("arc systems do not span H1(page, boundary)");
        for (std::size_t i = 0; i < n; ++i) t.at(i, k) = (*col)[i];
    }
    Int dt = t.det();
    if (dt != 1 && dt != -1)
        throw std::runtime_error("extracted monodromy matrix is not unimodular");
    return t;
}

CutSystem derive_cut_system(const RelativeDiagram& d, const LefschetzTrace* trace,
                            const std::vector<PLPath>* seed, long budget) {
    if (budget < 0) budget = default_budget();
    const TubedSurface& s = d.surface;
    CutSystem cut;
    if (seed) {
        cut.a_arcs = *seed;
    } else if (d.params.g == d.params.p) {
        cut.a_arcs = standard_arc_system(d.params.p, d.params.b);
    } else {
        throw std::runtime_error("derive_cut_system: a seed is required for non-empty diagrams");
    }
    long l = d.params.l();
    if (static_cast<long>(cut.a_arcs.size()) != l)
        throw std::runtime_error("cut system must have 2p+b-1 arcs");
    for (const auto& a : cut.a_arcs) {
        validate_path(s, a);
        if (crossings_with_family(s, a, d.alpha.curves) != 0)
            throw std::runtime_error("seed arcs must avoid the alpha curves");
    }
    require_disjoint_family(s, cut.a_arcs, "A_alpha");
    {
        // the image of A_alpha in the page cuts it into a disk
        std::vector<const PLPath*> sys;
        for (const auto& c : d.alpha.curves) sys.push_back(&c);
        for (const auto& a : cut.a_arcs) sys.push_back(&a);
        if (!complement_connected(d.basis(), sys))
            throw std::runtime_error("A_alpha does not cut the page into a disk");
    }

    // A_beta: parallel copies with sides chosen so the copied system stays
    // disjoint as a family.
    auto copy_family = [&](const std::vector<PLPath>& sources,
                           const char* stage) -> std::vector<PLPath> {
        std::vector<PLPath> copies;
        for (std::size_t i = 0; i < sources.size(); ++i) {
            bool placed = false;
            for (Side side : {Side::Right, Side::Left}) {
                PLPath c;
                try {
                    c = parallel_copy(s, sources[i], side);
                } catch (const std::exception&) {
                    continue;
                }
                bool ok = true;
                try {
                    for (std::size_t j = 0; j < sources.size() && ok; ++j)
                        if (j != i && geometric_crossings(s, c, sources[j]) != 0) ok = false;
                    for (std::size_t j = 0; j < copies.size() && ok; ++j)
                        if (geometric_crossings(s, c, copies[j]) != 0) ok = false;
                } catch (const NonGenericOverlap&) {
                    ok = false;
                }
                if (ok) {
                    copies.push_back(std::move(c));
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw BudgetExceeded(std::string(stage) + ": no side gives a disjoint copy");
        }
        return copies;
    };
    cut.b_arcs = copy_family(cut.a_arcs, "A_beta stage");
    for (const auto& b : cut.b_arcs)
        if (crossings_with_family(s, b, d.beta.curves) != 0)
            throw BudgetExceeded("A_beta stage: copies meet beta curves");
    require_disjoint_family(s, cut.b_arcs, "A_beta");

    // A_gamma: copies of A_beta with green crossings slid over the blue
    // curve of the torus they cross (routed through its gap).
    Rat slot(1, 2048);
    cut.c_arcs = copy_family(cut.b_arcs, "A_gamma stage");
    for (std::size_t i = 0; i < cut.c_arcs.size(); ++i) {
        PLPath& c = cut.c_arcs[i];
        if (trace) {
            for (std::size_t m = 0; m < trace->tubes.size(); ++m) {
                long made = detail::reroute_through_gap(s, trace->tubes[m], c, slot);
                for (long q = 0; q < made; ++q)
                    cut.slides.push_back({3, i, "beta[" + std::to_string(m) + "]", "gap route"});
                if (static_cast<long>(cut.slides.size()) > budget)
                    throw BudgetExceeded("A_gamma stage: slide budget exhausted");
            }
        }
        if (crossings_with_family(s, c, d.gamma.curves) != 0)
            throw BudgetExceeded("A_gamma stage: copies still meet gamma curves");
        validate_path(s, c);
    }
    require_disjoint_family(s, cut.c_arcs, "A_gamma");
    return cut;
}

namespace {

/// One stage-4 move: replace a red crossing of `x` by a walk around a
/// parallel copy of the green curve of the same torus. The entry hop joins
/// the copy on the same side of the red curve, so the pair of crossings is
/// removed geometrically.
std::optional<PLPath> splice_green_walk(const TubedSurface& s, const PLPath& x,
                                        const PLPath& red, const PLPath& green,
                                        const std::vector<const PLPath*>& other_arcs,
                                        const std::vector<PLPath>& greens, int attempt) {
    Rat eps = Rat(1, 64) / (attempt + 1);
    Rat delta = Rat(1, 4) / (attempt + 1);
    for (Side side : {Side::Left, Side::Right}) {
        PLPath copy;
        try {
            copy = parallel_copy_scaled(s, green, side, eps, eps / 2);
            validate_path(s, copy);
            if (geometric_crossings(s, copy, green) != 0) continue;
        } catch (const std::exception&) {
            continue;
        }
        struct Hit {
            std::size_t piece;
            Rat t;
            std::size_t red_piece;
        };
        auto find_crossing = [&](const PLPath& path) -> std::optional<Hit> {
            for (std::size_t i = 0; i < path.piece_count(); ++i) {
                if (path.conns[i].is_strand) continue;
                QSeg ps{path.piece_a(i), path.piece_b(i)};
                for (std::size_t j = 0; j < red.piece_count(); ++j) {
                    if (red.conns[j].is_strand) continue;
                    QSeg rs{red.piece_a(j), red.piece_b(j)};
                    if (seg_meet(ps, rs) != SegMeet::Proper) continue;
                    QPt d1 = ps.b - ps.a, d2 = rs.b - rs.a;
                    Rat den = cross(d1, d2);
                    Rat t = cross(rs.a - ps.a, d2) / den;
                    return Hit{i, t, j};
                }
            }
            return std::nullopt;
        };
        auto cx = find_crossing(x);
        auto cc = find_crossing(copy);
        if (!cx || !cc) continue;
        QPt xa = x.piece_a(cx->piece), xb = x.piece_b(cx->piece);
        QPt ca = copy.piece_a(cc->piece), cb = copy.piece_b(cc->piece);
        QPt u0 = xa + (xb - xa) * (cx->t * (1 - delta));
        QPt u1 = xa + (xb - xa) * (cx->t + (Rat(1) - cx->t) * delta);
        QPt w0 = ca + (cb - ca) * (cc->t * (1 - delta));
        QPt w1 = ca + (cb - ca) * (cc->t + (Rat(1) - cc->t) * delta);
        // sides relative to the red piece that x crosses
        QPt ra = red.piece_a(cx->red_piece), rb = red.piece_b(cx->red_piece);
        QPt ra2 = red.piece_a(cc->red_piece), rb2 = red.piece_b(cc->red_piece);
        int su0 = orient(ra, rb, u0);
        int sw0 = orient(ra2, rb2, w0);
        // entry joins the copy point on u0's side of the red curve
        bool enter_w0 = su0 == sw0;
        QPt wa = enter_w0 ? w0 : w1;
        QPt wb = enter_w0 ? w1 : w0;
        bool walk_backward = enter_w0;

        PLPath res;
        res.closed = x.closed;
        res.start_hole = x.start_hole;
        res.end_hole = x.end_hole;
        auto emit_v = [&](const QPt& q) {
            if (!res.pts.empty() && res.pts.back() == q) return;
            if (!res.pts.empty()) res.conns.push_back(Conn{});
            res.pts.push_back(q);
        };
        std::size_t m = x.pts.size();
        std::size_t cm = copy.pts.size();
        for (std::size_t vi = 0; vi <= cx->piece; ++vi) {
            emit_v(x.pts[vi]);
            if (vi < cx->piece && x.conns[vi].is_strand) {
                res.conns.push_back(x.conns[vi]);
                res.pts.push_back(x.pts[vi + 1]);
                ++vi;
            }
        }
        emit_v(u0);
        emit_v(wa);
        if (walk_backward) {
            emit_v(copy.pts[cc->piece]);
            std::size_t cur = cc->piece;
            while (cur != (cc->piece + 1) % cm) {
                std::size_t prev = (cur + cm - 1) % cm;
                const Conn& cn = copy.conns[prev];
                if (cn.is_strand) {
                    Conn rev = cn;
                    rev.enter_foot = 1 - cn.enter_foot;
                    res.conns.push_back(rev);
                    res.pts.push_back(copy.pts[prev]);
                } else {
                    emit_v(copy.pts[prev]);
                }
                cur = prev;
            }
        } else {
            std::size_t cur = (cc->piece + 1) % cm;
            emit_v(copy.pts[cur]);
            while (cur != cc->piece) {
                const Conn& cn = copy.conns[cur];
                std::size_t nxt = (cur + 1) % cm;
                if (cn.is_strand) {
                    res.conns.push_back(cn);
                    res.pts.push_back(copy.pts[nxt]);
                } else {
                    emit_v(copy.pts[nxt]);
                }
                cur = nxt;
            }
        }
        emit_v(wb);
        emit_v(u1);
        for (std::size_t vi = cx->piece + 1; vi < m; ++vi) {
            emit_v(x.pts[vi]);
            if (vi < x.piece_count() && x.conns[vi].is_strand) {
                res.conns.push_back(x.conns[vi]);
                res.pts.push_back(x.pts[(vi + 1) % m]);
                ++vi;
            }
        }
        try {
            validate_path(s, res);
            if (geometric_crossings(s, res, red) >= geometric_crossings(s, x, red)) continue;
            bool ok = true;
            for (const PLPath* oa : other_arcs)
                if (geometric_crossings(s, res, *oa) != 0) { ok = false; break; }
            if (!ok) continue;
            for (const auto& g : greens)
                if (geometric_crossings(s, res, g) != 0) { ok = false; break; }
            if (!ok) continue;
            return res;
        } catch (const std::exception&) {
            continue;
        }
    }
    return std::nullopt;
}

} // namespace

MonodromyDescription monodromy(const RelativeDiagram& d, const CutSystem& cut,
                               const LefschetzTrace* trace, long budget) {
    if (budget < 0) budget = default_budget();
    const TubedSurface& s = d.surface;
    MonodromyDescription out;
    out.initial_arcs = cut.a_arcs;

    // Stage 4: slide the green-side arcs over gamma until disjoint from alpha.
    std::vector<PLPath> star = cut.c_arcs;
    bool arcs_ok = true;
    long attempts = 0;
    for (std::size_t i = 0; i < star.size() && arcs_ok; ++i) {
        bool progress = true;
        while (progress) {
            progress = false;
            // lowest red index still crossed
            long m = -1;
            for (std::size_t r = 0; r < d.alpha.curves.size(); ++r)
                if (geometric_crossings(s, star[i], d.alpha.curves[r]) != 0) {
                    m = static_cast<long>(r);
                    break;
                }
            if (m < 0) break;
            if (++attempts > budget) {
                arcs_ok = false;
                break;
            }
            std::vector<const PLPath*> others;
            for (std::size_t q = 0; q < star.size(); ++q)
                if (q != i) others.push_back(&star[q]);
            bool done = false;
            for (int attempt = 0; attempt < 4 && !done; ++attempt) {
                auto res = splice_green_walk(s, star[i], d.alpha.curves[m],
                                             d.gamma.curves[m], others, d.gamma.curves,
                                             attempt);
                if (res) {
                    star[i] = std::move(*res);
                    done = true;
                    progress = true;
                }
            }
            if (!done) {
                arcs_ok = false;
                break;
            }
        }
        if (arcs_ok && crossings_with_family(s, star[i], d.alpha.curves) != 0) arcs_ok = false;
    }

    TubedSurface page = standard_surface(d.params.p, d.params.b);
    SurfaceBasis page_basis(page);

    if (arcs_ok) {
        try {
            std::vector<PLPath> p0, p1;
            for (const auto& a : cut.a_arcs) p0.push_back(project_to_page(d, a));
            for (const auto& a : star) p1.push_back(project_to_page(d, a));
            out.h1_matrix = arc_action_matrix(page_basis, page, p0, p1);
            out.final_arcs = star;
            out.from_arcs = true;
        } catch (const std::exception& e) {
            arcs_ok = false;
            out.note = std::string("arc extraction failed: ") + e.what();
        }
    }
    if (!arcs_ok) {
        if (!trace)
            throw BudgetExceeded("monodromy: arc schedule not found and no provenance");
        // Provenance route: ordered transvections of the recorded courses.
        std::size_t n = page_basis.basis_loops().size();
        IntMat m = IntMat::identity(n);
        for (const auto& tt : trace->tubes) {
            PLPath proj = project_to_page(d, tt.course);
            HomologyClass cls = homology_class(page_basis, proj);
            int sign = tt.framing == -1 ? +1 : -1;
            m = transvection_matrix(page_basis, cls, sign) * m;
        }
        out.h1_matrix = m;
        out.from_arcs = false;
        if (out.note.empty()) out.note = "H1 action from construction provenance";
    }
    return out;
}

} // namespace trisect
