#include "trisect/diagram.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <queue>
#include <set>
#include <sstream>

namespace trisect {

namespace {
std::vector<const PLPath*> family_probes(const CurveSystem& a, const CurveSystem& b,
                                         const CurveSystem& c) {
    std::vector<const PLPath*> out;
    for (const auto* fam : {&a, &b, &c})
        for (const auto& p : fam->curves) out.push_back(&p);
    return out;
}
} // namespace

const SurfaceBasis& RelativeDiagram::basis() const {
    auto& self = const_cast<RelativeDiagram&>(*this);
    if (!self.basis_cache)
        self.basis_cache =
            std::make_shared<SurfaceBasis>(surface, family_probes(alpha, beta, gamma));
    return *self.basis_cache;
}

const SurfaceBasis& ClosedDiagram::basis() const {
    auto& self = const_cast<ClosedDiagram&>(*this);
    if (!self.basis_cache)
        self.basis_cache =
            std::make_shared<SurfaceBasis>(surface, family_probes(alpha, beta, gamma));
    return *self.basis_cache;
}

long default_budget() {
    if (const char* e = std::getenv("TRISECT_BUDGET")) return std::atol(e);
    return 10000;
}

std::string CertificateReport::text() const {
    std::ostringstream os;
    os << "overall: "
       << (overall == CertLevel::FullStandard
               ? "FullStandard"
               : overall == CertLevel::HomologyCertified ? "HomologyCertified" : "Failed")
       << "\n";
    for (const auto& p : pairs) {
        os << "  " << p.pair << ": "
           << (p.level == CertLevel::FullStandard
                   ? "FullStandard"
                   : p.level == CertLevel::HomologyCertified ? "HomologyCertified" : "Failed")
           << " value=" << p.value;
        if (!p.detail.empty()) os << " (" << p.detail << ")";
        os << "\n";
    }
    for (const auto& f : failures) os << "  failure: " << f << "\n";
    return os.str();
}

bool complement_connected(const SurfaceBasis& basis, const std::vector<const PLPath*>& system) {
    if (system.empty()) return true;
    std::size_t n = basis.basis_loops().size();
    IntMat m(system.size(), n);
    for (std::size_t i = 0; i < system.size(); ++i) {
        auto v = basis.pairing_vector(*system[i]);
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = v[j];
    }
    return rank_gf2(m) == system.size();
}

namespace {

struct FamilyCheck {
    bool ok = true;
    std::string why;
};

FamilyCheck check_family(const TubedSurface& s, const CurveSystem& fam, long expected,
                         const char* name) {
    FamilyCheck out;
    if (static_cast<long>(fam.curves.size()) != expected) {
        out.ok = false;
        out.why = std::string(name) + ": expected " + std::to_string(expected) + " curves, got " +
                  std::to_string(fam.curves.size());
        return out;
    }
    for (std::size_t i = 0; i < fam.curves.size(); ++i) {
        if (!fam.curves[i].closed) {
            out.ok = false;
            out.why = std::string(name) + "[" + std::to_string(i) + "] is not closed";
            return out;
        }
        try {
            validate_path(s, fam.curves[i]);
        } catch (const std::exception& e) {
            out.ok = false;
            out.why = std::string(name) + "[" + std::to_string(i) + "]: " + e.what();
            return out;
        }
        for (std::size_t j = i + 1; j < fam.curves.size(); ++j) {
            long c;
            try {
                c = geometric_crossings(s, fam.curves[i], fam.curves[j]);
            } catch (const NonGenericOverlap& e) {
                out.ok = false;
                out.why = std::string(name) + ": NotDisjoint (non-generic): " + e.what();
                return out;
            }
            if (c != 0) {
                out.ok = false;
                out.why = std::string(name) + ": NotDisjoint (" + std::to_string(i) + "," +
                          std::to_string(j) + " cross " + std::to_string(c) + " times)";
                return out;
            }
        }
    }
    return out;
}

bool snf_profile(const IntMat& m, long ones, std::string* detail) {
    SmithResult snf = smith_normal_form(m);
    auto d = snf.diagonal();
    long got_ones = 0, got_zero = 0;
    for (const Int& x : d) {
        if (x == 1) ++got_ones;
        else if (x == 0) ++got_zero;
        else {
            *detail = "SNF entry " + x.get_str() + " not in {0,1}";
            return false;
        }
    }
    if (got_ones != ones) {
        *detail = "SNF has " + std::to_string(got_ones) + " ones, expected " +
                  std::to_string(ones);
        return false;
    }
    *detail = "SNF profile diag(1 x " + std::to_string(got_ones) + ", 0 x " +
              std::to_string(got_zero) + ")";
    return true;
}

} // namespace

CertificateReport validate_relative(const RelativeDiagram& d, bool attempt_full, long budget) {
    CertificateReport rep;
    const TrisectionParams& P = d.params;
    if (P.b < 1) rep.failures.push_back("relative diagram requires b >= 1");
    if (P.g + P.p + P.b - 1 < P.k || P.k < 2 * P.p + P.b - 1)
        rep.failures.push_back("parameter constraint g+p+b-1 >= k >= 2p+b-1 violated");
    if (d.surface.genus() != P.g || d.surface.boundary_count() != P.b)
        rep.failures.push_back("surface does not match (g,b)");
    long gp = P.g - P.p;
    for (auto [fam, name] :
         {std::pair<const CurveSystem*, const char*>{&d.alpha, "alpha"},
          {&d.beta, "beta"},
          {&d.gamma, "gamma"}}) {
        FamilyCheck fc = check_family(d.surface, *fam, gp, name);
        if (!fc.ok) rep.failures.push_back(fc.why);
    }
    if (!rep.failures.empty()) {
        rep.overall = CertLevel::Failed;
        return rep;
    }
    const SurfaceBasis& basis = d.basis();
    for (auto [fam, name] :
         {std::pair<const CurveSystem*, const char*>{&d.alpha, "alpha"},
          {&d.beta, "beta"},
          {&d.gamma, "gamma"}}) {
        try {
            auto prof = surgery_profile(basis, *fam);
            if (prof != std::make_pair(P.p, P.b))
                rep.failures.push_back(std::string(name) + ": surgery profile (" +
                                       std::to_string(prof.first) + "," +
                                       std::to_string(prof.second) + ") != page");
        } catch (const std::exception& e) {
            rep.failures.push_back(std::string(name) + ": " + e.what());
        }
    }
    if (!rep.failures.empty()) {
        rep.overall = CertLevel::Failed;
        return rep;
    }
    long s = P.s();
    struct PairSel {
        const CurveSystem* a;
        const CurveSystem* b;
        const char* nm;
    };
    PairSel sel[3] = {{&d.alpha, &d.beta, "alpha/beta"},
                      {&d.beta, &d.gamma, "beta/gamma"},
                      {&d.gamma, &d.alpha, "gamma/alpha"}};
    bool all_homology = true;
    for (const auto& ps : sel) {
        PairCertificate pc;
        pc.pair = ps.nm;
        std::string detail;
        IntMat m = intersection_matrix(d.surface, *ps.a, *ps.b);
        if (snf_profile(m, s, &detail)) {
            pc.level = CertLevel::HomologyCertified;
            pc.value = s;
            pc.detail = detail;
        } else {
            pc.level = CertLevel::Failed;
            pc.detail = detail;
            all_homology = false;
        }
        rep.pairs.push_back(pc);
    }
    if (!all_homology) {
        rep.overall = CertLevel::Failed;
        return rep;
    }
    rep.overall = CertLevel::HomologyCertified;
    if (attempt_full) {
        bool all_full = true;
        long bud = budget < 0 ? default_budget() : budget;
        for (std::size_t i = 0; i < 3; ++i) {
            try {
                standardize_pair(basis, *sel[i].a, *sel[i].b, s, bud);
                rep.pairs[i].level = CertLevel::FullStandard;
            } catch (const BudgetExceeded&) {
                all_full = false;
                rep.pairs[i].detail += "; full search: budget exceeded";
            }
        }
        if (all_full) rep.overall = CertLevel::FullStandard;
    }
    return rep;
}

CertificateReport validate_closed(const ClosedDiagram& d, bool attempt_full, long budget) {
    CertificateReport rep;
    long g = d.params.g, k = d.params.k;
    if (!d.surface.closed()) rep.failures.push_back("surface is not closed");
    if (d.surface.genus() != g) rep.failures.push_back("surface genus != g");
    if (g < k || k < 0) rep.failures.push_back("need g >= k >= 0");
    for (auto [fam, name] :
         {std::pair<const CurveSystem*, const char*>{&d.alpha, "alpha"},
          {&d.beta, "beta"},
          {&d.gamma, "gamma"}}) {
        FamilyCheck fc = check_family(d.surface, *fam, g, name);
        if (!fc.ok) rep.failures.push_back(fc.why);
    }
    if (!rep.failures.empty()) {
        rep.overall = CertLevel::Failed;
        return rep;
    }
    const SurfaceBasis& basis = d.basis();
    for (auto [fam, name] :
         {std::pair<const CurveSystem*, const char*>{&d.alpha, "alpha"},
          {&d.beta, "beta"},
          {&d.gamma, "gamma"}}) {
        if (family_rank(basis, *fam) != static_cast<std::size_t>(g))
            rep.failures.push_back(std::string(name) + ": not a non-separating collection");
    }
    if (!rep.failures.empty()) {
        rep.overall = CertLevel::Failed;
        return rep;
    }
    struct PairSel {
        const CurveSystem* a;
        const CurveSystem* b;
        const char* nm;
    };
    PairSel sel[3] = {{&d.alpha, &d.beta, "alpha/beta"},
                      {&d.beta, &d.gamma, "beta/gamma"},
                      {&d.gamma, &d.alpha, "gamma/alpha"}};
    bool all_homology = true;
    for (const auto& ps : sel) {
        PairCertificate pc;
        pc.pair = ps.nm;
        try {
            long got = heegaard_k(basis, *ps.a, *ps.b);
            pc.value = got;
            if (got == k) {
                pc.level = CertLevel::HomologyCertified;
                pc.detail = "k = " + std::to_string(got);
            } else {
                pc.level = CertLevel::Failed;
                pc.detail = "k = " + std::to_string(got) + ", expected " + std::to_string(k);
                all_homology = false;
            }
        } catch (const NotStandardProfile& e) {
            pc.level = CertLevel::Failed;
            pc.detail = e.what();
            all_homology = false;
        }
        rep.pairs.push_back(pc);
    }
    rep.overall = all_homology ? CertLevel::HomologyCertified : CertLevel::Failed;
    if (rep.overall == CertLevel::HomologyCertified && attempt_full) {
        bool all_full = true;
        long bud = budget < 0 ? default_budget() : budget;
        for (std::size_t i = 0; i < 3; ++i) {
            try {
                standardize_pair(basis, *sel[i].a, *sel[i].b, g - k, bud);
                rep.pairs[i].level = CertLevel::FullStandard;
            } catch (const BudgetExceeded&) {
                all_full = false;
                rep.pairs[i].detail += "; full search: budget exceeded";
            }
        }
        if (all_full) rep.overall = CertLevel::FullStandard;
    }
    return rep;
}

std::pair<long, long> page(const RelativeDiagram& d) {
    auto prof = surgery_profile(d.basis(), d.alpha);
    if (prof != std::make_pair(d.params.p, d.params.b))
        throw ProfileMismatch("page profile (" + std::to_string(prof.first) + "," +
                              std::to_string(prof.second) + ") does not match params");
    return prof;
}

// ---------------------------------------------------------------------------
// Canonical cut arcs on the standard surface.
//
// All circles have radius 1/4 on the x axis: feet of tube j at x = 4j and
// 4j+2, holes at x = 4p+2i. For each tube the through-arc u_j dives into the
// second foot from above and returns inside the corridor between the two
// rails of the encircling arc v_j. Western tubes use higher tier bands so
// columns and rails nest without crossings.
// ---------------------------------------------------------------------------

std::vector<PLPath> standard_arc_system(long p, long b) {
    TubedSurface s = standard_surface(p, b);
    std::vector<PLPath> arcs;
    const Circle& h0 = s.holes.at(0);
    const Rat micro(1, 7777);
    long l = 2 * p + b - 1;
    // Attachment window at the north of the glued hole: arc ends in tier
    // order, highest tier eastmost. Bodies exit northwest through nested
    // columns; glue connectors will exit northeast. Window parameters are
    // circle params around t = 1 (the top).
    long ends = 4 * p; // tube arcs only; connector arcs handled separately
    long total_ends = ends + (b > 1 ? 1 : 0);
    auto window_point = [&](long rank) {
        // rank 0 = eastmost of the window
        Rat t = Rat(7, 8) + frac(rank + 1, 4 * (total_ends + 2));
        return circle_point(h0, t);
    };
    auto body_column_x = [&](long rank) -> Rat {
        return h0.center.x - h0.radius - Rat(1, 4) - frac(rank + 1, 8);
    };
    // Global end ranking by tier, descending: per tube j the four ends
    // (v-out T3, u-return Tu, v-return T3w, u-out T1); western tubes have
    // the higher bands.
    struct End {
        long tube;
        int kind; // 0: v out (T3), 1: u return (Tu), 2: v return (T3w), 3: u out (T1)
    };
    std::vector<End> order;
    for (long j = 0; j < p; ++j)
        for (int k = 0; k < 4; ++k) order.push_back({j, k});
    // attach/window data per (tube, kind)
    std::vector<std::array<QPt, 4>> attach(p);
    std::vector<std::array<QPt, 4>> coltop(p);
    std::vector<std::array<Rat, 4>> tier(p);
    for (long r = 0; r < ends; ++r) {
        const End& e = order[r];
        Rat band = Rat(1, 2) + frac(p - e.tube, 4) + micro;
        Rat t = band - frac(e.kind, 16);
        QPt pw = window_point(r);
        Rat cx = body_column_x(r);
        attach[e.tube][e.kind] = pw;
        coltop[e.tube][e.kind] = QPt(cx, t);
        tier[e.tube][e.kind] = t;
    }
    // hole-window lead: from the attach, a stub northwest to the body
    // column, then up the column to the tier
    auto lead = [&](long j, int kind) {
        std::vector<QPt> pts;
        QPt a = attach[j][kind];
        QPt top = coltop[j][kind];
        pts.push_back(a);
        pts.push_back(QPt(top.x, a.y + Rat(1, 8) + frac(kind + 1, 64)));
        pts.push_back(top);
        return pts;
    };
    for (long j = 0; j < p; ++j) {
        Rat T3 = tier[j][0], Tu = tier[j][1], T3w = tier[j][2], T1 = tier[j][3];
        Rat D = Rat(1, 2) + micro;
        QPt f1top = QPt(4 * j + 2, Rat(1, 4));
        // u_j: out at T1 to the tube, back inside the corridor at Tu
        PLPath u;
        u.closed = false;
        u.start_hole = 0;
        u.end_hole = 0;
        {
            auto lw = lead(j, 3);
            for (const QPt& q : lw) u.push_vertex(q);
        }
        u.push_vertex(QPt(4 * j + 2, T1));
        u.push_vertex(f1top);
        u.push_strand(s, static_cast<int>(j), 1, f1top);
        u.push_vertex(QPt(4 * j, Tu));
        {
            auto lw = lead(j, 1);
            u.push_vertex(QPt(lw[2].x, Tu));
            u.push_vertex(lw[2]);
            u.push_vertex(lw[1]);
            u.push_vertex(lw[0]);
        }
        arcs.push_back(std::move(u));
        // v_j: outer rail T3, around the first foot, inner rail T3w
        PLPath v;
        v.closed = false;
        v.start_hole = 0;
        v.end_hole = 0;
        {
            auto lw = lead(j, 0);
            for (const QPt& q : lw) v.push_vertex(q);
        }
        v.push_vertex(QPt(4 * j - 1, T3));
        v.push_vertex(QPt(4 * j - 1, -D));
        v.push_vertex(QPt(4 * j + 1, -D));
        v.push_vertex(QPt(4 * j + 1, T3w));
        {
            auto lw = lead(j, 2);
            v.push_vertex(QPt(lw[2].x, T3w));
            v.push_vertex(lw[2]);
            v.push_vertex(lw[1]);
            v.push_vertex(lw[0]);
        }
        arcs.push_back(std::move(v));
    }
    for (long i = 0; i + 1 < b; ++i) {
        // arched connector between consecutive holes
        QPt e = s.holes[i].center + QPt(Rat(63, 260), Rat(16, 260));
        if (i + 1 == b - 1) {
            // last hole carries the glue window: attach there via the window
            QPt pw = window_point(ends);
            Rat wy = pw.y + Rat(1, 4);
            QPt mid((s.holes[i].center.x + s.holes[i + 1].center.x) / 2, wy);
            arcs.push_back(PLPath::arc_polyline({e, QPt(e.x + Rat(1, 8), wy), mid,
                                                 QPt(pw.x, wy), pw},
                                                static_cast<int>(i),
                                                static_cast<int>(i + 1)));
        } else {
            QPt w = s.holes[i + 1].center + QPt(Rat(-63, 260), Rat(16, 260));
            QPt mid = (s.holes[i].center + s.holes[i + 1].center) * Rat(1, 2) + QPt(0, Rat(1, 8));
            arcs.push_back(PLPath::arc_polyline({e, mid, w}, static_cast<int>(i),
                                                static_cast<int>(i + 1)));
        }
    }
    if (static_cast<long>(arcs.size()) != l)
        throw std::runtime_error("standard arc system has the wrong count");
    for (const auto& a : arcs) validate_path(s, a);
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j)
            if (geometric_crossings(s, arcs[i], arcs[j]) != 0)
                throw std::runtime_error("standard arcs not disjoint");
    return arcs;
}

bool pair_in_normal_form(const SurfaceBasis& basis, const CurveSystem& eta,
                         const CurveSystem& zeta, long dual_pairs) {
    const TubedSurface& s = basis.surface();
    std::size_t n = eta.curves.size();
    if (zeta.curves.size() != n) return false;
    std::vector<std::vector<long>> m(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            try {
                m[i][j] = geometric_crossings(s, eta.curves[i], zeta.curves[j]);
            } catch (const NonGenericOverlap&) {
                return false;
            }
        }
    std::vector<long> row(n, 0), col(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            row[i] += m[i][j];
            col[j] += m[i][j];
        }
    std::vector<int> partner(n, -1);
    long duals = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (row[i] == 0) continue;
        if (row[i] != 1) return false;
        std::size_t j = 0;
        while (m[i][j] == 0) ++j;
        if (col[j] != 1) return false;
        partner[i] = static_cast<int>(j);
        ++duals;
    }
    if (duals != dual_pairs) return false;
    std::vector<bool> zeta_used(n, false);
    for (std::size_t i = 0; i < n; ++i)
        if (partner[i] >= 0) zeta_used[partner[i]] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (partner[i] >= 0) continue;
        auto vi = basis.class_vector(eta.curves[i]);
        bool found = false;
        for (std::size_t j = 0; j < n && !found; ++j) {
            if (zeta_used[j] || col[j] != 0) continue;
            auto vj = basis.class_vector(zeta.curves[j]);
            bool plus = true, minus = true;
            for (std::size_t t = 0; t < vi.size(); ++t) {
                plus = plus && (vi[t] == vj[t]);
                minus = minus && (vi[t] == -vj[t]);
            }
            if (plus || minus) {
                zeta_used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<SlideMove> standardize_pair(const SurfaceBasis& basis, const CurveSystem& eta,
                                        const CurveSystem& zeta, long dual_pairs, long budget) {
    const TubedSurface& s = basis.surface();
    if (pair_in_normal_form(basis, eta, zeta, dual_pairs)) return {};
    long attempts = 0;

    struct State {
        CurveSystem e, z;
        std::vector<SlideMove> moves;
        long score = 0;
    };
    auto total_crossings = [&](const CurveSystem& e, const CurveSystem& z) {
        long t = 0;
        for (const auto& a : e.curves)
            for (const auto& b : z.curves) t += geometric_crossings(s, a, b);
        return t;
    };
    auto cmp = [](const State& a, const State& b) { return a.score > b.score; };
    std::priority_queue<State, std::vector<State>, decltype(cmp)> open(cmp);
    open.push({eta, zeta, {}, total_crossings(eta, zeta)});
    while (!open.empty()) {
        State cur = open.top();
        open.pop();
        if (pair_in_normal_form(basis, cur.e, cur.z, dual_pairs)) return cur.moves;
        for (int family = 0; family < 2; ++family) {
            const CurveSystem& fam = family == 0 ? cur.e : cur.z;
            for (std::size_t ti = 0; ti < fam.curves.size(); ++ti)
                for (std::size_t oi = 0; oi < fam.curves.size(); ++oi) {
                    if (ti == oi) continue;
                    for (Side side : {Side::Left, Side::Right}) {
                        std::size_t anchors = fam.curves[ti].pts.size();
                        std::size_t step = std::max<std::size_t>(1, anchors / 4);
                        for (std::size_t av = 0; av < anchors; av += step) {
                            if (++attempts > budget)
                                throw BudgetExceeded("standardize_pair: budget exhausted");
                            std::vector<const PLPath*> ctx;
                            for (std::size_t q = 0; q < cur.e.curves.size(); ++q)
                                if (family != 0 || q != ti) ctx.push_back(&cur.e.curves[q]);
                            for (std::size_t q = 0; q < cur.z.curves.size(); ++q)
                                if (family != 1 || q != ti) ctx.push_back(&cur.z.curves[q]);
                            try {
                                PLPath slid = band_slide(s, fam.curves[ti], fam.curves[oi], av,
                                                         side, ctx);
                                State nxt = cur;
                                (family == 0 ? nxt.e : nxt.z).curves[ti] = slid;
                                nxt.score = total_crossings(nxt.e, nxt.z);
                                if (nxt.score >= cur.score) continue;
                                nxt.moves.push_back(
                                    {family, ti, oi, av, side});
                                if (pair_in_normal_form(basis, nxt.e, nxt.z, dual_pairs))
                                    return nxt.moves;
                                open.push(std::move(nxt));
                            } catch (const std::exception&) {
                            }
                        }
                    }
                }
        }
    }
    throw BudgetExceeded("standardize_pair: search space exhausted");
}

} // namespace trisect
