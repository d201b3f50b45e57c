#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trisect/lefschetz.hpp"

using namespace trisect;

namespace {
LefschetzData e1_w_piece() {
    LefschetzData l;
    l.p = 1;
    l.b = 1;
    for (int i = 0; i < 6; ++i) {
        l.cycles.push_back({cycle_a(1), -1, "a" + std::to_string(i + 1)});
        l.cycles.push_back({cycle_b(1), -1, "b" + std::to_string(i + 1)});
    }
    return l;
}
} // namespace

TEST_CASE("total space euler characteristic") {
    CHECK(total_space_euler(e1_w_piece()) == 11);
    CHECK(total_space_euler(cap_piece(1)) == 1);
    LefschetzData horikawa;
    horikawa.p = 2;
    horikawa.b = 1;
    auto cs = chain_curves(2, 1);
    for (int rep = 0; rep < 10; ++rep)
        for (int i = 3; i >= 0; --i)
            horikawa.cycles.push_back({cs[i], -1, "c" + std::to_string(i + 1)});
    CHECK(total_space_euler(horikawa) == 37);
}

TEST_CASE("named cycles are embedded and correctly paired") {
    TubedSurface s = standard_surface(1, 1);
    PLPath a = cycle_a(1), b = cycle_b(1), delta = cycle_delta(1, 1), eps = cycle_epsilon(1, 1);
    for (const auto& c : {a, b, delta, eps}) {
        validate_path(s, c);
        CHECK(is_embedded(s, c));
    }
    CHECK(geometric_crossings(s, a, b) == 1);
    CHECK(geometric_crossings(s, a, delta) == 0);
    CHECK(geometric_crossings(s, b, delta) == 0);
    CHECK(geometric_crossings(s, a, eps) == 0);
    SurfaceBasis basis(s);
    CHECK(homology_class(basis, delta).is_zero());
    CHECK(homology_class(basis, eps).is_zero());
    CHECK(!homology_class(basis, a).is_zero());
}

TEST_CASE("genus-2 chain curves have the chain intersection pattern") {
    TubedSurface s = standard_surface(2, 1);
    auto cs = chain_curves(2, 1);
    REQUIRE(cs.size() == 5);
    for (const auto& c : cs) {
        validate_path(s, c);
        CHECK(is_embedded(s, c));
    }
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            long expect = (j == i + 1) ? 1 : 0;
            INFO("pair ", i, " ", j);
            CHECK(geometric_crossings(s, cs[i], cs[j]) == expect);
        }
}

TEST_CASE("monodromy word of the E(1) fibration is trivial on H1") {
    TubedSurface s = standard_surface(1, 1);
    SurfaceBasis basis(s);
    TwistWord w = monodromy_word(e1_w_piece(), basis);
    CHECK(w.h1_matrix(basis) == IntMat::identity(2));
    LefschetzData one;
    one.p = 1;
    one.b = 1;
    one.cycles.push_back({cycle_a(1), -1, "a"});
    CHECK(!(monodromy_word(one, basis).h1_matrix(basis) == IntMat::identity(2)));
}

TEST_CASE("cap piece gives the (p+2, 2p; p, 1) diagram") {
    for (long p : {1L, 2L}) {
        LefschetzBuild built = relative_diagram(cap_piece(p));
        CHECK(built.diagram.params == TrisectionParams{p + 2, 2 * p, p, 1});
        CertificateReport rep = validate_relative(built.diagram);
        INFO(rep.text());
        CHECK(rep.overall == CertLevel::HomologyCertified);
        CHECK(page(built.diagram) == std::make_pair(p, 1L));
    }
}

TEST_CASE("blown-down cap gives the (p+1, 2p; p, 1) diagram") {
    for (long p : {1L, 2L}) {
        LefschetzBuild built = relative_diagram(blown_down_cap(p));
        CHECK(built.diagram.params == TrisectionParams{p + 1, 2 * p, p, 1});
        CertificateReport rep = validate_relative(built.diagram);
        INFO(rep.text());
        CHECK(rep.overall == CertLevel::HomologyCertified);
    }
}

TEST_CASE("empty diagram is the trivial relative trisection") {
    LefschetzData empty;
    empty.p = 1;
    empty.b = 1;
    LefschetzBuild built = relative_diagram(empty);
    CHECK(built.diagram.params == TrisectionParams{1, 2, 1, 1});
    CertificateReport rep = validate_relative(built.diagram);
    CHECK(rep.overall == CertLevel::HomologyCertified);
}

TEST_CASE("T2 x B2: fiber (1,2) with two boundary-parallel cycles") {
    LefschetzData l;
    l.p = 1;
    l.b = 2;
    l.cycles.push_back({cycle_delta_i(1, 2, 0), -1, "delta1"});
    l.cycles.push_back({cycle_delta_i(1, 2, 1), +1, "delta2"});
    LefschetzBuild built = relative_diagram(l);
    CHECK(built.diagram.params == TrisectionParams{3, 3, 1, 2});
    CertificateReport rep = validate_relative(built.diagram);
    INFO(rep.text());
    CHECK(rep.overall == CertLevel::HomologyCertified);
    CHECK(page(built.diagram) == std::make_pair(1L, 2L));
}

TEST_CASE("E(1) W-piece: the (13,2;1,1) diagram") {
    LefschetzBuild built = relative_diagram(e1_w_piece());
    CHECK(built.diagram.params == TrisectionParams{13, 2, 1, 1});
    CertificateReport rep = validate_relative(built.diagram);
    INFO(rep.text());
    CHECK(rep.overall == CertLevel::HomologyCertified);
    CHECK(page(built.diagram) == std::make_pair(1L, 1L));
}
