#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trisect/assembly.hpp"

using namespace trisect;

TEST_CASE("glue parameter arithmetic") {
    CHECK(glue_params({13, 2, 1, 1}, {3, 2, 1, 1}) == ClosedParams{16, 2});
    CHECK(glue_params({42, 4, 2, 1}, {4, 4, 2, 1}) == ClosedParams{46, 4});
    CHECK(glue_params({42, 4, 2, 1}, {3, 4, 2, 1}) == ClosedParams{45, 4});
    CHECK_THROWS_AS(glue_params({3, 2, 1, 1}, {3, 3, 1, 2}), PageMismatch);
}

TEST_CASE("double of the trivial diagram") {
    // empty diagram on Sigma_{p,b} doubles to (2g+b-1, 2k-2p-b+1)
    LefschetzData empty;
    empty.p = 1;
    empty.b = 1;
    LefschetzBuild built = relative_diagram(empty);
    CutSystem cut = derive_cut_system(built.diagram, built.trace.get(), &built.cut.a_arcs);
    ClosedDiagram dd = double_diagram(built.diagram, cut);
    CHECK(dd.params == ClosedParams{2, 1}); // double of Sigma_{1,1} x B^2
    CertificateReport rep = validate_closed(dd);
    INFO(rep.text());
    CHECK(rep.passed());
}

TEST_CASE("double of E_{1,1} gives the (4,2) twisted-bundle diagram") {
    LefschetzBuild built = relative_diagram(blown_down_cap(1));
    CHECK(built.diagram.params == TrisectionParams{2, 2, 1, 1});
    CutSystem cut = derive_cut_system(built.diagram, built.trace.get(), &built.cut.a_arcs);
    ClosedDiagram dd = double_diagram(built.diagram, cut);
    CHECK(dd.params == ClosedParams{4, 2});
    CHECK(validate_closed(dd).passed());
}

TEST_CASE("double of the T2 x B2 diagram gives the (7,3) diagram") {
    LefschetzData l;
    l.p = 1;
    l.b = 2;
    l.cycles.push_back({cycle_delta_i(1, 2, 0), -1, "delta1"});
    l.cycles.push_back({cycle_delta_i(1, 2, 1), +1, "delta2"});
    LefschetzBuild built = relative_diagram(l);
    CutSystem cut = derive_cut_system(built.diagram, built.trace.get(), &built.cut.a_arcs);
    ClosedDiagram dd = double_diagram(built.diagram, cut);
    CHECK(dd.params == ClosedParams{7, 3});
    CertificateReport rep = validate_closed(dd);
    INFO(rep.text());
    CHECK(rep.passed());
}

TEST_CASE("E(1): glue of the fibration piece with the cap") {
    LefschetzData e1w;
    e1w.p = 1;
    e1w.b = 1;
    e1w.section_flag = true;
    for (int i = 0; i < 6; ++i) {
        e1w.cycles.push_back({cycle_a(1), -1, "a" + std::to_string(i + 1)});
        e1w.cycles.push_back({cycle_b(1), -1, "b" + std::to_string(i + 1)});
    }
    ClosedDiagram e1 = trisect_closed_lf(e1w);
    CHECK(e1.params == ClosedParams{16, 2});
    CertificateReport rep = validate_closed(e1);
    INFO(rep.text());
    CHECK(rep.passed());

    ClosedDiagram e1tilde = trisect_blown_down_lf(e1w);
    CHECK(e1tilde.params == ClosedParams{15, 2});
    CHECK(validate_closed(e1tilde).passed());
}
