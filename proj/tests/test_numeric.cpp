#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trisect/numeric.hpp"

#include <random>

using namespace trisect;

TEST_CASE("rational parsing round trips") {
    CHECK(rat_of_string("3/4") == Rat(3, 4));
    CHECK(rat_of_string("-7") == Rat(-7));
    CHECK(to_string(frac(6, 8)) == "3/4");
}

TEST_CASE("orientation predicate") {
    QPt a(0, 0), b(4, 0);
    CHECK(orient(a, b, QPt(2, 1)) == 1);
    CHECK(orient(a, b, QPt(2, -1)) == -1);
    CHECK(orient(a, b, QPt(7, 0)) == 0);
}

TEST_CASE("segment meeting classification") {
    QSeg s{{0, 0}, {4, 0}};
    CHECK(seg_meet(s, {{2, -1}, {2, 1}}) == SegMeet::Proper);
    CHECK(seg_meet(s, {{5, -1}, {5, 1}}) == SegMeet::Empty);
    CHECK(seg_meet(s, {{2, 0}, {2, 1}}) == SegMeet::NonGeneric);  // endpoint on interior
    CHECK(seg_meet(s, {{4, 0}, {5, 1}}) == SegMeet::NonGeneric);  // shared endpoint
    CHECK(seg_meet(s, {{1, 0}, {3, 0}}) == SegMeet::NonGeneric);  // collinear overlap
    QSeg t{{Rat(1, 3), Rat(1, 7)}, {Rat(2, 3), Rat(-1, 7)}};
    CHECK(seg_meet(s, t) == SegMeet::Proper);
}

TEST_CASE("crossing signs are antisymmetric") {
    QSeg s{{0, 0}, {4, 0}};
    QSeg up{{2, -1}, {2, 1}};
    QSeg dn{{2, 1}, {2, -1}};
    CHECK(seg_cross_sign(s, up) == -seg_cross_sign(s, dn));
}

TEST_CASE("segment distance") {
    QSeg s{{0, 0}, {4, 0}};
    CHECK(seg_dist2(s, QPt(2, 3)) == Rat(9));
    CHECK(seg_dist2(s, QPt(-3, 4)) == Rat(25));
    CHECK(seg_seg_dist2(s, {{2, -1}, {2, 1}}) == 0);
    CHECK(seg_seg_dist2(s, {{0, 2}, {4, 2}}) == Rat(4));
}

TEST_CASE("randomized: proper crossings detected against brute parametric solve") {
    std::mt19937 rng(20240517);
    std::uniform_int_distribution<int> coord(-8, 8);
    int checked = 0;
    for (int it = 0; it < 2000; ++it) {
        QSeg s{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
        QSeg t{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
        if (s.a == s.b || t.a == t.b) continue;
        Rat den = cross(s.b - s.a, t.b - t.a);
        if (sgn(den) == 0) continue;
        Rat u = cross(t.a - s.a, t.b - t.a) / den;
        Rat v = cross(t.a - s.a, s.b - s.a) / den;
        bool strict = u > 0 && u < 1 && v > 0 && v < 1;
        bool touching = (u >= 0 && u <= 1 && v >= 0 && v <= 1) && !strict;
        SegMeet m = seg_meet(s, t);
        if (strict) CHECK(m == SegMeet::Proper);
        else if (touching) CHECK(m == SegMeet::NonGeneric);
        else CHECK(m == SegMeet::Empty);
        ++checked;
    }
    CHECK(checked > 1000);
}
