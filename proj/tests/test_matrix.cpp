#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trisect/matrix.hpp"

#include <random>

using namespace trisect;

namespace {

// Independent oracle: reduce a copy by blind elementary operations until
// diagonal, without the pivoting strategy of the implementation, then
// normalize the diagonal by gcd-collection. Used only to cross-check the
// invariant-factor profile.
std::vector<Int> oracle_invariant_factors(IntMat m) {
    std::size_t R = m.rows(), C = m.cols();
    std::size_t t = 0;
    while (t < R && t < C) {
        // find any nonzero
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < R && !found; ++i)
            for (std::size_t j = t; j < C && !found; ++j)
                if (sgn(m.at(i, j)) != 0) { pi = i; pj = j; found = true; }
        if (!found) break;
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = t + 1; i < R; ++i)
                while (sgn(m.at(i, t)) != 0) {
                    if (abs(m.at(i, t)) < abs(m.at(t, t))) {
                        m.swap_rows(i, t);
                        again = true;
                    }
                    Int q = m.at(i, t) / m.at(t, t);
                    m.add_row(i, t, -q);
                    if (sgn(m.at(i, t)) == 0) break;
                }
            for (std::size_t j = t + 1; j < C; ++j)
                while (sgn(m.at(t, j)) != 0) {
                    if (abs(m.at(t, j)) < abs(m.at(t, t))) {
                        m.swap_cols(j, t);
                        again = true;
                    }
                    Int q = m.at(t, j) / m.at(t, t);
                    m.add_col(j, t, -q);
                    if (sgn(m.at(t, j)) == 0) break;
                }
        }
        ++t;
    }
    std::vector<Int> d;
    for (std::size_t i = 0; i < t; ++i) d.push_back(abs(m.at(i, i)));
    // collect gcd/lcm chain
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            Int g, l;
            mpz_gcd(g.get_mpz_t(), d[i].get_mpz_t(), d[j].get_mpz_t());
            if (sgn(g) != 0) l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    while (!d.empty() && sgn(d.back()) == 0) d.pop_back();
    std::size_t n = std::min(m.rows(), m.cols());
    while (d.size() < n) d.push_back(Int(0));
    return d;
}

void check_contract(const IntMat& m) {
    SmithResult s = smith_normal_form(m);
    CHECK(abs(s.u.det()) == 1);
    CHECK(abs(s.v.det()) == 1);
    CHECK(s.u * m * s.v == s.d);
    auto diag = s.diagonal();
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
        CHECK(sgn(diag[i]) >= 0);
        if (sgn(diag[i + 1]) != 0) {
            REQUIRE(sgn(diag[i]) != 0);
            CHECK(mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()));
        }
    }
    for (std::size_t i = 0; i < s.d.rows(); ++i)
        for (std::size_t j = 0; j < s.d.cols(); ++j)
            if (i != j) CHECK(sgn(s.d.at(i, j)) == 0);
    // profile against the independent oracle
    auto want = oracle_invariant_factors(m);
    auto got = diag;
    while (got.size() < want.size()) got.push_back(Int(0));
    while (want.size() < got.size()) want.push_back(Int(0));
    CHECK(got == want);
}

} // namespace

TEST_CASE("smith normal form: zero and identity") {
    IntMat z(4, 4);
    auto s = smith_normal_form(z);
    for (auto& d : s.diagonal()) CHECK(d == 0);
    IntMat id = IntMat::identity(5);
    auto si = smith_normal_form(id);
    for (auto& d : si.diagonal()) CHECK(d == 1);
}

TEST_CASE("smith normal form: known small example") {
    // [[2,4,4],[ -6,6,12],[10,4,16]] has invariant factors 2, 2, 156 (classic).
    IntMat m(3, 3);
    long vals[3][3] = {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = vals[i][j];
    auto s = smith_normal_form(m);
    auto d = s.diagonal();
    CHECK(d[0] == 2);
    CHECK(d[1] == 2);
    CHECK(d[2] == 156);
    check_contract(m);
}

TEST_CASE("smith normal form: randomized contract, 10k cases") {
    std::mt19937 rng(987654);
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_int_distribution<int> val(-9, 9);
    for (int it = 0; it < 10000; ++it) {
        IntMat m(dim(rng), dim(rng));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = val(rng);
        check_contract(m);
    }
}

TEST_CASE("rank and gf2 rank") {
    IntMat m(3, 3);
    long vals[3][3] = {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = vals[i][j];
    CHECK(rank(m) == 2);
    IntMat e(2, 2);
    e.at(0, 0) = 2;
    e.at(1, 1) = 1;
    CHECK(rank(e) == 2);
    CHECK(rank_gf2(e) == 1);
}

TEST_CASE("det via Bareiss") {
    IntMat m(3, 3);
    long vals[3][3] = {{2, 0, 1}, {1, 1, 0}, {0, 3, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = vals[i][j];
    CHECK(m.det() == 5);
    CHECK(IntMat::identity(6).det() == 1);
}

TEST_CASE("integer solve") {
    IntMat a(2, 2);
    a.at(0, 0) = 2; a.at(0, 1) = 1;
    a.at(1, 0) = 1; a.at(1, 1) = 1;
    auto x = solve_integer(a, {Int(5), Int(3)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 1);
    // no integral solution
    IntMat b(1, 1);
    b.at(0, 0) = 2;
    CHECK(!solve_integer(b, {Int(3)}).has_value());
}
