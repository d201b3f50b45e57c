#include "trisect/matrix.hpp"

#include <cassert>
#include <cstdlib>

namespace trisect {

IntMat IntMat::identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::operator*(const IntMat& o) const {
    assert(cols_ == o.rows_);
    IntMat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& aik = at(i, k);
            if (sgn(aik) == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

IntMat IntMat::transposed() const {
    IntMat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

void IntMat::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

void IntMat::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
}

void IntMat::add_row(std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t c = 0; c < cols_; ++c) at(dst, c) += k * at(src, c);
}

void IntMat::add_col(std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t r = 0; r < rows_; ++r) at(r, dst) += k * at(r, src);
}

void IntMat::scale_row(std::size_t i, const Int& k) {
    for (std::size_t c = 0; c < cols_; ++c) at(i, c) *= k;
}

void IntMat::scale_col(std::size_t j, const Int& k) {
    for (std::size_t r = 0; r < rows_; ++r) at(r, j) *= k;
}

Int IntMat::det() const {
    assert(rows_ == cols_);
    std::size_t n = rows_;
    if (n == 0) return Int(1);
    // Bareiss fraction-free elimination.
    IntMat m = *this;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(m.at(k, k)) == 0) {
            std::size_t p = k + 1;
            while (p < n && sgn(m.at(p, k)) == 0) ++p;
            if (p == n) return Int(0);
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                Int q;
                mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                m.at(i, j) = q;
            }
        prev = m.at(k, k);
    }
    Int d = m.at(n - 1, n - 1);
    return sign > 0 ? d : Int(-d);
}

std::vector<Int> SmithResult::diagonal() const {
    std::vector<Int> out;
    std::size_t n = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < n; ++i) out.push_back(d.at(i, i));
    return out;
}

SmithResult smith_normal_form(const IntMat& m) {
    SmithResult res;
    res.d = m;
    res.u = IntMat::identity(m.rows());
    res.v = IntMat::identity(m.cols());
    IntMat& d = res.d;
    IntMat& u = res.u;
    IntMat& v = res.v;
    const std::size_t R = m.rows(), C = m.cols();
    std::size_t t = 0;
    while (t < R && t < C) {
        // Find a pivot of minimal absolute value in the remaining block.
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j) {
                const Int& x = d.at(i, j);
                if (sgn(x) == 0) continue;
                Int ax = abs(x);
                if (!found || ax < best) {
                    found = true;
                    best = ax;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (sgn(d.at(i, t)) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
                d.add_row(i, t, -q);
                u.add_row(i, t, -q);
                if (sgn(d.at(i, t)) != 0) {
                    // remainder is smaller than the pivot; promote it
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (sgn(d.at(t, j)) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
                d.add_col(j, t, -q);
                v.add_col(j, t, -q);
                if (sgn(d.at(t, j)) != 0) {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
        }
        // Pivot must divide every remaining entry; if not, fold the offending
        // row into row t and redo the elimination at this position.
        bool divides_all = true;
        for (std::size_t i = t + 1; i < R && divides_all; ++i)
            for (std::size_t j = t + 1; j < C; ++j) {
                if (!mpz_divisible_p(d.at(i, j).get_mpz_t(), d.at(t, t).get_mpz_t())) {
                    d.add_row(t, i, Int(1));
                    u.add_row(t, i, Int(1));
                    divides_all = false;
                    break;
                }
            }
        if (!divides_all) continue;
        if (sgn(d.at(t, t)) < 0) {
            d.scale_row(t, Int(-1));
            u.scale_row(t, Int(-1));
        }
        ++t;
    }
    return res;
}

std::size_t rank(const IntMat& m) {
    // Fraction-free row echelon.
    IntMat a = m;
    std::size_t R = a.rows(), C = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t p = r;
        while (p < R && sgn(a.at(p, c)) == 0) ++p;
        if (p == R) continue;
        a.swap_rows(r, p);
        for (std::size_t i = r + 1; i < R; ++i) {
            if (sgn(a.at(i, c)) == 0) continue;
            Int g;
            mpz_gcd(g.get_mpz_t(), a.at(i, c).get_mpz_t(), a.at(r, c).get_mpz_t());
            Int fi = a.at(r, c) / g, fr = a.at(i, c) / g;
            for (std::size_t j = c; j < C; ++j) a.at(i, j) = a.at(i, j) * fi - a.at(r, j) * fr;
        }
        ++r;
    }
    return r;
}

std::size_t rank_gf2(const IntMat& m) {
    std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<bool>> a(R, std::vector<bool>(C));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) a[i][j] = mpz_odd_p(m.at(i, j).get_mpz_t());
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t p = r;
        while (p < R && !a[p][c]) ++p;
        if (p == R) continue;
        std::swap(a[r], a[p]);
        for (std::size_t i = 0; i < R; ++i)
            if (i != r && a[i][c])
                for (std::size_t j = c; j < C; ++j) a[i][j] = a[i][j] ^ a[r][j];
        ++r;
    }
    return r;
}

std::optional<std::vector<Int>> solve_integer(const IntMat& a, const std::vector<Int>& b) {
    assert(a.rows() == a.cols() && a.rows() == b.size());
    std::size_t n = a.rows();
    // Cramer-free: use SNF. a = u^-1 d v^-1, so x = v * d^-1 * u * b.
    SmithResult s = smith_normal_form(a);
    std::vector<Int> ub(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ub[i] += s.u.at(i, j) * b[j];
    std::vector<Int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(s.d.at(i, i)) == 0) {
            if (sgn(ub[i]) != 0) return std::nullopt;
            y[i] = 0;
            continue;
        }
        if (!mpz_divisible_p(ub[i].get_mpz_t(), s.d.at(i, i).get_mpz_t())) return std::nullopt;
        y[i] = ub[i] / s.d.at(i, i);
    }
    std::vector<Int> x(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) x[i] += s.v.at(i, j) * y[j];
    return x;
}

} // namespace trisect
