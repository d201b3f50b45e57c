#include "trisect/homology.hpp"

#include <cassert>

namespace trisect {

HomologyClass homology_class(const SurfaceBasis& basis, const PLPath& c) {
    HomologyClass h;
    h.basis = &basis;
    h.coeff = basis.class_vector(c);
    return h;
}

Int pairing(const HomologyClass& x, const HomologyClass& y) {
    if (x.basis != y.basis) throw SurfaceMismatch("pairing across different surfaces");
    const IntMat& f = x.basis->form();
    Int out(0);
    for (std::size_t i = 0; i < x.coeff.size(); ++i) {
        if (sgn(x.coeff[i]) == 0) continue;
        for (std::size_t j = 0; j < y.coeff.size(); ++j)
            out += x.coeff[i] * f.at(i, j) * y.coeff[j];
    }
    return out;
}

IntMat intersection_form(const SurfaceBasis& basis) { return basis.form(); }

HomologyClass transvection(const HomologyClass& x, const HomologyClass& t, int sign) {
    if (x.basis != t.basis) throw SurfaceMismatch("transvection across different surfaces");
    Int p = pairing(x, t);
    HomologyClass out = x;
    for (std::size_t i = 0; i < out.coeff.size(); ++i) out.coeff[i] += Int(sign) * p * t.coeff[i];
    return out;
}

IntMat transvection_matrix(const SurfaceBasis& basis, const HomologyClass& t, int sign) {
    std::size_t n = t.coeff.size();
    IntMat m = IntMat::identity(n);
    // column j = image of basis vector e_j: e_j + sign*<e_j,t>*t
    for (std::size_t j = 0; j < n; ++j) {
        Int p(0);
        for (std::size_t k = 0; k < n; ++k) p += basis.form().at(j, k) * t.coeff[k];
        for (std::size_t i = 0; i < n; ++i) m.at(i, j) += Int(sign) * p * t.coeff[i];
    }
    return m;
}

IntMat intersection_matrix(const TubedSurface& s, const CurveSystem& a, const CurveSystem& b) {
    IntMat m(a.curves.size(), b.curves.size());
    for (std::size_t i = 0; i < a.curves.size(); ++i)
        for (std::size_t j = 0; j < b.curves.size(); ++j)
            m.at(i, j) = algebraic_intersection(s, a.curves[i], b.curves[j]);
    return m;
}

long heegaard_k(const SurfaceBasis& basis, const CurveSystem& alpha, const CurveSystem& beta) {
    const TubedSurface& s = basis.surface();
    long g = s.genus();
    if (static_cast<long>(alpha.curves.size()) != g ||
        static_cast<long>(beta.curves.size()) != g)
        throw std::runtime_error("heegaard_k: families must have g curves");
    IntMat m = intersection_matrix(s, alpha, beta);
    SmithResult snf = smith_normal_form(m);
    long k = 0;
    for (const Int& d : snf.diagonal()) {
        if (d == 0) ++k;
        else if (d != 1)
            throw NotStandardProfile("SNF entry " + d.get_str() +
                                     " not in {0,1}: not a #^k S1xS2 diagram");
    }
    return k;
}

std::size_t family_rank(const SurfaceBasis& basis, const CurveSystem& c) {
    if (c.curves.empty()) return 0;
    std::size_t n = basis.basis_loops().size();
    IntMat m(c.curves.size(), n);
    for (std::size_t i = 0; i < c.curves.size(); ++i) {
        auto v = basis.class_vector(c.curves[i]);
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = v[j];
    }
    return rank(m);
}

std::pair<long, long> surgery_profile(const SurfaceBasis& basis, const CurveSystem& c) {
    const TubedSurface& s = basis.surface();
    for (std::size_t i = 0; i < c.curves.size(); ++i)
        for (std::size_t j = i + 1; j < c.curves.size(); ++j)
            if (geometric_crossings(s, c.curves[i], c.curves[j]) != 0)
                throw NotDisjoint("surgery system curves intersect");
    if (family_rank(basis, c) != c.curves.size())
        throw DependentSystem("surgery system homologically dependent");
    long n = static_cast<long>(c.curves.size());
    return {s.genus() - n, s.boundary_count()};
}

} // namespace trisect
