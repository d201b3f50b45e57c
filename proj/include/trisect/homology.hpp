#pragma once
#include "trisect/surface.hpp"

#include <memory>

namespace trisect {

struct SurfaceMismatch : std::runtime_error {
    explicit SurfaceMismatch(const std::string& w) : std::runtime_error(w) {}
};

/// First homology class in the canonical basis of its surface:
/// per tube the through-core and foot-encircling generators, then one
/// boundary-encircling generator per hole beyond the first.
struct HomologyClass {
    const SurfaceBasis* basis = nullptr;
    std::vector<Int> coeff;

    bool is_zero() const {
        for (const auto& c : coeff)
            if (sgn(c) != 0) return false;
        return true;
    }
    bool operator==(const HomologyClass& o) const { return coeff == o.coeff; }
};

HomologyClass homology_class(const SurfaceBasis& basis, const PLPath& closed_curve);

/// Skew pairing in the canonical basis; boundary generators lie in the radical.
Int pairing(const HomologyClass& x, const HomologyClass& y);

/// The full pairing matrix on the canonical basis.
IntMat intersection_form(const SurfaceBasis& basis);

/// Homology action of a Dehn twist along t: x + sign * <x,t> * t.
HomologyClass transvection(const HomologyClass& x, const HomologyClass& t, int sign);

/// Matrix of the transvection on the canonical basis.
IntMat transvection_matrix(const SurfaceBasis& basis, const HomologyClass& t, int sign);

struct NotStandardProfile : std::runtime_error {
    explicit NotStandardProfile(const std::string& w) : std::runtime_error(w) {}
};

/// Necessary homological certificate for a genus-g Heegaard diagram of
/// #^k S^1 x S^2: SNF of the g x g intersection matrix must be
/// diag(1,...,1,0,...,0); returns the number of zero entries.
/// Throws NotStandardProfile otherwise.
long heegaard_k(const SurfaceBasis& basis, const CurveSystem& alpha, const CurveSystem& beta);

/// Pairwise algebraic intersection matrix of two curve families.
IntMat intersection_matrix(const TubedSurface& s, const CurveSystem& a, const CurveSystem& b);

/// Rank over Z of the classes of the family's curves.
std::size_t family_rank(const SurfaceBasis& basis, const CurveSystem& c);

struct DependentSystem : std::runtime_error {
    explicit DependentSystem(const std::string& w) : std::runtime_error(w) {}
};
struct NotDisjoint : std::runtime_error {
    explicit NotDisjoint(const std::string& w) : std::runtime_error(w) {}
};

/// Genus and boundary count of the surface obtained by surgery along the
/// curves of C: chi increases by 2 per curve, boundary unchanged.
/// Pre: curves pairwise disjoint, classes independent.
std::pair<long, long> surgery_profile(const SurfaceBasis& basis, const CurveSystem& c);

} // namespace trisect
