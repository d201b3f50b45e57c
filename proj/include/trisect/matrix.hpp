#pragma once
#include "trisect/numeric.hpp"

#include <cstddef>
#include <vector>

namespace trisect {

/// Dense integer matrix (arbitrary precision entries).
class IntMat {
  public:
    IntMat() = default;
    IntMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, Int(0)) {}
    static IntMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    IntMat operator*(const IntMat& o) const;
    IntMat transposed() const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    void add_row(std::size_t dst, std::size_t src, const Int& k); // row dst += k*row src
    void add_col(std::size_t dst, std::size_t src, const Int& k);
    void scale_row(std::size_t i, const Int& k);
    void scale_col(std::size_t j, const Int& k);

    Int det() const; // square only, fraction-free Gaussian elimination

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

struct SmithResult {
    IntMat d; ///< diagonal, d1 | d2 | ... all >= 0
    IntMat u; ///< unimodular, u*m*v == d
    IntMat v;
    std::vector<Int> diagonal() const;
};

/// Smith normal form over Z. Postconditions (asserted in test builds):
/// u, v unimodular; u*m*v == d; divisibility chain holds.
SmithResult smith_normal_form(const IntMat& m);

std::size_t rank(const IntMat& m);        // rank over Q
std::size_t rank_gf2(const IntMat& m);    // rank of m mod 2

/// Solve a*x = b for integer x where a is square and invertible over Q.
/// Returns nullopt if the system has no integral solution or a is singular.
std::optional<std::vector<Int>> solve_integer(const IntMat& a, const std::vector<Int>& b);

} // namespace trisect
