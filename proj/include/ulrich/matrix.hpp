#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulrich/poly.hpp"

namespace ulrich {

// Dense matrix of polynomials over one ring.
class PolyMatrix {
  public:
    PolyMatrix(Ring ring, std::size_t rows, std::size_t cols);
    static PolyMatrix identity(const Ring& ring, std::size_t m);
    static PolyMatrix scalar(const Ring& ring, std::size_t m, const MultiPoly& f);
    static PolyMatrix from_rows(const Ring& ring, const std::vector<std::vector<MultiPoly>>& rows);
    static PolyMatrix parse(const Ring& ring, const std::vector<std::vector<std::string>>& rows);

    const Ring& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    MultiPoly& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const MultiPoly& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    // Expected weighted degree per entry (-1 = unconstrained). Throws
    // InputError if a nonzero entry disagrees.
    void set_degree_profile(std::vector<int> profile);
    const std::optional<std::vector<int>>& degree_profile() const { return profile_; }

    PolyMatrix operator-() const;
    friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
    friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
    friend PolyMatrix operator*(const FieldElement& c, const PolyMatrix& a);
    friend PolyMatrix operator*(const MultiPoly& f, const PolyMatrix& a);
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);
    PolyMatrix pow(unsigned e) const;
    PolyMatrix transpose() const;
    PolyMatrix to_ring(const Ring& target) const;

    // First entry (row-major) where this differs from f * Id.
    std::optional<std::pair<std::size_t, std::size_t>> first_mismatch_with_scalar(const MultiPoly& f) const;
    std::string str() const;

  private:
    Ring ring_;
    std::size_t rows_, cols_;
    std::vector<MultiPoly> e_;
    std::optional<std::vector<int>> profile_;
};

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);
// Assemble from a grid of blocks with consistent row/column sizes.
PolyMatrix block_matrix(const std::vector<std::vector<PolyMatrix>>& blocks);

}  // namespace ulrich
