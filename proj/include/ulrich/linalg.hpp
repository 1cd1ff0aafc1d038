#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ulrich/field.hpp"

namespace ulrich {

using SparseRow = std::map<std::size_t, FieldElement>;

// Rows inserted one at a time are reduced against the stored pivots; the
// number of stored pivots is the rank of everything inserted so far.
class EchelonBasis {
  public:
    explicit EchelonBasis(const CyclotomicField& field) : field_(&field) {}
    // Returns true iff the row was independent of the previous ones.
    bool insert(SparseRow row);
    std::size_t rank() const { return pivots_.size(); }

  private:
    const CyclotomicField* field_;
    std::map<std::size_t, SparseRow> pivots_;
};

std::size_t sparse_rank(const std::vector<SparseRow>& rows, const CyclotomicField& field);

using DenseMatrix = std::vector<std::vector<FieldElement>>;

// One solution of A x = b with free variables set to zero, or nullopt when
// the system is inconsistent. `ncols` is needed when A has no rows.
std::optional<std::vector<FieldElement>> solve_linear(const DenseMatrix& A, const std::vector<FieldElement>& b,
                                                      std::size_t ncols, const CyclotomicField& field);

// Basis of the null space of A (A has `ncols` columns).
std::vector<std::vector<FieldElement>> null_space(const DenseMatrix& A, std::size_t ncols,
                                                  const CyclotomicField& field);

Rational determinant(std::vector<std::vector<Rational>> a);

}  // namespace ulrich
