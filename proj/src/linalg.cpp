#include "ulrich/linalg.hpp"

namespace ulrich {

namespace {

void axpy(SparseRow& row, const FieldElement& factor, const SparseRow& pivot) {
    for (const auto& [col, v] : pivot) {
        auto it = row.find(col);
        if (it == row.end()) {
            row.emplace(col, -(factor * v));
        } else {
            it->second -= factor * v;
            if (it->second.is_zero()) row.erase(it);
        }
    }
}

}  // namespace

bool EchelonBasis::insert(SparseRow row) {
    for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
    while (!row.empty()) {
        const std::size_t lead = row.begin()->first;
        auto p = pivots_.find(lead);
        if (p == pivots_.end()) {
            FieldElement inv = row.begin()->second.inverse();
            for (auto& [c, v] : row) v *= inv;
            pivots_.emplace(lead, std::move(row));
            return true;
        }
        FieldElement f = row.begin()->second;
        axpy(row, f, p->second);
    }
    return false;
}

std::size_t sparse_rank(const std::vector<SparseRow>& rows, const CyclotomicField& field) {
    EchelonBasis basis(field);
    for (const auto& r : rows) basis.insert(r);
    return basis.rank();
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(DenseMatrix& m, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col].is_zero()) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        FieldElement inv = m[row][col].inverse();
        for (auto& v : m[row]) v *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            FieldElement f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c)
                if (!m[row][c].is_zero()) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::optional<std::vector<FieldElement>> solve_linear(const DenseMatrix& A, const std::vector<FieldElement>& b,
                                                      std::size_t ncols, const CyclotomicField& field) {
    DenseMatrix m = A;
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i].resize(ncols, FieldElement(field, 0));
        m[i].push_back(b[i]);
    }
    auto pivots = rref(m, ncols);
    for (std::size_t r = pivots.size(); r < m.size(); ++r)
        if (!m[r][ncols].is_zero()) return std::nullopt;
    std::vector<FieldElement> x(ncols, FieldElement(field, 0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][ncols];
    return x;
}

std::vector<std::vector<FieldElement>> null_space(const DenseMatrix& A, std::size_t ncols,
                                                  const CyclotomicField& field) {
    DenseMatrix m = A;
    for (auto& row : m) row.resize(ncols, FieldElement(field, 0));
    auto pivots = rref(m, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<FieldElement>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<FieldElement> v(ncols, FieldElement(field, 0));
        v[free] = FieldElement(field, 1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

Rational determinant(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && a[sel][col] == 0) ++sel;
        if (sel == n) return 0;
        if (sel != col) {
            std::swap(a[sel], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

}  // namespace ulrich
