#include "ulrich/matrix.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

#include "ulrich/errors.hpp"
#include "ulrich/polyio.hpp"

namespace ulrich {

PolyMatrix::PolyMatrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), e_(rows * cols, MultiPoly(ring_)) {
    if (rows == 0 || cols == 0) throw InputError("matrix dimensions must be positive");
}

PolyMatrix PolyMatrix::identity(const Ring& ring, std::size_t m) {
    return scalar(ring, m, MultiPoly::constant(ring, Rational(1)));
}

PolyMatrix PolyMatrix::scalar(const Ring& ring, std::size_t m, const MultiPoly& f) {
    PolyMatrix r(ring, m, m);
    for (std::size_t i = 0; i < m; ++i) r(i, i) = f;
    return r;
}

PolyMatrix PolyMatrix::from_rows(const Ring& ring, const std::vector<std::vector<MultiPoly>>& rows) {
    if (rows.empty() || rows[0].empty()) throw InputError("empty matrix");
    PolyMatrix r(ring, rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != r.cols_) throw InputError("ragged matrix rows");
        for (std::size_t j = 0; j < r.cols_; ++j) {
            if (rows[i][j].ring() != ring) throw InputError("matrix entries live in different rings");
            r(i, j) = rows[i][j];
        }
    }
    return r;
}

PolyMatrix PolyMatrix::parse(const Ring& ring, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<MultiPoly>> polys;
    for (const auto& row : rows) {
        polys.emplace_back();
        for (const auto& s : row) polys.back().push_back(parse_poly(s, ring));
    }
    return from_rows(ring, polys);
}

void PolyMatrix::set_degree_profile(std::vector<int> profile) {
    if (profile.size() != e_.size()) throw InputError("degree profile has wrong size");
    for (std::size_t k = 0; k < e_.size(); ++k) {
        if (profile[k] < 0 || e_[k].is_zero()) continue;
        if (!e_[k].is_homogeneous() || e_[k].weighted_degree() != profile[k])
            throw InputError("entry (" + std::to_string(k / cols_) + ", " + std::to_string(k % cols_) +
                             ") does not have degree " + std::to_string(profile[k]));
    }
    profile_ = std::move(profile);
}

PolyMatrix PolyMatrix::operator-() const {
    PolyMatrix r = *this;
    for (auto& x : r.e_) x = -x;
    return r;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix sum of mismatched shapes");
    PolyMatrix r = a;
    r.profile_.reset();
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] += b.e_[k];
    return r;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) { return a + (-b); }

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product of mismatched shapes");
    if (a.ring_ != b.ring_) throw InputError("matrix product across different rings");
    PolyMatrix r(a.ring_, a.rows_, b.cols_);
    auto work = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin; i < row_end; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const MultiPoly& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const MultiPoly& bkj = b(k, j);
                    if (bkj.is_zero()) continue;
                    r(i, j) += aik * bkj;
                }
            }
    };
    const std::size_t cost = a.rows_ * a.cols_ * b.cols_;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min<std::size_t>({hw, a.rows_, 8});
    if (cost < 4096 || nthreads < 2) {
        work(0, a.rows_);
        return r;
    }
    // Rows are disjoint, so workers never touch the same entry.
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (a.rows_ + nthreads - 1) / nthreads;
    for (std::size_t s = 0; s < a.rows_; s += chunk)
        jobs.push_back(std::async(std::launch::async, work, s, std::min(a.rows_, s + chunk)));
    for (auto& j : jobs) j.get();
    return r;
}

PolyMatrix operator*(const FieldElement& c, const PolyMatrix& a) {
    PolyMatrix r = a;
    for (auto& x : r.e_) x *= c;
    return r;
}

PolyMatrix operator*(const MultiPoly& f, const PolyMatrix& a) {
    PolyMatrix r = a;
    r.profile_.reset();
    for (auto& x : r.e_) x = f * x;
    return r;
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

PolyMatrix PolyMatrix::pow(unsigned e) const {
    if (!is_square()) throw InputError("power of a non-square matrix");
    PolyMatrix result = identity(ring_, rows_);
    for (unsigned k = 0; k < e; ++k) result = result * *this;
    return result;
}

PolyMatrix PolyMatrix::transpose() const {
    PolyMatrix r(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

PolyMatrix PolyMatrix::to_ring(const Ring& target) const {
    PolyMatrix r(target, rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].to_ring(target);
    r.profile_ = profile_;
    return r;
}

std::optional<std::pair<std::size_t, std::size_t>> PolyMatrix::first_mismatch_with_scalar(const MultiPoly& f) const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const MultiPoly& x = (*this)(i, j);
            if (i == j && i < cols_ ? x != f : !x.is_zero()) return std::make_pair(i, j);
        }
    if (rows_ != cols_) return std::make_pair(std::min(rows_, cols_), std::min(rows_, cols_));
    return std::nullopt;
}

std::string PolyMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
        os << "]";
    }
    os << "]";
    return os.str();
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.ring() != b.ring()) throw InputError("Kronecker product across different rings");
    PolyMatrix r(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const MultiPoly& x = a(i, j);
            if (x.is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    if (b(k, l).is_zero()) continue;
                    r(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
                }
        }
    return r;
}

PolyMatrix block_matrix(const std::vector<std::vector<PolyMatrix>>& blocks) {
    if (blocks.empty() || blocks[0].empty()) throw InputError("empty block matrix");
    std::size_t rows = 0, cols = 0;
    for (const auto& row : blocks) rows += row[0].rows();
    for (const auto& b : blocks[0]) cols += b.cols();
    PolyMatrix r(blocks[0][0].ring(), rows, cols);
    std::size_t r0 = 0;
    for (const auto& row : blocks) {
        if (row.size() != blocks[0].size()) throw InputError("ragged block matrix");
        std::size_t c0 = 0;
        for (std::size_t bj = 0; bj < row.size(); ++bj) {
            const PolyMatrix& b = row[bj];
            if (b.rows() != row[0].rows() || b.cols() != blocks[0][bj].cols())
                throw InputError("inconsistent block sizes");
            if (b.ring() != r.ring()) throw InputError("blocks live in different rings");
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j) r(r0 + i, c0 + j) = b(i, j);
            c0 += b.cols();
        }
        r0 += row[0].rows();
    }
    return r;
}

}  // namespace ulrich
