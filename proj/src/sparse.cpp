#include "alesupg/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace alesupg {

int SparsityPattern::find(int i, int j) const {
    const auto begin = col_idx.begin() + row_ptr[i];
    const auto end = col_idx.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return -1;
    return static_cast<int>(it - col_idx.begin());
}

SparsityPattern SparsityPattern::from_rows(int rows, int cols, std::vector<std::vector<int>> columns) {
    SparsityPattern p;
    p.rows = rows;
    p.cols = cols;
    p.row_ptr.assign(rows + 1, 0);
    for (int i = 0; i < rows; ++i) {
        auto& row = columns[i];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        if (!row.empty() && (row.front() < 0 || row.back() >= cols)) {
            throw NumericalError("sparsity pattern column out of range");
        }
        p.row_ptr[i + 1] = p.row_ptr[i] + static_cast<int>(row.size());
    }
    p.col_idx.reserve(p.row_ptr[rows]);
    for (const auto& row : columns) p.col_idx.insert(p.col_idx.end(), row.begin(), row.end());
    return p;
}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> entries) {
    std::vector<std::vector<int>> columns(rows);
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= rows) throw NumericalError("triplet row out of range");
        columns[t.row].push_back(t.col);
    }
    SparseMatrix m(std::make_shared<const SparsityPattern>(SparsityPattern::from_rows(rows, cols, std::move(columns))));
    for (const auto& t : entries) m.add(t.row, t.col, t.value);
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> diag;
    diag.reserve(n);
    for (int i = 0; i < n; ++i) diag.push_back({i, i, 1.0});
    return from_triplets(n, n, diag);
}

double SparseMatrix::at(int i, int j) const {
    const int pos = pattern_->find(i, j);
    return pos < 0 ? 0.0 : values_[pos];
}

void SparseMatrix::add(int i, int j, double v) {
    const int pos = pattern_->find(i, j);
    if (pos < 0) throw NumericalError("entry outside sparsity pattern");
    values_[pos] += v;
}

SparseMatrix& SparseMatrix::axpy(double alpha, const SparseMatrix& other) {
    if (pattern_ != other.pattern_) throw NumericalError("axpy requires a shared sparsity pattern");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
    return *this;
}

SparseMatrix& SparseMatrix::scale(double alpha) {
    for (double& v : values_) v *= alpha;
    return *this;
}

void SparseMatrix::set_identity_row(int i) {
    for (int k = pattern_->row_ptr[i]; k < pattern_->row_ptr[i + 1]; ++k) {
        values_[k] = pattern_->col_idx[k] == i ? 1.0 : 0.0;
    }
}

std::vector<double> SparseMatrix::to_dense() const {
    const int n = rows(), m = cols();
    std::vector<double> dense(static_cast<std::size_t>(n) * m, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = pattern_->row_ptr[i]; k < pattern_->row_ptr[i + 1]; ++k) {
            dense[static_cast<std::size_t>(i) * m + pattern_->col_idx[k]] += values_[k];
        }
    }
    return dense;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (static_cast<int>(x.size()) != a.cols() || static_cast<int>(y.size()) != a.rows()) {
        throw NumericalError("spmv dimension mismatch");
    }
    const auto& p = a.pattern();
    const auto& v = a.values();
    for (int i = 0; i < p.rows; ++i) {
        double s = 0.0;
        for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) s += v[k] * x[p.col_idx[k]];
        y[i] = s;
    }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
    std::vector<double> y(a.rows());
    spmv(a, x, y);
    return y;
}

double bilinear(const SparseMatrix& a, std::span<const double> x, std::span<const double> y) {
    const auto ay = spmv(a, y);
    return dot(x, ay);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace alesupg
