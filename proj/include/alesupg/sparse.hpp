#pragma once

#include <memory>
#include <span>
#include <vector>

#include "alesupg/common.hpp"

namespace alesupg {

/// Compressed-row sparsity structure. Column indices are strictly increasing
/// within each row.
struct SparsityPattern {
    int rows{0};
    int cols{0};
    std::vector<int> row_ptr;
    std::vector<int> col_idx;

    std::size_t nnz() const { return col_idx.size(); }
    /// Position of (i, j) in col_idx, or -1 when the entry is structurally zero.
    int find(int i, int j) const;

    /// Builds the pattern from per-row column lists (duplicates allowed).
    static SparsityPattern from_rows(int rows, int cols, std::vector<std::vector<int>> columns);
};

struct Triplet {
    int row;
    int col;
    double value;
};

class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern);

    /// Sums duplicate entries; the pattern contains exactly the listed positions.
    static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> entries);
    static SparseMatrix identity(int n);

    int rows() const { return pattern_ ? pattern_->rows : 0; }
    int cols() const { return pattern_ ? pattern_->cols : 0; }
    const SparsityPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const SparsityPattern>& pattern_ptr() const { return pattern_; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Entry (i, j); zero outside the pattern.
    double at(int i, int j) const;
    void add(int i, int j, double v);

    /// this += alpha * other; both matrices must share the same pattern object.
    SparseMatrix& axpy(double alpha, const SparseMatrix& other);
    SparseMatrix& scale(double alpha);

    /// Replaces row i by the identity row.
    void set_identity_row(int i);

    std::vector<double> to_dense() const;

private:
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<double> values_;
};

/// y = A x. Throws NumericalError on a dimension mismatch.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// x^T A y
double bilinear(const SparseMatrix& a, std::span<const double> x, std::span<const double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace alesupg
