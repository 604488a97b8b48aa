#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "alesupg/sparse.hpp"

namespace alesupg {

enum class SolverMethod { DirectSmall, Gmres };

SolverMethod parse_solver_method(std::string_view text);
std::string_view to_string(SolverMethod method);

inline constexpr int kDirectSmallLimit = 2000;

struct SolverOptions {
    SolverMethod method{SolverMethod::Gmres};
    double tol{1e-10};
    int max_iter{2000};
    int restart{50};
};

struct SolveReport {
    int iterations{0};
    double relative_residual{0.0};
    bool jacobi_fallback{false};
    /// Relative residual at the start and after every inner iteration.
    std::vector<double> residual_history;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

/// Incomplete LU factorisation without fill on the matrix pattern. Falls back
/// to diagonal (Jacobi) scaling when a zero pivot shows up.
class Ilu0 {
public:
    explicit Ilu0(const SparseMatrix& a);
    void apply(std::span<const double> rhs, std::span<double> out) const;
    bool jacobi_fallback() const { return jacobi_; }

private:
    const SparsityPattern* pattern_;
    std::vector<double> lu_;
    std::vector<int> diag_pos_;
    std::vector<double> inv_diag_;
    bool jacobi_{false};
};

/// Solves A x = b. `x0` is the initial guess for GMRES (zero when empty).
/// Throws NumericalError when GMRES misses tol * ||b|| within max_iter.
SolveResult solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options,
                  std::span<const double> x0 = {});

/// Dense LU with partial pivoting on a row-major n x n matrix.
std::vector<double> dense_lu_solve(std::vector<double> a, std::vector<double> b);

}  // namespace alesupg
