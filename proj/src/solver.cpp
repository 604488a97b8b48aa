#include "alesupg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace alesupg {

SolverMethod parse_solver_method(std::string_view text) {
    if (text == "gmres") return SolverMethod::Gmres;
    if (text == "direct") return SolverMethod::DirectSmall;
    throw ConfigError("unknown solver method '" + std::string(text) + "' (expected gmres|direct)");
}

std::string_view to_string(SolverMethod method) {
    return method == SolverMethod::Gmres ? "gmres" : "direct";
}

Ilu0::Ilu0(const SparseMatrix& a) : pattern_(&a.pattern()), lu_(a.values()) {
    const auto& p = *pattern_;
    const int n = p.rows;
    diag_pos_.assign(n, -1);
    for (int i = 0; i < n; ++i) diag_pos_[i] = p.find(i, i);

    auto use_jacobi = [&] {
        jacobi_ = true;
        inv_diag_.assign(n, 1.0);
        for (int i = 0; i < n; ++i) {
            const double d = diag_pos_[i] >= 0 ? a.values()[diag_pos_[i]] : 0.0;
            if (d != 0.0) inv_diag_[i] = 1.0 / d;
        }
    };
    if (std::any_of(diag_pos_.begin(), diag_pos_.end(), [](int k) { return k < 0; })) {
        use_jacobi();
        return;
    }

    // IKJ variant restricted to the pattern. `pos` maps a column of the
    // current row to its storage position.
    std::vector<int> pos(p.cols, -1);
    for (int i = 0; i < n; ++i) {
        for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) pos[p.col_idx[k]] = k;
        for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) {
            const int j = p.col_idx[k];
            if (j >= i) break;
            const double pivot = lu_[diag_pos_[j]];
            if (pivot == 0.0 || !std::isfinite(pivot)) {
                use_jacobi();
                return;
            }
            const double factor = lu_[k] / pivot;
            lu_[k] = factor;
            for (int m = diag_pos_[j] + 1; m < p.row_ptr[j + 1]; ++m) {
                const int target = pos[p.col_idx[m]];
                if (target >= 0) lu_[target] -= factor * lu_[m];
            }
        }
        for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) pos[p.col_idx[k]] = -1;
        const double d = lu_[diag_pos_[i]];
        if (d == 0.0 || !std::isfinite(d)) {
            use_jacobi();
            return;
        }
    }
}

void Ilu0::apply(std::span<const double> rhs, std::span<double> out) const {
    const auto& p = *pattern_;
    const int n = p.rows;
    if (jacobi_) {
        for (int i = 0; i < n; ++i) out[i] = inv_diag_[i] * rhs[i];
        return;
    }
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int k = p.row_ptr[i]; k < diag_pos_[i]; ++k) s -= lu_[k] * out[p.col_idx[k]];
        out[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = out[i];
        for (int k = diag_pos_[i] + 1; k < p.row_ptr[i + 1]; ++k) s -= lu_[k] * out[p.col_idx[k]];
        out[i] = s / lu_[diag_pos_[i]];
    }
}

std::vector<double> dense_lu_solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw NumericalError("dense solve: matrix/rhs size mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i * n + k]) > best) {
                best = std::abs(a[i * n + k]);
                piv = i;
            }
        }
        if (best == 0.0) throw NumericalError("dense solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        const double akk = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i * n + k] / akk;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a[ii * n + j] * x[j];
        x[ii] = s / a[ii * n + ii];
    }
    return x;
}

namespace {

SolveResult solve_direct(const SparseMatrix& a, std::span<const double> b) {
    if (a.rows() > kDirectSmallLimit) {
        throw ConfigError("direct solver limited to " + std::to_string(kDirectSmallLimit) + " unknowns, got " +
                          std::to_string(a.rows()));
    }
    SolveResult result;
    result.x = dense_lu_solve(a.to_dense(), std::vector<double>(b.begin(), b.end()));
    const auto r = spmv(a, result.x);
    double rn = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) rn += (r[i] - b[i]) * (r[i] - b[i]);
    const double bn = norm2(b);
    result.report.relative_residual = bn > 0.0 ? std::sqrt(rn) / bn : std::sqrt(rn);
    result.report.residual_history = {result.report.relative_residual};
    return result;
}

// Right-preconditioned restarted GMRES with modified Gram-Schmidt; the
// Arnoldi residual is the true residual of the unpreconditioned system.
SolveResult solve_gmres(const SparseMatrix& a, std::span<const double> b, const SolverOptions& opt,
                        std::span<const double> x0) {
    const int n = a.rows();
    SolveResult result;
    auto& rep = result.report;
    result.x.assign(n, 0.0);
    if (!x0.empty()) std::copy(x0.begin(), x0.end(), result.x.begin());

    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(result.x.begin(), result.x.end(), 0.0);
        rep.residual_history = {0.0};
        return result;
    }
    const double target = opt.tol * bnorm;

    auto residual = [&](std::vector<double>& r) {
        spmv(a, result.x, r);
        for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
        return norm2(r);
    };

    std::vector<double> r0(n);
    double beta = residual(r0);
    rep.residual_history.push_back(beta / bnorm);
    if (beta <= target) {
        rep.relative_residual = beta / bnorm;
        return result;
    }

    const Ilu0 precond(a);
    rep.jacobi_fallback = precond.jacobi_fallback();

    const int m = std::max(1, opt.restart);
    std::vector<std::vector<double>> v(m + 1);
    v[0] = std::move(r0);
    for (int i = 1; i <= m; ++i) v[i].resize(n);
    std::vector<std::vector<double>> z(m, std::vector<double>(n));
    std::vector<double> h(static_cast<std::size_t>(m + 1) * m);
    std::vector<double> cs(m), sn(m), g(m + 1), w(n);
    auto H = [&h, m](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * m + j]; };

    while (beta > target) {
        if (rep.iterations >= opt.max_iter) break;
        for (double& x : v[0]) x /= beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int k = 0;
        for (; k < m && rep.iterations < opt.max_iter; ++k) {
            precond.apply(v[k], z[k]);
            spmv(a, z[k], w);
            for (int i = 0; i <= k; ++i) {
                const double hik = dot(w, v[i]);
                H(i, k) = hik;
                for (int j = 0; j < n; ++j) w[j] -= hik * v[i][j];
            }
            const double hnext = norm2(w);
            H(k + 1, k) = hnext;
            if (hnext > 0.0) {
                for (int j = 0; j < n; ++j) v[k + 1][j] = w[j] / hnext;
            }
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
                H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
                H(i, k) = t;
            }
            const double denom = std::hypot(H(k, k), H(k + 1, k));
            cs[k] = denom > 0.0 ? H(k, k) / denom : 1.0;
            sn[k] = denom > 0.0 ? H(k + 1, k) / denom : 0.0;
            H(k, k) = denom;
            H(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            ++rep.iterations;
            rep.residual_history.push_back(std::abs(g[k + 1]) / bnorm);
            if (std::abs(g[k + 1]) <= target || hnext == 0.0) {
                ++k;
                break;
            }
        }
        // Back substitution for the Krylov coefficients, then x += Z y.
        std::vector<double> y(k);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
            y[i] = s / H(i, i);
        }
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < n; ++j) result.x[j] += y[i] * z[i][j];
        }
        const double previous = beta;
        beta = residual(v[0]);
        if (beta >= previous && beta > target) {
            // Stagnation: no progress over a full cycle.
            break;
        }
    }
    rep.relative_residual = beta / bnorm;
    if (beta > target) {
        std::ostringstream msg;
        msg << "GMRES did not converge in " << rep.iterations << " iterations (relative residual "
            << rep.relative_residual << ", tolerance " << opt.tol << ")";
        throw NumericalError(msg.str());
    }
    return result;
}

}  // namespace

SolveResult solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options,
                  std::span<const double> x0) {
    if (a.rows() == 0) throw NumericalError("cannot solve a zero-dimension system");
    if (a.rows() != a.cols()) throw NumericalError("solve requires a square matrix");
    if (static_cast<int>(b.size()) != a.rows()) throw NumericalError("rhs size does not match matrix");
    if (!x0.empty() && static_cast<int>(x0.size()) != a.rows()) {
        throw NumericalError("initial guess size does not match matrix");
    }
    if (options.method == SolverMethod::DirectSmall) return solve_direct(a, b);
    return solve_gmres(a, b, options, x0);
}

}  // namespace alesupg
