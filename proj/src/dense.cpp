#include "buchi/dense.hpp"

#include "buchi/errors.hpp"
#include "buchi/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace buchi {

namespace {
std::atomic<Backend> g_backend{Backend::omp};
}

Backend default_backend() noexcept { return g_backend.load(std::memory_order_relaxed); }
void set_default_backend(Backend backend) noexcept { g_backend.store(backend, std::memory_order_relaxed); }

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double sum = 0.0;
        for (double x : row(i)) sum += std::abs(x);
        best = std::max(best, sum);
    }
    return best;
}

LuDecomposition lu_decompose(Matrix a, Backend backend) {
    if (a.rows() != a.cols()) throw Error("lu_decompose: matrix is not square");
    const double floor = 1e-13 * a.norm_inf();
    LuDecomposition out;
    const bool ok = backend == Backend::omp ? kernels::omp::lu_factor(a, out.perm, floor)
                                            : kernels::serial::lu_factor(a, out.perm, floor);
    if (!ok) throw SingularSystem("matrix is numerically singular");
    out.lu = std::move(a);
    return out;
}

Vector lu_solve(const LuDecomposition& lu, Vector b) {
    const std::size_t n = lu.lu.rows();
    Matrix rhs(n, 1);
    for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = b[lu.perm[i]];
    kernels::detail::solve_column(lu.lu, rhs, 0);
    for (std::size_t i = 0; i < n; ++i) b[i] = rhs(i, 0);
    return b;
}

Matrix lu_solve(const LuDecomposition& lu, Matrix b, Backend backend) {
    const std::size_t n = lu.lu.rows();
    Matrix rhs(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < b.cols(); ++c) rhs(i, c) = b(lu.perm[i], c);
    backend == Backend::omp ? kernels::omp::lu_solve_columns(lu.lu, rhs)
                            : kernels::serial::lu_solve_columns(lu.lu, rhs);
    return rhs;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector multiply(const Matrix& a, std::span<const double> x, Backend backend) {
    Vector y(a.rows());
    kernels::matvec(backend, a, x, y);
    return y;
}

Matrix submatrix(const Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
    return out;
}

Vector block_row_sums(const Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    Vector out(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j : cols) out[i] += a(rows[i], j);
    return out;
}

double norm_inf(std::span<const double> x) noexcept {
    double best = 0.0;
    for (double v : x) best = std::max(best, std::abs(v));
    return best;
}

} // namespace buchi
