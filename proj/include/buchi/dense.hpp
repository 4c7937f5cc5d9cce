#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace buchi {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> values() const noexcept { return data_; }

    /// Maximum absolute row sum.
    double norm_inf() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Kernel implementation used by the dense routines. The OpenMP kernels
/// produce bit-identical results to the serial reference.
enum class Backend { serial, omp };

Backend default_backend() noexcept;
void set_default_backend(Backend backend) noexcept;

struct LuDecomposition {
    Matrix lu;
    std::vector<std::size_t> perm;
};

/// Partial-pivot LU. Throws SingularSystem when a pivot falls below
/// 1e-13 * ||a||_inf.
LuDecomposition lu_decompose(Matrix a, Backend backend = default_backend());

Vector lu_solve(const LuDecomposition& lu, Vector b);
Matrix lu_solve(const LuDecomposition& lu, Matrix b, Backend backend = default_backend());

inline Vector solve(Matrix a, Vector b, Backend backend = default_backend()) {
    return lu_solve(lu_decompose(std::move(a), backend), std::move(b));
}

Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, std::span<const double> x, Backend backend = default_backend());

/// a(rows, cols) for the given index lists.
Matrix submatrix(const Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols);

/// Row sums of a(rows, cols).
Vector block_row_sums(const Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols);

double norm_inf(std::span<const double> x) noexcept;

} // namespace buchi
