#include "buchi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace buchi::kernels::serial {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto row = a.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void bellman_apply(const Matrix& p, std::span<const double> discount, std::span<const double> reward,
                   std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < p.rows(); ++i) {
        const auto row = p.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * v[j];
        out[i] = reward[i] + discount[i] * acc;
    }
}

bool lu_factor(Matrix& a, std::vector<std::size_t>& perm, double pivot_floor) {
    const std::size_t n = a.rows();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
        if (std::abs(a(pivot, k)) <= pivot_floor) return false;
        if (pivot != k) {
            std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(pivot).begin());
            std::swap(perm[k], perm[pivot]);
        }
        const double diag = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a(i, k) / diag;
            a(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    return true;
}

void lu_solve_columns(const Matrix& lu, Matrix& rhs) {
    for (std::size_t c = 0; c < rhs.cols(); ++c) detail::solve_column(lu, rhs, c);
}

void for_each_block(std::size_t blocks, const std::function<void(std::size_t)>& body) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
}

} // namespace buchi::kernels::serial

namespace buchi::kernels {

void detail::solve_column(const Matrix& lu, Matrix& rhs, std::size_t c) {
    const std::size_t n = lu.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs(i, c);
        for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * rhs(j, c);
        rhs(i, c) = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = rhs(ii, c);
        for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * rhs(j, c);
        rhs(ii, c) = acc / lu(ii, ii);
    }
}

void matvec(Backend backend, const Matrix& a, std::span<const double> x, std::span<double> y) {
    backend == Backend::omp ? omp::matvec(a, x, y) : serial::matvec(a, x, y);
}

void bellman_apply(Backend backend, const Matrix& p, std::span<const double> discount,
                   std::span<const double> reward, std::span<const double> v, std::span<double> out) {
    backend == Backend::omp ? omp::bellman_apply(p, discount, reward, v, out)
                            : serial::bellman_apply(p, discount, reward, v, out);
}

void for_each_block(Backend backend, std::size_t blocks, const std::function<void(std::size_t)>& body) {
    backend == Backend::omp ? omp::for_each_block(blocks, body) : serial::for_each_block(blocks, body);
}

} // namespace buchi::kernels
