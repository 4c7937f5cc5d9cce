#include "buchi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>

#include <omp.h>

namespace buchi::kernels::omp {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    const auto n = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto row = a.row(static_cast<std::size_t>(i));
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
        y[static_cast<std::size_t>(i)] = acc;
    }
}

void bellman_apply(const Matrix& p, std::span<const double> discount, std::span<const double> reward,
                   std::span<const double> v, std::span<double> out) {
    const auto n = static_cast<std::int64_t>(p.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
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
        const auto first = static_cast<std::int64_t>(k + 1);
        const auto last = static_cast<std::int64_t>(n);
        // Rows below the pivot are independent of each other.
#pragma omp parallel for schedule(static) if (last - first > 64)
        for (std::int64_t ii = first; ii < last; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const double l = a(i, k) / diag;
            a(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    return true;
}

void lu_solve_columns(const Matrix& lu, Matrix& rhs) {
    const auto cols = static_cast<std::int64_t>(rhs.cols());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < cols; ++c) detail::solve_column(lu, rhs, static_cast<std::size_t>(c));
}

void for_each_block(std::size_t blocks, const std::function<void(std::size_t)>& body) {
    const auto n = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < n; ++b) body(static_cast<std::size_t>(b));
}

} // namespace buchi::kernels::omp
