#pragma once

// Data-parallel inner loops. Each kernel exists twice with the same
// signature: a serial reference in kernels::serial and an OpenMP version in
// kernels::omp. Both perform the same floating-point operations in the same
// per-element order, so their outputs are bit-identical.

#include "buchi/dense.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace buchi::kernels {

namespace detail {

/// Forward and back substitution for column c of rhs.
void solve_column(const Matrix& lu, Matrix& rhs, std::size_t c);

} // namespace detail

namespace serial {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);

/// out = reward + discount .* (p * v)
void bellman_apply(const Matrix& p, std::span<const double> discount, std::span<const double> reward,
                   std::span<const double> v, std::span<double> out);

/// In-place partial-pivot elimination. perm[i] is the original row now at i.
/// Returns false on a pivot with magnitude <= pivot_floor.
bool lu_factor(Matrix& a, std::vector<std::size_t>& perm, double pivot_floor);

/// Solves each column of rhs against a factored matrix (rows already permuted).
void lu_solve_columns(const Matrix& lu, Matrix& rhs);

void for_each_block(std::size_t blocks, const std::function<void(std::size_t)>& body);

} // namespace serial

namespace omp {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
void bellman_apply(const Matrix& p, std::span<const double> discount, std::span<const double> reward,
                   std::span<const double> v, std::span<double> out);
bool lu_factor(Matrix& a, std::vector<std::size_t>& perm, double pivot_floor);
void lu_solve_columns(const Matrix& lu, Matrix& rhs);
void for_each_block(std::size_t blocks, const std::function<void(std::size_t)>& body);

} // namespace omp

void matvec(Backend backend, const Matrix& a, std::span<const double> x, std::span<double> y);
void bellman_apply(Backend backend, const Matrix& p, std::span<const double> discount,
                   std::span<const double> reward, std::span<const double> v, std::span<double> out);
void for_each_block(Backend backend, std::size_t blocks, const std::function<void(std::size_t)>& body);

} // namespace buchi::kernels
