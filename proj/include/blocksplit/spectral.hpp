#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blocksplit/core.hpp"

namespace blocksplit {

/// Integer matrix whose rows and columns are labelled by block sizes.
struct TransitionMatrix {
    SplitParams params;
    std::vector<int> sizes;              // ascending labels, same on both axes
    std::vector<std::int64_t> entries;   // row-major, sizes.size() squared

    std::size_t dim() const noexcept { return sizes.size(); }
    std::int64_t& at(std::size_t i, std::size_t j) { return entries[i * dim() + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return entries[i * dim() + j]; }
    /// Index of a size label; throws ParameterError when absent.
    std::size_t index_of(int size) const;
    /// Entry addressed by size labels.
    std::int64_t by_size(int row_size, int col_size) const;
};

/// Row-major dense real matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// A(B, r) on sizes d..B. Requires odd B and 1 <= r < B/2.
TransitionMatrix build_matrix(const SplitParams& params);

/// k times the change in block counts when a batch lands in a size-k block,
/// read off even_split_outcome. Indexed by sizes d..B.
std::vector<std::int64_t> outcome_column(const SplitParams& params, int k);

/// d + <r> inside Z_d, ascending. Requires odd B.
std::vector<int> support_set(const SplitParams& params);

/// Principal submatrix on the given sizes.
TransitionMatrix restrict(const TransitionMatrix& a, const std::vector<int>& sizes);

/// max_j |sum_i size_i * A_ij - r * size_j|, computed exactly.
std::int64_t left_identity_defect(const TransitionMatrix& a);

/// True when every size is reachable from every other along nonzero
/// off-diagonal entries of A^T.
bool strongly_connected(const TransitionMatrix& a);

struct EigenSolution {
    std::vector<int> sizes;     // support set S
    std::vector<double> u;      // right eigenvector for eigenvalue r, sum 1
    std::vector<int> w;         // left eigenvector restricted to S (the sizes)
    double residual = 0.0;      // ||A_S u - r u||_inf
    double smallest_pivot = 0.0;  // smallest elimination pivot relative to the largest rate
    double predicted_fullness = 0.0;
    int block_size = 0;
    int batch_size = 0;
};

/// Null space of A_S - rI. The matrix is rescaled by diag(sizes) into a
/// Markov generator and solved by pivot-free state reduction (GTH), which
/// keeps every entry of u to high relative accuracy. Throws SpectralError if
/// A_S is reducible, the null space is not one-dimensional, u is not
/// positive, or the residual exceeds 1e-10 ||u||_inf.
EigenSolution principal_eigenvector(const TransitionMatrix& a_s);

/// <u, w_S> / (B <u, 1>).
double predicted_fullness(const EigenSolution& sol);

/// Convenience: build, restrict to the support set and solve.
EigenSolution solve_spectral(const SplitParams& params);

struct IntraClassReport {
    bool ratio_ok = true;
    bool product_ok = true;
    long ratio_checks = 0;
    long product_checks = 0;
    double worst_relative = 0.0;
};

/// Checks u_k (k + r) = u_{k-r} (k - r) for k >= d + r and the closed
/// product along each residue chain, both to relative 1e-9.
IntraClassReport intra_class_check(const EigenSolution& sol);

/// u w_S^T / <w_S, u>.
DenseMatrix spectral_projection(const EigenSolution& sol);

DenseMatrix to_dense(const TransitionMatrix& a);

struct PerronReport {
    double shift = 0.0;            // c = B
    double dominant = 0.0;         // power-iteration estimate of r + c
    double dominant_lower = 0.0;   // Collatz-Wielandt bounds
    double dominant_upper = 0.0;
    bool dominant_converged = false;
    double rho2 = 0.0;             // subdominant modulus after deflation
    bool rho2_converged = false;
    double gap = 0.0;              // (r + c) - rho2
    long iterations = 0;

    bool conclusive() const noexcept { return dominant_converged && rho2_converged; }
    bool certified() const noexcept { return conclusive() && gap > 0.0; }
};

/// Shifts A_S by c = B, confirms the dominant modulus r + c by power
/// iteration, deflates with the spectral projection and estimates the next
/// modulus with two-dimensional subspace iteration.
PerronReport perron_margin(const TransitionMatrix& a_s, const EigenSolution& sol);

/// CSV with size labels as header row and first column.
void write_matrix_csv(const TransitionMatrix& a, const std::string& path);

}  // namespace blocksplit
