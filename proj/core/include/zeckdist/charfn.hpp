#pragma once

#include <cstddef>
#include <vector>

#include "zeckdist/golden.hpp"
#include "zeckdist/matrix2.hpp"
#include "zeckdist/numeration.hpp"
#include "zeckdist/weights.hpp"

namespace zeckdist {

// ---------------------------------------------------------------------------
// Characteristic sums H_k(t) = sum_{0 <= n < G_k} e^{i t f(n)} and the
// normalized Phi_k(t) = H_k(t) / G_k.
// ---------------------------------------------------------------------------

/// Three-term recursion H_{k+1} = H_k + e^{i t f(F_{k+2})} H_{k-1},
/// H_0 = 1, H_1 = 1 + e^{i t f(F_2)}.
cplx h_scalar(const weight_sequence& seq, std::size_t k, double t);

/// Direct sum over all n < G_k; the oracle for the other routes.
/// Guarded to k <= 25 (G_25 = 196418 terms).
cplx h_bruteforce(const weight_sequence& seq, std::size_t k, double t);

/// Transfer-matrix route: A_{k-1}(t) ... A_1(t) applied to (H_1, H_0)^T.
/// Requires k >= 1.
cplx h_matrix(const weight_sequence& seq, std::size_t k, double t);

/// Paired-block route through the factored product in the eigenbasis.
/// Requires k even, k >= 4.
cplx h_paired(const weight_sequence& seq, std::size_t k, double t);

/// sum_{0 <= n < N} e^{i t f(n)} for arbitrary N, by splitting [0, N) along
/// the Zeckendorf digits of N.  h_prefix(G_k) = h_scalar(k).
cplx h_prefix(const weight_sequence& seq, const bigint& N, double t);

// ---------------------------------------------------------------------------
// One-step transfer matrices and paired blocks
// ---------------------------------------------------------------------------

/// A_k(t) = A + delta_k(t) E21 with delta_k(t) = e^{i t f(F_{k+2})} - 1.
struct step_matrix {
    std::size_t k = 0;
    double t = 0.0;
    cplx delta;
    mat2c matrix;
};
step_matrix make_step(const weight_sequence& seq, std::size_t k, double t);

/// Largest |entry| of Delta(s1) * Delta(s2).  The one-step perturbations are
/// multiples of E21, so the product is structurally zero.
double nilpotent_check(const step_matrix& s1, const step_matrix& s2);

/// Paired block B_k(t) = A_{2k+1}(t) A_{2k}(t) in the eigenbasis of A, with
/// the common linear phase pulled out along the dominant coordinate:
///
///   B_tilde = P^{-1} B P = D^2 + delta_{2k} DS + delta_{2k+1} SD
///   M = D^{-2} B_tilde,   theta = (delta_{2k} + delta_{2k+1}) / (alpha sqrt5)
///   R = e^{-theta E11} M - I,   (R)_11 = e^{-theta}(1 + theta) - 1
///
/// B_tilde is computed from the raw transfer product, so the closed forms
/// above are checkable identities rather than definitions.
struct block_decomposition {
    std::size_t k = 0;
    double t = 0.0;
    cplx delta_even;  ///< delta_{2k}(t)
    cplx delta_odd;   ///< delta_{2k+1}(t)
    cplx theta;
    mat2c B_tilde;
    mat2c M;
    mat2c R;
};

/// Requires k >= 1.  Throws theta_domain_error when |theta| > 1.
block_decomposition block_decompose(const weight_sequence& seq, std::size_t k, double t);

/// V_k = f(F_{2k+2})^2 + f(F_{2k+3})^2, the quadratic weight of block k.
double block_quadratic_weight(const weight_sequence& seq, std::size_t k);

/// Factored product over blocks K..L:
///
///   B_tilde_L ... B_tilde_K
///     = D^{2b} exp(phase_sum E11) * remainder,  b = L - K + 1,
///
/// where remainder is the product of (I + R^_k) and each R^_k is R_k
/// conjugated by the diagonal accumulated to its right.  The conjugation
/// makes the identity exact; plain (I + R_k) factors would leave an O(t^2)
/// commutator defect.  The dominant scale alpha^{2b} is kept in log space.
struct paired_product_result {
    std::size_t blocks = 0;
    double log_scale = 0.0;  ///< log(alpha^{2b})
    cplx phase_sum;          ///< sum of theta_k over the blocks
    mat2c remainder;
};

/// Requires 1 <= K <= L and |theta_k(t)| <= 1 throughout.
paired_product_result paired_product(const weight_sequence& seq, std::size_t K,
                                     std::size_t L, double t);

/// Oracle route: P^{-1} [A_{2L+1} A_{2L} ... A_{2K+1} A_{2K}] P, conjugated
/// once at the ends.
mat2c paired_direct_product(const weight_sequence& seq, std::size_t K, std::size_t L,
                            double t);

/// D^{2b} exp(phase_sum E11) * remainder, multiplied back out.
mat2c paired_reconstruct(const paired_product_result& res);

// ---------------------------------------------------------------------------
// Normalized characteristic function profiles
// ---------------------------------------------------------------------------

enum class charfn_method { scalar_recursion, matrix_product, block_factored, brute_force };

struct charfn_profile {
    std::size_t k = 0;
    std::vector<double> t_grid;
    std::vector<cplx> values;
    charfn_method method = charfn_method::scalar_recursion;
};

/// Phi_k over a grid; grid points evaluate concurrently, output order fixed.
charfn_profile phi(const weight_sequence& seq, std::size_t k, std::vector<double> t_grid,
                   charfn_method method = charfn_method::scalar_recursion);

cplx phi_at(const weight_sequence& seq, std::size_t k, double t);
cplx phi_prefix_at(const weight_sequence& seq, const bigint& N, double t);

struct limit_options {
    double eps = 1e-6;          ///< Cauchy gap target
    std::size_t cap = 150'000;  ///< largest layer tried
    std::size_t window = 8;     ///< gap compares Phi_K against Phi_{K+window}
};

struct limit_profile {
    charfn_profile profile;      ///< Phi at the stabilized layer
    std::size_t stabilized_k = 0;
    double cauchy_gap = 0.0;     ///< sup over the grid of |Phi_K - Phi_{K+window}|
};

/// Smallest K whose Cauchy gap on the grid is below eps; throws
/// non_convergence_error when no K <= cap qualifies.  The recursion runs in
/// rescaled coordinates H_k / alpha^k, so the cap may exceed the overflow
/// range of the raw sums.
limit_profile phi_limit(const weight_sequence& seq, std::vector<double> t_grid,
                        const limit_options& opts = {});

/// Same scan, but returns the deepest examined layer with its achieved gap
/// instead of throwing; callers judge the gap.
limit_profile phi_limit_best(const weight_sequence& seq, std::vector<double> t_grid,
                             const limit_options& opts = {});

/// Phi_k(t) in rescaled coordinates; valid for k far beyond the overflow
/// range of h_scalar.
cplx phi_scaled_at(const weight_sequence& seq, std::size_t k, double t);

}  // namespace zeckdist
