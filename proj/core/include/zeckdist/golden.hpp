#pragma once

#include "zeckdist/matrix2.hpp"

namespace zeckdist {

/// Eigenframe of the Fibonacci step matrix A = [[1,1],[1,0]]:
///
///   alpha = (1+sqrt5)/2,  alpha_bar = (1-sqrt5)/2 = -1/alpha,
///   P = [[alpha, alpha_bar], [1, 1]],  det P = sqrt5,
///   P_inv * A * P = D = diag(alpha, alpha_bar),
///   S = P_inv * E21 * P = (1/sqrt5) [[1, -alpha_bar^2], [alpha^2, -1]],
///   U = D^{-2} D S = D^{-1} S,  V = D^{-2} S D,  U_11 = V_11 = 1/(alpha sqrt5).
///
/// Immutable; share freely across threads.
struct golden_frame {
    double alpha;
    double alpha_bar;
    double sqrt5;
    mat2c A, P, P_inv, D, S, U, V, E11, E21;

    static const golden_frame& standard();

    /// Frame with a perturbed P_inv; negative control for the identity
    /// battery (the P_inv*A*P = D check must fail on it).
    static golden_frame corrupted();
};

/// A-adapted norm of a matrix in original coordinates: ||P^{-1} M P||_2.
/// Matrices already expressed in the eigenbasis (B-tilde, M_k, R_k) take
/// their plain spectral norm instead.
double adapted_norm(const golden_frame& frame, const mat2c& M);

}  // namespace zeckdist
