#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zeckdist/charfn.hpp"
#include "zeckdist/distribution.hpp"
#include "zeckdist/numeration.hpp"
#include "zeckdist/weights.hpp"

namespace zeckdist {

/// Evaluated right-hand side of one of the Kolmogorov bounds, terms itemized.
/// The hidden constants stay hidden: fitted_constant reports lhs / rhs, it is
/// never asserted.
struct bound_report {
    std::string kind;
    double lhs = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::string, double>> rhs_terms;
    std::vector<std::pair<std::string, double>> parameters;

    double rhs_total() const;
    double fitted_constant() const;  ///< lhs / rhs_total; NaN without an lhs
};

struct bound_options {
    /// Stabilized reference law: smallest depth whose Cauchy gap beats
    /// stab_eps, capped at stab_cap; the achieved gap is always reported.
    double stab_eps = 1e-3;
    std::size_t stab_cap = 30;
    std::size_t stab_window = 8;

    /// Stabilized Phi for the smoothing integrand.
    double phi_eps = 1e-6;
    std::size_t phi_cap = 4000;

    double quad_rel_tol = 1e-6;  ///< adaptive trapezoid target
    bool compute_lhs = true;     ///< lhs needs a distribution DP over [0, N)

    /// L = ceil(c1 log N), h = ceil(c2 log N) when an experiment picks them.
    double schedule_c1 = 4.0;
    double schedule_c2 = 1.0;
    std::size_t ref_margin = 6;  ///< experiment reference depth = max k + margin

    dist_options dist;
};

/// log N for exact integers of any size.
double ln_bigint(const bigint& N);

struct phi_gap_result {
    double gap = 0.0;            ///< sup over the grid of |Phi_layer - Phi_ref|
    std::size_t tail_cut = 0;    ///< layer + 1: first weight index Phi_layer misses
    double quad_tail = 0.0;      ///< T^2 sum_{j > cut} f(F_j)^2, T = max |t|
    double tail_remainder = 0.0;
    std::size_t limit_depth = 0;
};

/// Distance between Phi at a finite layer and a deep reference layer, paired
/// with the quadratic tail at the matching cut.
phi_gap_result phi_gap(const weight_sequence& seq, std::size_t layer,
                       std::size_t limit_depth, std::span<const double> t_grid);

/// Feller-Esseen smoothing: Q_F(1/T) plus (1/T) int |Phi_N - Phi| / t dt,
/// integrated adaptively on [t0, 1] and [1, T]; the [0, t0] piece enters as
/// its logN/T surrogate since the integrand is 0/0 at the origin.
/// Requires T >= 1; t0 <= 0 selects the default 1/N.
bound_report smoothing_bound(const weight_sequence& seq, const bigint& N, double T,
                             double t0 = 0.0, const bound_options& opts = {});

/// Q_F(1/T) + logN/T + (logN/T) tail + logT/T at the cut L - 2h.
/// Requires T >= 1 and L > 2h.
bound_report master_bound(const weight_sequence& seq, const bigint& N, double T,
                          std::size_t L, std::size_t h, const bound_options& opts = {});

/// Linear/quadratic split of the tail at frequency cutoff T in (0, 1].
bound_report split_bound(const weight_sequence& seq, const bigint& N, double T,
                         std::size_t cut_m, const bound_options& opts = {});

struct asymptotics_row {
    std::uint64_t m;
    double tail;
    double tail_log_m;
    double remainder_bound;
};

/// Quadratic tail against 1/log m; the third column stabilizing near a
/// constant is the check.
std::vector<asymptotics_row> example_asymptotics(const weight_sequence& seq,
                                                 const std::vector<std::uint64_t>& m_list);

enum class t_rule { fixed, log_n, log_n_squared };
struct t_schedule_entry {
    t_rule rule = t_rule::log_n_squared;
    double value = 0.0;  ///< used by t_rule::fixed
};

struct convergence_row {
    std::size_t k = 0;
    double log_N = 0.0;
    double lhs = 0.0;
    double best_T = 0.0;
    double q_term = 0.0;
    double logn_term = 0.0;
    double tail_term = 0.0;
    double logt_term = 0.0;
    double best_rhs = 0.0;
};

struct convergence_result {
    std::vector<convergence_row> rows;
    std::size_t reference_depth = 0;
    double reference_gap = 0.0;  ///< kolmogorov(F at max k, reference)
};

/// Per k: lhs = ||F_{G_k} - F_ref|| against the master rhs minimized over the
/// T schedule, with L, h on the configured log N schedule.
convergence_result convergence_experiment(const weight_sequence& seq,
                                          const std::vector<std::size_t>& k_list,
                                          const std::vector<t_schedule_entry>& schedule,
                                          const bound_options& opts = {});

}  // namespace zeckdist
