#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zeckdist/numeration.hpp"
#include "zeckdist/weights.hpp"

namespace zeckdist {

/// Discrete probability law as sorted atoms.  values are strictly increasing
/// (beyond the merge tolerance used to build them), masses positive and
/// normalized to total 1.
struct discrete_distribution {
    std::vector<double> values;
    std::vector<double> masses;

    std::size_t size() const noexcept { return values.size(); }
    /// Compensated sum of the masses.
    double total() const;
    /// P[X <= x].
    double cdf(double x) const;
    /// Largest single atom mass.
    double max_atom() const;
};

struct dist_options {
    double merge_tol = 1e-12;          ///< atoms closer than this coalesce
    std::size_t atom_cap = 20'000'000; ///< DP guard; atom_cap_error beyond
};

/// Law of f(n) for n uniform on [0, G_k): dynamic programming over the
/// two-state digit automaton (state = last digit), exact integer counts.
discrete_distribution dist_exact(const weight_sequence& seq, std::size_t k,
                                 const dist_options& opts = {});

/// Law of f(n) for n uniform on [0, N): the interval splits along the
/// Zeckendorf digits of N into shifted full digit ranges.
discrete_distribution dist_prefix(const weight_sequence& seq, const bigint& N,
                                  const dist_options& opts = {});

/// dist_exact at several depths from one automaton ascent.  depths must be
/// strictly increasing; returns one law per requested depth.
std::vector<discrete_distribution> dist_exact_multi(const weight_sequence& seq,
                                                    const std::vector<std::size_t>& depths,
                                                    const dist_options& opts = {});

/// sup_x |F(x) - G(x)| over atom locations of both laws, left and right
/// limits included.
double kolmogorov(const discrete_distribution& d1, const discrete_distribution& d2);

/// Concentration function Q(lambda): the largest probability carried by any
/// closed interval of length lambda >= 0.
double concentration(const discrete_distribution& d, double lambda);

enum class dichotomy_verdict { atomic_suspected, non_atomic_suspected };

struct dichotomy_report {
    dichotomy_verdict verdict;
    std::uint32_t vanishing_from = 0;  ///< declared J when atomic_suspected
    /// Empirical concentration decay (lambda, Q(lambda)) at the probe depth.
    std::vector<std::pair<double, double>> q_decay;
};

/// Atomic iff the weights are declared to vanish from some J on; the report
/// carries the concentration decay of the depth-k law as empirical evidence.
dichotomy_report dichotomy_probe(const weight_sequence& seq, std::size_t depth,
                                 const dist_options& opts = {});

struct dist_limit_result {
    discrete_distribution dist;
    std::size_t stabilized_k = 0;
    double cauchy_gap = 0.0;  ///< kolmogorov(F_K, F_{K+window})
};

/// Depth-stabilized stand-in for the limit law: smallest K with
/// kolmogorov(F_K, F_{K+window}) < eps, capped; the achieved gap is the
/// reported truncation error.  When no K <= cap meets eps, the deepest
/// window is returned rather than an error; callers judge the gap.
dist_limit_result dist_limit(const weight_sequence& seq, double eps, std::size_t cap,
                             std::size_t window = 8, const dist_options& opts = {});

}  // namespace zeckdist
