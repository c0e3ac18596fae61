#include "zeckdist/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zeckdist/errors.hpp"
#include "zeckdist/parallel.hpp"

namespace zeckdist {

namespace {

cplx unit_phase(double x) { return std::polar(1.0, x); }

cplx delta_at(const weight_sequence& seq, std::size_t layer, double t) {
    return unit_phase(t * seq.weight(static_cast<std::uint32_t>(layer + 2))) - 1.0;
}

double g_as_double(std::size_t k) { return g(k).convert_to<double>(); }

}  // namespace

cplx h_scalar(const weight_sequence& seq, std::size_t k, double t) {
    cplx prev = 1.0;  // H_0
    if (k == 0) return prev;
    cplx cur = 1.0 + unit_phase(t * seq.weight(2));  // H_1
    for (std::size_t m = 1; m < k; ++m) {
        const cplx next =
            cur + unit_phase(t * seq.weight(static_cast<std::uint32_t>(m + 2))) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx h_bruteforce(const weight_sequence& seq, std::size_t k, double t) {
    if (k > 25) {
        throw std::invalid_argument("h_bruteforce enumeration is guarded to k <= 25");
    }
    cplx sum = 0.0;
    zeck_range range(k);
    for (auto it = range.begin(); it != range.end(); ++it) {
        sum += unit_phase(t * seq.eval(*it));
    }
    return sum;
}

cplx h_matrix(const weight_sequence& seq, std::size_t k, double t) {
    if (k < 1) throw std::invalid_argument("h_matrix requires k >= 1");
    cplx hi = 1.0 + unit_phase(t * seq.weight(2));  // H_1
    cplx lo = 1.0;                                  // H_0
    for (std::size_t m = 1; m < k; ++m) {
        make_step(seq, m, t).matrix.apply(hi, lo);
    }
    return hi;
}

cplx h_paired(const weight_sequence& seq, std::size_t k, double t) {
    if (k < 4 || k % 2 != 0) {
        throw std::invalid_argument("h_paired requires an even k >= 4");
    }
    const auto& fr = golden_frame::standard();
    const std::size_t blocks = (k - 2) / 2;  // B_1 .. B_blocks advance (H_2,H_1) to (H_k,H_{k-1})

    cplx hi = h_scalar(seq, 2, t);
    cplx lo = 1.0 + unit_phase(t * seq.weight(2));
    fr.P_inv.apply(hi, lo);
    paired_reconstruct(paired_product(seq, 1, blocks, t)).apply(hi, lo);
    fr.P.apply(hi, lo);
    return hi;
}

cplx h_prefix(const weight_sequence& seq, const bigint& N, double t) {
    if (N < 0) throw std::invalid_argument("h_prefix requires N >= 0");
    if (N == 0) return 0.0;
    const auto digits = zeck_encode(N).indices();  // ascending

    // One recursion pass provides H_m for every decomposition layer m = j - 2.
    const std::size_t top_layer = digits.back() - 2;
    std::vector<cplx> h(top_layer + 1);
    h[0] = 1.0;
    if (top_layer >= 1) h[1] = 1.0 + unit_phase(t * seq.weight(2));
    for (std::size_t m = 1; m < top_layer; ++m) {
        h[m + 1] = h[m] + unit_phase(t * seq.weight(static_cast<std::uint32_t>(m + 2))) * h[m - 1];
    }

    // n < N splits by the highest digit where n drops below N: the digits of
    // N above it are fixed, the chosen position holds 0, everything below is
    // a free string of length j - 2.
    cplx sum = 0.0;
    double prefix = 0.0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        sum += unit_phase(t * prefix) * h[*it - 2];
        prefix += seq.weight(*it);
    }
    return sum;
}

step_matrix make_step(const weight_sequence& seq, std::size_t k, double t) {
    if (k < 1) throw std::invalid_argument("step matrices are defined for k >= 1");
    step_matrix s;
    s.k = k;
    s.t = t;
    s.delta = delta_at(seq, k, t);
    s.matrix = {1.0, 1.0, 1.0 + s.delta, 0.0};
    return s;
}

double nilpotent_check(const step_matrix& s1, const step_matrix& s2) {
    const mat2c d1{0.0, 0.0, s1.delta, 0.0};
    const mat2c d2{0.0, 0.0, s2.delta, 0.0};
    return (d1 * d2).max_abs();
}

block_decomposition block_decompose(const weight_sequence& seq, std::size_t k, double t) {
    if (k < 1) throw std::invalid_argument("block_decompose requires k >= 1");
    const auto& fr = golden_frame::standard();

    block_decomposition b;
    b.k = k;
    b.t = t;
    b.delta_even = delta_at(seq, 2 * k, t);
    b.delta_odd = delta_at(seq, 2 * k + 1, t);
    b.theta = (b.delta_even + b.delta_odd) / (fr.alpha * fr.sqrt5);
    if (std::abs(b.theta) > 1.0) {
        throw theta_domain_error(k, t, std::abs(b.theta));
    }

    const mat2c raw = make_step(seq, 2 * k + 1, t).matrix * make_step(seq, 2 * k, t).matrix;
    b.B_tilde = fr.P_inv * raw * fr.P;

    const mat2c d_inv2 = mat2c::diagonal(1.0 / (fr.alpha * fr.alpha),
                                         1.0 / (fr.alpha_bar * fr.alpha_bar));
    b.M = d_inv2 * b.B_tilde;

    // e^{-theta E11} = I + (e^{-theta} - 1) E11, a diagonal factor
    const mat2c damp = mat2c::diagonal(std::exp(-b.theta), 1.0);
    b.R = damp * b.M - mat2c::identity();
    return b;
}

double block_quadratic_weight(const weight_sequence& seq, std::size_t k) {
    const double f0 = seq.weight(static_cast<std::uint32_t>(2 * k + 2));
    const double f1 = seq.weight(static_cast<std::uint32_t>(2 * k + 3));
    return f0 * f0 + f1 * f1;
}

paired_product_result paired_product(const weight_sequence& seq, std::size_t K,
                                     std::size_t L, double t) {
    if (K < 1 || K > L) throw std::invalid_argument("paired_product requires 1 <= K <= L");
    const auto& fr = golden_frame::standard();
    const double log_alpha = std::log(fr.alpha);

    paired_product_result res;
    res.blocks = L - K + 1;
    res.log_scale = 2.0 * static_cast<double>(res.blocks) * log_alpha;
    res.remainder = mat2c::identity();
    res.phase_sum = 0.0;

    for (std::size_t k = K; k <= L; ++k) {
        const cplx d0 = delta_at(seq, 2 * k, t);
        const cplx d1 = delta_at(seq, 2 * k + 1, t);
        const cplx theta = (d0 + d1) / (fr.alpha * fr.sqrt5);
        if (std::abs(theta) > 1.0) throw theta_domain_error(k, t, std::abs(theta));

        const mat2c M = mat2c::identity() + d0 * fr.U + d1 * fr.V;
        const mat2c R = mat2c::diagonal(std::exp(-theta), 1.0) * M - mat2c::identity();

        // Conjugate by the diagonal accumulated so far,
        //   C = diag(alpha^{2(k-K)} e^{phase}, alpha_bar^{2(k-K)}),
        // so that the three-factor form reproduces the full product exactly.
        // Even powers make alpha_bar^{2m}/alpha^{2m} = alpha^{-4m} > 0.
        const cplx ratio =
            std::exp(cplx(4.0 * static_cast<double>(k - K) * log_alpha, 0.0) + res.phase_sum);
        const mat2c conj{R.a, R.b / ratio, R.c * ratio, R.d};
        res.remainder = (mat2c::identity() + conj) * res.remainder;
        res.phase_sum += theta;
    }
    return res;
}

mat2c paired_direct_product(const weight_sequence& seq, std::size_t K, std::size_t L,
                            double t) {
    if (K < 1 || K > L) throw std::invalid_argument("paired_direct_product requires 1 <= K <= L");
    const auto& fr = golden_frame::standard();
    mat2c prod = mat2c::identity();
    for (std::size_t k = K; k <= L; ++k) {
        prod = make_step(seq, 2 * k + 1, t).matrix * make_step(seq, 2 * k, t).matrix * prod;
    }
    return fr.P_inv * prod * fr.P;
}

mat2c paired_reconstruct(const paired_product_result& res) {
    const cplx dominant = std::exp(cplx(res.log_scale, 0.0) + res.phase_sum);
    const cplx subdominant = std::exp(-res.log_scale);
    return mat2c::diagonal(dominant, subdominant) * res.remainder;
}

charfn_profile phi(const weight_sequence& seq, std::size_t k, std::vector<double> t_grid,
                   charfn_method method) {
    charfn_profile profile;
    profile.k = k;
    profile.method = method;
    profile.t_grid = std::move(t_grid);
    profile.values.resize(profile.t_grid.size());

    const double gk = g_as_double(k);
    detail::parallel_for(profile.t_grid.size(), [&](std::size_t i) {
        const double t = profile.t_grid[i];
        cplx h;
        switch (method) {
        case charfn_method::scalar_recursion: h = h_scalar(seq, k, t); break;
        case charfn_method::matrix_product:   h = k >= 1 ? h_matrix(seq, k, t) : cplx(1.0); break;
        case charfn_method::block_factored:   h = h_paired(seq, k, t); break;
        case charfn_method::brute_force:      h = h_bruteforce(seq, k, t); break;
        }
        profile.values[i] = h / gk;
    });
    return profile;
}

cplx phi_at(const weight_sequence& seq, std::size_t k, double t) {
    return h_scalar(seq, k, t) / g_as_double(k);
}

cplx phi_prefix_at(const weight_sequence& seq, const bigint& N, double t) {
    if (N < 1) throw std::invalid_argument("phi_prefix_at requires N >= 1");
    return h_prefix(seq, N, t) / N.convert_to<double>();
}

namespace {

// Phi_k from the rescaled state x_k = H_k / alpha^k:
//   Phi_k = x_k sqrt5 / (alpha^2 (1 - s_k)),  s_k = (alpha_bar/alpha)^{k+2},
// using G_k = (alpha^{k+2} - alpha_bar^{k+2}) / sqrt5.  The correction s_k
// underflows harmlessly for large k.
double subdominant_ratio(std::size_t k) {
    const auto& fr = golden_frame::standard();
    const double mag = std::exp(-2.0 * static_cast<double>(k + 2) * std::log(fr.alpha));
    return (k % 2 == 0) ? mag : -mag;
}

struct scaled_recursion {
    explicit scaled_recursion(const weight_sequence& seq, double t)
        : seq_(&seq), t_(t), prev_(1.0) {
        const auto& fr = golden_frame::standard();
        inv_alpha_ = 1.0 / fr.alpha;
        norm_ = fr.sqrt5 * inv_alpha_ * inv_alpha_;
        cur_ = (1.0 + unit_phase(t * seq.weight(2))) * inv_alpha_;
        k_ = 1;
    }

    // x_{k+1} = x_k / alpha + e^{i t f(F_{k+2})} x_{k-1} / alpha^2
    void step() {
        const cplx next =
            cur_ * inv_alpha_ +
            unit_phase(t_ * seq_->weight(static_cast<std::uint32_t>(k_ + 2))) * prev_ *
                (inv_alpha_ * inv_alpha_);
        prev_ = cur_;
        cur_ = next;
        ++k_;
    }

    cplx phi(std::size_t k) const {  // k must be k_ or k_ - 1
        const cplx x = (k == k_) ? cur_ : prev_;
        return x * norm_ / (1.0 - subdominant_ratio(k));
    }

    std::size_t layer() const { return k_; }

private:
    const weight_sequence* seq_;
    double t_;
    double inv_alpha_;
    double norm_;
    cplx prev_, cur_;
    std::size_t k_;
};

limit_profile phi_limit_scan(const weight_sequence& seq, std::vector<double> t_grid,
                             const limit_options& opts, bool strict) {
    if (t_grid.empty()) throw std::invalid_argument("phi_limit requires a nonempty grid");
    if (opts.window < 2) throw std::invalid_argument("phi_limit requires window >= 2");

    const std::size_t n = t_grid.size();
    std::vector<scaled_recursion> state;
    state.reserve(n);
    for (double t : t_grid) state.emplace_back(seq, t);

    // ring of the last window+1 layers of Phi values, one row per layer
    const std::size_t ring = opts.window + 1;
    std::vector<std::vector<cplx>> rows(ring, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        rows[0][i] = state[i].phi(0);  // Phi_0 = 1 by the closed form
        rows[1 % ring][i] = state[i].phi(1);
    }

    const std::size_t top = opts.cap + opts.window;
    std::size_t best_k = 0;
    double best_gap = 0.0;
    for (std::size_t m = 2; m <= top; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            state[i].step();
            rows[m % ring][i] = state[i].phi(m);
        }
        if (m >= opts.window) {
            const std::size_t K = m - opts.window;
            double gap = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                gap = std::max(gap, std::abs(rows[K % ring][i] - rows[m % ring][i]));
            }
            best_k = K;
            best_gap = gap;
            if (gap < opts.eps) {
                limit_profile out;
                out.stabilized_k = K;
                out.cauchy_gap = gap;
                out.profile.k = K;
                out.profile.method = charfn_method::scalar_recursion;
                out.profile.values = rows[K % ring];
                out.profile.t_grid = std::move(t_grid);
                return out;
            }
        }
    }
    if (strict) {
        throw non_convergence_error("phi_limit: no layer <= " + std::to_string(opts.cap) +
                                    " reached the Cauchy gap " + std::to_string(opts.eps));
    }
    limit_profile out;
    out.stabilized_k = best_k;
    out.cauchy_gap = best_gap;
    out.profile.k = best_k;
    out.profile.method = charfn_method::scalar_recursion;
    out.profile.values = rows[best_k % ring];
    out.profile.t_grid = std::move(t_grid);
    return out;
}

}  // namespace

limit_profile phi_limit(const weight_sequence& seq, std::vector<double> t_grid,
                        const limit_options& opts) {
    return phi_limit_scan(seq, std::move(t_grid), opts, true);
}

limit_profile phi_limit_best(const weight_sequence& seq, std::vector<double> t_grid,
                             const limit_options& opts) {
    return phi_limit_scan(seq, std::move(t_grid), opts, false);
}

cplx phi_scaled_at(const weight_sequence& seq, std::size_t k, double t) {
    scaled_recursion rec(seq, t);
    if (k == 0) return rec.phi(0);
    while (rec.layer() < k) rec.step();
    return rec.phi(k);
}

}  // namespace zeckdist
