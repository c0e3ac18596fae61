#include "zeckdist/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "zeckdist/errors.hpp"

namespace zeckdist {

namespace {

double kahan_sum(const std::vector<std::pair<std::string, double>>& terms) {
    double sum = 0.0, carry = 0.0;
    for (const auto& [name, x] : terms) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

/// Adaptive trapezoid with a per-length absolute budget derived from a rough
/// composite estimate.  Reports the worst subinterval on failure.
double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
    if (!(a < b)) return 0.0;

    const int rough_n = 128;
    double rough = 0.0;
    double fa_r = f(a);
    for (int i = 1; i <= rough_n; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / rough_n;
        const double fx = f(x);
        rough += 0.5 * (fa_r + fx) * (b - a) / rough_n;
        fa_r = fx;
    }
    const double budget = std::max(rel_tol * std::abs(rough), 1e-15);

    struct segment {
        double a, fa, b, fb;
        int depth;
    };
    std::vector<segment> stack{{a, f(a), b, f(b), 0}};
    double total = 0.0;
    std::size_t evals = 0;
    constexpr std::size_t max_evals = 2'000'000;
    constexpr int max_depth = 42;

    while (!stack.empty()) {
        segment s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double fm = f(mid);
        if (++evals > max_evals) {
            throw non_convergence_error("adaptive_trapezoid: evaluation budget exhausted");
        }
        const double whole = 0.5 * (s.fa + s.fb) * (s.b - s.a);
        const double halves = 0.25 * (s.fa + fm) * (s.b - s.a) +
                              0.25 * (fm + s.fb) * (s.b - s.a);
        const double local_budget = budget * (s.b - s.a) / (b - a);
        if (std::abs(halves - whole) <= 3.0 * local_budget || s.depth >= max_depth) {
            if (s.depth >= max_depth && std::abs(halves - whole) > 3.0 * local_budget) {
                throw non_convergence_error(
                    "adaptive_trapezoid: no convergence on [" + std::to_string(s.a) + ", " +
                    std::to_string(s.b) + "]");
            }
            total += halves;
        } else {
            stack.push_back({s.a, s.fa, mid, fm, s.depth + 1});
            stack.push_back({mid, fm, s.b, s.fb, s.depth + 1});
        }
    }
    return total;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

void push_param(bound_report& r, const std::string& name, double v) {
    r.parameters.emplace_back(name, v);
}

}  // namespace

double bound_report::rhs_total() const { return kahan_sum(rhs_terms); }

double bound_report::fitted_constant() const {
    const double rhs = rhs_total();
    return lhs / rhs;
}

// GCC's fortify analysis misreads the inlined cpp_int shift here.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overread"
#pragma GCC diagnostic ignored "-Wstringop-overflow"
double ln_bigint(const bigint& N) {
    if (N < 1) throw std::invalid_argument("ln_bigint requires N >= 1");
    const std::size_t bits = boost::multiprecision::msb(N);
    if (bits <= 900) return std::log(N.convert_to<double>());
    // keep the top 53 bits and account for the shift in log space
    bigint top = N;
    top >>= static_cast<unsigned>(bits - 52);
    return std::log(top.convert_to<double>()) +
           static_cast<double>(bits - 52) * std::log(2.0);
}
#pragma GCC diagnostic pop

phi_gap_result phi_gap(const weight_sequence& seq, std::size_t layer,
                       std::size_t limit_depth, std::span<const double> t_grid) {
    if (limit_depth <= layer) {
        throw std::invalid_argument("phi_gap requires limit_depth > layer");
    }
    if (t_grid.empty()) throw std::invalid_argument("phi_gap requires a nonempty grid");

    phi_gap_result out;
    out.limit_depth = limit_depth;
    double t_max = 0.0;
    for (double t : t_grid) {
        out.gap = std::max(out.gap,
                           std::abs(phi_scaled_at(seq, layer, t) -
                                    phi_scaled_at(seq, limit_depth, t)));
        t_max = std::max(t_max, std::abs(t));
    }
    out.tail_cut = layer + 1;
    const auto tail = seq.tail_l2(out.tail_cut);
    out.quad_tail = t_max * t_max * tail.value;
    out.tail_remainder = tail.remainder_bound;
    return out;
}

bound_report smoothing_bound(const weight_sequence& seq, const bigint& N, double T,
                             double t0, const bound_options& opts) {
    if (N < 1) throw std::invalid_argument("smoothing_bound requires N >= 1");
    if (T < 1.0) throw std::invalid_argument("smoothing_bound requires T >= 1");
    const double lnN = ln_bigint(N);
    if (t0 <= 0.0) t0 = std::exp(-lnN);
    if (t0 >= 1.0) t0 = 0.5;  // N = 1 degenerate case

    bound_report report;
    report.kind = "smoothing";

    const auto stab = dist_limit(seq, opts.stab_eps, opts.stab_cap, opts.stab_window,
                                 opts.dist);
    const double q = concentration(stab.dist, 1.0 / T);

    limit_options lopts;
    lopts.eps = opts.phi_eps;
    lopts.cap = opts.phi_cap;
    const auto phi_ref = phi_limit_best(seq, linspace(t0, T, 65), lopts);
    const std::size_t ref_k = phi_ref.stabilized_k;

    const auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::abs(phi_prefix_at(seq, N, t) - phi_scaled_at(seq, ref_k, t)) / t;
    };
    const double mid = (t0 < 1.0)
                           ? adaptive_trapezoid(integrand, t0, std::min(1.0, T),
                                                opts.quad_rel_tol) / T
                           : 0.0;
    const double hf = (T > 1.0)
                          ? adaptive_trapezoid(integrand, 1.0, T, opts.quad_rel_tol) / T
                          : 0.0;

    report.rhs_terms.emplace_back("Q_F(1/T)", q);
    report.rhs_terms.emplace_back("logN/T", lnN / T);
    report.rhs_terms.emplace_back("int[t0,1]/T", mid);
    report.rhs_terms.emplace_back("int[1,T]/T", hf);

    push_param(report, "T", T);
    push_param(report, "t0", t0);
    push_param(report, "logN", lnN);
    push_param(report, "stab_depth", static_cast<double>(stab.stabilized_k));
    push_param(report, "stab_gap", stab.cauchy_gap);
    push_param(report, "phi_depth", static_cast<double>(ref_k));
    push_param(report, "phi_gap", phi_ref.cauchy_gap);

    if (opts.compute_lhs) {
        report.lhs = kolmogorov(dist_prefix(seq, N, opts.dist), stab.dist);
    }
    return report;
}

namespace {

struct master_terms {
    double q, logn, tail, logt;
};

master_terms evaluate_master_terms(const weight_sequence& seq, double lnN, double T,
                                   std::size_t L, std::size_t h, double q) {
    const std::size_t cut = L - 2 * h;
    const auto tail = seq.tail_l2(cut);
    return {q, lnN / T, (lnN / T) * tail.value, std::log(T) / T};
}

}  // namespace

bound_report master_bound(const weight_sequence& seq, const bigint& N, double T,
                          std::size_t L, std::size_t h, const bound_options& opts) {
    if (N < 1) throw std::invalid_argument("master_bound requires N >= 1");
    if (T < 1.0) throw std::invalid_argument("master_bound requires T >= 1");
    if (L <= 2 * h) throw std::invalid_argument("master_bound requires L > 2h");
    const double lnN = ln_bigint(N);

    bound_report report;
    report.kind = "master";

    const auto stab = dist_limit(seq, opts.stab_eps, opts.stab_cap, opts.stab_window,
                                 opts.dist);
    const double q = concentration(stab.dist, 1.0 / T);
    const auto terms = evaluate_master_terms(seq, lnN, T, L, h, q);

    report.rhs_terms.emplace_back("Q_F(1/T)", terms.q);
    report.rhs_terms.emplace_back("logN/T", terms.logn);
    report.rhs_terms.emplace_back("(logN/T)*tail", terms.tail);
    report.rhs_terms.emplace_back("logT/T", terms.logt);

    push_param(report, "T", T);
    push_param(report, "L", static_cast<double>(L));
    push_param(report, "h", static_cast<double>(h));
    push_param(report, "cut", static_cast<double>(L - 2 * h));
    push_param(report, "logN", lnN);
    push_param(report, "stab_depth", static_cast<double>(stab.stabilized_k));
    push_param(report, "stab_gap", stab.cauchy_gap);

    if (opts.compute_lhs) {
        report.lhs = kolmogorov(dist_prefix(seq, N, opts.dist), stab.dist);
    }
    return report;
}

bound_report split_bound(const weight_sequence& seq, const bigint& N, double T,
                         std::size_t cut_m, const bound_options& opts) {
    if (N < 1) throw std::invalid_argument("split_bound requires N >= 1");
    if (T <= 0.0 || T > 1.0) throw std::invalid_argument("split_bound requires T in (0, 1]");
    const double lnN = ln_bigint(N);

    bound_report report;
    report.kind = "split";

    const auto stab = dist_limit(seq, opts.stab_eps, opts.stab_cap, opts.stab_window,
                                 opts.dist);
    const double q = concentration(stab.dist, 1.0 / T);
    const auto parts = seq.split_tail(cut_m, T);

    report.rhs_terms.emplace_back("Q_F(1/T)", q);
    report.rhs_terms.emplace_back("logN/T", lnN / T);
    report.rhs_terms.emplace_back("split-linear", parts.linear);
    report.rhs_terms.emplace_back("split-quadratic", parts.quadratic);

    push_param(report, "T", T);
    push_param(report, "cut", static_cast<double>(cut_m));
    push_param(report, "logN", lnN);
    push_param(report, "big_set_size", static_cast<double>(parts.big_indices.size()));
    push_param(report, "stab_depth", static_cast<double>(stab.stabilized_k));
    push_param(report, "stab_gap", stab.cauchy_gap);

    if (opts.compute_lhs) {
        report.lhs = kolmogorov(dist_prefix(seq, N, opts.dist), stab.dist);
    }
    return report;
}

std::vector<asymptotics_row> example_asymptotics(const weight_sequence& seq,
                                                 const std::vector<std::uint64_t>& m_list) {
    if (m_list.empty()) return {};
    if (m_list.front() < 10) {
        throw std::invalid_argument("example_asymptotics requires m >= 10");
    }
    for (std::size_t i = 1; i < m_list.size(); ++i) {
        if (m_list[i] <= m_list[i - 1]) {
            throw std::invalid_argument("example_asymptotics requires increasing m");
        }
    }
    std::vector<asymptotics_row> rows;
    rows.reserve(m_list.size());
    for (auto m : m_list) {
        const auto tail = seq.tail_l2(m);
        rows.push_back({m, tail.value,
                        tail.value * std::log(static_cast<double>(m)),
                        tail.remainder_bound});
    }
    return rows;
}

convergence_result convergence_experiment(const weight_sequence& seq,
                                          const std::vector<std::size_t>& k_list,
                                          const std::vector<t_schedule_entry>& schedule,
                                          const bound_options& opts) {
    if (k_list.empty()) throw std::invalid_argument("convergence_experiment needs k values");
    for (std::size_t i = 1; i < k_list.size(); ++i) {
        if (k_list[i] <= k_list[i - 1]) {
            throw std::invalid_argument("convergence_experiment requires increasing k");
        }
    }
    if (schedule.empty()) throw std::invalid_argument("convergence_experiment needs a T schedule");

    convergence_result result;
    result.reference_depth = k_list.back() + opts.ref_margin;

    std::vector<std::size_t> depths = k_list;
    depths.push_back(result.reference_depth);
    const auto laws = dist_exact_multi(seq, depths, opts.dist);
    const auto& reference = laws.back();
    result.reference_gap = kolmogorov(laws[laws.size() - 2], reference);

    for (std::size_t i = 0; i < k_list.size(); ++i) {
        const std::size_t k = k_list[i];
        const double lnN = ln_bigint(g(k));
        const auto L = static_cast<std::size_t>(std::ceil(opts.schedule_c1 * lnN));
        const auto h = static_cast<std::size_t>(std::ceil(opts.schedule_c2 * lnN));

        convergence_row row;
        row.k = k;
        row.log_N = lnN;
        row.lhs = kolmogorov(laws[i], reference);
        row.best_rhs = std::numeric_limits<double>::infinity();
        for (const auto& entry : schedule) {
            double T = 1.0;
            switch (entry.rule) {
            case t_rule::fixed:         T = entry.value; break;
            case t_rule::log_n:         T = lnN; break;
            case t_rule::log_n_squared: T = lnN * lnN; break;
            }
            T = std::max(T, 1.0);
            const double q = concentration(reference, 1.0 / T);
            const auto terms = evaluate_master_terms(seq, lnN, T, L, h, q);
            const double rhs = terms.q + terms.logn + terms.tail + terms.logt;
            if (rhs < row.best_rhs) {
                row.best_rhs = rhs;
                row.best_T = T;
                row.q_term = terms.q;
                row.logn_term = terms.logn;
                row.tail_term = terms.tail;
                row.logt_term = terms.logt;
            }
        }
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace zeckdist
