#include "zeckdist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "zeckdist/errors.hpp"

namespace zeckdist {

namespace {

double kahan_total(const std::vector<double>& xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

/// DP state: sorted atom values with integer occupation counts.  Counts are
/// held in doubles; they stay exact integers as long as G_k < 2^53 (k <= 75),
/// far beyond any depth the atom cap admits for non-degenerate weights.
struct atom_list {
    std::vector<double> value;
    std::vector<double> count;

    std::size_t size() const { return value.size(); }
    void push(double v, double c) {
        value.push_back(v);
        count.push_back(c);
    }
};

atom_list shifted(const atom_list& a, double w) {
    atom_list out;
    out.count = a.count;
    out.value.reserve(a.size());
    for (double v : a.value) out.value.push_back(v + w);
    return out;
}

/// Two-pointer merge of sorted lists; values within tol coalesce onto the
/// earlier representative, masses add.
atom_list merge_lists(const atom_list& a, const atom_list& b, double tol) {
    atom_list out;
    out.value.reserve(a.size() + b.size());
    out.count.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    auto emit = [&](double v, double c) {
        if (!out.value.empty() && v - out.value.back() <= tol) {
            out.count.back() += c;
        } else {
            out.push(v, c);
        }
    };
    while (i < a.size() && j < b.size()) {
        if (a.value[i] <= b.value[j]) {
            emit(a.value[i], a.count[i]);
            ++i;
        } else {
            emit(b.value[j], b.count[j]);
            ++j;
        }
    }
    for (; i < a.size(); ++i) emit(a.value[i], a.count[i]);
    for (; j < b.size(); ++j) emit(b.value[j], b.count[j]);
    return out;
}

discrete_distribution normalize(atom_list&& atoms) {
    discrete_distribution d;
    const double total = kahan_total(atoms.count);
    d.values = std::move(atoms.value);
    d.masses = std::move(atoms.count);
    for (double& m : d.masses) m /= total;
    return d;
}

/// Walks the digit automaton up to max_layer.  State after layer m covers
/// digit positions 2 .. m+1; placing a 1 requires the previous digit to be 0.
/// sink(m, ends_zero, ends_one) fires for every layer in [0, max_layer];
/// returning false stops the ascent early.  Callers merge the two states
/// themselves for the layers they consume.
template <class Sink>
void dp_ascend(const weight_sequence& seq, std::size_t max_layer,
               const dist_options& opts, Sink&& sink) {
    atom_list ends_zero;  // strings whose top digit is 0
    atom_list ends_one;
    ends_zero.push(0.0, 1.0);
    if (!sink(std::size_t{0}, ends_zero, ends_one)) return;

    for (std::size_t m = 1; m <= max_layer; ++m) {
        const double w = seq.weight(static_cast<std::uint32_t>(m + 1));
        atom_list next_one = shifted(ends_zero, w);
        atom_list next_zero = merge_lists(ends_zero, ends_one, opts.merge_tol);
        ends_zero = std::move(next_zero);
        ends_one = std::move(next_one);
        if (ends_zero.size() + ends_one.size() > opts.atom_cap) {
            throw atom_cap_error(ends_zero.size() + ends_one.size(), opts.atom_cap);
        }
        if (!sink(m, ends_zero, ends_one)) return;
    }
}

}  // namespace

double discrete_distribution::total() const { return kahan_total(masses); }

double discrete_distribution::cdf(double x) const {
    const auto it = std::upper_bound(values.begin(), values.end(), x);
    const auto n = static_cast<std::size_t>(it - values.begin());
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = masses[i] - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double discrete_distribution::max_atom() const {
    double best = 0.0;
    for (double m : masses) best = std::max(best, m);
    return best;
}

discrete_distribution dist_exact(const weight_sequence& seq, std::size_t k,
                                 const dist_options& opts) {
    discrete_distribution out;
    dp_ascend(seq, k, opts,
              [&](std::size_t layer, const atom_list& s0, const atom_list& s1) {
                  if (layer == k) {
                      out = normalize(merge_lists(s0, s1, opts.merge_tol));
                      return false;
                  }
                  return true;
              });
    return out;
}

std::vector<discrete_distribution> dist_exact_multi(const weight_sequence& seq,
                                                    const std::vector<std::size_t>& depths,
                                                    const dist_options& opts) {
    if (depths.empty()) return {};
    for (std::size_t i = 1; i < depths.size(); ++i) {
        if (depths[i] <= depths[i - 1]) {
            throw std::invalid_argument("dist_exact_multi requires strictly increasing depths");
        }
    }
    std::vector<discrete_distribution> out(depths.size());
    std::size_t next = 0;
    dp_ascend(seq, depths.back(), opts,
              [&](std::size_t layer, const atom_list& s0, const atom_list& s1) {
                  if (layer == depths[next]) {
                      out[next] = normalize(merge_lists(s0, s1, opts.merge_tol));
                      ++next;
                  }
                  return next < depths.size();
              });
    return out;
}

discrete_distribution dist_prefix(const weight_sequence& seq, const bigint& N,
                                  const dist_options& opts) {
    if (N < 1) throw std::invalid_argument("dist_prefix requires N >= 1");
    const auto digits = zeck_encode(N).indices();  // ascending

    // Snapshot the full-range law at each decomposition layer j - 2.
    std::vector<char> wanted(digits.back() - 1, 0);
    for (auto j : digits) wanted[j - 2] = 1;
    std::vector<atom_list> snapshot(digits.back() - 1);
    const std::size_t top_layer = digits.back() - 2;
    std::size_t remaining = digits.size();
    dp_ascend(seq, top_layer, opts,
              [&](std::size_t layer, const atom_list& s0, const atom_list& s1) {
                  if (layer < wanted.size() && wanted[layer]) {
                      snapshot[layer] = merge_lists(s0, s1, opts.merge_tol);
                      --remaining;
                  }
                  return remaining != 0;
              });

    // Highest digit first: each digit of N contributes the block of integers
    // that agree above it, hold 0 there, and run free below.
    atom_list acc;
    double prefix = 0.0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        acc = merge_lists(acc, shifted(snapshot[*it - 2], prefix), opts.merge_tol);
        if (acc.size() > opts.atom_cap) throw atom_cap_error(acc.size(), opts.atom_cap);
        prefix += seq.weight(*it);
    }
    return normalize(std::move(acc));
}

double kolmogorov(const discrete_distribution& d1, const discrete_distribution& d2) {
    std::size_t i = 0, j = 0;
    double c1 = 0.0, k1 = 0.0;  // running CDFs with compensation
    double c2 = 0.0, k2 = 0.0;
    double best = 0.0;
    auto add = [](double& sum, double& carry, double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    };
    while (i < d1.size() || j < d2.size()) {
        double v;
        if (j >= d2.size() || (i < d1.size() && d1.values[i] <= d2.values[j])) {
            v = d1.values[i];
        } else {
            v = d2.values[j];
        }
        while (i < d1.size() && d1.values[i] == v) add(c1, k1, d1.masses[i++]);
        while (j < d2.size() && d2.values[j] == v) add(c2, k2, d2.masses[j++]);
        best = std::max(best, std::abs(c1 - c2));
    }
    return best;
}

double concentration(const discrete_distribution& d, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("concentration requires lambda >= 0");
    if (d.size() == 0) return 0.0;

    std::vector<double> prefix(d.size() + 1, 0.0);
    double carry = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double y = d.masses[i] - carry;
        const double t = prefix[i] + y;
        carry = (t - prefix[i]) - y;
        prefix[i + 1] = t;
    }

    // best window [v_i, v_i + lambda]; the optimum is anchored at an atom
    double best = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (j < i) j = i;
        while (j + 1 < d.size() && d.values[j + 1] <= d.values[i] + lambda) ++j;
        best = std::max(best, prefix[j + 1] - prefix[i]);
    }
    return std::min(best, 1.0);
}

dichotomy_report dichotomy_probe(const weight_sequence& seq, std::size_t depth,
                                 const dist_options& opts) {
    if (depth < 2) throw std::invalid_argument("dichotomy_probe requires depth >= 2");

    dichotomy_report report;
    const auto declared = seq.eventually_zero();
    bool tail_zero = declared.has_value();
    if (declared) {
        for (std::uint32_t j = *declared; j <= depth + 1 && tail_zero; ++j) {
            tail_zero = (seq.weight(j) == 0.0);
        }
    }
    report.verdict = (declared && tail_zero) ? dichotomy_verdict::atomic_suspected
                                             : dichotomy_verdict::non_atomic_suspected;
    report.vanishing_from = declared.value_or(0);

    const std::size_t probe_k = std::min<std::size_t>(depth, 22);
    const auto law = dist_exact(seq, probe_k, opts);
    for (int i = 0; i <= 12; ++i) {
        const double lambda = std::ldexp(1.0, -i);
        report.q_decay.emplace_back(lambda, concentration(law, lambda));
    }
    return report;
}

dist_limit_result dist_limit(const weight_sequence& seq, double eps, std::size_t cap,
                             std::size_t window, const dist_options& opts) {
    if (cap < window) throw std::invalid_argument("dist_limit requires cap >= window");

    dist_limit_result out;
    std::deque<std::pair<std::size_t, discrete_distribution>> recent;
    bool found = false;
    dp_ascend(seq, cap, opts,
              [&](std::size_t layer, const atom_list& s0, const atom_list& s1) {
                  recent.emplace_back(layer, normalize(merge_lists(s0, s1, opts.merge_tol)));
                  if (recent.size() > window + 1) recent.pop_front();
                  if (recent.size() == window + 1) {
                      const double gap =
                          kolmogorov(recent.front().second, recent.back().second);
                      out.stabilized_k = recent.front().first;
                      out.cauchy_gap = gap;
                      out.dist = recent.front().second;
                      if (gap < eps) {
                          found = true;
                          return false;
                      }
                  }
                  return true;
              });
    if (!found && recent.size() < window + 1) {
        // degenerate cap; report the deepest layer seen
        out.stabilized_k = recent.back().first;
        out.cauchy_gap = 0.0;
        out.dist = std::move(recent.back().second);
    }
    return out;
}

}  // namespace zeckdist
