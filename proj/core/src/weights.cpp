#include "zeckdist/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zeckdist/errors.hpp"

namespace zeckdist {

namespace {

double example_value(std::uint64_t j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign / (std::sqrt(static_cast<double>(j)) *
                   std::log(static_cast<double>(j) + 1.0));
}

}  // namespace

weight_sequence::weight_sequence(family kind,
                                 std::vector<std::pair<std::uint32_t, double>> entries,
                                 double c, std::uint32_t J)
    : kind_(kind), entries_(std::move(entries)), c_(c), J_(J) {}

weight_sequence weight_sequence::explicit_list(
    std::vector<std::pair<std::uint32_t, double>> entries) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first < 2) {
            throw std::invalid_argument("weight index must be >= 2");
        }
        if (i > 0 && entries[i].first == entries[i - 1].first) {
            throw std::invalid_argument("duplicate weight index " +
                                        std::to_string(entries[i].first));
        }
    }
    return weight_sequence(family::explicit_list, std::move(entries), 0.0, 0);
}

weight_sequence weight_sequence::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open weight file " + file.string());
    std::vector<std::pair<std::uint32_t, double>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        long long j;
        double value;
        if (!(row >> j)) continue;  // blank line
        if (!(row >> value) || j < 2) {
            throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                     ": expected 'j value' with j >= 2");
        }
        entries.emplace_back(static_cast<std::uint32_t>(j), value);
    }
    return explicit_list(std::move(entries));
}

weight_sequence weight_sequence::example() {
    return weight_sequence(family::example, {}, 0.0, 0);
}

weight_sequence weight_sequence::zero_after(std::uint32_t J) {
    if (J < 2) throw std::invalid_argument("zero_after requires J >= 2");
    return weight_sequence(family::zero_after, {}, 0.0, J);
}

weight_sequence weight_sequence::constant_upto(double c, std::uint32_t J) {
    if (J < 2) throw std::invalid_argument("constant_upto requires J >= 2");
    return weight_sequence(family::constant_upto, {}, c, J);
}

weight_sequence weight_sequence::zero() { return constant_upto(0.0, 2); }

std::string weight_sequence::describe() const {
    switch (kind_) {
    case family::explicit_list:
        return "explicit-list(" + std::to_string(entries_.size()) + " entries)";
    case family::example:
        return "example";
    case family::zero_after:
        return "zero-after(J=" + std::to_string(J_) + ")";
    case family::constant_upto:
        return "constant-upto(c=" + std::to_string(c_) + ",J=" + std::to_string(J_) + ")";
    }
    return "?";
}

double weight_sequence::formula(std::uint64_t j) const {
    switch (kind_) {
    case family::explicit_list: {
        auto it = std::lower_bound(entries_.begin(), entries_.end(),
                                   std::make_pair(static_cast<std::uint32_t>(j), 0.0),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        return (it != entries_.end() && it->first == j) ? it->second : 0.0;
    }
    case family::example:
        return example_value(j);
    case family::zero_after:
        return (j < J_) ? example_value(j) : 0.0;
    case family::constant_upto:
        return (j <= J_) ? c_ : 0.0;
    }
    return 0.0;
}

double weight_sequence::weight(std::uint32_t j) const {
    if (j < 2) throw std::invalid_argument("weight index must be >= 2");
    return formula(j);
}

double weight_sequence::eval(const zeck_digits& d) const {
    double sum = 0.0;
    for (auto j : d.indices()) sum += weight(j);
    return sum;
}

double weight_sequence::eval(const bigint& n) const {
    if (n < 0) throw std::invalid_argument("eval requires n >= 0");
    return eval(zeck_encode(n));
}

std::optional<std::uint32_t> weight_sequence::eventually_zero() const {
    switch (kind_) {
    case family::explicit_list:
        return entries_.empty() ? 2 : entries_.back().first + 1;
    case family::example:
        return std::nullopt;
    case family::zero_after:
        return J_;
    case family::constant_upto:
        return (c_ == 0.0) ? 2 : J_ + 1;
    }
    return std::nullopt;
}

double weight_sequence::l1_partial(std::uint64_t m) const {
    double sum = 0.0;
    if (kind_ == family::explicit_list) {
        for (const auto& [j, v] : entries_)
            if (j <= m) sum += std::abs(v);
        return sum;
    }
    for (std::uint64_t j = m; j >= 2; --j) sum += std::abs(formula(j));
    return sum;
}

double weight_sequence::l2_partial(std::uint64_t m) const {
    double sum = 0.0;
    if (kind_ == family::explicit_list) {
        for (const auto& [j, v] : entries_)
            if (j <= m) sum += v * v;
        return sum;
    }
    for (std::uint64_t j = m; j >= 2; --j) {
        const double v = formula(j);
        sum += v * v;
    }
    return sum;
}

weight_sequence::tail_estimate weight_sequence::tail_l2(std::uint64_t m) const {
    if (m < 1) throw std::invalid_argument("tail_l2 requires m >= 1");

    if (kind_ != family::example) {
        // finite support: exact finite sum
        double sum = 0.0;
        std::uint64_t last = m;
        if (kind_ == family::explicit_list) {
            for (const auto& [j, v] : entries_) {
                if (j > m) {
                    sum += v * v;
                    last = j;
                }
            }
        } else {
            const std::uint64_t top = (kind_ == family::zero_after)
                                          ? (J_ > 2 ? J_ - 1 : 1)
                                          : J_;
            for (std::uint64_t j = top; j > m && j >= 2; --j) {
                const double v = formula(j);
                sum += v * v;
            }
            last = std::max<std::uint64_t>(m, top);
        }
        return {sum, 0.0, last};
    }

    // example family: direct summation up the index range, smallest terms
    // first, then an integral-test estimate of the remainder beyond the cutoff
    const std::uint64_t cutoff = std::max<std::uint64_t>(4 * m, 10'000'000ULL);
    double sum = 0.0;
    double bucket_hi = 0.0;  // increments over (cutoff/2, cutoff]
    double bucket_lo = 0.0;  // increments over (cutoff/4, cutoff/2]
    for (std::uint64_t j = cutoff; j > m; --j) {
        const double v = example_value(j);
        const double sq = v * v;
        sum += sq;
        if (2 * j > cutoff) {
            bucket_hi += sq;
        } else if (4 * j > cutoff) {
            bucket_lo += sq;
        }
    }
    if (bucket_lo > 0.0 && bucket_hi >= bucket_lo) {
        throw non_convergence_error(
            "tail_l2: partial sums fail the Cauchy test at cutoff " +
            std::to_string(cutoff));
    }
    const double c = static_cast<double>(cutoff);
    const double hi = 1.0 / std::log(c);
    const double lo = 1.0 / std::log(c + 2.0);
    const double remainder = 0.5 * (hi + lo);
    const double slack = 0.5 * (hi - lo) + 1.0 / (c * std::log(c) * std::log(c));
    return {sum + remainder, slack, cutoff};
}

weight_sequence::split_parts weight_sequence::split_tail(std::uint64_t m, double T) const {
    if (T <= 0.0) throw std::invalid_argument("split_tail requires T > 0");
    const double threshold = 1.0 / T;
    split_parts parts{0.0, 0.0, {}};

    if (kind_ != family::example) {
        double lin = 0.0, quad = 0.0;
        auto consider = [&](std::uint64_t j, double v) {
            if (j <= m || v == 0.0) return;
            if (std::abs(v) > threshold) {
                lin += std::abs(v);
                parts.big_indices.push_back(static_cast<std::uint32_t>(j));
            } else {
                quad += v * v;
            }
        };
        if (kind_ == family::explicit_list) {
            for (const auto& [j, v] : entries_) consider(j, v);
        } else {
            const std::uint64_t top = (kind_ == family::zero_after)
                                          ? (J_ > 2 ? J_ - 1 : 1)
                                          : J_;
            for (std::uint64_t j = 2; j <= top; ++j) consider(j, formula(j));
        }
        parts.linear = T * lin;
        parts.quadratic = T * T * quad;
        return parts;
    }

    // |f(F_j)| = 1/(sqrt(j) log(j+1)) is strictly decreasing, so the
    // big-weight set is an initial segment of (m, infinity)
    double lin = 0.0;
    std::uint64_t j = m + 1;
    constexpr std::uint64_t scan_cap = 100'000'000ULL;
    while (std::abs(example_value(j)) > threshold) {
        lin += std::abs(example_value(j));
        parts.big_indices.push_back(static_cast<std::uint32_t>(j));
        ++j;
        if (j > scan_cap) {
            throw non_convergence_error("split_tail: big-weight set did not close by j = " +
                                        std::to_string(scan_cap));
        }
    }
    parts.linear = T * lin;
    parts.quadratic = T * T * tail_l2(j - 1).value;
    return parts;
}

}  // namespace zeckdist
