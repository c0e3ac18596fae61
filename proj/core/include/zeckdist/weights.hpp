#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zeckdist/numeration.hpp"

namespace zeckdist {

/// Weight values f(F_j) for j >= 2 defining a Zeckendorf-additive function
/// f(n) = sum of eps_j f(F_j) over the digits of n, with f(0) = 0.
///
/// Immutable after construction; safe for concurrent reads.
class weight_sequence {
public:
    enum class family {
        explicit_list,  ///< finitely many (j, value) pairs, 0 elsewhere
        example,        ///< (-1)^j / (sqrt(j) log(j+1)); square-summable, not summable
        zero_after,     ///< example values for j < J, 0 for j >= J
        constant_upto,  ///< c for 2 <= j <= J, 0 beyond
    };

    static weight_sequence explicit_list(std::vector<std::pair<std::uint32_t, double>> entries);
    /// Parses "j value" records, one per line; '#' starts a comment.
    static weight_sequence from_file(const std::filesystem::path& file);
    static weight_sequence example();
    static weight_sequence zero_after(std::uint32_t J);
    static weight_sequence constant_upto(double c, std::uint32_t J);
    /// All-zero weights (single point mass at 0).
    static weight_sequence zero();

    family kind() const noexcept { return kind_; }
    std::string describe() const;

    /// f(F_j); rejects j < 2.
    double weight(std::uint32_t j) const;

    /// f(n) over the Zeckendorf digits of n, summed in ascending index order.
    double eval(const bigint& n) const;
    double eval(const zeck_digits& d) const;

    /// The smallest J with f(F_j) = 0 for all j >= J, when the family
    /// guarantees one (declared vanishing, not a numerical scan).
    std::optional<std::uint32_t> eventually_zero() const;

    /// sum_{2 <= j <= m} |f(F_j)|
    double l1_partial(std::uint64_t m) const;
    /// sum_{2 <= j <= m} f(F_j)^2
    double l2_partial(std::uint64_t m) const;

    struct tail_estimate {
        double value;            ///< sum_{j > m} f(F_j)^2 (partial sum + analytic remainder)
        double remainder_bound;  ///< bound on the error of the analytic remainder
        std::uint64_t cutoff;    ///< last index summed directly
    };
    /// Quadratic tail sum_{j > m} f(F_j)^2.  Exact for finite families;
    /// direct summation plus an integral-test remainder otherwise.
    tail_estimate tail_l2(std::uint64_t m) const;

    struct split_parts {
        double linear;     ///< T * sum over {j > m : |f(F_j)| > 1/T} of |f(F_j)|
        double quadratic;  ///< T^2 * sum over {j > m : |f(F_j)| <= 1/T} of f(F_j)^2
        std::vector<std::uint32_t> big_indices;  ///< the (finite) big-weight set
    };
    /// Linear/quadratic split of the tail beyond m at frequency cutoff T > 0.
    split_parts split_tail(std::uint64_t m, double T) const;

private:
    weight_sequence(family kind, std::vector<std::pair<std::uint32_t, double>> entries,
                    double c, std::uint32_t J);

    double formula(std::uint64_t j) const;  // family value at index j, no range check

    family kind_;
    std::vector<std::pair<std::uint32_t, double>> entries_;  // sorted by index
    double c_ = 0.0;
    std::uint32_t J_ = 0;
};

}  // namespace zeckdist
