#pragma once

#include <cstddef>
#include <cstdint>
#include <shared_mutex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zeckdist {

using bigint = boost::multiprecision::cpp_int;

/// Exact Fibonacci numbers F_0 = 0, F_1 = 1, F_{j+1} = F_j + F_{j-1}.
///
/// The table extends lazily under an exclusive lock; lookups take a shared
/// lock, so reads may run concurrently once any extension has completed.
/// For lock-free sharing, construct to the needed capacity up front.
class fib_table {
public:
    explicit fib_table(std::size_t capacity = 128);

    bigint fib(std::size_t j) const;
    /// G_k := F_{k+2}, the number of Zeckendorf digit strings of length k.
    bigint g(std::size_t k) const { return fib(k + 2); }
    std::size_t capacity() const;

    /// Process-wide instance used by the free functions below.
    static fib_table& shared();

private:
    void extend(std::size_t j) const;

    mutable std::shared_mutex mutex_;
    mutable std::vector<bigint> values_;
};

bigint fib(std::size_t j);
bigint g(std::size_t k);

/// Zeckendorf digits of an integer: the sorted set of indices j >= 2 with
/// eps_j = 1.  Invariant: no two indices are adjacent.
class zeck_digits {
public:
    zeck_digits() = default;

    /// Validates the non-adjacency invariant and j >= 2; throws
    /// std::invalid_argument otherwise.
    static zeck_digits from_indices(std::vector<std::uint32_t> indices);

    const std::vector<std::uint32_t>& indices() const noexcept { return indices_; }
    bool empty() const noexcept { return indices_.empty(); }
    std::size_t size() const noexcept { return indices_.size(); }

    friend bool operator==(const zeck_digits&, const zeck_digits&) = default;

private:
    friend zeck_digits zeck_encode(const bigint& n);
    std::vector<std::uint32_t> indices_;  // ascending, non-adjacent, all >= 2
};

/// Greedy largest-Fibonacci-first expansion; zeck_encode(0) is empty.
zeck_digits zeck_encode(const bigint& n);

/// Sum of F_j over the digit set.  Rejects invalid digit sets.
bigint zeck_decode(const zeck_digits& d);

/// Iterates the digit sets of n = 0, 1, ..., G_k - 1, in that order.
/// Digit strings of length k occupy indices 2 .. k+1.
class zeck_range {
public:
    explicit zeck_range(std::size_t k);

    class iterator {
    public:
        using value_type = zeck_digits;
        using difference_type = std::ptrdiff_t;
        using iterator_category = std::input_iterator_tag;

        const zeck_digits& operator*() const { return digits_; }
        const zeck_digits* operator->() const { return &digits_; }
        iterator& operator++();
        friend bool operator==(const iterator& a, const iterator& b) {
            return a.n_ == b.n_;
        }

    private:
        friend class zeck_range;
        iterator(bigint n, bigint end);
        bigint n_;
        bigint end_;
        zeck_digits digits_;
    };

    iterator begin() const;
    iterator end() const;
    /// Number of elements, G_k.
    bigint size() const { return size_; }

private:
    bigint size_;
};

}  // namespace zeckdist
