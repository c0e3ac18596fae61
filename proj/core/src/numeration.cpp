#include "zeckdist/numeration.hpp"

#include <mutex>
#include <stdexcept>

namespace zeckdist {

fib_table::fib_table(std::size_t capacity) {
    values_.reserve(capacity < 2 ? 2 : capacity);
    values_.push_back(0);
    values_.push_back(1);
    extend(capacity);
}

void fib_table::extend(std::size_t j) const {
    while (values_.size() <= j) {
        values_.push_back(values_[values_.size() - 1] + values_[values_.size() - 2]);
    }
}

bigint fib_table::fib(std::size_t j) const {
    {
        std::shared_lock lock(mutex_);
        if (j < values_.size()) return values_[j];
    }
    std::unique_lock lock(mutex_);
    extend(j);
    return values_[j];
}

std::size_t fib_table::capacity() const {
    std::shared_lock lock(mutex_);
    return values_.size();
}

fib_table& fib_table::shared() {
    static fib_table table(256);
    return table;
}

bigint fib(std::size_t j) { return fib_table::shared().fib(j); }
bigint g(std::size_t k) { return fib_table::shared().g(k); }

zeck_digits zeck_digits::from_indices(std::vector<std::uint32_t> indices) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 2) {
            throw std::invalid_argument("Zeckendorf digit index must be >= 2");
        }
        if (i > 0 && indices[i] <= indices[i - 1] + 1) {
            throw std::invalid_argument(
                "Zeckendorf digit indices must be strictly ascending and non-adjacent");
        }
    }
    zeck_digits d;
    d.indices_ = std::move(indices);
    return d;
}

zeck_digits zeck_encode(const bigint& n) {
    if (n < 0) throw std::invalid_argument("zeck_encode requires n >= 0");
    zeck_digits out;
    if (n == 0) return out;

    fib_table& table = fib_table::shared();
    std::size_t j = 2;
    while (table.fib(j + 1) <= n) ++j;

    bigint rest = n;
    std::vector<std::uint32_t> descending;
    while (rest > 0) {
        while (table.fib(j) > rest) --j;
        descending.push_back(static_cast<std::uint32_t>(j));
        rest -= table.fib(j);
        // greedy step skips at least one index, so adjacency cannot occur
        j = (j >= 2) ? j - 1 : 2;
    }
    out.indices_.assign(descending.rbegin(), descending.rend());
    return out;
}

bigint zeck_decode(const zeck_digits& d) {
    const auto& idx = d.indices();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 2 || (i > 0 && idx[i] <= idx[i - 1] + 1)) {
            throw std::invalid_argument("invalid Zeckendorf digit set");
        }
    }
    bigint sum = 0;
    fib_table& table = fib_table::shared();
    for (auto j : idx) sum += table.fib(j);
    return sum;
}

zeck_range::zeck_range(std::size_t k) : size_(g(k)) {}

zeck_range::iterator::iterator(bigint n, bigint end)
    : n_(std::move(n)), end_(std::move(end)) {
    if (n_ < end_) digits_ = zeck_encode(n_);
}

zeck_range::iterator& zeck_range::iterator::operator++() {
    ++n_;
    if (n_ < end_) digits_ = zeck_encode(n_);
    return *this;
}

zeck_range::iterator zeck_range::begin() const { return iterator(0, size_); }
zeck_range::iterator zeck_range::end() const { return iterator(size_, size_); }

}  // namespace zeckdist
