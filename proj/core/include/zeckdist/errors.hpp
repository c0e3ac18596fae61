#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zeckdist {

/// Phase parameter left its validity range |theta| <= 1.  The paired-block
/// factorization is only meaningful there; reduce |t| or start the product
/// at a deeper block.
class theta_domain_error : public std::domain_error {
public:
    theta_domain_error(std::size_t block, double t, double theta_abs)
        : std::domain_error("|theta_" + std::to_string(block) + "(" +
                            std::to_string(t) + ")| = " + std::to_string(theta_abs) +
                            " exceeds 1; reduce |t| or increase the block index"),
          block_(block),
          theta_abs_(theta_abs) {}

    std::size_t block() const noexcept { return block_; }
    double theta_abs() const noexcept { return theta_abs_; }

private:
    std::size_t block_;
    double theta_abs_;
};

/// An iterative scheme (tail summation, limit stabilization, quadrature)
/// failed to meet its tolerance within the configured budget.
class non_convergence_error : public std::runtime_error {
public:
    explicit non_convergence_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// The distribution DP exceeded its atom cap; retry with a coarser merge
/// tolerance or a smaller depth.
class atom_cap_error : public std::runtime_error {
public:
    atom_cap_error(std::size_t atoms, std::size_t cap)
        : std::runtime_error("distribution DP produced " + std::to_string(atoms) +
                             " atoms (cap " + std::to_string(cap) +
                             "); use a coarser merge tolerance"),
          atoms_(atoms),
          cap_(cap) {}

    std::size_t atoms() const noexcept { return atoms_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t atoms_;
    std::size_t cap_;
};

}  // namespace zeckdist
