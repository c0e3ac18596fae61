#include "zeckdist/golden.hpp"

namespace zeckdist {

namespace {

golden_frame make_standard() {
    golden_frame f;
    f.sqrt5 = std::sqrt(5.0);
    f.alpha = 0.5 * (1.0 + f.sqrt5);
    f.alpha_bar = 0.5 * (1.0 - f.sqrt5);

    f.A = {1.0, 1.0, 1.0, 0.0};
    f.P = {f.alpha, f.alpha_bar, 1.0, 1.0};
    f.P_inv = {1.0 / f.sqrt5, -f.alpha_bar / f.sqrt5,
               -1.0 / f.sqrt5, f.alpha / f.sqrt5};
    f.D = mat2c::diagonal(f.alpha, f.alpha_bar);
    f.E11 = {1.0, 0.0, 0.0, 0.0};
    f.E21 = {0.0, 0.0, 1.0, 0.0};

    // S = P^{-1} E21 P = (1/sqrt5) [[1, -alpha_bar^2], [alpha^2, -1]]
    const double ab2 = f.alpha_bar * f.alpha_bar;
    const double a2 = f.alpha * f.alpha;
    f.S = {1.0 / f.sqrt5, -ab2 / f.sqrt5, a2 / f.sqrt5, -1.0 / f.sqrt5};

    const mat2c D_inv = mat2c::diagonal(1.0 / f.alpha, 1.0 / f.alpha_bar);
    const mat2c D_inv2 = D_inv * D_inv;
    f.U = D_inv * f.S;          // D^{-2} (D S)
    f.V = D_inv2 * (f.S * f.D);  // D^{-2} (S D)
    return f;
}

}  // namespace

const golden_frame& golden_frame::standard() {
    static const golden_frame frame = make_standard();
    return frame;
}

golden_frame golden_frame::corrupted() {
    golden_frame f = standard();
    f.P_inv.a += 1e-6;
    return f;
}

double adapted_norm(const golden_frame& frame, const mat2c& M) {
    return (frame.P_inv * M * frame.P).spectral_norm();
}

}  // namespace zeckdist
