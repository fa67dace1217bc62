#include "nhlat/model.hpp"

#include "detail_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nhlat {

namespace {
constexpr cdouble kI{0.0, 1.0};
}

void validate(const LatticeParams& p)
{
    if (p.n < 4)
        throw std::invalid_argument("n must be at least 4, got " + std::to_string(p.n));
    if (p.v < 0.0)
        throw std::invalid_argument("v must be nonnegative, got " + std::to_string(p.v));
    if (!std::isfinite(p.gamma) || !std::isfinite(p.delta) || !std::isfinite(p.v))
        throw std::invalid_argument("lattice parameters must be finite");
}

double site_loss(const LatticeParams& p, int j)
{
    if (j < 1 || j > p.n)
        throw std::invalid_argument("site index out of range [1, n]: " + std::to_string(j));
    return (j % 2 == 1) ? p.v : 0.0;
}

namespace detail {

ComplexMatrix build_obc_hamiltonian_ab(const LatticeParams& p, double gamma_a,
                                       double gamma_b)
{
    validate(p);
    const int n = p.n;
    ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);

    // One sublattice block with forward NNN amplitude +i*g.
    auto fill_block = [&](int offset, double g) {
        for (int j = 0; j < n; ++j) {
            if (j + 1 < n) {
                h(offset + j, offset + j + 1) = 1.0;
                h(offset + j + 1, offset + j) = 1.0;
            }
            if (j + 2 < n) {
                h(offset + j, offset + j + 2) = kI * g;
                h(offset + j + 2, offset + j) = -kI * g;
            }
            h(offset + j, offset + j) = -kI * site_loss(p, j + 1);
        }
    };
    fill_block(0, gamma_a);
    fill_block(n, -gamma_b);

    for (int j = 0; j < n; ++j) {
        h(j, n + j) = p.delta;
        h(n + j, j) = p.delta;
    }
    return h;
}

} // namespace detail

ComplexMatrix build_obc_hamiltonian(const LatticeParams& p)
{
    return detail::build_obc_hamiltonian_ab(p, p.gamma, p.gamma);
}

Eigen::Matrix4cd bloch_hamiltonian(double k, const LatticeParams& p)
{
    validate(p);
    const cdouble fwd = 1.0 + std::exp(-kI * k); // odd -> even inside/behind the cell
    const cdouble bwd = 1.0 + std::exp(kI * k);
    const double nnn = 2.0 * p.gamma * std::sin(k); // i*g*(e^{ik} - e^{-ik}) = -2 g sin k

    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    // A block
    h(0, 0) = -nnn - kI * p.v;
    h(1, 1) = -nnn;
    h(0, 1) = fwd;
    h(1, 0) = bwd;
    // B block, NNN sign flipped
    h(2, 2) = nnn - kI * p.v;
    h(3, 3) = nnn;
    h(2, 3) = fwd;
    h(3, 2) = bwd;
    // inter-chain coupling, diagonal in the cell
    h(0, 2) = h(2, 0) = p.delta;
    h(1, 3) = h(3, 1) = p.delta;
    return h;
}

DispersionPair pbc_dispersion(double k, double v, double gamma)
{
    const cdouble base = -2.0 * gamma * std::sin(k) - kI * (v / 2.0);
    // 2 - v^2/4 + 2cos k, factored through the half angle so the sign of the
    // radicand stays reliable right at the branch points
    const double c = 2.0 * std::cos(0.5 * k);
    const double radicand = (c - 0.5 * v) * (c + 0.5 * v);
    const cdouble root = radicand >= 0.0
        ? cdouble{std::sqrt(radicand), 0.0}
        : cdouble{0.0, std::sqrt(-radicand)};
    return {base - root, base + root};
}

} // namespace nhlat
