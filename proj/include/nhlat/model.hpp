#pragma once

#include <complex>
#include <Eigen/Dense>

namespace nhlat {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Two coupled chains of n sites each.  Site indices are 1-based in every
// user-facing quantity; odd sites carry the loss rate v.
struct LatticeParams {
    int n = 61;
    double gamma = 0.5;  // imaginary next-nearest-neighbour hopping
    double delta = 0.05; // inter-chain coupling
    double v = 4.0;      // loss rate on odd sites
};

// Throws std::invalid_argument naming the violated constraint.
void validate(const LatticeParams& p);

// V_j for 1-based site index j: v on odd sites, 0 on even sites.
double site_loss(const LatticeParams& p, int j);

// Dense 2n x 2n open-boundary Hamiltonian.  Rows/cols 0..n-1 are sublattice A,
// n..2n-1 sublattice B; within a block, row j-1 is site j.
ComplexMatrix build_obc_hamiltonian(const LatticeParams& p);

// 4x4 Bloch Hamiltonian of the two-site unit cell at crystal momentum k,
// basis order (A odd, A even, B odd, B even).
Eigen::Matrix4cd bloch_hamiltonian(double k, const LatticeParams& p);

struct DispersionPair {
    cdouble minus; // lower branch
    cdouble plus;  // upper branch
};

// Analytic two-band dispersion of a single decoupled sublattice:
//   E = -2*gamma*sin(k) - i*v/2 -+ sqrt(2 - v^2/4 + 2*cos(k))
// with the principal square root, so a negative radicand pushes the minus
// branch down in Im(E).
DispersionPair pbc_dispersion(double k, double v, double gamma);

} // namespace nhlat
