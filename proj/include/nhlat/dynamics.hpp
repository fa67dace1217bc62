#pragma once

#include "nhlat/model.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace nhlat {

// Computational failure (solver breakdown, non-convergent horizon, ...).
struct ComputeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvolutionSpec {
    LatticeParams params;
    int start_site = 30;       // 1-based, must be even and in [2, n-1]
    double t_max = -1.0;       // < 0 selects the auto horizon
    double tail_epsilon = 1e-6; // auto horizon stops once total power drops below
    double sampling_dt = 0.01;
    double t_cap = 2.0e4;      // hard cap for the auto horizon
    bool store_states = false; // keep full state vectors at every sample
};

void validate(const EvolutionSpec& spec);

// delta_{j,start}/sqrt(2) on both sublattices; unit total power.
ComplexVector initial_state(const LatticeParams& p, int start_site);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> power;      // total |psi|^2 at each sample
    std::vector<double> loss_power; // sum_j 2 V_j |psi_j|^2 at each sample
    std::vector<ComplexVector> states; // empty unless store_states
};

// Eigenbasis propagator psi(t) = R exp(-i E t) R^{-1} psi(0).
Trajectory evolve(const EvolutionSpec& spec);

// Adaptive Dormand-Prince 5(4) integration of i dpsi/dt = H psi, sampled on
// the same grid as evolve(); the independent cross-check of the propagator.
Trajectory evolve_rk(const EvolutionSpec& spec, double rel_tol = 1e-10,
                     double abs_tol = 1e-12);

struct DecayProfile {
    std::vector<double> p_a, p_b; // index j-1 holds site j; even sites are 0
    double residual = 0.0;        // power never dissipated inside the horizon
    double ratio_a = 0.0;         // p_a[n-1] / min over odd sites right of start
    double ratio_b = 0.0;         // p_b[0]   / min over odd sites left of start
    double p_min_a = 0.0, p_min_b = 0.0;
    int argmin_a = 0, argmin_b = 0; // 1-based odd sites attaining the minima
    LatticeParams params;
    int start_site = 0;
    bool used_quadrature = false;
};

// Site-resolved dissipated power P_j = 2 V_j int_0^inf |psi_j|^2 dt via the
// closed-form eigenmode pair sum; falls back to quadrature when two modes are
// close enough to make a pair denominator i*(E_m - conj(E_n)) hazardous.
DecayProfile decay_profile(const EvolutionSpec& spec);

// Trapezoid accumulation along the sampled trajectory out to the horizon.
DecayProfile decay_profile_quadrature(const EvolutionSpec& spec);

// Worst centered-difference defect |dI/dt + sum_j 2 V_j |psi_j|^2| over the
// interior samples of a trajectory.
double power_balance_defect(const Trajectory& t, const LatticeParams& p);

enum class SymmetryVariant { flip_gamma_both, flip_gamma_b_only, zero_gamma_b_only };

struct SymmetryReport {
    SymmetryVariant variant;
    // flip_gamma_both: max_j |P_j^A(-gamma) - P_j^B(gamma)| and the mirror.
    double profile_diff_ab = 0.0;
    double profile_diff_ba = 0.0;
    // flip_gamma_b_only: max over samples of max_j |psi_j^A - psi_j^B|.
    double state_diff = 0.0;
    // zero_gamma_b_only: max_d |P_{S+d}^B - P_{S-d}^B|.
    double asymmetry_b = 0.0;
    double ratio_a = 0.0; // edge-burst ratio of sublattice A in the variant
};

// Evolves a generalized two-chain model (independent NNN signs per sublattice,
// private to this probe) and reports the symmetry diagnostics above.
SymmetryReport symmetry_probe(const EvolutionSpec& spec, SymmetryVariant variant);

} // namespace nhlat
