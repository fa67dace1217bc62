#pragma once

#include "nhlat/model.hpp"

#include <string>
#include <vector>

namespace nhlat {

enum class Boundary { obc, pbc };

struct SpectrumResult {
    ComplexVector eigenvalues; // sorted by Im descending, then Re ascending
    ComplexMatrix eigenvectors; // columns, unit 2-norm
    double max_residual = 0.0;  // max_i ||H v_i - E_i v_i||_2
    double h_norm = 0.0;        // Frobenius norm of the input matrix
    LatticeParams params;
    Boundary boundary = Boundary::obc;
};

// Full dense eigendecomposition.  Throws nhlat::ComputeError if the backend
// fails to converge or any residual exceeds 1e-8 * ||H||.
SpectrumResult diagonalize(const ComplexMatrix& h, const LatticeParams& p,
                           Boundary boundary);

enum class Branch { upper, lower };

struct WindingResult {
    int nu = 0;
    double residual = 0.0;     // |pre-rounding value - nu|
    double min_distance = 0.0; // closest approach of the sampled curve to e0
    double raw = 0.0;          // pre-rounding accumulated value
};

// Spectral winding of one dispersion branch around the base point e0,
// accumulated over a closed k-polyline with k_samples nodes (>= 1000).
WindingResult winding_number(cdouble e0, double v, double gamma,
                             int k_samples, Branch branch);

using Polyline = std::vector<cdouble>;

struct BlochLine {
    bool present = false;
    double k_min = 0.0, k_max = 0.0; // k-interval where the branches collapse
    cdouble e_min, e_max;            // segment endpoints in the energy plane
    double k_length = 0.0;
    double e_length = 0.0;
};

struct LoopGeometry {
    // Closed polylines (first == last).  One polyline per loop at delta = 0;
    // the 4x4 Bloch bands give two per loop when delta != 0.
    std::vector<Polyline> upper;
    std::vector<Polyline> lower;
    BlochLine bloch;
    double v = 0.0, gamma = 0.0, delta = 0.0;
    int k_samples = 0;
};

LoopGeometry loop_geometry(double v, double gamma, double delta, int k_samples);

enum class StateLabel { skin, extended, sfl, bulk_extended_by_size, boundary_ambiguous };
enum class Side { left, right, none };

const char* to_string(StateLabel label);
const char* to_string(Side side);

struct StateClass {
    StateLabel label = StateLabel::bulk_extended_by_size;
    Side side_a = Side::none;
    Side side_b = Side::none;
    double com_ratio = 0.0; // sum_j j*(|psi_a_j|^2+|psi_b_j|^2) / n
};

// Labels every eigenstate against the periodic loop geometry computed at the
// same (v, gamma).  Pass delta=0 geometry: the inter-chain coupling splits the
// tracked bands into thin slivers that enclose no area, while the envelope
// loops of the uncoupled chains are what the interior test is defined against.
// snap_tol is both the Bloch-line proximity threshold and the point-in-polygon
// edge snap distance.
std::vector<StateClass> classify_states(const SpectrumResult& s,
                                        const LoopGeometry& loops,
                                        double snap_tol = 1e-6);

enum class ModeSelector { lowest_im, smallest_abs_im };

struct ScalingPoint {
    int n = 0;
    double com_ratio = 0.0;
    cdouble eigenvalue;
};

// Center-of-mass ratio of the selected eigenstate as a function of lattice
// size; a flat curve signals scale-free localization.
std::vector<ScalingPoint> sfl_scaling(const LatticeParams& base,
                                      const std::vector<int>& n_values,
                                      ModeSelector sel = ModeSelector::lowest_im);

// Largest distance from any OBC eigenvalue to the sampled periodic bands.
double obc_to_pbc_distance(const SpectrumResult& s, const LoopGeometry& loops);

} // namespace nhlat
