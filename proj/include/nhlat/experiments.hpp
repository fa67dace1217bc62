#pragma once

#include "nhlat/dynamics.hpp"
#include "nhlat/spectral.hpp"

#include <string>
#include <vector>

namespace nhlat {

enum class SweepAxis { v, delta, gamma, n };
enum class Observable {
    p_edge_a,          // P_N^A
    p_edge_b,          // P_1^B
    ratio_a,
    ratio_b,
    bloch_line_length, // complex-plane length of the degenerate segment
    imaginary_gap      // -max Im(E) of the OBC spectrum
};

SweepAxis parse_axis(const std::string& s);
Observable parse_observable(const std::string& s);
const char* to_string(SweepAxis axis);
const char* to_string(Observable obs);

struct SweepSpec {
    SweepAxis axis = SweepAxis::v;
    std::vector<double> values;
    Observable observable = Observable::p_edge_a;
    LatticeParams base;
    int start_site = 30;       // n-axis points recompute this per value
    double tail_epsilon = 1e-6;
    int k_samples = 4001;
    double point_budget = 300.0; // seconds per point before the run is flagged
    int jobs = 1;
};

struct SweepRecord {
    double value = 0.0;
    double observable = 0.0;
    double residual = 0.0;
    std::string status; // ok | no-decay | over-budget | failed: <reason>
    double wall_time = 0.0;
    int start_site = 0; // resolved start site actually used for this point
};

// One independent dynamics or spectral run per axis value, executed by a
// worker pool but reported in axis order regardless of completion order.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

struct ReproduceResult {
    std::string figure_id;
    std::vector<std::string> files; // paths written, relative to out_dir
};

// Parameter presets behind the CLI `reproduce` subcommand:
//   fig1b fig1c        OBC spectra (two sizes) + periodic loops, v = 2 / 4
//   fig2a              per-state densities and labels at n = 20, v = 4
//   fig2b              size scan of the selected mode's center of mass
//   fig3a fig3b        site-resolved decay profile of the reference quench
//   fig3a_inset        P_N^A against v
//   fig3b_inset        P_1^B against n
//   fig3c fig3d        P_N^A against delta / gamma
ReproduceResult reproduce(const std::string& figure_id, const std::string& out_dir,
                          int jobs = 1);

std::vector<std::string> known_figures();

} // namespace nhlat
