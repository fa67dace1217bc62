#pragma once

#include "nhlat/dynamics.hpp"
#include "nhlat/experiments.hpp"
#include "nhlat/io.hpp"
#include "nhlat/spectral.hpp"

namespace nhlat {

// Row builders for the canonical output files; every writer in the CLI and
// the figure presets goes through these so the byte layout stays identical.
CsvTable spectrum_table(const SpectrumResult& s, const std::vector<StateClass>& cls);
CsvTable loops_table(const LoopGeometry& loops);
CsvTable modes_table(const SpectrumResult& s, const std::vector<StateClass>& cls);
CsvTable decay_table(const DecayProfile& prof);
CsvTable trajectory_table(const Trajectory& tr, const LatticeParams& p);
CsvTable sweep_table(SweepAxis axis, Observable obs,
                     const std::vector<SweepRecord>& records);
CsvTable scaling_table(const std::vector<ScalingPoint>& points, double v);

std::string decay_summary_json(const DecayProfile& prof);

} // namespace nhlat
