#include "nhlat/experiments.hpp"

#include "nhlat/io.hpp"
#include "nhlat/tables.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <thread>

namespace nhlat {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Quench sweeps along n need a start site near the chain center that keeps
// the parity constraint (even site, odd chain handled by stepping down).
int resolve_start_site(SweepAxis axis, int requested, int n)
{
    int s = requested;
    if (axis == SweepAxis::n) {
        s = static_cast<int>(std::lround((n - 1) / 2.0));
        if (s % 2 != 0) --s;
    }
    if (s < 2) s = 2;
    if (s > n - 1) s = (n - 1) % 2 == 0 ? n - 1 : n - 2;
    return s;
}

bool needs_decay(Observable obs)
{
    return obs == Observable::p_edge_a || obs == Observable::p_edge_b ||
           obs == Observable::ratio_a || obs == Observable::ratio_b;
}

SweepRecord run_point(const SweepSpec& spec, double value)
{
    SweepRecord rec;
    rec.value = value;
    const auto t0 = std::chrono::steady_clock::now();

    LatticeParams p = spec.base;
    switch (spec.axis) {
    case SweepAxis::v: p.v = value; break;
    case SweepAxis::delta: p.delta = value; break;
    case SweepAxis::gamma: p.gamma = value; break;
    case SweepAxis::n: p.n = static_cast<int>(std::lround(value)); break;
    }
    rec.start_site = resolve_start_site(spec.axis, spec.start_site, p.n);

    try {
        if (needs_decay(spec.observable)) {
            if (p.v == 0.0) {
                // Nothing is ever absorbed without loss, so the integrated
                // profile is identically zero and the run is skipped.
                rec.observable = 0.0;
                rec.residual = 1.0;
                rec.status = "no-decay";
            } else {
                EvolutionSpec es;
                es.params = p;
                es.start_site = rec.start_site;
                es.tail_epsilon = spec.tail_epsilon;
                const DecayProfile prof = decay_profile(es);
                switch (spec.observable) {
                case Observable::p_edge_a: rec.observable = prof.p_a.back(); break;
                case Observable::p_edge_b: rec.observable = prof.p_b.front(); break;
                case Observable::ratio_a: rec.observable = prof.ratio_a; break;
                case Observable::ratio_b: rec.observable = prof.ratio_b; break;
                default: break;
                }
                rec.residual = prof.residual;
                rec.status = "ok";
            }
        } else if (spec.observable == Observable::bloch_line_length) {
            const LoopGeometry loops =
                loop_geometry(p.v, p.gamma, p.delta, spec.k_samples);
            rec.observable = loops.bloch.present ? loops.bloch.e_length : 0.0;
            rec.residual = 0.0;
            rec.status = "ok";
        } else {
            const SpectrumResult s =
                diagonalize(build_obc_hamiltonian(p), p, Boundary::obc);
            rec.observable = -s.eigenvalues[0].imag();
            rec.residual = s.max_residual;
            rec.status = "ok";
        }
    } catch (const std::exception& e) {
        rec.observable = std::nan("");
        rec.residual = std::nan("");
        rec.status = std::string("failed: ") + e.what();
    }

    rec.wall_time = elapsed_since(t0);
    if (rec.status == "ok" && rec.wall_time > spec.point_budget)
        rec.status = "over-budget";
    return rec;
}

void write_table(const std::filesystem::path& dir, const std::string& name,
                 const CsvTable& t, ReproduceResult& out)
{
    write_csv((dir / name).string(), t);
    out.files.push_back(name);
}

LatticeParams reference_params()
{
    return LatticeParams{61, 0.5, 0.05, 4.0};
}

std::vector<double> linear_range(double lo, double hi, int count)
{
    std::vector<double> vals(count);
    for (int i = 0; i < count; ++i)
        vals[i] = lo + (hi - lo) * i / (count - 1);
    return vals;
}

CsvTable spectrum_with_classes(const LatticeParams& p, int k_samples)
{
    const SpectrumResult s = diagonalize(build_obc_hamiltonian(p), p, Boundary::obc);
    const LoopGeometry loops = loop_geometry(p.v, p.gamma, 0.0, k_samples);
    return spectrum_table(s, classify_states(s, loops));
}

ReproduceResult reproduce_spectra(const std::string& figure_id, double v,
                                  const std::filesystem::path& dir)
{
    ReproduceResult out{figure_id, {}};
    for (int n : {20, 70}) {
        LatticeParams p{n, 0.5, 0.05, v};
        write_table(dir, figure_id + "_obc_n" + std::to_string(n) + ".csv",
                    spectrum_with_classes(p, 4001), out);
    }
    write_table(dir, figure_id + "_loops.csv",
                loops_table(loop_geometry(v, 0.5, 0.0, 4001)), out);
    return out;
}

ReproduceResult reproduce_decay(const std::string& figure_id,
                                const std::filesystem::path& dir, bool favor_a)
{
    EvolutionSpec es;
    es.params = reference_params();
    es.start_site = 30;
    const DecayProfile prof = decay_profile(es);
    ReproduceResult out{figure_id, {}};
    write_table(dir, figure_id + "_decay.csv", decay_table(prof), out);
    const std::string summary = figure_id + "_summary.json";
    write_text((dir / summary).string(), decay_summary_json(prof));
    out.files.push_back(summary);
    (void)favor_a;
    return out;
}

ReproduceResult reproduce_sweep(const std::string& figure_id, SweepSpec spec,
                                const std::filesystem::path& dir, int jobs,
                                std::vector<SweepRecord>& records)
{
    spec.jobs = jobs;
    records = run_sweep(spec);
    ReproduceResult out{figure_id, {}};
    write_table(dir, figure_id + "_sweep.csv",
                sweep_table(spec.axis, spec.observable, records), out);
    return out;
}

} // namespace

SweepAxis parse_axis(const std::string& s)
{
    if (s == "v") return SweepAxis::v;
    if (s == "delta") return SweepAxis::delta;
    if (s == "gamma") return SweepAxis::gamma;
    if (s == "n") return SweepAxis::n;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

Observable parse_observable(const std::string& s)
{
    if (s == "p_edge_a") return Observable::p_edge_a;
    if (s == "p_edge_b") return Observable::p_edge_b;
    if (s == "ratio_a") return Observable::ratio_a;
    if (s == "ratio_b") return Observable::ratio_b;
    if (s == "bloch_line_length") return Observable::bloch_line_length;
    if (s == "imaginary_gap") return Observable::imaginary_gap;
    throw std::invalid_argument("unknown observable: " + s);
}

const char* to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::v: return "v";
    case SweepAxis::delta: return "delta";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::n: return "n";
    }
    return "?";
}

const char* to_string(Observable obs)
{
    switch (obs) {
    case Observable::p_edge_a: return "p_edge_a";
    case Observable::p_edge_b: return "p_edge_b";
    case Observable::ratio_a: return "ratio_a";
    case Observable::ratio_b: return "ratio_b";
    case Observable::bloch_line_length: return "bloch_line_length";
    case Observable::imaginary_gap: return "imaginary_gap";
    }
    return "?";
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec)
{
    if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
    std::vector<SweepRecord> records(spec.values.size());
    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < spec.values.size(); ++i)
            records[i] = run_point(spec, spec.values[i]);
        return records;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < spec.values.size();
             i = next.fetch_add(1))
            records[i] = run_point(spec, spec.values[i]);
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs - 1; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
    return records;
}

std::vector<std::string> known_figures()
{
    return {"fig1b", "fig1c", "fig2a", "fig2b", "fig3a",
            "fig3b", "fig3a_inset", "fig3b_inset", "fig3c", "fig3d"};
}

ReproduceResult reproduce(const std::string& figure_id, const std::string& out_dir,
                          int jobs)
{
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    ReproduceResult out;
    std::vector<SweepRecord> sweep_records;
    if (figure_id == "fig1b") {
        out = reproduce_spectra(figure_id, 2.0, dir);
    } else if (figure_id == "fig1c") {
        out = reproduce_spectra(figure_id, 4.0, dir);
    } else if (figure_id == "fig2a") {
        LatticeParams p{20, 0.5, 0.05, 4.0};
        const SpectrumResult s =
            diagonalize(build_obc_hamiltonian(p), p, Boundary::obc);
        const std::vector<StateClass> cls =
            classify_states(s, loop_geometry(p.v, p.gamma, 0.0, 4001));
        out.figure_id = figure_id;
        write_table(dir, figure_id + "_spectrum.csv", spectrum_table(s, cls), out);
        write_table(dir, figure_id + "_modes.csv", modes_table(s, cls), out);
    } else if (figure_id == "fig2b") {
        out.figure_id = figure_id;
        for (double v : {2.0, 4.0}) {
            LatticeParams base{20, 0.5, 0.05, v};
            const std::vector<ScalingPoint> pts =
                sfl_scaling(base, {20, 40, 80, 160}, ModeSelector::lowest_im);
            char tag[32];
            std::snprintf(tag, sizeof tag, "%g", v);
            write_table(dir, figure_id + "_scaling_v" + tag + ".csv",
                        scaling_table(pts, v), out);
        }
    } else if (figure_id == "fig3a" || figure_id == "fig3b") {
        out = reproduce_decay(figure_id, dir, figure_id == "fig3a");
    } else if (figure_id == "fig3a_inset") {
        SweepSpec spec;
        spec.axis = SweepAxis::v;
        spec.values = linear_range(0.0, 8.0, 33);
        spec.observable = Observable::p_edge_a;
        spec.base = reference_params();
        out = reproduce_sweep(figure_id, spec, dir, jobs, sweep_records);
    } else if (figure_id == "fig3b_inset") {
        SweepSpec spec;
        spec.axis = SweepAxis::n;
        spec.values = {41, 81, 161, 321, 641, 1241};
        spec.observable = Observable::p_edge_b;
        spec.base = reference_params();
        out = reproduce_sweep(figure_id, spec, dir, jobs, sweep_records);
    } else if (figure_id == "fig3c") {
        SweepSpec spec;
        spec.axis = SweepAxis::delta;
        spec.values = linear_range(0.0, 0.5, 26);
        spec.observable = Observable::p_edge_a;
        spec.base = reference_params();
        out = reproduce_sweep(figure_id, spec, dir, jobs, sweep_records);
    } else if (figure_id == "fig3d") {
        SweepSpec spec;
        spec.axis = SweepAxis::gamma;
        spec.values = linear_range(0.0, 1.5, 31);
        spec.observable = Observable::p_edge_a;
        spec.base = reference_params();
        out = reproduce_sweep(figure_id, spec, dir, jobs, sweep_records);
    } else {
        throw std::invalid_argument("unknown figure id: " + figure_id);
    }

    nlohmann::json manifest;
    manifest["figure_id"] = figure_id;
    manifest["files"] = out.files;
    if (!sweep_records.empty()) {
        nlohmann::json points = nlohmann::json::array();
        for (const SweepRecord& r : sweep_records)
            points.push_back({{"value", r.value},
                              {"start_site", r.start_site},
                              {"status", r.status},
                              {"wall_time", r.wall_time}});
        manifest["points"] = points;
    }
    const std::string name = figure_id + "_manifest.json";
    write_text((dir / name).string(), manifest.dump(2) + "\n");
    out.files.push_back(name);
    return out;
}

} // namespace nhlat
