#include "nhlat/tables.hpp"

#include <json.hpp>

#include <numbers>

namespace nhlat {

namespace {

std::string fd(double x) { return format_double(x); }

} // namespace

CsvTable spectrum_table(const SpectrumResult& s, const std::vector<StateClass>& cls)
{
    CsvTable t;
    t.comments.push_back(param_comment(s.params) + " boundary=" +
                         (s.boundary == Boundary::obc ? "obc" : "pbc"));
    t.columns = {"index", "re_e", "im_e", "label", "side_a", "side_b", "com_ratio"};
    for (int i = 0; i < s.eigenvalues.size(); ++i) {
        const StateClass& c = cls[i];
        t.rows.push_back({std::to_string(i + 1), fd(s.eigenvalues[i].real()),
                          fd(s.eigenvalues[i].imag()), to_string(c.label),
                          to_string(c.side_a), to_string(c.side_b), fd(c.com_ratio)});
    }
    return t;
}

CsvTable loops_table(const LoopGeometry& loops)
{
    CsvTable t;
    t.comments.push_back("v=" + fd(loops.v) + " gamma=" + fd(loops.gamma) +
                         " delta=" + fd(loops.delta) +
                         " k_samples=" + std::to_string(loops.k_samples));
    if (loops.bloch.present)
        t.comments.push_back(
            "bloch_line k=[" + fd(loops.bloch.k_min) + ", " + fd(loops.bloch.k_max) +
            "] e=[" + format_complex(loops.bloch.e_min) + ", " +
            format_complex(loops.bloch.e_max) + "] length=" + fd(loops.bloch.e_length));
    else
        t.comments.push_back("bloch_line absent");
    t.columns = {"loop", "band", "k", "re_e", "im_e"};
    auto emit = [&](const char* name, const std::vector<Polyline>& polys) {
        for (size_t b = 0; b < polys.size(); ++b) {
            const Polyline& poly = polys[b];
            for (size_t i = 0; i < poly.size(); ++i) {
                const double k =
                    -std::numbers::pi + 2.0 * std::numbers::pi * i / (poly.size() - 1);
                t.rows.push_back({name, std::to_string(b), fd(k), fd(poly[i].real()),
                                  fd(poly[i].imag())});
            }
        }
    };
    emit("upper", loops.upper);
    emit("lower", loops.lower);
    return t;
}

CsvTable modes_table(const SpectrumResult& s, const std::vector<StateClass>& cls)
{
    const int n = s.params.n;
    CsvTable t;
    t.comments.push_back(param_comment(s.params));
    t.columns = {"state", "j", "density_a", "density_b", "label"};
    for (int i = 0; i < s.eigenvalues.size(); ++i)
        for (int j = 0; j < n; ++j)
            t.rows.push_back({std::to_string(i + 1), std::to_string(j + 1),
                              fd(std::norm(s.eigenvectors(j, i))),
                              fd(std::norm(s.eigenvectors(n + j, i))),
                              to_string(cls[i].label)});
    return t;
}

CsvTable decay_table(const DecayProfile& prof)
{
    CsvTable t;
    t.comments.push_back(param_comment(prof.params) +
                         " start_site=" + std::to_string(prof.start_site));
    t.columns = {"j", "p_a", "p_b"};
    for (size_t j = 0; j < prof.p_a.size(); ++j)
        t.rows.push_back({std::to_string(j + 1), fd(prof.p_a[j]), fd(prof.p_b[j])});
    return t;
}

CsvTable trajectory_table(const Trajectory& tr, const LatticeParams& p)
{
    CsvTable t;
    t.comments.push_back(param_comment(p));
    t.columns = {"t", "power", "loss_power"};
    const bool full = !tr.states.empty();
    if (full) {
        for (int j = 1; j <= p.n; ++j) {
            t.columns.push_back("re_a" + std::to_string(j));
            t.columns.push_back("im_a" + std::to_string(j));
        }
        for (int j = 1; j <= p.n; ++j) {
            t.columns.push_back("re_b" + std::to_string(j));
            t.columns.push_back("im_b" + std::to_string(j));
        }
    }
    for (size_t i = 0; i < tr.times.size(); ++i) {
        std::vector<std::string> row{fd(tr.times[i]), fd(tr.power[i]),
                                     fd(tr.loss_power[i])};
        if (full)
            for (int j = 0; j < 2 * p.n; ++j) {
                row.push_back(fd(tr.states[i][j].real()));
                row.push_back(fd(tr.states[i][j].imag()));
            }
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable sweep_table(SweepAxis axis, Observable obs,
                     const std::vector<SweepRecord>& records)
{
    CsvTable t;
    t.comments.push_back(std::string("axis=") + to_string(axis) +
                         " observable=" + to_string(obs));
    t.columns = {"axis", "value", "observable", "residual", "status"};
    for (const SweepRecord& r : records)
        t.rows.push_back({to_string(axis), fd(r.value), fd(r.observable),
                          fd(r.residual), r.status});
    return t;
}

CsvTable scaling_table(const std::vector<ScalingPoint>& points, double v)
{
    CsvTable t;
    t.columns = {"v", "n", "com_ratio", "re_e", "im_e"};
    for (const ScalingPoint& pt : points)
        t.rows.push_back({fd(v), std::to_string(pt.n), fd(pt.com_ratio),
                          fd(pt.eigenvalue.real()), fd(pt.eigenvalue.imag())});
    return t;
}

std::string decay_summary_json(const DecayProfile& prof)
{
    nlohmann::json j;
    j["residual"] = prof.residual;
    j["ratio_a"] = prof.ratio_a;
    j["ratio_b"] = prof.ratio_b;
    j["p_min_a"] = prof.p_min_a;
    j["p_min_b"] = prof.p_min_b;
    j["argmin_a"] = prof.argmin_a;
    j["argmin_b"] = prof.argmin_b;
    j["p_edge_a"] = prof.p_a.empty() ? 0.0 : prof.p_a.back();
    j["p_edge_b"] = prof.p_b.empty() ? 0.0 : prof.p_b.front();
    j["used_quadrature"] = prof.used_quadrature;
    j["params"] = {{"n", prof.params.n},
                   {"gamma", prof.params.gamma},
                   {"delta", prof.params.delta},
                   {"v", prof.params.v},
                   {"start_site", prof.start_site}};
    return j.dump(2) + "\n";
}

} // namespace nhlat
