#include "nhlat/experiments.hpp"
#include "nhlat/io.hpp"
#include "nhlat/tables.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <thread>

namespace fs = std::filesystem;
using nhlat::CsvTable;

namespace {

constexpr const char* kVersion = "0.1.0";

using Config = std::map<std::string, std::string>;

// Everything a subcommand might need; each one reads its own slice.
struct CliState {
    nhlat::LatticeParams params;
    int start_site = 30;
    double t_max = -1.0;
    double tail_eps = 1e-6;
    double sampling_dt = 0.01;
    double t_cap = 2.0e4;
    int k_samples = 4001;
    std::string out;
    std::string format = "csv";
    std::string config_path;
    int jobs = 0;
    std::string e0_text;
    std::string branch = "upper";
    std::string method;
    bool full = false;
    std::string selector = "lowest_im";
    std::string scan;
    std::string axis = "v";
    std::string values_text;
    std::string observable = "p_edge_a";
    double point_budget = 300.0;
    std::string figure;
};

// Option handles per subcommand, keyed by the config-file spelling of the
// flag, so config merging can tell which flags the user actually passed.
using OptMap = std::map<std::string, CLI::Option*>;

CLI::Option* track(OptMap& om, const std::string& key, CLI::Option* o)
{
    om[key] = o;
    return o;
}

bool flag_given(const OptMap& om, const std::string& key)
{
    auto it = om.find(key);
    return it != om.end() && it->second->count() > 0;
}

long long parse_int(const std::string& key, const std::string& text)
{
    size_t pos = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != text.size())
        throw std::invalid_argument("config key '" + key +
                                    "' is not an integer: " + text);
    return value;
}

double parse_real(const std::string& key, const std::string& text)
{
    size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != text.size())
        throw std::invalid_argument("config key '" + key + "' is not a number: " + text);
    return value;
}

void merge(const OptMap& om, const Config& cfg, const std::string& key, int& dst)
{
    if (flag_given(om, key)) return;
    auto it = cfg.find(key);
    if (it != cfg.end()) dst = static_cast<int>(parse_int(key, it->second));
}

void merge(const OptMap& om, const Config& cfg, const std::string& key, double& dst)
{
    if (flag_given(om, key)) return;
    auto it = cfg.find(key);
    if (it != cfg.end()) dst = parse_real(key, it->second);
}

void merge(const OptMap& om, const Config& cfg, const std::string& key, std::string& dst)
{
    if (flag_given(om, key)) return;
    auto it = cfg.find(key);
    if (it != cfg.end()) dst = it->second;
}

void merge(const OptMap& om, const Config& cfg, const std::string& key, bool& dst)
{
    if (flag_given(om, key)) return;
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    const std::string& v = it->second;
    if (v == "true" || v == "1")
        dst = true;
    else if (v == "false" || v == "0")
        dst = false;
    else
        throw std::invalid_argument("config key '" + key + "' is not a boolean: " + v);
}

// Unknown keys are deliberately ignored so a result manifest (which also
// carries outputs like nu or residual) can be fed straight back in.
void merge_all(const OptMap& om, const Config& cfg, CliState& st)
{
    merge(om, cfg, "n", st.params.n);
    merge(om, cfg, "gamma", st.params.gamma);
    merge(om, cfg, "delta", st.params.delta);
    merge(om, cfg, "v", st.params.v);
    merge(om, cfg, "start_site", st.start_site);
    merge(om, cfg, "t_max", st.t_max);
    merge(om, cfg, "tail_eps", st.tail_eps);
    merge(om, cfg, "dt", st.sampling_dt);
    merge(om, cfg, "t_cap", st.t_cap);
    merge(om, cfg, "k_samples", st.k_samples);
    merge(om, cfg, "out", st.out);
    merge(om, cfg, "format", st.format);
    merge(om, cfg, "jobs", st.jobs);
    merge(om, cfg, "e0", st.e0_text);
    merge(om, cfg, "branch", st.branch);
    merge(om, cfg, "method", st.method);
    merge(om, cfg, "full", st.full);
    merge(om, cfg, "selector", st.selector);
    merge(om, cfg, "scan", st.scan);
    merge(om, cfg, "axis", st.axis);
    merge(om, cfg, "values", st.values_text);
    merge(om, cfg, "observable", st.observable);
    merge(om, cfg, "point_budget", st.point_budget);
    merge(om, cfg, "figure_id", st.figure);
}

fs::path resolve_out_dir(const CliState& st)
{
    std::string dir = st.out;
    if (dir.empty()) {
        const char* env = std::getenv("NHLAT_OUT_DIR");
        if (env && *env) dir = env;
    }
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return dir;
}

void check_format(const std::string& format)
{
    if (format != "csv" && format != "json")
        throw std::invalid_argument("format must be csv or json, got " + format);
}

std::string write_table_fmt(const fs::path& dir, const std::string& stem,
                            const CsvTable& t, const std::string& format)
{
    const std::string name = stem + (format == "json" ? ".json" : ".csv");
    if (format == "json")
        nhlat::write_json_table((dir / name).string(), t);
    else
        nhlat::write_csv((dir / name).string(), t);
    std::cerr << "wrote " << (dir / name).string() << "\n";
    return name;
}

std::string utc_now()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json base_manifest(const char* sub, const CliState& st, const fs::path& dir)
{
    nlohmann::json m;
    m["subcommand"] = sub;
    m["version"] = kVersion;
    m["generated_utc"] = utc_now();
    m["out"] = dir.string();
    m["format"] = st.format;
    return m;
}

void add_params(nlohmann::json& m, const nhlat::LatticeParams& p)
{
    m["n"] = p.n;
    m["gamma"] = p.gamma;
    m["delta"] = p.delta;
    m["v"] = p.v;
}

void finish_manifest(nlohmann::json& m, const fs::path& dir, const std::string& name,
                     const std::vector<std::string>& files, double duration)
{
    m["files"] = files;
    m["duration_seconds"] = duration;
    nhlat::write_text((dir / name).string(), m.dump(2) + "\n");
    std::cerr << "wrote " << (dir / name).string() << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

nhlat::Branch parse_branch(const std::string& s)
{
    if (s == "upper") return nhlat::Branch::upper;
    if (s == "lower") return nhlat::Branch::lower;
    throw std::invalid_argument("branch must be upper or lower, got " + s);
}

nhlat::ModeSelector parse_selector(const std::string& s)
{
    if (s == "lowest_im") return nhlat::ModeSelector::lowest_im;
    if (s == "smallest_abs_im") return nhlat::ModeSelector::smallest_abs_im;
    throw std::invalid_argument("selector must be lowest_im or smallest_abs_im, got " +
                                s);
}

// "a:b:step" inclusive range or a comma-separated list
std::vector<double> parse_values(const std::string& text)
{
    if (text.empty()) throw std::invalid_argument("values must not be empty");
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const size_t c1 = text.find(':');
        const size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
            throw std::invalid_argument("range values must be start:stop:step, got " +
                                        text);
        const double lo = parse_real("values", text.substr(0, c1));
        const double hi = parse_real("values", text.substr(c1 + 1, c2 - c1 - 1));
        const double step = parse_real("values", text.substr(c2 + 1));
        if (step <= 0.0)
            throw std::invalid_argument("range step must be positive");
        if (hi < lo)
            throw std::invalid_argument("range stop must be >= start");
        const int count =
            static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
        return out;
    }
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(parse_real("values", tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text)
{
    std::vector<int> out;
    for (double x : parse_values(text)) {
        const int i = static_cast<int>(std::lround(x));
        if (std::abs(x - i) > 1e-9)
            throw std::invalid_argument(key + " entries must be integers");
        out.push_back(i);
    }
    return out;
}

std::string join_values(const std::vector<double>& values)
{
    std::string s;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) s += ",";
        s += nhlat::format_double(values[i]);
    }
    return s;
}

nhlat::EvolutionSpec make_evolution_spec(const CliState& st)
{
    nhlat::EvolutionSpec es;
    es.params = st.params;
    es.start_site = st.start_site;
    es.t_max = st.t_max;
    es.tail_epsilon = st.tail_eps;
    es.sampling_dt = st.sampling_dt;
    es.t_cap = st.t_cap;
    es.store_states = st.full;
    return es;
}

int run_spectrum(const CliState& st)
{
    check_format(st.format);
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = resolve_out_dir(st);

    const nhlat::SpectrumResult s = nhlat::diagonalize(
        nhlat::build_obc_hamiltonian(st.params), st.params, nhlat::Boundary::obc);
    const nhlat::LoopGeometry loops =
        nhlat::loop_geometry(st.params.v, st.params.gamma, 0.0, st.k_samples);
    const std::vector<nhlat::StateClass> cls = nhlat::classify_states(s, loops);

    std::vector<std::string> files;
    files.push_back(write_table_fmt(dir, "spectrum", spectrum_table(s, cls), st.format));
    files.push_back(write_table_fmt(dir, "loops", loops_table(loops), st.format));

    nlohmann::json m = base_manifest("spectrum", st, dir);
    add_params(m, st.params);
    m["k_samples"] = st.k_samples;
    m["max_residual"] = s.max_residual;
    finish_manifest(m, dir, "spectrum_manifest.json", files, seconds_since(t0));
    return 0;
}

int run_modes(const CliState& st)
{
    check_format(st.format);
    const nhlat::ModeSelector sel = parse_selector(st.selector);
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = resolve_out_dir(st);

    const nhlat::SpectrumResult s = nhlat::diagonalize(
        nhlat::build_obc_hamiltonian(st.params), st.params, nhlat::Boundary::obc);
    const nhlat::LoopGeometry loops =
        nhlat::loop_geometry(st.params.v, st.params.gamma, 0.0, st.k_samples);
    const std::vector<nhlat::StateClass> cls = nhlat::classify_states(s, loops);

    std::vector<std::string> files;
    files.push_back(write_table_fmt(dir, "modes", modes_table(s, cls), st.format));
    if (!st.scan.empty()) {
        const std::vector<int> sizes = parse_int_list("scan", st.scan);
        const std::vector<nhlat::ScalingPoint> pts =
            nhlat::sfl_scaling(st.params, sizes, sel);
        files.push_back(
            write_table_fmt(dir, "scaling", scaling_table(pts, st.params.v), st.format));
    }

    nlohmann::json m = base_manifest("modes", st, dir);
    add_params(m, st.params);
    m["k_samples"] = st.k_samples;
    m["selector"] = st.selector;
    if (!st.scan.empty()) m["scan"] = st.scan;
    finish_manifest(m, dir, "modes_manifest.json", files, seconds_since(t0));
    return 0;
}

int run_winding(const CliState& st)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (st.e0_text.empty())
        throw std::invalid_argument("winding needs --e0 (complex literal a+bi)");
    const nhlat::cdouble e0 = nhlat::parse_complex(st.e0_text);
    const nhlat::Branch branch = parse_branch(st.branch);
    const fs::path dir = resolve_out_dir(st);

    const nhlat::WindingResult w =
        nhlat::winding_number(e0, st.params.v, st.params.gamma, st.k_samples, branch);
    std::cout << w.nu << "\n";

    nlohmann::json m = base_manifest("winding", st, dir);
    m["v"] = st.params.v;
    m["gamma"] = st.params.gamma;
    m["e0"] = nhlat::format_complex(e0);
    m["branch"] = st.branch;
    m["k_samples"] = st.k_samples;
    m["nu"] = w.nu;
    m["residual"] = w.residual;
    m["min_distance"] = w.min_distance;
    finish_manifest(m, dir, "winding_manifest.json", {}, seconds_since(t0));
    return 0;
}

int run_evolve(const CliState& st)
{
    check_format(st.format);
    const std::string method = st.method.empty() ? "closed" : st.method;
    if (method != "closed" && method != "rk")
        throw std::invalid_argument("evolve method must be closed or rk, got " + method);
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = resolve_out_dir(st);

    const nhlat::EvolutionSpec es = make_evolution_spec(st);
    const nhlat::Trajectory tr =
        method == "rk" ? nhlat::evolve_rk(es) : nhlat::evolve(es);

    std::vector<std::string> files;
    files.push_back(
        write_table_fmt(dir, "trajectory", trajectory_table(tr, es.params), st.format));

    nlohmann::json m = base_manifest("evolve", st, dir);
    add_params(m, st.params);
    m["start_site"] = st.start_site;
    m["t_max"] = st.t_max;
    m["tail_eps"] = st.tail_eps;
    m["dt"] = st.sampling_dt;
    m["t_cap"] = st.t_cap;
    m["method"] = method;
    m["full"] = st.full;
    m["samples"] = tr.times.size();
    m["final_power"] = tr.power.empty() ? 0.0 : tr.power.back();
    finish_manifest(m, dir, "evolve_manifest.json", files, seconds_since(t0));
    return 0;
}

int run_decay(const CliState& st)
{
    check_format(st.format);
    const std::string method = st.method.empty() ? "closed" : st.method;
    if (method != "closed" && method != "quadrature")
        throw std::invalid_argument("decay method must be closed or quadrature, got " +
                                    method);
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = resolve_out_dir(st);

    nhlat::EvolutionSpec es = make_evolution_spec(st);
    const nhlat::DecayProfile prof = method == "quadrature"
                                         ? nhlat::decay_profile_quadrature(es)
                                         : nhlat::decay_profile(es);

    std::vector<std::string> files;
    files.push_back(write_table_fmt(dir, "decay", decay_table(prof), st.format));
    nhlat::write_text((dir / "decay_summary.json").string(), decay_summary_json(prof));
    std::cerr << "wrote " << (dir / "decay_summary.json").string() << "\n";
    files.push_back("decay_summary.json");

    std::cout << "ratio_a " << nhlat::format_double(prof.ratio_a) << "\n";
    std::cout << "ratio_b " << nhlat::format_double(prof.ratio_b) << "\n";

    nlohmann::json m = base_manifest("decay", st, dir);
    add_params(m, st.params);
    m["start_site"] = st.start_site;
    m["tail_eps"] = st.tail_eps;
    m["dt"] = st.sampling_dt;
    m["t_cap"] = st.t_cap;
    m["method"] = method;
    m["residual"] = prof.residual;
    m["used_quadrature"] = prof.used_quadrature;
    finish_manifest(m, dir, "decay_manifest.json", files, seconds_since(t0));
    return 0;
}

int run_sweep(const CliState& st)
{
    check_format(st.format);
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = resolve_out_dir(st);

    nhlat::SweepSpec spec;
    spec.axis = nhlat::parse_axis(st.axis);
    spec.values = parse_values(st.values_text);
    spec.observable = nhlat::parse_observable(st.observable);
    spec.base = st.params;
    spec.start_site = st.start_site;
    spec.tail_epsilon = st.tail_eps;
    spec.k_samples = st.k_samples;
    spec.point_budget = st.point_budget;
    spec.jobs = st.jobs;

    const std::vector<nhlat::SweepRecord> records = nhlat::run_sweep(spec);

    std::vector<std::string> files;
    files.push_back(write_table_fmt(
        dir, "sweep", sweep_table(spec.axis, spec.observable, records), st.format));

    bool over_budget = false;
    nlohmann::json points = nlohmann::json::array();
    for (const nhlat::SweepRecord& r : records) {
        if (r.status == "over-budget") over_budget = true;
        points.push_back({{"value", r.value},
                          {"start_site", r.start_site},
                          {"status", r.status},
                          {"wall_time", r.wall_time}});
    }

    nlohmann::json m = base_manifest("sweep", st, dir);
    add_params(m, st.params);
    m["axis"] = st.axis;
    m["values"] = join_values(spec.values);
    m["observable"] = st.observable;
    m["start_site"] = st.start_site;
    m["tail_eps"] = st.tail_eps;
    m["k_samples"] = st.k_samples;
    m["point_budget"] = st.point_budget;
    m["jobs"] = st.jobs;
    m["over_budget"] = over_budget;
    m["points"] = points;
    finish_manifest(m, dir, "sweep_manifest.json", files, seconds_since(t0));
    return 0;
}

int run_reproduce(const CliState& st)
{
    if (st.figure.empty()) {
        std::string known;
        for (const std::string& f : nhlat::known_figures()) known += " " + f;
        throw std::invalid_argument("reproduce needs a figure id; known:" + known);
    }
    const fs::path dir = resolve_out_dir(st);
    const nhlat::ReproduceResult res =
        nhlat::reproduce(st.figure, dir.string(), st.jobs);
    for (const std::string& f : res.files)
        std::cerr << "wrote " << (dir / f).string() << "\n";
    return 0;
}

void add_param_flags(CLI::App* sub, CliState& st, OptMap& om)
{
    track(om, "n", sub->add_option("--n", st.params.n, "number of cells per chain"));
    track(om, "gamma", sub->add_option("--gamma", st.params.gamma,
                                       "imaginary next-nearest hopping"));
    track(om, "delta",
          sub->add_option("--delta", st.params.delta, "inter-chain coupling"));
    track(om, "v", sub->add_option("--v", st.params.v, "loss rate on odd sites"));
}

void add_io_flags(CLI::App* sub, CliState& st, OptMap& om)
{
    track(om, "out",
          sub->add_option("--out", st.out,
                          "output directory (NHLAT_OUT_DIR, then . if unset)"));
    track(om, "format",
          sub->add_option("--format", st.format, "table format: csv or json"));
    track(om, "config",
          sub->add_option("--config", st.config_path,
                          "key = value or JSON config file; flags win"));
    track(om, "jobs",
          sub->add_option("--jobs", st.jobs, "worker threads (default: core count)"));
}

void add_evolution_flags(CLI::App* sub, CliState& st, OptMap& om)
{
    track(om, "start_site",
          sub->add_option("--start-site", st.start_site,
                          "even site the quench starts from"));
    track(om, "t_max",
          sub->add_option("--t-max", st.t_max,
                          "evolution horizon; negative runs until the power "
                          "falls below tail-eps"));
    track(om, "tail_eps",
          sub->add_option("--tail-eps", st.tail_eps,
                          "remaining-power threshold for the auto horizon"));
    track(om, "dt", sub->add_option("--dt", st.sampling_dt, "sampling step"));
    track(om, "t_cap",
          sub->add_option("--t-cap", st.t_cap, "hard cap on the auto horizon"));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"coupled lossy two-chain lattice toolkit"};
    app.require_subcommand(1);

    CliState st;
    std::map<const CLI::App*, OptMap> opts;

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "open-chain spectrum with state labels");
    add_param_flags(spectrum, st, opts[spectrum]);
    add_io_flags(spectrum, st, opts[spectrum]);
    track(opts[spectrum], "k_samples",
          spectrum->add_option("--k-samples", st.k_samples,
                               "momentum grid size for the periodic loops"));

    CLI::App* modes =
        app.add_subcommand("modes", "per-state density profiles and size scans");
    add_param_flags(modes, st, opts[modes]);
    add_io_flags(modes, st, opts[modes]);
    track(opts[modes], "k_samples",
          modes->add_option("--k-samples", st.k_samples,
                            "momentum grid size for the periodic loops"));
    track(opts[modes], "selector",
          modes->add_option("--selector", st.selector,
                            "tracked mode: lowest_im or smallest_abs_im"));
    track(opts[modes], "scan",
          modes->add_option("--scan", st.scan,
                            "comma list of chain sizes for the center-of-mass scan"));

    CLI::App* winding =
        app.add_subcommand("winding", "winding number of a dispersion loop");
    add_param_flags(winding, st, opts[winding]);
    add_io_flags(winding, st, opts[winding]);
    track(opts[winding], "k_samples",
          winding->add_option("--k-samples", st.k_samples, "momentum grid size"));
    track(opts[winding], "e0",
          winding->add_option("--e0", st.e0_text, "base point, complex literal a+bi"));
    track(opts[winding], "branch",
          winding->add_option("--branch", st.branch, "loop branch: upper or lower"));

    CLI::App* evolve = app.add_subcommand("evolve", "time evolution of a quench");
    add_param_flags(evolve, st, opts[evolve]);
    add_io_flags(evolve, st, opts[evolve]);
    add_evolution_flags(evolve, st, opts[evolve]);
    track(opts[evolve], "method",
          evolve->add_option("--method", st.method,
                             "propagator: closed or rk (default closed)"));
    track(opts[evolve], "full",
          evolve->add_flag("--full", st.full, "store full states in the trajectory"));

    CLI::App* decay =
        app.add_subcommand("decay", "site-resolved integrated decay profile");
    add_param_flags(decay, st, opts[decay]);
    add_io_flags(decay, st, opts[decay]);
    add_evolution_flags(decay, st, opts[decay]);
    track(opts[decay], "method",
          decay->add_option("--method", st.method,
                            "integration: closed or quadrature (default closed)"));

    CLI::App* sweep = app.add_subcommand("sweep", "observable along a parameter axis");
    add_param_flags(sweep, st, opts[sweep]);
    add_io_flags(sweep, st, opts[sweep]);
    track(opts[sweep], "start_site",
          sweep->add_option("--start-site", st.start_site,
                            "even site the quench starts from"));
    track(opts[sweep], "tail_eps",
          sweep->add_option("--tail-eps", st.tail_eps,
                            "remaining-power threshold for the auto horizon"));
    track(opts[sweep], "k_samples",
          sweep->add_option("--k-samples", st.k_samples, "momentum grid size"));
    track(opts[sweep], "axis",
          sweep->add_option("--axis", st.axis, "swept parameter: v, delta, gamma, n"));
    track(opts[sweep], "values",
          sweep->add_option("--values", st.values_text,
                            "start:stop:step range or comma list"));
    track(opts[sweep], "observable",
          sweep->add_option("--observable", st.observable,
                            "p_edge_a p_edge_b ratio_a ratio_b bloch_line_length "
                            "imaginary_gap"));
    track(opts[sweep], "point_budget",
          sweep->add_option("--point-budget", st.point_budget,
                            "seconds per point before the row is flagged"));

    CLI::App* reproduce =
        app.add_subcommand("reproduce", "canonical parameter presets");
    track(opts[reproduce], "figure_id",
          reproduce->add_option("figure", st.figure, "preset name, see --help"));
    add_io_flags(reproduce, st, opts[reproduce]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!st.config_path.empty())
            merge_all(opts[sub], nhlat::read_config(st.config_path), st);
        if (st.jobs <= 0) {
            const unsigned hc = std::thread::hardware_concurrency();
            st.jobs = hc > 0 ? static_cast<int>(hc) : 1;
        }

        const std::string name = sub->get_name();
        if (name == "spectrum") return run_spectrum(st);
        if (name == "modes") return run_modes(st);
        if (name == "winding") return run_winding(st);
        if (name == "evolve") return run_evolve(st);
        if (name == "decay") return run_decay(st);
        if (name == "sweep") return run_sweep(st);
        if (name == "reproduce") return run_reproduce(st);
        std::cerr << "error: unhandled subcommand " << name << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
