#include "nhlat/spectral.hpp"

#include "nhlat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef NHLAT_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace nhlat {

namespace {

constexpr cdouble kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Residual bound of the eigendecomposition contract, relative to ||H||_F.
constexpr double kResidualBound = 1e-8;

struct RawEig {
    ComplexVector values;
    ComplexMatrix vectors;
};

#ifdef NHLAT_HAVE_LAPACKE
RawEig eig_lapack(ComplexMatrix a)
{
    const int n = static_cast<int>(a.rows());
    ComplexVector w(n);
    ComplexMatrix vr(n, n);
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n,
                                   w.data(), nullptr, 1, vr.data(), n);
    if (info != 0)
        throw ComputeError("eigensolver failed (zgeev info=" + std::to_string(info) +
                           ") for dimension " + std::to_string(n));
    return {std::move(w), std::move(vr)};
}
#else
RawEig eig_eigen(const ComplexMatrix& a)
{
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
    if (solver.info() != Eigen::Success)
        throw ComputeError("eigensolver failed to converge for dimension " +
                           std::to_string(a.rows()));
    return {solver.eigenvalues(), solver.eigenvectors()};
}
#endif

} // namespace

SpectrumResult diagonalize(const ComplexMatrix& h, const LatticeParams& p,
                           Boundary boundary)
{
    if (h.rows() != h.cols() || h.rows() == 0)
        throw std::invalid_argument("diagonalize needs a nonempty square matrix");

#ifdef NHLAT_HAVE_LAPACKE
    RawEig raw = eig_lapack(h);
#else
    RawEig raw = eig_eigen(h);
#endif

    const int n = static_cast<int>(h.rows());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const cdouble ea = raw.values[a], eb = raw.values[b];
        if (ea.imag() != eb.imag())
            return ea.imag() > eb.imag();
        return ea.real() < eb.real();
    });

    SpectrumResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.eigenvalues[i] = raw.values[order[i]];
        ComplexVector v = raw.vectors.col(order[i]);
        v /= v.norm();
        // phase convention: largest-magnitude component real and positive
        int peak = 0;
        double best = -1.0;
        for (int j = 0; j < n; ++j) {
            const double m = std::norm(v[j]);
            if (m > best + 1e-30) {
                best = m;
                peak = j;
            }
        }
        const double mag = std::abs(v[peak]);
        if (mag > 0.0)
            v *= std::conj(v[peak]) / mag;
        out.eigenvectors.col(i) = v;
    }

    out.h_norm = h.norm();
    const ComplexMatrix resid =
        h * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
    out.max_residual = resid.colwise().norm().maxCoeff();
    if (out.max_residual > kResidualBound * out.h_norm)
        throw ComputeError("eigendecomposition residual " +
                           std::to_string(out.max_residual) + " exceeds bound for ||H||=" +
                           std::to_string(out.h_norm) + ", dimension " + std::to_string(n));

    out.params = p;
    out.boundary = boundary;
    return out;
}

WindingResult winding_number(cdouble e0, double v, double gamma, int k_samples,
                             Branch branch)
{
    if (k_samples < 1000)
        throw std::invalid_argument("k_samples must be >= 1000, got " +
                                    std::to_string(k_samples));

    const int m = k_samples;
    std::vector<cdouble> e(m);
    for (int i = 0; i < m; ++i) {
        const double k = -kPi + 2.0 * kPi * i / (m - 1);
        const DispersionPair d = pbc_dispersion(k, v, gamma);
        e[i] = (branch == Branch::upper) ? d.plus : d.minus;
    }
    e[m - 1] = e[0]; // close the polyline exactly

    double min_dist = std::numeric_limits<double>::infinity();
    for (const cdouble& z : e)
        min_dist = std::min(min_dist, std::abs(z - e0));
    if (min_dist < 1e-9)
        throw ComputeError("winding base point lies on the sampled curve "
                           "(closest approach " + std::to_string(min_dist) + ")");

    double total = 0.0;
    for (int i = 0; i + 1 < m; ++i)
        total += std::arg((e[i + 1] - e0) / (e[i] - e0));

    WindingResult out;
    out.raw = total / (2.0 * kPi);
    out.nu = static_cast<int>(std::lround(out.raw));
    out.residual = std::abs(out.raw - out.nu);
    out.min_distance = min_dist;
    if (out.residual > 1e-3)
        throw ComputeError("non-integer winding: accumulated value " +
                           std::to_string(out.raw) + " is not within 1e-3 of an integer");
    return out;
}

namespace {

// Track the four Bloch bands through the zone by nearest-set continuation, so
// each polyline is a smooth band rather than an Im-sorted zigzag.
std::array<Polyline, 4> track_bands(double v, double gamma, double delta,
                                    int k_samples)
{
    LatticeParams p{4, gamma, delta, v};
    std::array<Polyline, 4> bands;
    for (auto& b : bands)
        b.reserve(k_samples);

    Eigen::Vector4cd prev;
    for (int i = 0; i < k_samples; ++i) {
        const double k = -kPi + 2.0 * kPi * i / (k_samples - 1);
        Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(bloch_hamiltonian(k, p),
                                                           false);
        Eigen::Vector4cd ev = solver.eigenvalues();
        if (i == 0) {
            std::array<int, 4> idx{0, 1, 2, 3};
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                if (ev[a].imag() != ev[b].imag())
                    return ev[a].imag() < ev[b].imag();
                return ev[a].real() < ev[b].real();
            });
            for (int b = 0; b < 4; ++b)
                prev[b] = ev[idx[b]];
        } else {
            // best assignment of the 4 new values to the 4 tracked bands
            std::array<int, 4> perm{0, 1, 2, 3};
            std::array<int, 4> best = perm;
            double best_cost = std::numeric_limits<double>::infinity();
            std::sort(perm.begin(), perm.end());
            do {
                double cost = 0.0;
                for (int b = 0; b < 4; ++b)
                    cost += std::abs(ev[perm[b]] - prev[b]);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = perm;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            Eigen::Vector4cd next;
            for (int b = 0; b < 4; ++b)
                next[b] = ev[best[b]];
            prev = next;
        }
        for (int b = 0; b < 4; ++b)
            bands[b].push_back(prev[b]);
    }
    for (auto& b : bands)
        b.back() = b.front();
    return bands;
}

} // namespace

LoopGeometry loop_geometry(double v, double gamma, double delta, int k_samples)
{
    if (k_samples < 1000)
        throw std::invalid_argument("k_samples must be >= 1000, got " +
                                    std::to_string(k_samples));
    if (v < 0.0)
        throw std::invalid_argument("v must be nonnegative");

    LoopGeometry out;
    out.v = v;
    out.gamma = gamma;
    out.delta = delta;
    out.k_samples = k_samples;

    if (delta == 0.0) {
        Polyline up(k_samples), lo(k_samples);
        for (int i = 0; i < k_samples; ++i) {
            const double k = -kPi + 2.0 * kPi * i / (k_samples - 1);
            const DispersionPair d = pbc_dispersion(k, v, gamma);
            up[i] = d.plus;
            lo[i] = d.minus;
        }
        up.back() = up.front();
        lo.back() = lo.front();
        out.upper.push_back(std::move(up));
        out.lower.push_back(std::move(lo));
    } else {
        auto bands = track_bands(v, gamma, delta, k_samples);
        std::array<double, 4> mean_im{};
        std::array<int, 4> idx{0, 1, 2, 3};
        for (int b = 0; b < 4; ++b) {
            double s = 0.0;
            for (const cdouble& z : bands[b])
                s += z.imag();
            mean_im[b] = s / bands[b].size();
        }
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return mean_im[a] < mean_im[b]; });
        out.lower.push_back(std::move(bands[idx[0]]));
        out.lower.push_back(std::move(bands[idx[1]]));
        out.upper.push_back(std::move(bands[idx[2]]));
        out.upper.push_back(std::move(bands[idx[3]]));
    }

    // Degenerate-line detection on the analytic branches: both land on the
    // Im = -v/2 line exactly where the branch splitting is real.
    bool any = false;
    double k_lo = 0.0, k_hi = 0.0;
    double re_lo = std::numeric_limits<double>::infinity();
    double re_hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k_samples; ++i) {
        const double k = -kPi + 2.0 * kPi * i / (k_samples - 1);
        const DispersionPair d = pbc_dispersion(k, v, gamma);
        if (std::abs((d.plus - d.minus).imag()) < 1e-9) {
            if (!any) {
                k_lo = k;
                any = true;
            }
            k_hi = k;
            re_lo = std::min({re_lo, d.plus.real(), d.minus.real()});
            re_hi = std::max({re_hi, d.plus.real(), d.minus.real()});
        }
    }
    if (any) {
        out.bloch.present = true;
        out.bloch.k_min = k_lo;
        out.bloch.k_max = k_hi;
        out.bloch.k_length = k_hi - k_lo;
        out.bloch.e_min = {re_lo, -v / 2.0};
        out.bloch.e_max = {re_hi, -v / 2.0};
        out.bloch.e_length = re_hi - re_lo;
    }
    return out;
}

namespace {

double point_to_segment(cdouble p, cdouble a, cdouble b)
{
    const cdouble ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0)
        return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double min_edge_distance(cdouble p, const Polyline& poly)
{
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < poly.size(); ++i)
        best = std::min(best, point_to_segment(p, poly[i], poly[i + 1]));
    return best;
}

// even-odd crossing test with a ray along +Re
bool point_in_polyline(cdouble p, const Polyline& poly)
{
    bool inside = false;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        const cdouble a = poly[i], b = poly[i + 1];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x =
                a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (x > p.real())
                inside = !inside;
        }
    }
    return inside;
}

bool inside_any(cdouble p, const std::vector<Polyline>& polys)
{
    for (const auto& poly : polys)
        if (point_in_polyline(p, poly))
            return true;
    return false;
}

double edge_distance_any(cdouble p, const std::vector<Polyline>& polys)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& poly : polys)
        best = std::min(best, min_edge_distance(p, poly));
    return best;
}

} // namespace

const char* to_string(StateLabel label)
{
    switch (label) {
    case StateLabel::skin: return "skin";
    case StateLabel::extended: return "extended";
    case StateLabel::sfl: return "sfl";
    case StateLabel::bulk_extended_by_size: return "bulk-extended-by-size";
    case StateLabel::boundary_ambiguous: return "boundary-ambiguous";
    }
    return "?";
}

const char* to_string(Side side)
{
    switch (side) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::none: return "none";
    }
    return "?";
}

std::vector<StateClass> classify_states(const SpectrumResult& s,
                                        const LoopGeometry& loops, double snap_tol)
{
    const int two_n = static_cast<int>(s.eigenvalues.size());
    const int n = two_n / 2;
    if (2 * n != two_n || n != s.params.n)
        throw std::invalid_argument("spectrum size does not match params.n");

    std::vector<StateClass> out(two_n);
    for (int i = 0; i < two_n; ++i) {
        StateClass& c = out[i];
        const cdouble e = s.eigenvalues[i];

        double wa = 0.0, wb = 0.0, ja = 0.0, jb = 0.0;
        for (int j = 0; j < n; ++j) {
            const double da = std::norm(s.eigenvectors(j, i));
            const double db = std::norm(s.eigenvectors(n + j, i));
            wa += da;
            wb += db;
            ja += (j + 1) * da;
            jb += (j + 1) * db;
        }
        c.com_ratio = (ja + jb) / n;
        const double mid = n / 2.0;
        c.side_a = wa < 1e-12 ? Side::none : (ja / wa < mid ? Side::left : Side::right);
        c.side_b = wb < 1e-12 ? Side::none : (jb / wb < mid ? Side::left : Side::right);

        const bool near_line =
            loops.bloch.present &&
            point_to_segment(e, loops.bloch.e_min, loops.bloch.e_max) <= snap_tol;
        if (near_line) {
            c.label = StateLabel::extended;
            continue;
        }
        const double edge_dist = std::min(edge_distance_any(e, loops.upper),
                                          edge_distance_any(e, loops.lower));
        if (edge_dist <= snap_tol) {
            c.label = StateLabel::boundary_ambiguous;
            continue;
        }
        if (inside_any(e, loops.upper) || inside_any(e, loops.lower))
            c.label = s.params.delta == 0.0 ? StateLabel::skin : StateLabel::sfl;
        else
            c.label = StateLabel::bulk_extended_by_size;
    }
    return out;
}

std::vector<ScalingPoint> sfl_scaling(const LatticeParams& base,
                                      const std::vector<int>& n_values,
                                      ModeSelector sel)
{
    std::vector<ScalingPoint> out;
    out.reserve(n_values.size());
    for (int n : n_values) {
        LatticeParams p = base;
        p.n = n;
        const SpectrumResult s = diagonalize(build_obc_hamiltonian(p), p, Boundary::obc);

        int pick = 0;
        for (int i = 1; i < s.eigenvalues.size(); ++i) {
            const cdouble a = s.eigenvalues[i], b = s.eigenvalues[pick];
            const double ka = sel == ModeSelector::lowest_im ? a.imag() : std::abs(a.imag());
            const double kb = sel == ModeSelector::lowest_im ? b.imag() : std::abs(b.imag());
            if (ka < kb || (ka == kb && a.real() < b.real()))
                pick = i;
        }

        double com = 0.0;
        for (int j = 0; j < n; ++j)
            com += (j + 1) * (std::norm(s.eigenvectors(j, pick)) +
                              std::norm(s.eigenvectors(n + j, pick)));
        out.push_back({n, com / n, s.eigenvalues[pick]});
    }
    return out;
}

double obc_to_pbc_distance(const SpectrumResult& s, const LoopGeometry& loops)
{
    std::vector<const Polyline*> polys;
    for (const auto& p : loops.upper)
        polys.push_back(&p);
    for (const auto& p : loops.lower)
        polys.push_back(&p);
    double worst = 0.0;
    for (int i = 0; i < s.eigenvalues.size(); ++i) {
        const cdouble e = s.eigenvalues[i];
        double best = std::numeric_limits<double>::infinity();
        for (const Polyline* poly : polys)
            for (const cdouble& z : *poly)
                best = std::min(best, std::abs(e - z));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace nhlat
