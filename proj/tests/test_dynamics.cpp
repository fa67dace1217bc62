#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nhlat/dynamics.hpp"
#include "nhlat/model.hpp"

using namespace nhlat;

namespace {

// the reference run used throughout: 61 sites per chain, start on site 30
EvolutionSpec reference_spec()
{
    EvolutionSpec spec;
    spec.params.n = 61;
    spec.start_site = 30;
    return spec;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

TEST_CASE("evolution spec validation")
{
    EvolutionSpec spec = reference_spec();
    CHECK_NOTHROW(validate(spec));

    spec.start_site = 31;
    CHECK_THROWS_WITH_AS(validate(spec),
                         "start_site must be an even (lossless) site, got 31",
                         std::invalid_argument);
    spec.start_site = 0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.start_site = 62;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = reference_spec();
    spec.sampling_dt = 0.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec = reference_spec();
    spec.tail_epsilon = -1.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec = reference_spec();
    spec.t_cap = 0.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("lossless evolution conserves power")
{
    EvolutionSpec spec = reference_spec();
    spec.params.v = 0.0;
    spec.t_max = 5.0;
    const Trajectory tr = evolve(spec);
    for (std::size_t i = 0; i < tr.power.size(); ++i) {
        CHECK(std::abs(tr.power[i] - 1.0) < 1e-9);
        CHECK(tr.loss_power[i] == 0.0);
    }
    CHECK(power_balance_defect(tr, spec.params) < 1e-11);
}

TEST_CASE("power only ever decreases under loss")
{
    EvolutionSpec spec = reference_spec();
    spec.t_max = 20.0;
    const Trajectory tr = evolve(spec);
    CHECK(tr.power.front() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i + 1 < tr.power.size(); ++i)
        CHECK(tr.power[i + 1] <= tr.power[i] + 1e-12);
}

TEST_CASE("fixed-horizon sampling lands on the requested grid")
{
    EvolutionSpec spec = reference_spec();
    spec.t_max = 5.0;
    const Trajectory tr = evolve(spec);
    REQUIRE(tr.times.size() == 501);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times[1] == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(tr.times.back() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(tr.states.empty());
}

TEST_CASE("auto horizon stops at the requested tail")
{
    EvolutionSpec spec = reference_spec();
    const Trajectory tr = evolve(spec);
    REQUIRE(tr.power.size() > 2);
    CHECK(tr.power.back() < spec.tail_epsilon);
    CHECK(tr.power[tr.power.size() - 2] >= spec.tail_epsilon);
    CHECK(tr.times.back() == doctest::Approx(140.61).epsilon(1e-2));

    spec.tail_epsilon = 1e-8;
    const Trajectory deeper = evolve(spec);
    CHECK(deeper.power.back() < 1e-8);
    CHECK(deeper.times.back() == doctest::Approx(198.08).epsilon(1e-2));
}

TEST_CASE("auto horizon reports a hard-cap overrun")
{
    EvolutionSpec spec = reference_spec();
    spec.t_cap = 1.0;
    try {
        evolve(spec);
        FAIL("expected ComputeError");
    } catch (const ComputeError& e) {
        CHECK(std::string(e.what()).starts_with("auto horizon did not converge"));
    }
}

TEST_CASE("adaptive integrator reproduces the propagator")
{
    EvolutionSpec spec = reference_spec();
    spec.t_max = 5.0;
    spec.store_states = true;
    const Trajectory a = evolve(spec);
    const Trajectory b = evolve_rk(spec);
    REQUIRE(a.states.size() == b.states.size());
    REQUIRE(!a.states.empty());

    double worst = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i)
        worst = std::max(worst, (a.states[i] - b.states[i]).norm());
    CHECK(worst < 1e-7);
    CHECK(max_abs_diff(a.power, b.power) < 1e-9);
}

TEST_CASE("instantaneous power balance closes at second order in the sample step")
{
    EvolutionSpec spec = reference_spec();
    spec.t_max = 5.0;
    const double coarse = power_balance_defect(evolve(spec), spec.params);
    CHECK(coarse == doctest::Approx(4.721852e-4).epsilon(0.01));

    spec.sampling_dt = 0.005;
    const double fine = power_balance_defect(evolve(spec), spec.params);
    CHECK(fine == doctest::Approx(1.255141e-4).epsilon(0.01));
    CHECK(coarse / fine == doctest::Approx(3.76).epsilon(0.1));

    // an independent integrator sees the same sampling-limited defect
    spec.sampling_dt = 0.01;
    const double rk = power_balance_defect(evolve_rk(spec), spec.params);
    CHECK(std::abs(rk - coarse) / coarse < 0.1);
}

TEST_CASE("dissipated-power profile of the reference run")
{
    const DecayProfile prof = decay_profile(reference_spec());
    REQUIRE(prof.p_a.size() == 61);
    REQUIRE(prof.p_b.size() == 61);
    CHECK_FALSE(prof.used_quadrature);
    CHECK(prof.start_site == 30);

    // nothing dissipates on the lossless even sites
    for (int j = 2; j <= 61; j += 2) {
        CHECK(prof.p_a[j - 1] == 0.0);
        CHECK(prof.p_b[j - 1] == 0.0);
    }

    double total = prof.residual;
    for (int j = 0; j < 61; ++j)
        total += prof.p_a[j] + prof.p_b[j];
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(prof.residual < 1e-12);

    // the bulk of the power dissipates next to the start site
    CHECK(prof.p_a[28] == doctest::Approx(0.239027).epsilon(1e-4));
    CHECK(prof.p_a[30] == doctest::Approx(0.074283).epsilon(1e-4));
    CHECK(prof.p_b[28] == doctest::Approx(0.074282).epsilon(1e-4));
    CHECK(prof.p_b[30] == doctest::Approx(0.239026).epsilon(1e-4));

    // and a burst reappears at one far edge of each chain
    CHECK(prof.p_a[60] == doctest::Approx(0.038825575213480866).epsilon(1e-6));
    CHECK(prof.p_b[0] == doctest::Approx(0.040462123205272205).epsilon(1e-6));
    CHECK(prof.p_a[0] == doctest::Approx(1.5400201347191611e-4).epsilon(1e-6));
    CHECK(prof.p_b[60] == doctest::Approx(1.4801337376058729e-4).epsilon(1e-6));
    CHECK(prof.p_a[0] < 1e-3);
    CHECK(prof.p_b[60] < 1e-3);

    CHECK(prof.p_min_a == doctest::Approx(0.0012802119966959483).epsilon(1e-6));
    CHECK(prof.p_min_b == doctest::Approx(0.0014443101703406473).epsilon(1e-6));
    CHECK(prof.argmin_a == 57);
    CHECK(prof.argmin_b == 5);
    CHECK(prof.ratio_a == doctest::Approx(30.327457728630).epsilon(1e-6));
    CHECK(prof.ratio_b == doctest::Approx(28.014843373795).epsilon(1e-6));
    CHECK(prof.ratio_a > 10.0);
    CHECK(prof.ratio_b > 10.0);
}

TEST_CASE("swapping chains and reflecting the lattice is an exact symmetry")
{
    // the model maps (chain a, site j) to (chain b, site n+1-j), which also
    // carries the start site along; profiles of the two runs must coincide
    const DecayProfile at30 = decay_profile(reference_spec());
    EvolutionSpec mirrored = reference_spec();
    mirrored.start_site = 32;
    const DecayProfile at32 = decay_profile(mirrored);

    double worst = 0.0;
    for (int j = 1; j <= 61; ++j) {
        worst = std::max(worst, std::abs(at30.p_b[j - 1] - at32.p_a[61 - j]));
        worst = std::max(worst, std::abs(at30.p_a[j - 1] - at32.p_b[61 - j]));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("the two chain profiles mirror about the start site, not the lattice center")
{
    const DecayProfile prof = decay_profile(reference_spec());

    // reflecting about the center misses by the source offset
    double center = 0.0;
    for (int j = 1; j <= 61; ++j)
        center = std::max(center, std::abs(prof.p_a[61 - j] - prof.p_b[j - 1]));
    CHECK(center == doctest::Approx(0.209248).epsilon(5e-3));

    // reflecting about the start site lines the bulk up
    double source = 0.0;
    for (int j = 1; j <= 61; ++j) {
        const int m = 2 * 30 - j;
        if (m < 1 || m > 61)
            continue;
        source = std::max(source, std::abs(prof.p_a[m - 1] - prof.p_b[j - 1]));
    }
    CHECK(source == doctest::Approx(0.028041).epsilon(5e-3));
    CHECK(source < 0.05);
}

TEST_CASE("quadrature profile agrees with the closed form")
{
    EvolutionSpec spec = reference_spec();
    spec.tail_epsilon = 1e-8;
    const DecayProfile closed = decay_profile(spec);
    const DecayProfile quad = decay_profile_quadrature(spec);
    CHECK(quad.used_quadrature);

    CHECK(max_abs_diff(closed.p_a, quad.p_a) < 1e-6);
    CHECK(max_abs_diff(closed.p_b, quad.p_b) < 1e-6);

    double total = quad.residual;
    for (int j = 0; j < 61; ++j)
        total += quad.p_a[j] + quad.p_b[j];
    CHECK(std::abs(total - 1.0) < 1e-8);
}

TEST_CASE("decoupled chains fall back to quadrature and keep the sum rule")
{
    EvolutionSpec spec = reference_spec();
    spec.params.delta = 0.0;
    const DecayProfile prof = decay_profile(spec);
    CHECK(prof.used_quadrature);
    CHECK(prof.residual < 1.1 * spec.tail_epsilon);

    double total = prof.residual;
    for (int j = 0; j < 61; ++j)
        total += prof.p_a[j] + prof.p_b[j];
    CHECK(std::abs(total - 1.0) < 1e-8);
}

TEST_CASE("no loss means no dissipated-power profile")
{
    EvolutionSpec spec = reference_spec();
    spec.params.v = 0.0;
    CHECK_THROWS_WITH_AS(decay_profile(spec),
                         "no decay: v = 0 leaves the total power constant",
                         ComputeError);
}

TEST_CASE("burst vanishes when the chains lose their internal current")
{
    EvolutionSpec spec = reference_spec();
    spec.params.gamma = 0.0;
    const DecayProfile prof = decay_profile(spec);
    CHECK(prof.p_a[60] == doctest::Approx(1.045567519e-3).epsilon(1e-5));
    double asym = 0.0;
    for (int j = 0; j < 61; ++j)
        asym = std::max(asym, std::abs(prof.p_a[j] - prof.p_b[j]));
    CHECK(asym < 1e-12);

    // a start site equidistant from both ends keeps the tiny edge weight
    // below the burst scale outright
    EvolutionSpec centered = spec;
    centered.params.n = 67;
    centered.start_site = 34;
    const DecayProfile flat = decay_profile(centered);
    CHECK(flat.p_a[66] == doctest::Approx(9.460452e-4).epsilon(1e-5));
    CHECK(flat.p_a[66] < 1e-3);
}

TEST_CASE("flipping the current sign on both chains swaps their roles")
{
    const SymmetryReport rep = symmetry_probe(reference_spec(),
                                              SymmetryVariant::flip_gamma_both);
    CHECK(rep.profile_diff_ab < 1e-10);
    CHECK(rep.profile_diff_ba < 1e-10);
}

TEST_CASE("matching current signs lock the two chains together")
{
    const SymmetryReport rep = symmetry_probe(reference_spec(),
                                              SymmetryVariant::flip_gamma_b_only);
    CHECK(rep.state_diff < 1e-10);
    CHECK(rep.profile_diff_ab < 1e-10);
}

TEST_CASE("a currentless decoupled second chain decays symmetrically")
{
    EvolutionSpec spec = reference_spec();
    spec.params.n = 59;
    spec.params.delta = 0.0;
    const SymmetryReport rep = symmetry_probe(spec, SymmetryVariant::zero_gamma_b_only);
    CHECK(rep.asymmetry_b < 1e-8);
    CHECK(rep.ratio_a > 10.0);
    CHECK(rep.ratio_a == doctest::Approx(28.60).epsilon(5e-3));

    // with the rung coupling on, chain a leaks a little of its asymmetry in
    const SymmetryReport leaky = symmetry_probe(reference_spec(),
                                                SymmetryVariant::zero_gamma_b_only);
    CHECK(leaky.asymmetry_b > 1e-3);
    CHECK(leaky.asymmetry_b < 1e-2);
    CHECK(leaky.ratio_a > 10.0);
}
