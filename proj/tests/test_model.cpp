#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nhlat/dynamics.hpp"
#include "nhlat/model.hpp"

using namespace nhlat;
using namespace std::complex_literals;

namespace {

std::vector<cdouble> sorted_by_real(std::vector<cdouble> v)
{
    std::sort(v.begin(), v.end(), [](const cdouble& a, const cdouble& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

std::vector<cdouble> eigenvalues_of(const Eigen::MatrixXcd& m)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    std::vector<cdouble> out(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
    return out;
}

} // namespace

TEST_CASE("site loss pattern alternates down each chain")
{
    LatticeParams p;
    p.n = 6;
    p.v = 1.1;
    CHECK(site_loss(p, 1) == doctest::Approx(1.1));
    CHECK(site_loss(p, 2) == 0.0);
    CHECK(site_loss(p, 3) == doctest::Approx(1.1));
    CHECK(site_loss(p, 4) == 0.0);
    CHECK(site_loss(p, 5) == doctest::Approx(1.1));
    CHECK(site_loss(p, 6) == 0.0);
}

TEST_CASE("open-chain Hamiltonian has the advertised couplings")
{
    LatticeParams p;
    p.n = 6;
    p.gamma = 0.7;
    p.delta = 0.3;
    p.v = 1.1;
    const ComplexMatrix h = build_obc_hamiltonian(p);
    REQUIRE(h.rows() == 12);
    REQUIRE(h.cols() == 12);

    // nearest neighbours on both chains
    CHECK(h(0, 1) == 1.0 + 0.0i);
    CHECK(h(1, 0) == 1.0 + 0.0i);
    CHECK(h(6, 7) == 1.0 + 0.0i);
    CHECK(h(10, 11) == 1.0 + 0.0i);

    // next-nearest hops are imaginary, antisymmetric in direction, and carry
    // the opposite sign on the second chain
    CHECK(h(0, 2) == 0.7i);
    CHECK(h(2, 0) == -0.7i);
    CHECK(h(6, 8) == -0.7i);
    CHECK(h(8, 6) == 0.7i);

    // rung coupling links site j of chain a to site j of chain b
    CHECK(h(0, 6) == 0.3 + 0.0i);
    CHECK(h(6, 0) == 0.3 + 0.0i);
    CHECK(h(5, 11) == 0.3 + 0.0i);
    CHECK(h(2, 7) == 0.0 + 0.0i);

    // loss sits on the odd sites of both chains
    CHECK(h(0, 0) == -1.1i);
    CHECK(h(1, 1) == 0.0 + 0.0i);
    CHECK(h(6, 6) == -1.1i);
    CHECK(h(11, 11) == 0.0 + 0.0i);

    // open ends: no wrap-around couplings
    CHECK(h(0, 5) == 0.0 + 0.0i);
    CHECK(h(0, 4) == 0.0 + 0.0i);
    CHECK(h(5, 7) == 0.0 + 0.0i);

    const cdouble tr = h.trace();
    CHECK(tr.real() == doctest::Approx(0.0));
    CHECK(tr.imag() == doctest::Approx(-1.1 * 6.0));
}

TEST_CASE("lossless decoupled chains reduce to the textbook open chain")
{
    LatticeParams p;
    p.n = 5;
    p.gamma = 0.0;
    p.delta = 0.0;
    p.v = 0.0;
    const auto eig = sorted_by_real(eigenvalues_of(build_obc_hamiltonian(p)));
    REQUIRE(eig.size() == 10);
    std::vector<double> expected;
    for (int m = 1; m <= 5; ++m) {
        expected.push_back(2.0 * std::cos(m * std::numbers::pi / 6.0));
        expected.push_back(2.0 * std::cos(m * std::numbers::pi / 6.0));
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < eig.size(); ++i) {
        CHECK(eig[i].real() == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(std::abs(eig[i].imag()) < 1e-12);
    }
}

TEST_CASE("momentum-space block matches the two-band dispersion when chains decouple")
{
    LatticeParams p;
    p.gamma = 0.45;
    p.delta = 0.0;
    p.v = 1.3;
    const double k = 0.7;
    const auto eig = sorted_by_real(eigenvalues_of(bloch_hamiltonian(k, p)));
    const DispersionPair fwd = pbc_dispersion(k, p.v, p.gamma);
    const DispersionPair bwd = pbc_dispersion(-k, p.v, p.gamma);
    const auto expected = sorted_by_real({fwd.minus, fwd.plus, bwd.minus, bwd.plus});
    REQUIRE(eig.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(eig[i] - expected[i]) < 1e-12);
}

TEST_CASE("dispersion branches touch at k = 0 when the loss hits its critical value")
{
    const DispersionPair d = pbc_dispersion(0.0, 4.0, 0.5);
    CHECK(d.plus == d.minus);
    CHECK(d.plus == cdouble(0.0, -2.0));
}

TEST_CASE("dispersion is purely real without loss")
{
    for (int i = 0; i <= 400; ++i) {
        const double k = -std::numbers::pi + i * (2.0 * std::numbers::pi / 400.0);
        const DispersionPair d = pbc_dispersion(k, 0.0, 0.5);
        CHECK(d.minus.imag() == 0.0);
        CHECK(d.plus.imag() == 0.0);
    }
}

TEST_CASE("the square root keeps its sign at the band-touching momenta")
{
    // with v = 2*sqrt(2) the radicand vanishes at k = +-pi/2; the factored
    // form must not leak a spurious imaginary part there
    const double v = 2.0 * std::sqrt(2.0);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double k = -std::numbers::pi / 2.0 + i * (std::numbers::pi / 2000.0);
        worst = std::max(worst, std::abs(pbc_dispersion(k, v, 0.5).plus.imag() + v / 2.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("initial state splits one site across both chains")
{
    LatticeParams p;
    p.n = 8;
    const ComplexVector psi = initial_state(p, 4);
    REQUIRE(psi.size() == 16);
    CHECK(std::abs(psi(3) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(psi(11) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    double off = 0.0;
    for (int i = 0; i < 16; ++i)
        if (i != 3 && i != 11)
            off += std::abs(psi(i));
    CHECK(off == 0.0);
}

TEST_CASE("parameter validation rejects unusable values")
{
    LatticeParams p;
    p.n = 3;
    CHECK_THROWS_WITH_AS(validate(p), "n must be at least 4, got 3", std::invalid_argument);
    p.n = 61;
    p.v = -1.0;
    CHECK_THROWS_WITH_AS(validate(p), "v must be nonnegative, got -1.000000",
                         std::invalid_argument);
    p.v = 4.0;
    p.gamma = std::nan("");
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p.gamma = 0.5;
    CHECK_NOTHROW(validate(p));
}
