#pragma once

#include "nhlat/model.hpp"

namespace nhlat::detail {

// Superset lattice with independent NNN strengths per sublattice; the public
// model is the gamma_a == gamma_b slice.  Sublattice A gets +i*gamma_a on the
// forward NNN bond, sublattice B gets -i*gamma_b.
ComplexMatrix build_obc_hamiltonian_ab(const LatticeParams& p, double gamma_a,
                                       double gamma_b);

} // namespace nhlat::detail
