#pragma once

#include "omitsim/model.hpp"

namespace omitsim {

/// Which atom contribution enters the continued fraction.
///  - None: ignore the atom entirely.
///  - FullEq14: the published closed-form term, transcribed verbatim
///    (including its internal symbol drift); not guaranteed to match the
///    direct sideband solve away from the default populations.
///  - Reduced: adiabatic elimination of the three sideband atom rows;
///    provably identical to the direct solve at the default populations.
enum class AtomTermVariant { None, FullEq14, Reduced };

/// Cavity line of the continued fraction:
/// B_j = kappa_j - i*x + |G_m|^2/(gamma_m - i*x).
cplx b_term(const CavityParams& cavity, double x);

/// The published atom term A with P, Q exactly as printed.
cplx atom_term_full(const AtomParams& atom, const DetuningSet& det);

/// A_red = g^2 / (gamma_ge - i*x + Omega^2/(gamma_gr - i*x_gr
///          + G_e^2/(gamma_er - i*x_er))).
/// Requires the default steady state (pop_gg = 1, zero coherences).
cplx atom_term_reduced(const AtomParams& atom, const DetuningSet& det);

/// Continued-fraction output field, evaluated bottom-up (D_1 .. D_N) with the
/// atom term added on the atom cavity's line. Normalized so that it agrees
/// with the input-output definition at any eps_p.
OutputField eps_t_cf(const ChainModel& model, double delta,
                     AtomTermVariant variant);

}  // namespace omitsim
