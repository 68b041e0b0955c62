#pragma once

#include "emacreg/analytic.hpp"
#include "emacreg/schemes.hpp"

#include <optional>

namespace emacreg {

// Per-time-step conserved quantities, norms, and optional errors against an
// analytic solution.
struct DiagnosticsRecord {
  Scalar t = 0;
  Scalar energy_model = 0;    // (u, w) / 2
  Scalar energy_kinetic = 0;  // |u|^2 / 2
  Vec2 momentum = Vec2::Zero();
  Scalar ang_momentum = 0;  // (u, (y, -x)), the planar component
  Scalar enstrophy = 0;     // |curl u|^2 / 2
  Scalar div_u_norm = 0, div_w_norm = 0;
  std::optional<Scalar> err_l2_u, err_l2_w, err_h1_w;
};

struct ConservedQuantities {
  Scalar energy = 0;
  Vec2 momentum = Vec2::Zero();
  Scalar ang_momentum = 0;
};

// Exact-quadrature evaluation of (u,w)/2, integral of u, and (u, (y,-x)).
ConservedQuantities conserved_quantities(const State& s);

DiagnosticsRecord make_record(const State& s, const AnalyticSolution* exact = nullptr);

// ---- momentum balance probes --------------------------------------------

enum class ProbeTest { E1, E2, Phi };
const char* to_string(ProbeTest t);

// Value of the nonlinear form on (w, u) tested against the interior
// extension of e_i or phi = (y, -x): the form's contribution to the momentum
// balance. Fields must be supported in the open square (0.25, 0.75)^2 inside
// the unit square (the extension rolls off in the remaining strip);
// violations raise std::invalid_argument. For the self-coupled EMAC form the
// probe evaluates c(w, w, chi).
Scalar momentum_probe(NonlinearKind kind, const Field& w, const Field& u,
                      ProbeTest test);

// Same quantity through the integrated-by-parts closed forms, by direct
// order-8 quadrature of the discrete fields. Independent route used to
// cross-check momentum_probe:
//   Emac       -> 0
//   Conv/Leray -> -((div w) u, g)
//   Skew       -> -((div w) u, g) / 2
//   Rot        -> -((div w) g, u) + (g . grad w, u)
Scalar momentum_probe_closed_form(NonlinearKind kind, const Field& w, const Field& u,
                                  ProbeTest test);

// Reference non-solenoidal compact pair for the probe table: w = (b, s b_y)
// with a quartic bump b on the probe subdomain and u = gain * w.
std::pair<Field, Field> designed_probe_pair(const FeSpace& space, Scalar gain = 1.25,
                                            Scalar s = 0.5);

}  // namespace emacreg
