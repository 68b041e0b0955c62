#pragma once

#include "emacreg/femspace.hpp"
#include "emacreg/linalg.hpp"

namespace emacreg {

// All nonlinear forms are integrated with this order so the algebraic
// identities between them hold at machine precision for P2 fields.
inline constexpr int kFormQuadOrder = 6;
inline constexpr int kErrorQuadOrder = 8;

// Convective form N(a, b; v) tested against velocity test functions v:
//   Emac:  2 (D(a) b, v) + ((div a) b, v),  D(a) = (grad a + grad a^T)/2
//   Skew:  (a . grad b, v) + ((div a) b, v) / 2
//   Conv:  (a . grad b, v)
//   Rot:   ((curl b) x a, v) with the scalar 2D curl, (curl b) x a = w (-a2, a1)
//   Leray: (a . grad b, v) with a the filtered field
enum class NonlinearKind { Emac, Skew, Conv, Rot, Leray };

const char* to_string(NonlinearKind k);

enum class JacSlot { First, Second, Both };

SpMat assemble_mass(const FeSpace& space);
SpMat assemble_stiffness(const FeSpace& space);

// Entry (q, j) = integral of psi_q * div(phi_j) over the mesh; Taylor-Hood
// pairing (P2 vector velocity, P1 scalar pressure on the same mesh).
SpMat assemble_divergence(const FeSpace& vel, const FeSpace& pres);

// (f, phi_i) for a vector-valued forcing; zero function allowed.
VecX assemble_load(const FeSpace& space, const VectorFn& f, Scalar t);

// g_q = integral of psi_q; pairs a scalar coefficient vector with its mean.
VecX integral_vector(const FeSpace& space);

// Residual vector r_i = N(a, b; phi_i) over the velocity test space.
VecX apply_nonlinear(NonlinearKind kind, const Field& a, const Field& b);

// J such that J*delta is the directional derivative of apply_nonlinear in the
// chosen slot(s); Both differentiates a and b simultaneously (a = b case).
SpMat assemble_nonlinear_jacobian(NonlinearKind kind, const Field& a, const Field& b,
                                  JacSlot slot = JacSlot::Both);

// ---- field integrals ----------------------------------------------------

Scalar l2_norm(const Field& f);
Scalar h1_seminorm(const Field& f);
Scalar divergence_l2(const Field& f);
Scalar enstrophy(const Field& f);  // 0.5 * ||curl u||^2

Scalar l2_error(const Field& f, const VectorFn& exact, Scalar t,
                int quad_order = kErrorQuadOrder);
Scalar h1_semi_error(const Field& f, const TensorFn& exact_grad, Scalar t,
                     int quad_order = kErrorQuadOrder);

// L2 inner product of two fields on the same space.
Scalar inner_product(const Field& a, const Field& b);

}  // namespace emacreg
