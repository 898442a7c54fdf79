#pragma once

/// @file assembly.hpp
/// @brief Mass-lumped finite element operators on a discrete closed curve:
///        lumped masses, stiffness, transport, and load vectors, plus the
///        cyclic tridiagonal containers they assemble into.

#include <functional>
#include <vector>

#include "csflow/geometry.hpp"

namespace csflow {

struct Mat2 {
    // row-major: [[xx, xy], [yx, yy]]
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 outer(Vec2 a, Vec2 b) {
        return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
    }

    constexpr Mat2 operator+(Mat2 o) const {
        return {xx + o.xx, xy + o.xy, yx + o.yx, yy + o.yy};
    }
    constexpr Mat2 operator-(Mat2 o) const {
        return {xx - o.xx, xy - o.xy, yx - o.yx, yy - o.yy};
    }
    constexpr Mat2 operator*(double s) const { return {xx * s, xy * s, yx * s, yy * s}; }
    constexpr Vec2 operator*(Vec2 v) const {
        return {xx * v.x + xy * v.y, yx * v.x + yy * v.y};
    }
    constexpr Mat2 operator*(Mat2 o) const {
        return {xx * o.xx + xy * o.yx, xx * o.xy + xy * o.yy,
                yx * o.xx + yy * o.yx, yx * o.xy + yy * o.yy};
    }
    Mat2& operator+=(Mat2 o) { xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy; return *this; }

    constexpr double det() const { return xx * yy - xy * yx; }
    double max_abs() const;
};

inline constexpr Mat2 operator*(double s, Mat2 m) { return m * s; }

/// Periodic tridiagonal matrix. Row i couples the unknowns at nodes
/// i-1, i, i+1 (indices mod size); sub[0] and sup[size-1] are the
/// wrap-around corner entries.
struct CyclicTridiagonal {
    std::vector<double> sub, diag, sup;

    int size() const { return static_cast<int>(diag.size()); }
    std::vector<double> apply(const std::vector<double>& x) const;
};

/// Periodic block tridiagonal matrix with 2x2 blocks, same layout as
/// CyclicTridiagonal.
struct BlockCyclicTridiagonal {
    std::vector<Mat2> sub, diag, sup;

    int size() const { return static_cast<int>(diag.size()); }
    std::vector<Vec2> apply(const std::vector<Vec2>& x) const;
};

/// Velocity data of one time step, element by element. An element carries
/// the velocity of each of its two endpoint nodes projected onto its own
/// frame; values are never averaged across the element boundary.
struct VelocityFields {
    std::vector<double> normal_left, normal_right;          // V at left/right node
    std::vector<double> tangential_left, tangential_right;  // Psi at left/right node

    int size() const { return static_cast<int>(normal_left.size()); }
    double max_tangential() const;
};

using ScalarFn = std::function<double(double)>;              // f(w)
using ReactionFn = std::function<double(double, double)>;    // g(v, w)
using CurveSourceFn = std::function<Vec2(double, double)>;   // S(rho, t)
using ScalarSourceFn = std::function<double(double, double)>;  // S_w(rho, t)

/// Lumped mass of the weighted product (q eta1, eta2)^h:
/// m_i = (h_l q_l + h_r q_r) / 2 over the two elements meeting at node i.
std::vector<double> lumped_scalar_mass(const PeriodicMesh& mesh, const ElementFrame& frame);

/// Lumped mass blocks of (q^2 [alpha I + (1-alpha) n x n] eta1, eta2)^h:
/// M_i = sum over the two adjacent elements of (h_e/2) q_e^2
/// [alpha I + (1-alpha) normal_e x normal_e].
std::vector<Mat2> lumped_block_mass(const PeriodicMesh& mesh, const ElementFrame& frame,
                                    double alpha);

/// Discrete inner product (q a, b)^h: elementwise trapezoid of the nodal
/// interpolant of a*b weighted by the element-constant length element.
double lumped_inner_product(const PeriodicMesh& mesh, const ElementFrame& frame,
                            const NodalScalarField& a, const NodalScalarField& b);

/// Action of the constant-coefficient curve stiffness (X_rho, xi_rho):
/// row i = (X_i - X_{i-1})/h_l - (X_{i+1} - X_i)/h_r.
std::vector<Vec2> curve_stiffness_apply(const PeriodicMesh& mesh, const NodalVectorField& x);

/// Stiffness of d (w_rho / q, eta_rho): off-diagonal entries -d/(h_e q_e).
CyclicTridiagonal scalar_stiffness_build(const PeriodicMesh& mesh, const ElementFrame& frame,
                                         double diffusivity);

/// Transport matrix of (Psi w, eta_rho)^h. Each element integrates the
/// interpolant of Psi*w exactly (trapezoid) against the constant slope of
/// the hat function, so row sums against a constant test function vanish
/// and the lumped mass of w is conserved.
CyclicTridiagonal transport_build(const PeriodicMesh& mesh, const VelocityFields& velocities);

/// Load vector of (q^2 [f(w) normal + S], xi)^h with everything lumped at
/// the nodes: node i receives sum over adjacent elements of
/// (h_e/2) q_e^2 [f(W_i) normal_e + S(rho_i, t)].
/// Empty f or source means zero.
std::vector<Vec2> curve_rhs(const PeriodicMesh& mesh, const ElementFrame& frame,
                            const NodalScalarField& w, const ScalarFn& f,
                            const CurveSourceFn& source, double t);

/// Right hand side of the surface-quantity step: the old lumped mass term
/// plus the lumped reaction and source, node i receiving
/// (1/dt) m_old_i w_old_i + sum over adjacent elements of
/// (h_e/2) q_e [g(V_e(i), w_old_i) + S_w(rho_i, t)],
/// where q_e and V are taken on the new curve. Empty g or source means zero.
std::vector<double> scalar_rhs(const PeriodicMesh& mesh, const ElementFrame& frame_new,
                               const std::vector<double>& mass_old,
                               const NodalScalarField& w_old,
                               const VelocityFields& velocities, const ReactionFn& g,
                               const ScalarSourceFn& source, double t, double dt);

}  // namespace csflow
