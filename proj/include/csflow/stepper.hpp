#pragma once

/// @file stepper.hpp
/// @brief Semi-implicit time stepping for a closed curve moving by forced
///        curve shortening flow coupled to a reaction-diffusion equation on
///        the curve. Each step first moves the curve with lagged geometry,
///        then transports the surface quantity on the new curve.

#include <functional>

#include "csflow/assembly.hpp"
#include "csflow/geometry.hpp"

namespace csflow {

/// Model data. alpha in (0,1] blends motion of the nodes between purely
/// normal (alpha = 1 leaves the tangential motion free) and increasingly
/// tangentially redistributed (small alpha). Empty callables mean zero.
struct SchemeParams {
    double alpha = 1.0;
    double diffusivity = 1.0;
    ScalarFn forcing;              // f(w), normal forcing of the curve
    ReactionFn reaction;           // g(v, w)
    CurveSourceFn curve_source;    // S(rho, t)
    ScalarSourceFn scalar_source;  // S_w(rho, t)
    // Passes of the frozen-coefficient solve per step. With 1 every
    // geometric coefficient comes from the previous time level (the plain
    // linearly implicit step); larger values refreeze stretch, frames,
    // forcing and velocities on the latest iterate, tightening the step
    // toward the fully implicit one.
    int fixed_point_sweeps = 1;
};

/// Uniform partition of [0, horizon] with the last step clipped so the
/// final time is hit exactly.
class TimeGrid {
public:
    TimeGrid(double dt, double horizon);

    int steps() const { return steps_; }
    double horizon() const { return horizon_; }
    double time(int n) const { return n >= steps_ ? horizon_ : n * dt_; }
    double dt(int n) const { return time(n) - time(n - 1); }

private:
    double dt_;
    double horizon_;
    int steps_;
};

/// Discrete state at one time level. frame always belongs to x.
struct StepState {
    int n = 0;
    double t = 0.0;
    NodalVectorField x;
    NodalScalarField w;
    ElementFrame frame;
};

/// One completed step: the new state, the discrete velocities that carried
/// it there, and whether the tangential speed respected the solvability
/// bound dt * max|Psi|^2 < 4d.
struct StepResult {
    StepState state;
    VelocityFields velocities;
    bool solvable = true;
};

/// Per-step observation hook. For n = 0 velocities are empty and dt is 0.
struct StepRecord {
    int n;
    double t;
    double dt;
    const StepState& state;
    const VelocityFields& velocities;
    bool solvable;
};
using StepObserver = std::function<void(const StepRecord&)>;

/// System matrix of the curve step, (1/dt) M + stiffness, with the lumped
/// mass blocks taken on the frame of the previous curve.
BlockCyclicTridiagonal build_curve_system(const PeriodicMesh& mesh, const ElementFrame& frame,
                                          double alpha, double dt);

/// Move the curve one step: solve
/// [(1/dt) M + A] X_new = (1/dt) M X_old + lumped forcing,
/// with mass, frame and forcing evaluated on the old curve and the source
/// at the new time.
NodalVectorField curve_step(const PeriodicMesh& mesh, const StepState& state,
                            const SchemeParams& params, double dt, double t_new);

/// Discrete velocities of the move from x_old to x_new: the difference
/// quotient at each node projected onto the new frame of each adjacent
/// element.
VelocityFields element_velocities(const PeriodicMesh& mesh, const NodalVectorField& x_old,
                                  const NodalVectorField& x_new, const ElementFrame& frame_new,
                                  double dt);

/// True when dt * max|Psi|^2 < 4 * diffusivity, the bound under which the
/// surface-quantity system is guaranteed solvable.
bool check_solvability(const VelocityFields& velocities, double dt, double diffusivity);

/// System matrix of the surface-quantity step on the new curve:
/// (1/dt) lumped mass + diffusion stiffness + tangential transport.
CyclicTridiagonal build_scalar_system(const PeriodicMesh& mesh, const ElementFrame& frame_new,
                                      const VelocityFields& velocities, double dt,
                                      double diffusivity);

/// Advance the surface quantity on the moved curve, reaction terms taking
/// the old values and the source the new time.
NodalScalarField scalar_step(const PeriodicMesh& mesh, const StepState& state,
                             const ElementFrame& frame_new, const VelocityFields& velocities,
                             const SchemeParams& params, double dt, double t_new);

/// One full step: curve first, then velocities and surface quantity. With
/// fixed_point_sweeps > 1 the coefficients frozen at the old state are
/// refrozen on the computed iterate and the solves repeated; the previous
/// time level itself (positions, values, mass) stays fixed throughout.
StepResult coupled_step(const PeriodicMesh& mesh, const StepState& state,
                        const SchemeParams& params, double dt, double t_new);

/// March the initial data across the whole time grid. The observer, when
/// given, sees the initial state and every completed step. A violated
/// solvability bound is reported on stderr but never stops the run.
StepState run(const PeriodicMesh& mesh, NodalVectorField x0, NodalScalarField w0,
              const SchemeParams& params, const TimeGrid& grid,
              const StepObserver& observer = {});

}  // namespace csflow
