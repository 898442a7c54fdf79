#include "csflow/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "csflow/linsolve.hpp"

namespace csflow {

TimeGrid::TimeGrid(double dt, double horizon) : dt_(dt), horizon_(horizon) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    // Steps of length dt, except that a final sliver shorter than a
    // relative epsilon merges into the last step.
    steps_ = static_cast<int>(std::ceil(horizon / dt * (1.0 - 1e-12)));
    if (steps_ < 1) steps_ = 1;
}

BlockCyclicTridiagonal build_curve_system(const PeriodicMesh& mesh, const ElementFrame& frame,
                                          double alpha, double dt) {
    const int J = mesh.size();
    std::vector<Mat2> mass = lumped_block_mass(mesh, frame, alpha);
    BlockCyclicTridiagonal A;
    A.sub.resize(static_cast<std::size_t>(J));
    A.diag.resize(static_cast<std::size_t>(J));
    A.sup.resize(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        int l = mesh.prev(i);
        double cl = 1.0 / mesh.h(l);
        double cr = 1.0 / mesh.h(i);
        A.sub[i] = -cl * Mat2::identity();
        A.diag[i] = mass[i] * (1.0 / dt) + (cl + cr) * Mat2::identity();
        A.sup[i] = -cr * Mat2::identity();
    }
    return A;
}

NodalVectorField curve_step(const PeriodicMesh& mesh, const StepState& state,
                            const SchemeParams& params, double dt, double t_new) {
    const int J = mesh.size();
    BlockCyclicTridiagonal A = build_curve_system(mesh, state.frame, params.alpha, dt);
    std::vector<Mat2> mass = lumped_block_mass(mesh, state.frame, params.alpha);
    std::vector<Vec2> rhs =
        curve_rhs(mesh, state.frame, state.w, params.forcing, params.curve_source, t_new);
    for (int i = 0; i < J; ++i) rhs[i] += mass[i] * state.x[i] * (1.0 / dt);
    return NodalVectorField(solve_block_cyclic(A, rhs));
}

VelocityFields element_velocities(const PeriodicMesh& mesh, const NodalVectorField& x_old,
                                  const NodalVectorField& x_new, const ElementFrame& frame_new,
                                  double dt) {
    const int J = mesh.size();
    VelocityFields vel;
    vel.normal_left.resize(static_cast<std::size_t>(J));
    vel.normal_right.resize(static_cast<std::size_t>(J));
    vel.tangential_left.resize(static_cast<std::size_t>(J));
    vel.tangential_right.resize(static_cast<std::size_t>(J));
    for (int e = 0; e < J; ++e) {
        int r = mesh.next(e);
        Vec2 rate_l = (x_new[e] - x_old[e]) / dt;
        Vec2 rate_r = (x_new[r] - x_old[r]) / dt;
        vel.normal_left[e] = rate_l.dot(frame_new.normal[e]);
        vel.normal_right[e] = rate_r.dot(frame_new.normal[e]);
        vel.tangential_left[e] = rate_l.dot(frame_new.tangent[e]);
        vel.tangential_right[e] = rate_r.dot(frame_new.tangent[e]);
    }
    return vel;
}

bool check_solvability(const VelocityFields& velocities, double dt, double diffusivity) {
    double psi = velocities.max_tangential();
    return dt * psi * psi < 4.0 * diffusivity;
}

CyclicTridiagonal build_scalar_system(const PeriodicMesh& mesh, const ElementFrame& frame_new,
                                      const VelocityFields& velocities, double dt,
                                      double diffusivity) {
    const int J = mesh.size();
    std::vector<double> mass = lumped_scalar_mass(mesh, frame_new);
    CyclicTridiagonal A = scalar_stiffness_build(mesh, frame_new, diffusivity);
    CyclicTridiagonal T = transport_build(mesh, velocities);
    for (int i = 0; i < J; ++i) {
        A.sub[i] += T.sub[i];
        A.diag[i] += T.diag[i] + mass[i] / dt;
        A.sup[i] += T.sup[i];
    }
    return A;
}

NodalScalarField scalar_step(const PeriodicMesh& mesh, const StepState& state,
                             const ElementFrame& frame_new, const VelocityFields& velocities,
                             const SchemeParams& params, double dt, double t_new) {
    CyclicTridiagonal A =
        build_scalar_system(mesh, frame_new, velocities, dt, params.diffusivity);
    std::vector<double> mass_old = lumped_scalar_mass(mesh, state.frame);
    std::vector<double> rhs = scalar_rhs(mesh, frame_new, mass_old, state.w, velocities,
                                         params.reaction, params.scalar_source, t_new, dt);
    return NodalScalarField(solve_cyclic_tridiag(A, rhs));
}

StepResult coupled_step(const PeriodicMesh& mesh, const StepState& state,
                        const SchemeParams& params, double dt, double t_new) {
    if (params.fixed_point_sweeps < 1)
        throw std::invalid_argument("coupled_step: fixed_point_sweeps must be at least 1");

    // Coefficients of the linear solves live in `iter`; the previous time
    // level (old positions, old values, old mass) always comes from `state`.
    StepState iter = state;
    NodalVectorField x_new;
    ElementFrame frame_new;
    VelocityFields vel;
    NodalScalarField w_new;
    bool solvable = true;
    for (int sweep = 0; sweep < params.fixed_point_sweeps; ++sweep) {
        x_new = curve_step(mesh, iter, params, dt, t_new);
        frame_new = element_frame(mesh, x_new);
        vel = element_velocities(mesh, state.x, x_new, frame_new, dt);
        solvable = check_solvability(vel, dt, params.diffusivity);
        w_new = scalar_step(mesh, state, frame_new, vel, params, dt, t_new);
        if (sweep + 1 < params.fixed_point_sweeps) {
            iter.w = w_new;
            iter.frame = frame_new;
        }
    }

    StepResult result;
    result.state = StepState{state.n + 1, t_new, std::move(x_new), std::move(w_new),
                             std::move(frame_new)};
    result.velocities = std::move(vel);
    result.solvable = solvable;
    return result;
}

StepState run(const PeriodicMesh& mesh, NodalVectorField x0, NodalScalarField w0,
              const SchemeParams& params, const TimeGrid& grid, const StepObserver& observer) {
    if (!(params.alpha > 0.0 && params.alpha <= 1.0))
        throw std::invalid_argument("run: alpha must lie in (0, 1]");
    if (!(params.diffusivity > 0.0))
        throw std::invalid_argument("run: diffusivity must be positive");
    if (params.fixed_point_sweeps < 1)
        throw std::invalid_argument("run: fixed_point_sweeps must be at least 1");

    StepState state{0, 0.0, std::move(x0), std::move(w0), {}};
    state.frame = element_frame(mesh, state.x);
    if (observer) {
        VelocityFields none;
        observer(StepRecord{0, 0.0, 0.0, state, none, true});
    }
    for (int n = 1; n <= grid.steps(); ++n) {
        double t_new = grid.time(n);
        double dt = grid.dt(n);
        StepResult result = coupled_step(mesh, state, params, dt, t_new);
        if (!result.solvable)
            std::fprintf(stderr,
                         "warning: step %d: dt * max|Psi|^2 >= 4d, "
                         "surface-quantity system may be ill posed\n",
                         n);
        state = std::move(result.state);
        if (observer)
            observer(StepRecord{n, t_new, dt, state, result.velocities, result.solvable});
    }
    return state;
}

}  // namespace csflow
