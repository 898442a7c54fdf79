#pragma once

/// @file manufactured.hpp
/// @brief Manufactured-solution machinery: an exact space-time pair with
///        analytic derivatives, the source terms that make it solve the
///        coupled system, error monitors, and a mesh-refinement study.

#include <array>
#include <functional>
#include <vector>

#include "csflow/stepper.hpp"

namespace csflow {

/// A smooth closed curve x(rho, t) and scalar w(rho, t) with all the
/// derivatives the source terms need. Every callable must be non-empty.
struct ExactSolution {
    std::function<Vec2(double, double)> x, x_t, x_rho, x_rhorho;
    std::function<double(double, double)> w, w_t, w_rho, w_rhorho;
};

/// The trig pair used by the convergence benchmark: an ellipse with
/// oscillating axes carrying a rotating mixture of two wave numbers.
ExactSolution reference_solution();

/// Geometric quantities of an exact solution at one point.
struct PointwiseKinematics {
    Vec2 tangent, normal;
    double stretch;              // q = |x_rho|
    double curvature;            // kappa, positive for a counter-clockwise circle
    double normal_velocity;      // v = x_t . normal
    double tangential_velocity;  // psi = x_t . tangent
};

PointwiseKinematics exact_kinematics(const ExactSolution& exact, double rho, double t);

/// Residual of the curve equation at the exact solution; adding it to the
/// right hand side makes the exact pair a solution.
CurveSourceFn curve_source_for(const ExactSolution& exact, double alpha, const ScalarFn& f);

/// Residual of the surface-quantity equation at the exact solution.
ScalarSourceFn scalar_source_for(const ExactSolution& exact, double diffusivity,
                                 const ReactionFn& g);

/// Exact squared L2 norm of a piecewise linear nodal field.
double nodal_l2_sq(const PeriodicMesh& mesh, const std::vector<double>& values);
double nodal_l2_sq(const PeriodicMesh& mesh, const std::vector<Vec2>& values);

/// Exact squared H1 seminorm of a piecewise linear nodal field.
double nodal_h1_semi_sq(const PeriodicMesh& mesh, const std::vector<double>& values);
double nodal_h1_semi_sq(const PeriodicMesh& mesh, const std::vector<Vec2>& values);

/// The four error monitors of a run against an exact solution, all squared:
/// sup-in-time L2 of the surface-quantity error, time-summed H1 seminorm of
/// the same, sup-in-time H1 seminorm of the position error, time-summed L2
/// of its discrete time derivative.
struct ErrorMonitors {
    double sup_w_l2 = 0.0;
    double time_w_h1 = 0.0;
    double sup_x_h1 = 0.0;
    double time_rate_l2 = 0.0;

    std::array<double, 4> as_array() const { return {sup_w_l2, time_w_h1, sup_x_h1, time_rate_l2}; }
};

/// Step observer that accumulates the error monitors along a run. Compares
/// against the nodal interpolant of the exact solution, so feeding it the
/// exact nodal values yields exactly zero.
class ErrorMonitor {
public:
    ErrorMonitor(const PeriodicMesh& mesh, ExactSolution exact);

    void operator()(const StepRecord& record);
    const ErrorMonitors& result() const { return result_; }

private:
    const PeriodicMesh* mesh_;
    ExactSolution exact_;
    std::vector<Vec2> prev_x_error_;
    ErrorMonitors result_;
};

enum class StepRule {
    square_of_h,  // dt = h^2
    half_of_h,    // dt = h/2
    fixed,        // dt given explicitly
};

struct StudyOptions {
    double alpha = 1.0;
    double diffusivity = 1.0;
    StepRule rule = StepRule::square_of_h;
    double fixed_dt = 0.0;  // only read when rule == fixed
    std::vector<int> mesh_sizes{30, 60, 120, 240};
    double horizon = 1.0;
    ScalarFn forcing;
    ReactionFn reaction;
    int fixed_point_sweeps = 1;  // forwarded to SchemeParams
    bool parallel = true;
};

struct StudyRow {
    int mesh_size = 0;
    double dt = 0.0;
    ErrorMonitors errors;
    // log-ratio order against the previous row; NaN in the first row
    std::array<double, 4> eoc{};
};

/// Run the scheme against an exact solution over a sequence of meshes and
/// report the error monitors with their experimental orders.
std::vector<StudyRow> convergence_study(const ExactSolution& exact, const StudyOptions& options);

}  // namespace csflow
