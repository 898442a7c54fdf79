#include "csflow/manufactured.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace csflow {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

ExactSolution reference_solution() {
    ExactSolution e;
    e.x = [](double rho, double t) -> Vec2 {
        double s = 0.5 * std::sin(kTwoPi * t);
        return {(1.0 + s) * std::cos(kTwoPi * rho), (1.0 - s) * std::sin(kTwoPi * rho)};
    };
    e.x_t = [](double rho, double t) -> Vec2 {
        double c = 0.5 * kTwoPi * std::cos(kTwoPi * t);
        return {c * std::cos(kTwoPi * rho), -c * std::sin(kTwoPi * rho)};
    };
    e.x_rho = [](double rho, double t) -> Vec2 {
        double s = 0.5 * std::sin(kTwoPi * t);
        return {-kTwoPi * (1.0 + s) * std::sin(kTwoPi * rho),
                kTwoPi * (1.0 - s) * std::cos(kTwoPi * rho)};
    };
    e.x_rhorho = [](double rho, double t) -> Vec2 {
        double s = 0.5 * std::sin(kTwoPi * t);
        double k = kTwoPi * kTwoPi;
        return {-k * (1.0 + s) * std::cos(kTwoPi * rho),
                -k * (1.0 - s) * std::sin(kTwoPi * rho)};
    };
    e.w = [](double rho, double t) {
        return t * std::cos(8.0 * kPi * rho) + (1.0 - t) * std::sin(6.0 * kPi * rho);
    };
    e.w_t = [](double rho, double /*t*/) {
        return std::cos(8.0 * kPi * rho) - std::sin(6.0 * kPi * rho);
    };
    e.w_rho = [](double rho, double t) {
        return -8.0 * kPi * t * std::sin(8.0 * kPi * rho) +
               6.0 * kPi * (1.0 - t) * std::cos(6.0 * kPi * rho);
    };
    e.w_rhorho = [](double rho, double t) {
        return -64.0 * kPi * kPi * t * std::cos(8.0 * kPi * rho) -
               36.0 * kPi * kPi * (1.0 - t) * std::sin(6.0 * kPi * rho);
    };
    return e;
}

PointwiseKinematics exact_kinematics(const ExactSolution& exact, double rho, double t) {
    Vec2 xr = exact.x_rho(rho, t);
    Vec2 xrr = exact.x_rhorho(rho, t);
    Vec2 xt = exact.x_t(rho, t);
    double q = xr.norm();
    if (q == 0.0) throw std::invalid_argument("exact_kinematics: |x_rho| vanishes");
    PointwiseKinematics k;
    k.stretch = q;
    k.tangent = xr / q;
    k.normal = k.tangent.perp();
    k.curvature = k.normal.dot(xrr) / (q * q);
    k.normal_velocity = xt.dot(k.normal);
    k.tangential_velocity = xt.dot(k.tangent);
    return k;
}

CurveSourceFn curve_source_for(const ExactSolution& exact, double alpha, const ScalarFn& f) {
    return [exact, alpha, f](double rho, double t) -> Vec2 {
        PointwiseKinematics k = exact_kinematics(exact, rho, t);
        Vec2 xt = exact.x_t(rho, t);
        Vec2 xrr = exact.x_rhorho(rho, t);
        double fw = f ? f(exact.w(rho, t)) : 0.0;
        Vec2 lhs = alpha * xt + (1.0 - alpha) * xt.dot(k.normal) * k.normal;
        return lhs - xrr / (k.stretch * k.stretch) - fw * k.normal;
    };
}

ScalarSourceFn scalar_source_for(const ExactSolution& exact, double diffusivity,
                                 const ReactionFn& g) {
    return [exact, diffusivity, g](double rho, double t) {
        PointwiseKinematics k = exact_kinematics(exact, rho, t);
        double q = k.stretch;
        double w = exact.w(rho, t);
        double wr = exact.w_rho(rho, t);
        double wrr = exact.w_rhorho(rho, t);
        // (w_rho / q)_rho = w_rhorho / q - w_rho (tangent . x_rhorho) / q^2
        double flux_rho =
            wrr / q - wr * k.tangent.dot(exact.x_rhorho(rho, t)) / (q * q);
        double gv = g ? g(k.normal_velocity, w) : 0.0;
        return exact.w_t(rho, t) - k.tangential_velocity * wr / q -
               diffusivity / q * flux_rho - k.curvature * k.normal_velocity * w - gv;
    };
}

double nodal_l2_sq(const PeriodicMesh& mesh, const std::vector<double>& values) {
    const int J = mesh.size();
    double sum = 0.0;
    for (int e = 0; e < J; ++e) {
        double a = values[static_cast<std::size_t>(e)];
        double b = values[static_cast<std::size_t>(mesh.next(e))];
        sum += mesh.h(e) / 3.0 * (a * a + a * b + b * b);
    }
    return sum;
}

double nodal_l2_sq(const PeriodicMesh& mesh, const std::vector<Vec2>& values) {
    const int J = mesh.size();
    double sum = 0.0;
    for (int e = 0; e < J; ++e) {
        Vec2 a = values[static_cast<std::size_t>(e)];
        Vec2 b = values[static_cast<std::size_t>(mesh.next(e))];
        sum += mesh.h(e) / 3.0 * (a.norm_sq() + a.dot(b) + b.norm_sq());
    }
    return sum;
}

double nodal_h1_semi_sq(const PeriodicMesh& mesh, const std::vector<double>& values) {
    const int J = mesh.size();
    double sum = 0.0;
    for (int e = 0; e < J; ++e) {
        double d = values[static_cast<std::size_t>(mesh.next(e))] -
                   values[static_cast<std::size_t>(e)];
        sum += d * d / mesh.h(e);
    }
    return sum;
}

double nodal_h1_semi_sq(const PeriodicMesh& mesh, const std::vector<Vec2>& values) {
    const int J = mesh.size();
    double sum = 0.0;
    for (int e = 0; e < J; ++e) {
        Vec2 d = values[static_cast<std::size_t>(mesh.next(e))] -
                 values[static_cast<std::size_t>(e)];
        sum += d.norm_sq() / mesh.h(e);
    }
    return sum;
}

ErrorMonitor::ErrorMonitor(const PeriodicMesh& mesh, ExactSolution exact)
    : mesh_(&mesh), exact_(std::move(exact)) {}

void ErrorMonitor::operator()(const StepRecord& record) {
    const int J = mesh_->size();
    std::vector<double> w_error(static_cast<std::size_t>(J));
    std::vector<Vec2> x_error(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        double rho = mesh_->node(i);
        w_error[static_cast<std::size_t>(i)] = exact_.w(rho, record.t) - record.state.w[i];
        x_error[static_cast<std::size_t>(i)] = exact_.x(rho, record.t) - record.state.x[i];
    }
    result_.sup_w_l2 = std::max(result_.sup_w_l2, nodal_l2_sq(*mesh_, w_error));
    result_.sup_x_h1 = std::max(result_.sup_x_h1, nodal_h1_semi_sq(*mesh_, x_error));
    if (record.n > 0) {
        result_.time_w_h1 += record.dt * nodal_h1_semi_sq(*mesh_, w_error);
        std::vector<Vec2> rate(static_cast<std::size_t>(J));
        for (int i = 0; i < J; ++i)
            rate[static_cast<std::size_t>(i)] =
                (x_error[static_cast<std::size_t>(i)] - prev_x_error_[static_cast<std::size_t>(i)]) /
                record.dt;
        result_.time_rate_l2 += record.dt * nodal_l2_sq(*mesh_, rate);
    }
    prev_x_error_ = std::move(x_error);
}

namespace {

StudyRow run_single(const ExactSolution& exact, const StudyOptions& options, int J) {
    double h = 1.0 / J;
    double dt = 0.0;
    switch (options.rule) {
        case StepRule::square_of_h: dt = h * h; break;
        case StepRule::half_of_h: dt = 0.5 * h; break;
        case StepRule::fixed: dt = options.fixed_dt; break;
    }
    PeriodicMesh mesh = PeriodicMesh::uniform(J);

    SchemeParams params;
    params.alpha = options.alpha;
    params.diffusivity = options.diffusivity;
    params.forcing = options.forcing;
    params.reaction = options.reaction;
    params.curve_source = curve_source_for(exact, options.alpha, options.forcing);
    params.scalar_source = scalar_source_for(exact, options.diffusivity, options.reaction);
    params.fixed_point_sweeps = options.fixed_point_sweeps;

    std::vector<Vec2> x0(static_cast<std::size_t>(J));
    std::vector<double> w0(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        x0[static_cast<std::size_t>(i)] = exact.x(mesh.node(i), 0.0);
        w0[static_cast<std::size_t>(i)] = exact.w(mesh.node(i), 0.0);
    }

    ErrorMonitor monitor(mesh, exact);
    TimeGrid grid(dt, options.horizon);
    run(mesh, NodalVectorField(std::move(x0)), NodalScalarField(std::move(w0)), params, grid,
        [&monitor](const StepRecord& rec) { monitor(rec); });

    StudyRow row;
    row.mesh_size = J;
    row.dt = dt;
    row.errors = monitor.result();
    row.eoc.fill(std::numeric_limits<double>::quiet_NaN());
    return row;
}

}  // namespace

std::vector<StudyRow> convergence_study(const ExactSolution& exact,
                                        const StudyOptions& options) {
    std::vector<StudyRow> rows;
    if (options.parallel) {
        std::vector<std::future<StudyRow>> futures;
        futures.reserve(options.mesh_sizes.size());
        for (int J : options.mesh_sizes)
            futures.push_back(std::async(std::launch::async, run_single, std::cref(exact),
                                         std::cref(options), J));
        for (auto& f : futures) rows.push_back(f.get());
    } else {
        for (int J : options.mesh_sizes) rows.push_back(run_single(exact, options, J));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        double ratio = static_cast<double>(rows[r].mesh_size) / rows[r - 1].mesh_size;
        if (ratio <= 1.0) continue;
        auto prev = rows[r - 1].errors.as_array();
        auto cur = rows[r].errors.as_array();
        for (int k = 0; k < 4; ++k)
            rows[r].eoc[static_cast<std::size_t>(k)] =
                std::log(prev[static_cast<std::size_t>(k)] / cur[static_cast<std::size_t>(k)]) /
                std::log(ratio);
    }
    return rows;
}

}  // namespace csflow
