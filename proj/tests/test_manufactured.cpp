#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "csflow/manufactured.hpp"
#include "oracles.hpp"

using namespace csflow;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Step sizes for the two derivative orders: small enough to be far inside
// the fourth-order truncation budget, large enough that cancellation noise
// stays below the comparison tolerance.
constexpr double kStep1 = 1e-5;
constexpr double kStep2 = 3e-4;

}  // namespace

TEST_CASE("analytic derivatives of the reference pair match finite differences") {
    ExactSolution exact = reference_solution();
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        double rho = unit(rng);
        double t = unit(rng);

        Vec2 xt = oracle::fd1([&](double s) { return exact.x(rho, s); }, t, kStep1);
        Vec2 xr = oracle::fd1([&](double s) { return exact.x(s, t); }, rho, kStep1);
        Vec2 xrr = oracle::fd2([&](double s) { return exact.x(s, t); }, rho, kStep2);
        CHECK((exact.x_t(rho, t) - xt).norm() < 1e-7);
        CHECK((exact.x_rho(rho, t) - xr).norm() < 1e-7);
        CHECK((exact.x_rhorho(rho, t) - xrr).norm() < 1e-7);

        double wt = oracle::fd1([&](double s) { return exact.w(rho, s); }, t, kStep1);
        double wr = oracle::fd1([&](double s) { return exact.w(s, t); }, rho, kStep1);
        double wrr = oracle::fd2([&](double s) { return exact.w(s, t); }, rho, kStep2);
        CHECK(std::abs(exact.w_t(rho, t) - wt) < 1e-7);
        CHECK(std::abs(exact.w_rho(rho, t) - wr) < 1e-7);
        CHECK(std::abs(exact.w_rhorho(rho, t) - wrr) < 1e-7);
    }
}

TEST_CASE("kinematics of the reference pair satisfy the frame identities") {
    ExactSolution exact = reference_solution();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        double rho = unit(rng);
        double t = unit(rng);
        PointwiseKinematics k = exact_kinematics(exact, rho, t);
        CHECK(k.tangent.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(k.tangent.dot(k.normal)) < 1e-12);
        CHECK((k.normal - k.tangent.perp()).norm() < 1e-12);
        CHECK(k.stretch == doctest::Approx(exact.x_rho(rho, t).norm()).epsilon(1e-12));
        double speed_sq = k.normal_velocity * k.normal_velocity +
                          k.tangential_velocity * k.tangential_velocity;
        CHECK(speed_sq == doctest::Approx(exact.x_t(rho, t).norm_sq()).epsilon(1e-12));
    }
}

TEST_CASE("source terms at the origin of the reference pair") {
    ExactSolution exact = reference_solution();
    // At rho = 0, t = 0: x_t = (pi, 0), q = 2 pi, x_rhorho = (-4 pi^2, 0),
    // w = 0, so the curve residual is x_t - x_rhorho / q^2 = (pi + 1, 0).
    CurveSourceFn S = curve_source_for(exact, 1.0, [](double w) { return 2.0 * w; });
    Vec2 s0 = S(0.0, 0.0);
    CHECK(s0.x == doctest::Approx(kPi + 1.0).epsilon(1e-13));
    CHECK(s0.y == doctest::Approx(0.0).epsilon(1e-13));

    // w_t = 1 there and every transport, diffusion and reaction term
    // vanishes, leaving exactly 1.
    ScalarSourceFn Sw = scalar_source_for(exact, 1.0, {});
    CHECK(Sw(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("a shrinking circle with no forcing needs no sources") {
    ExactSolution exact;
    exact.x = [](double rho, double t) -> Vec2 {
        double r = std::sqrt(1.0 - 2.0 * t);
        return {r * std::cos(2.0 * kPi * rho), r * std::sin(2.0 * kPi * rho)};
    };
    exact.x_t = [](double rho, double t) -> Vec2 {
        double r = std::sqrt(1.0 - 2.0 * t);
        return {-std::cos(2.0 * kPi * rho) / r, -std::sin(2.0 * kPi * rho) / r};
    };
    exact.x_rho = [](double rho, double t) -> Vec2 {
        double r = std::sqrt(1.0 - 2.0 * t);
        return {-2.0 * kPi * r * std::sin(2.0 * kPi * rho),
                2.0 * kPi * r * std::cos(2.0 * kPi * rho)};
    };
    exact.x_rhorho = [](double rho, double t) -> Vec2 {
        double r = std::sqrt(1.0 - 2.0 * t);
        double k = 4.0 * kPi * kPi;
        return {-k * r * std::cos(2.0 * kPi * rho), -k * r * std::sin(2.0 * kPi * rho)};
    };
    exact.w = [](double, double) { return 0.0; };
    exact.w_t = exact.w;
    exact.w_rho = exact.w;
    exact.w_rhorho = exact.w;

    std::mt19937 rng(43);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double alpha : {1.0, 0.3}) {
        CurveSourceFn S = curve_source_for(exact, alpha, {});
        ScalarSourceFn Sw = scalar_source_for(exact, 1.0, {});
        for (int trial = 0; trial < 20; ++trial) {
            double rho = unit(rng);
            double t = 0.4 * unit(rng);  // stay clear of the vanishing time
            CHECK(S(rho, t).norm() < 1e-12);
            CHECK(std::abs(Sw(rho, t)) < 1e-12);
            PointwiseKinematics k = exact_kinematics(exact, rho, t);
            double r = std::sqrt(1.0 - 2.0 * t);
            CHECK(k.curvature == doctest::Approx(1.0 / r).epsilon(1e-12));
            CHECK(k.normal_velocity == doctest::Approx(1.0 / r).epsilon(1e-12));
        }
    }
}

TEST_CASE("source terms cancel residuals built from finite differences alone") {
    ExactSolution exact = reference_solution();
    const double alpha = 0.6;
    ScalarFn f = [](double w) { return 2.0 * w; };
    ReactionFn g = [](double v, double w) { return v * w; };
    CurveSourceFn S = curve_source_for(exact, alpha, f);
    ScalarSourceFn Sw = scalar_source_for(exact, 1.3, g);

    std::mt19937 rng(44);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double rho = unit(rng);
        double t = unit(rng);

        Vec2 xt = oracle::fd1([&](double s) { return exact.x(rho, s); }, t, kStep1);
        Vec2 xr = oracle::fd1([&](double s) { return exact.x(s, t); }, rho, kStep1);
        Vec2 xrr = oracle::fd2([&](double s) { return exact.x(s, t); }, rho, kStep2);
        double q = xr.norm();
        Vec2 tangent = xr / q;
        Vec2 normal = tangent.perp();
        double w = exact.w(rho, t);

        Vec2 curve_res = alpha * xt + (1.0 - alpha) * xt.dot(normal) * normal -
                         xrr / (q * q) - f(w) * normal;
        CHECK((curve_res - S(rho, t)).norm() < 1e-6);

        double wt = oracle::fd1([&](double s) { return exact.w(rho, s); }, t, kStep1);
        double wr = oracle::fd1([&](double s) { return exact.w(s, t); }, rho, kStep1);
        double wrr = oracle::fd2([&](double s) { return exact.w(s, t); }, rho, kStep2);
        double kappa = normal.dot(xrr) / (q * q);
        double v = xt.dot(normal);
        double psi = xt.dot(tangent);
        double scalar_res = wt - psi * wr / q -
                            1.3 / q * (wrr / q - wr * tangent.dot(xrr) / (q * q)) -
                            kappa * v * w - g(v, w);
        CHECK(std::abs(scalar_res - Sw(rho, t)) < 1e-6);
    }
}

TEST_CASE("piecewise linear norms against hand values and quadrature") {
    PeriodicMesh mesh = PeriodicMesh::uniform(4);

    std::vector<double> hat = {1.0, 0.0, 0.0, 0.0};
    CHECK(nodal_l2_sq(mesh, hat) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(nodal_h1_semi_sq(mesh, hat) == doctest::Approx(8.0).epsilon(1e-14));

    std::vector<Vec2> vhat = {{1.0, 2.0}, {}, {}, {}};
    CHECK(nodal_l2_sq(mesh, vhat) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    CHECK(nodal_h1_semi_sq(mesh, vhat) == doctest::Approx(40.0).epsilon(1e-14));

    // On a random partition the exact element integrals agree with
    // two-point quadrature, which integrates quadratics exactly.
    std::mt19937 rng(45);
    PeriodicMesh rough = oracle::random_mesh(rng, 7);
    std::vector<double> vals = oracle::random_values(rng, 7, -2.0, 2.0);
    double via_gauss = 0.0;
    for (int e = 0; e < 7; ++e) {
        double a = vals[static_cast<std::size_t>(e)];
        double b = vals[static_cast<std::size_t>(rough.next(e))];
        double h = rough.h(e);
        via_gauss += oracle::gauss_integral(
            [&](double s) {
                double u = a + (b - a) * s / h;
                return u * u;
            },
            0.0, h);
    }
    CHECK(nodal_l2_sq(rough, vals) == doctest::Approx(via_gauss).epsilon(1e-13));
}

TEST_CASE("error monitor accumulates the four measures") {
    PeriodicMesh mesh = PeriodicMesh::uniform(4);
    ExactSolution still;
    still.x = [](double, double) -> Vec2 { return {0.0, 0.0}; };
    still.x_t = still.x;
    still.x_rho = still.x;
    still.x_rhorho = still.x;
    still.w = [](double, double) { return 0.0; };
    still.w_t = still.w;
    still.w_rho = still.w;
    still.w_rhorho = still.w;

    ErrorMonitor monitor(mesh, still);
    VelocityFields none;

    StepState zero;
    zero.x = NodalVectorField(std::vector<Vec2>(4, Vec2{}));
    zero.w = NodalScalarField(std::vector<double>(4, 0.0));
    monitor(StepRecord{0, 0.0, 0.0, zero, none, true});

    StepState off;
    off.x = NodalVectorField(std::vector<Vec2>(4, Vec2{1.0, 0.0}));
    off.w = NodalScalarField(std::vector<double>(4, 1.0));
    monitor(StepRecord{1, 0.5, 0.5, off, none, true});

    // Constant error fields: |Z|_0^2 = 1, |Z|_1^2 = 0, |E|_1^2 = 0, and the
    // error rate is the constant (2,0), so dt |rate|_0^2 = 0.5 * 4 = 2.
    ErrorMonitors m = monitor.result();
    CHECK(m.sup_w_l2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.time_w_h1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m.sup_x_h1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m.time_rate_l2 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("error monitor vanishes along the exact trajectory") {
    ExactSolution exact = reference_solution();
    PeriodicMesh mesh = PeriodicMesh::uniform(12);
    ErrorMonitor monitor(mesh, exact);
    VelocityFields none;
    for (int n = 0; n <= 3; ++n) {
        double t = 0.1 * n;
        std::vector<Vec2> x(12);
        std::vector<double> w(12);
        for (int i = 0; i < 12; ++i) {
            x[static_cast<std::size_t>(i)] = exact.x(mesh.node(i), t);
            w[static_cast<std::size_t>(i)] = exact.w(mesh.node(i), t);
        }
        StepState state;
        state.x = NodalVectorField(std::move(x));
        state.w = NodalScalarField(std::move(w));
        monitor(StepRecord{n, t, n == 0 ? 0.0 : 0.1, state, none, true});
    }
    for (double v : monitor.result().as_array()) CHECK(v == 0.0);
}

TEST_CASE("refinement study shows fourth order in the squared monitors") {
    ExactSolution exact = reference_solution();
    StudyOptions opt;
    opt.forcing = [](double w) { return 2.0 * w; };
    opt.mesh_sizes = {16, 32, 64};
    std::vector<StudyRow> rows = convergence_study(exact, opt);

    REQUIRE(rows.size() == 3);
    CHECK(rows[0].mesh_size == 16);
    CHECK(rows[0].dt == doctest::Approx(1.0 / 256.0));
    for (double e : rows[0].eoc) CHECK(std::isnan(e));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        for (double e : rows[r].eoc) {
            CHECK(e > 3.0);
            CHECK(e < 5.0);
        }
    }
    // Errors fall monotonically under refinement.
    for (int k = 0; k < 4; ++k)
        CHECK(rows[2].errors.as_array()[static_cast<std::size_t>(k)] <
              rows[1].errors.as_array()[static_cast<std::size_t>(k)]);
}

TEST_CASE("study forwards the fixed-point sweep count to the stepper") {
    ExactSolution exact = reference_solution();
    StudyOptions opt;
    opt.alpha = 0.3;
    opt.rule = StepRule::half_of_h;
    opt.forcing = [](double w) { return 2.0 * w; };
    opt.mesh_sizes = {24};
    opt.horizon = 0.25;

    std::vector<StudyRow> plain = convergence_study(exact, opt);
    opt.fixed_point_sweeps = 3;
    std::vector<StudyRow> refreshed = convergence_study(exact, opt);

    // Refreshing the frozen coefficients changes every monitor; with the
    // forwarding broken the two runs would agree bit for bit.
    auto a = plain[0].errors.as_array();
    auto b = refreshed[0].errors.as_array();
    for (int k = 0; k < 4; ++k) CHECK(a[static_cast<std::size_t>(k)] !=
                                      b[static_cast<std::size_t>(k)]);
}

TEST_CASE("parallel and serial studies agree bit for bit") {
    ExactSolution exact = reference_solution();
    StudyOptions opt;
    opt.forcing = [](double w) { return 2.0 * w; };
    opt.mesh_sizes = {8, 16};
    opt.horizon = 0.25;

    opt.parallel = true;
    std::vector<StudyRow> par = convergence_study(exact, opt);
    opt.parallel = false;
    std::vector<StudyRow> ser = convergence_study(exact, opt);

    REQUIRE(par.size() == ser.size());
    for (std::size_t r = 0; r < par.size(); ++r) {
        auto a = par[r].errors.as_array();
        auto b = ser[r].errors.as_array();
        for (int k = 0; k < 4; ++k) CHECK(a[static_cast<std::size_t>(k)] ==
                                          b[static_cast<std::size_t>(k)]);
    }
}
