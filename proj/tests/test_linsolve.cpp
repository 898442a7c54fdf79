#include <doctest.h>

#include <cmath>
#include <random>

#include "csflow/assembly.hpp"
#include "csflow/linsolve.hpp"
#include "oracles.hpp"

using namespace csflow;

namespace {

CyclicTridiagonal random_dominant(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    CyclicTridiagonal A;
    A.sub.resize(static_cast<std::size_t>(n));
    A.diag.resize(static_cast<std::size_t>(n));
    A.sup.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        A.sub[i] = off(rng);
        A.sup[i] = off(rng);
        A.diag[i] = 3.0 + off(rng);
    }
    return A;
}

double residual(const CyclicTridiagonal& A, const std::vector<double>& x,
                const std::vector<double>& b) {
    std::vector<double> Ax = A.apply(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        num = std::max(num, std::abs(Ax[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / std::max(den, 1e-300);
}

}  // namespace

TEST_CASE("cyclic scalar solve matches dense LU on random systems") {
    std::mt19937 rng(21);
    for (int n = 3; n <= 12; ++n) {
        CyclicTridiagonal A = random_dominant(rng, n);
        std::vector<double> b = oracle::random_values(rng, n, -2.0, 2.0);
        std::vector<double> x = solve_cyclic_tridiag(A, b);
        std::vector<double> want = oracle::lu_solve(oracle::dense_from_cyclic(A), b);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-11));
        CHECK(residual(A, x, b) < 1e-12);
    }
}

TEST_CASE("cyclic scalar solve handles the reaction-diffusion system shape") {
    std::mt19937 rng(22);
    for (int trial = 0; trial < 8; ++trial) {
        int J = 4 + static_cast<int>(rng() % 8);
        PeriodicMesh mesh = oracle::random_mesh(rng, J);
        ElementFrame frame = element_frame(mesh, oracle::random_curve(rng, J, mesh));
        VelocityFields vel = oracle::random_velocities(rng, J);
        const double dt = 1e-3;

        CyclicTridiagonal A = scalar_stiffness_build(mesh, frame, 1.0);
        CyclicTridiagonal T = transport_build(mesh, vel);
        std::vector<double> m = lumped_scalar_mass(mesh, frame);
        for (int i = 0; i < J; ++i) {
            A.diag[i] = m[i] / dt + A.diag[i] + T.diag[i];
            A.sub[i] += T.sub[i];
            A.sup[i] += T.sup[i];
        }

        std::vector<double> b = oracle::random_values(rng, J, -1.0, 1.0);
        std::vector<double> x = solve_cyclic_tridiag(A, b);
        std::vector<double> want = oracle::lu_solve(oracle::dense_from_cyclic(A), b);
        for (int i = 0; i < J; ++i) CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
}

TEST_CASE("cyclic scalar solve survives a zero leading diagonal entry") {
    // The corner elimination must not pivot on diag[0] itself.
    CyclicTridiagonal A;
    A.sub = {1.0, 1.0, 1.0, 1.0};
    A.diag = {0.0, 4.0, 4.0, 4.0};
    A.sup = {1.0, 1.0, 1.0, 1.0};
    std::vector<double> b = {1.0, -2.0, 0.5, 3.0};
    std::vector<double> x = solve_cyclic_tridiag(A, b);
    std::vector<double> want = oracle::lu_solve(oracle::dense_from_cyclic(A), b);
    for (int i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-11));
}

TEST_CASE("cyclic scalar solve is scale invariant") {
    std::mt19937 rng(23);
    CyclicTridiagonal A = random_dominant(rng, 7);
    std::vector<double> b = oracle::random_values(rng, 7, -1.0, 1.0);
    std::vector<double> base = solve_cyclic_tridiag(A, b);
    for (double s : {1e-12, 1e12}) {
        CyclicTridiagonal As = A;
        std::vector<double> bs = b;
        for (int i = 0; i < 7; ++i) {
            As.sub[i] *= s;
            As.diag[i] *= s;
            As.sup[i] *= s;
            bs[i] *= s;
        }
        std::vector<double> x = solve_cyclic_tridiag(As, bs);
        for (int i = 0; i < 7; ++i) CHECK(x[i] == doctest::Approx(base[i]).epsilon(1e-10));
    }
}

TEST_CASE("cyclic scalar solve rejects singular systems") {
    CyclicTridiagonal zero;
    zero.sub = {0, 0, 0};
    zero.diag = {0, 0, 0};
    zero.sup = {0, 0, 0};
    CHECK_THROWS_AS(solve_cyclic_tridiag(zero, {1, 1, 1}), SingularSystemError);

    // Rows summing to zero make constants a null vector, whatever the scale.
    for (double s : {1.0, 1e-14, 1e14}) {
        CyclicTridiagonal A;
        A.sub = {-s, -s, -s, -s};
        A.diag = {2 * s, 2 * s, 2 * s, 2 * s};
        A.sup = {-s, -s, -s, -s};
        CHECK_THROWS_AS(solve_cyclic_tridiag(A, {s, 0, 0, -s}), SingularSystemError);
    }
}

TEST_CASE("cyclic scalar solve is deterministic") {
    std::mt19937 rng(24);
    CyclicTridiagonal A = random_dominant(rng, 9);
    std::vector<double> b = oracle::random_values(rng, 9, -1.0, 1.0);
    std::vector<double> x1 = solve_cyclic_tridiag(A, b);
    std::vector<double> x2 = solve_cyclic_tridiag(A, b);
    for (int i = 0; i < 9; ++i) CHECK(x1[i] == x2[i]);
}

namespace {

BlockCyclicTridiagonal random_block(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> off(-0.4, 0.4);
    BlockCyclicTridiagonal A;
    A.sub.resize(static_cast<std::size_t>(n));
    A.diag.resize(static_cast<std::size_t>(n));
    A.sup.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        A.sub[i] = Mat2{off(rng), off(rng), off(rng), off(rng)};
        A.sup[i] = Mat2{off(rng), off(rng), off(rng), off(rng)};
        A.diag[i] = Mat2{3.0 + off(rng), off(rng), off(rng), 3.0 + off(rng)};
    }
    return A;
}

}  // namespace

TEST_CASE("block cyclic solve matches dense LU on random systems") {
    std::mt19937 rng(25);
    for (int n = 3; n <= 10; ++n) {
        BlockCyclicTridiagonal A = random_block(rng, n);
        std::vector<Vec2> b(static_cast<std::size_t>(n));
        for (Vec2& v : b) v = {oracle::random_values(rng, 1, -2, 2)[0],
                               oracle::random_values(rng, 1, -2, 2)[0]};
        std::vector<Vec2> x = solve_block_cyclic(A, b);

        std::vector<double> flat_b(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            flat_b[2 * i] = b[i].x;
            flat_b[2 * i + 1] = b[i].y;
        }
        std::vector<double> want = oracle::lu_solve(oracle::dense_from_block(A), flat_b);
        for (int i = 0; i < n; ++i) {
            CHECK(x[i].x == doctest::Approx(want[2 * i]).epsilon(1e-10));
            CHECK(x[i].y == doctest::Approx(want[2 * i + 1]).epsilon(1e-10));
        }
    }
}

TEST_CASE("block cyclic solve handles the curve system shape") {
    std::mt19937 rng(26);
    for (double alpha : {1.0, 0.4, 0.1}) {
        int J = 8;
        PeriodicMesh mesh = oracle::random_mesh(rng, J);
        NodalVectorField x0 = oracle::random_curve(rng, J, mesh);
        ElementFrame frame = element_frame(mesh, x0);
        const double dt = 1e-3;

        BlockCyclicTridiagonal A;
        A.sub.resize(J);
        A.diag.resize(J);
        A.sup.resize(J);
        std::vector<Mat2> M = lumped_block_mass(mesh, frame, alpha);
        for (int i = 0; i < J; ++i) {
            int l = mesh.prev(i);
            A.sub[i] = (-1.0 / mesh.h(l)) * Mat2::identity();
            A.sup[i] = (-1.0 / mesh.h(i)) * Mat2::identity();
            A.diag[i] = (1.0 / dt) * M[i] + (1.0 / mesh.h(l) + 1.0 / mesh.h(i)) * Mat2::identity();
        }

        std::vector<Vec2> b(static_cast<std::size_t>(J));
        for (int i = 0; i < J; ++i) b[i] = (1.0 / dt) * (M[i] * x0[i]);
        std::vector<Vec2> got = solve_block_cyclic(A, b);

        std::vector<double> flat_b(static_cast<std::size_t>(2 * J));
        for (int i = 0; i < J; ++i) {
            flat_b[2 * i] = b[i].x;
            flat_b[2 * i + 1] = b[i].y;
        }
        std::vector<double> want = oracle::lu_solve(oracle::dense_from_block(A), flat_b);
        for (int i = 0; i < J; ++i) {
            CHECK(got[i].x == doctest::Approx(want[2 * i]).epsilon(1e-9));
            CHECK(got[i].y == doctest::Approx(want[2 * i + 1]).epsilon(1e-9));
        }
    }
}

TEST_CASE("block cyclic solve rejects singular systems") {
    BlockCyclicTridiagonal A;
    A.sub.assign(3, Mat2{});
    A.diag.assign(3, Mat2{});
    A.sup.assign(3, Mat2{});
    std::vector<Vec2> b = {{1, 0}, {0, 1}, {1, 1}};
    CHECK_THROWS_AS(solve_block_cyclic(A, b), SingularSystemError);

    // Zero row sums once more: the all-ones vector is in the kernel.
    for (double s : {1.0, 1e-10, 1e10}) {
        BlockCyclicTridiagonal L;
        L.sub.assign(4, (-s) * Mat2::identity());
        L.diag.assign(4, (2 * s) * Mat2::identity());
        L.sup.assign(4, (-s) * Mat2::identity());
        std::vector<Vec2> rhs = {{s, 0}, {0, 0}, {0, 0}, {-s, 0}};
        CHECK_THROWS_AS(solve_block_cyclic(L, rhs), SingularSystemError);
    }
}

TEST_CASE("singular system error carries the pivot index") {
    CyclicTridiagonal zero;
    zero.sub = {0, 0, 0};
    zero.diag = {0, 0, 0};
    zero.sup = {0, 0, 0};
    try {
        solve_cyclic_tridiag(zero, {1, 1, 1});
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        CHECK(e.pivot == 0);
    }
}
