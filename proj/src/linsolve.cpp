#include "csflow/linsolve.hpp"

#include <algorithm>
#include <cmath>

namespace csflow {

namespace {

constexpr double kPivotTol = 1e-13;

}  // namespace

std::vector<double> solve_cyclic_tridiag(const CyclicTridiagonal& A,
                                         const std::vector<double>& rhs) {
    const int n = A.size();
    if (n < 3) throw std::invalid_argument("solve_cyclic_tridiag: need at least 3 rows");
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_cyclic_tridiag: rhs size mismatch");

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(A.sub[i]) + std::abs(A.diag[i]) + std::abs(A.sup[i]));
    if (scale == 0.0) throw SingularSystemError(0);
    const double tol = kPivotTol * scale;

    // Corner entries: A[0][n-1] = sub[0], A[n-1][0] = sup[n-1]. Remove them
    // with the rank-one update A = A' + u v^T, u = (gamma,0,..,sup[n-1]),
    // v = (1,0,..,sub[0]/gamma). gamma = -scale is always a safe choice.
    const double gamma = -scale;
    std::vector<double> diag(A.diag);
    diag[0] -= gamma;
    diag[n - 1] -= A.sup[static_cast<std::size_t>(n - 1)] * A.sub[0] / gamma;

    std::vector<double> y(rhs);
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    z[0] = gamma;
    z[n - 1] += A.sup[static_cast<std::size_t>(n - 1)];

    // One factorization pass over the band, applied to both right hand sides.
    std::vector<double> pivot(static_cast<std::size_t>(n));
    std::vector<double> upper(static_cast<std::size_t>(n - 1));
    pivot[0] = diag[0];
    if (std::abs(pivot[0]) <= tol) throw SingularSystemError(0);
    for (int i = 1; i < n; ++i) {
        upper[i - 1] = A.sup[static_cast<std::size_t>(i - 1)];
        double m = A.sub[static_cast<std::size_t>(i)] / pivot[i - 1];
        pivot[i] = diag[static_cast<std::size_t>(i)] - m * upper[i - 1];
        if (std::abs(pivot[i]) <= tol) throw SingularSystemError(i);
        y[static_cast<std::size_t>(i)] -= m * y[static_cast<std::size_t>(i - 1)];
        z[static_cast<std::size_t>(i)] -= m * z[static_cast<std::size_t>(i - 1)];
    }
    y[static_cast<std::size_t>(n - 1)] /= pivot[n - 1];
    z[static_cast<std::size_t>(n - 1)] /= pivot[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        y[static_cast<std::size_t>(i)] =
            (y[static_cast<std::size_t>(i)] - upper[i] * y[static_cast<std::size_t>(i + 1)]) /
            pivot[i];
        z[static_cast<std::size_t>(i)] =
            (z[static_cast<std::size_t>(i)] - upper[i] * z[static_cast<std::size_t>(i + 1)]) /
            pivot[i];
    }

    // Sherman-Morrison correction: x = y - z (v.y)/(1 + v.z).
    const double v_last = A.sub[0] / gamma;
    const double denom = 1.0 + z[0] + v_last * z[static_cast<std::size_t>(n - 1)];
    if (std::abs(denom) <= kPivotTol) throw SingularSystemError(n - 1);
    const double factor = (y[0] + v_last * y[static_cast<std::size_t>(n - 1)]) / denom;
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] -= factor * z[static_cast<std::size_t>(i)];
    return y;
}

namespace {

Mat2 inverse(Mat2 m, double det_tol, int pivot_index) {
    double d = m.det();
    if (std::abs(d) <= det_tol) throw SingularSystemError(pivot_index);
    double inv = 1.0 / d;
    return {m.yy * inv, -m.xy * inv, -m.yx * inv, m.xx * inv};
}

}  // namespace

std::vector<Vec2> solve_block_cyclic(const BlockCyclicTridiagonal& A,
                                     const std::vector<Vec2>& rhs) {
    const int n = A.size();
    if (n < 3) throw std::invalid_argument("solve_block_cyclic: need at least 3 rows");
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_block_cyclic: rhs size mismatch");

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale,
                         A.sub[i].max_abs() + A.diag[i].max_abs() + A.sup[i].max_abs());
    if (scale == 0.0) throw SingularSystemError(0);
    // A 2x2 pivot block is deemed singular when its determinant is small
    // relative to the squared row magnitude.
    const double det_tol = kPivotTol * scale * scale;

    // Corner blocks: A[0][n-1] = sub[0] =: B, A[n-1][0] = sup[n-1] =: C.
    // Rank-two update A = A' + U V^T with U_0 = gamma I, U_{n-1} = C,
    // V_0 = I, V_{n-1}^T = B/gamma; gamma = -scale.
    const double gamma = -scale;
    const Mat2 B = A.sub[0];
    const Mat2 C = A.sup[static_cast<std::size_t>(n - 1)];

    std::vector<Mat2> diag(A.diag);
    diag[0] = diag[0] - gamma * Mat2::identity();
    diag[n - 1] = diag[n - 1] - C * B * (1.0 / gamma);

    std::vector<Vec2> y(rhs);
    std::vector<Mat2> z(static_cast<std::size_t>(n), Mat2{});
    z[0] = gamma * Mat2::identity();
    z[n - 1] += C;

    std::vector<Mat2> pivot_inv(static_cast<std::size_t>(n));
    std::vector<Mat2> upper(static_cast<std::size_t>(n - 1));
    pivot_inv[0] = inverse(diag[0], det_tol, 0);
    for (int i = 1; i < n; ++i) {
        upper[i - 1] = A.sup[static_cast<std::size_t>(i - 1)];
        Mat2 m = A.sub[static_cast<std::size_t>(i)] * pivot_inv[i - 1];
        pivot_inv[i] = inverse(diag[static_cast<std::size_t>(i)] - m * upper[i - 1], det_tol, i);
        y[static_cast<std::size_t>(i)] -= m * y[static_cast<std::size_t>(i - 1)];
        z[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] - m * z[static_cast<std::size_t>(i - 1)];
    }
    y[static_cast<std::size_t>(n - 1)] = pivot_inv[n - 1] * y[static_cast<std::size_t>(n - 1)];
    z[static_cast<std::size_t>(n - 1)] = pivot_inv[n - 1] * z[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i) {
        y[static_cast<std::size_t>(i)] =
            pivot_inv[i] * (y[static_cast<std::size_t>(i)] - upper[i] * y[static_cast<std::size_t>(i + 1)]);
        z[static_cast<std::size_t>(i)] =
            pivot_inv[i] * (z[static_cast<std::size_t>(i)] - upper[i] * z[static_cast<std::size_t>(i + 1)]);
    }

    // Woodbury correction with the 2x2 capacitance H = I + V^T Z.
    const Mat2 v_last = B * (1.0 / gamma);
    Mat2 H = Mat2::identity() + z[0] + v_last * z[static_cast<std::size_t>(n - 1)];
    Mat2 H_inv = inverse(H, kPivotTol, n - 1);
    Vec2 c = y[0] + v_last * y[static_cast<std::size_t>(n - 1)];
    Vec2 correction = H_inv * c;
    for (int i = 0; i < n; ++i)
        y[static_cast<std::size_t>(i)] -= z[static_cast<std::size_t>(i)] * correction;
    return y;
}

}  // namespace csflow
