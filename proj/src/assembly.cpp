#include "csflow/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csflow {

namespace {

void require_size(int have, int want, const char* who) {
    if (have != want)
        throw std::invalid_argument(std::string(who) + ": field size does not match mesh");
}

}  // namespace

double Mat2::max_abs() const {
    return std::max(std::max(std::abs(xx), std::abs(xy)),
                    std::max(std::abs(yx), std::abs(yy)));
}

std::vector<double> CyclicTridiagonal::apply(const std::vector<double>& x) const {
    const int n = size();
    require_size(static_cast<int>(x.size()), n, "CyclicTridiagonal::apply");
    std::vector<double> y(x.size());
    for (int i = 0; i < n; ++i) {
        int l = i == 0 ? n - 1 : i - 1;
        int r = i + 1 == n ? 0 : i + 1;
        y[i] = sub[i] * x[l] + diag[i] * x[i] + sup[i] * x[r];
    }
    return y;
}

std::vector<Vec2> BlockCyclicTridiagonal::apply(const std::vector<Vec2>& x) const {
    const int n = size();
    require_size(static_cast<int>(x.size()), n, "BlockCyclicTridiagonal::apply");
    std::vector<Vec2> y(x.size());
    for (int i = 0; i < n; ++i) {
        int l = i == 0 ? n - 1 : i - 1;
        int r = i + 1 == n ? 0 : i + 1;
        y[i] = sub[i] * x[l] + diag[i] * x[i] + sup[i] * x[r];
    }
    return y;
}

double VelocityFields::max_tangential() const {
    double m = 0.0;
    for (double p : tangential_left) m = std::max(m, std::abs(p));
    for (double p : tangential_right) m = std::max(m, std::abs(p));
    return m;
}

std::vector<double> lumped_scalar_mass(const PeriodicMesh& mesh, const ElementFrame& frame) {
    const int J = mesh.size();
    require_size(frame.size(), J, "lumped_scalar_mass");
    std::vector<double> m(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        int l = mesh.prev(i);
        m[i] = 0.5 * (mesh.h(l) * frame.stretch[l] + mesh.h(i) * frame.stretch[i]);
    }
    return m;
}

std::vector<Mat2> lumped_block_mass(const PeriodicMesh& mesh, const ElementFrame& frame,
                                    double alpha) {
    const int J = mesh.size();
    require_size(frame.size(), J, "lumped_block_mass");
    std::vector<Mat2> m(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        Mat2 sum{};
        for (int e : {mesh.prev(i), i}) {
            double q = frame.stretch[e];
            double weight = 0.5 * mesh.h(e) * q * q;
            Mat2 proj = alpha * Mat2::identity() +
                        (1.0 - alpha) * Mat2::outer(frame.normal[e], frame.normal[e]);
            sum += weight * proj;
        }
        m[i] = sum;
    }
    return m;
}

double lumped_inner_product(const PeriodicMesh& mesh, const ElementFrame& frame,
                            const NodalScalarField& a, const NodalScalarField& b) {
    const int J = mesh.size();
    require_size(frame.size(), J, "lumped_inner_product");
    require_size(a.size(), J, "lumped_inner_product");
    require_size(b.size(), J, "lumped_inner_product");
    double sum = 0.0;
    for (int e = 0; e < J; ++e) {
        int r = mesh.next(e);
        sum += 0.5 * mesh.h(e) * frame.stretch[e] * (a[e] * b[e] + a[r] * b[r]);
    }
    return sum;
}

std::vector<Vec2> curve_stiffness_apply(const PeriodicMesh& mesh, const NodalVectorField& x) {
    const int J = mesh.size();
    require_size(x.size(), J, "curve_stiffness_apply");
    std::vector<Vec2> y(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        int l = mesh.prev(i);
        int r = mesh.next(i);
        y[i] = (x[i] - x[l]) / mesh.h(l) - (x[r] - x[i]) / mesh.h(i);
    }
    return y;
}

CyclicTridiagonal scalar_stiffness_build(const PeriodicMesh& mesh, const ElementFrame& frame,
                                         double diffusivity) {
    const int J = mesh.size();
    require_size(frame.size(), J, "scalar_stiffness_build");
    CyclicTridiagonal A;
    A.sub.resize(static_cast<std::size_t>(J));
    A.diag.resize(static_cast<std::size_t>(J));
    A.sup.resize(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        int l = mesh.prev(i);
        double cl = diffusivity / (mesh.h(l) * frame.stretch[l]);
        double cr = diffusivity / (mesh.h(i) * frame.stretch[i]);
        A.sub[i] = -cl;
        A.diag[i] = cl + cr;
        A.sup[i] = -cr;
    }
    return A;
}

CyclicTridiagonal transport_build(const PeriodicMesh& mesh, const VelocityFields& velocities) {
    const int J = mesh.size();
    require_size(velocities.size(), J, "transport_build");
    CyclicTridiagonal T;
    T.sub.resize(static_cast<std::size_t>(J));
    T.diag.resize(static_cast<std::size_t>(J));
    T.sup.resize(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        int l = mesh.prev(i);
        T.sub[i] = 0.5 * velocities.tangential_left[l];
        T.diag[i] = 0.5 * (velocities.tangential_right[l] - velocities.tangential_left[i]);
        T.sup[i] = -0.5 * velocities.tangential_right[i];
    }
    return T;
}

std::vector<Vec2> curve_rhs(const PeriodicMesh& mesh, const ElementFrame& frame,
                            const NodalScalarField& w, const ScalarFn& f,
                            const CurveSourceFn& source, double t) {
    const int J = mesh.size();
    require_size(frame.size(), J, "curve_rhs");
    require_size(w.size(), J, "curve_rhs");
    std::vector<Vec2> rhs(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        double fw = f ? f(w[i]) : 0.0;
        Vec2 s = source ? source(mesh.node(i), t) : Vec2{};
        Vec2 sum{};
        for (int e : {mesh.prev(i), i}) {
            double q = frame.stretch[e];
            double weight = 0.5 * mesh.h(e) * q * q;
            sum += weight * (fw * frame.normal[e] + s);
        }
        rhs[i] = sum;
    }
    return rhs;
}

std::vector<double> scalar_rhs(const PeriodicMesh& mesh, const ElementFrame& frame_new,
                               const std::vector<double>& mass_old,
                               const NodalScalarField& w_old,
                               const VelocityFields& velocities, const ReactionFn& g,
                               const ScalarSourceFn& source, double t, double dt) {
    const int J = mesh.size();
    require_size(frame_new.size(), J, "scalar_rhs");
    require_size(static_cast<int>(mass_old.size()), J, "scalar_rhs");
    require_size(w_old.size(), J, "scalar_rhs");
    require_size(velocities.size(), J, "scalar_rhs");
    std::vector<double> rhs(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        double sw = source ? source(mesh.node(i), t) : 0.0;
        double sum = mass_old[i] * w_old[i] / dt;
        int l = mesh.prev(i);
        // Normal velocity at node i as seen from each adjacent element.
        double v_from_left = velocities.normal_right[l];
        double v_from_right = velocities.normal_left[i];
        double gl = g ? g(v_from_left, w_old[i]) : 0.0;
        double gr = g ? g(v_from_right, w_old[i]) : 0.0;
        sum += 0.5 * mesh.h(l) * frame_new.stretch[l] * (gl + sw);
        sum += 0.5 * mesh.h(i) * frame_new.stretch[i] * (gr + sw);
        rhs[i] = sum;
    }
    return rhs;
}

}  // namespace csflow
