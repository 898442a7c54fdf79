#include "csflow/geometry.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace csflow {

PeriodicMesh PeriodicMesh::uniform(int element_count) {
    if (element_count < 3)
        throw std::invalid_argument("PeriodicMesh: need at least 3 elements, got " +
                                    std::to_string(element_count));
    std::vector<double> bp(static_cast<std::size_t>(element_count) + 1);
    for (int i = 0; i <= element_count; ++i)
        bp[static_cast<std::size_t>(i)] = static_cast<double>(i) / element_count;
    bp.back() = 1.0;
    return PeriodicMesh(std::move(bp));
}

PeriodicMesh::PeriodicMesh(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.size() < 4)
        throw std::invalid_argument("PeriodicMesh: need at least 3 elements");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
        throw std::invalid_argument("PeriodicMesh: breakpoints must run from 0 to 1");
    h_.resize(breakpoints_.size() - 1);
    for (std::size_t e = 0; e < h_.size(); ++e) {
        h_[e] = breakpoints_[e + 1] - breakpoints_[e];
        if (h_[e] <= 0.0)
            throw std::invalid_argument("PeriodicMesh: breakpoints must be strictly increasing");
    }
    max_h_ = *std::max_element(h_.begin(), h_.end());
}

namespace {

// Locate the element containing rho (wrapped into [0,1)) and the local
// coordinate s in [0,1] along it.
std::pair<int, double> locate(const PeriodicMesh& mesh, double rho) {
    rho -= std::floor(rho);
    const auto& bp = mesh.breakpoints();
    auto it = std::upper_bound(bp.begin(), bp.end(), rho);
    int e = static_cast<int>(it - bp.begin()) - 1;
    e = std::clamp(e, 0, mesh.size() - 1);
    double s = (rho - mesh.node(e)) / mesh.h(e);
    return {e, std::clamp(s, 0.0, 1.0)};
}

}  // namespace

double NodalScalarField::eval(const PeriodicMesh& mesh, double rho) const {
    auto [e, s] = locate(mesh, rho);
    double a = v_[static_cast<std::size_t>(e)];
    double b = v_[static_cast<std::size_t>(mesh.next(e))];
    return a + s * (b - a);
}

Vec2 NodalVectorField::eval(const PeriodicMesh& mesh, double rho) const {
    auto [e, s] = locate(mesh, rho);
    Vec2 a = v_[static_cast<std::size_t>(e)];
    Vec2 b = v_[static_cast<std::size_t>(mesh.next(e))];
    return a + s * (b - a);
}

ElementFrame element_frame(const PeriodicMesh& mesh, const NodalVectorField& x) {
    const int J = mesh.size();
    if (x.size() != J)
        throw std::invalid_argument("element_frame: field size does not match mesh");

    ElementFrame frame;
    frame.stretch.resize(static_cast<std::size_t>(J));
    frame.tangent.resize(static_cast<std::size_t>(J));
    frame.normal.resize(static_cast<std::size_t>(J));

    double length = 0.0;
    for (int e = 0; e < J; ++e)
        length += (x[mesh.next(e)] - x[e]).norm();
    const double floor_chord = 1e-14 * length / J;

    for (int e = 0; e < J; ++e) {
        Vec2 chord = x[mesh.next(e)] - x[e];
        double len = chord.norm();
        if (len <= floor_chord) throw DegenerateElementError(e);
        frame.stretch[static_cast<std::size_t>(e)] = len / mesh.h(e);
        Vec2 t = chord / len;
        frame.tangent[static_cast<std::size_t>(e)] = t;
        frame.normal[static_cast<std::size_t>(e)] = t.perp();
    }
    return frame;
}

double mesh_ratio(const PeriodicMesh& mesh, const NodalVectorField& x) {
    const int J = mesh.size();
    if (x.size() != J)
        throw std::invalid_argument("mesh_ratio: field size does not match mesh");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int e = 0; e < J; ++e) {
        double len = (x[mesh.next(e)] - x[e]).norm();
        lo = std::min(lo, len);
        hi = std::max(hi, len);
    }
    if (lo == 0.0) {
        for (int e = 0; e < J; ++e)
            if ((x[mesh.next(e)] - x[e]).norm() == 0.0) throw DegenerateElementError(e);
    }
    return hi / lo;
}

double polygon_length(const PeriodicMesh& mesh, const NodalVectorField& x) {
    const int J = mesh.size();
    if (x.size() != J)
        throw std::invalid_argument("polygon_length: field size does not match mesh");
    double length = 0.0;
    for (int e = 0; e < J; ++e) length += (x[mesh.next(e)] - x[e]).norm();
    return length;
}

}  // namespace csflow
