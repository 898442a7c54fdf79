#pragma once

/// @file geometry.hpp
/// @brief Periodic mesh over the unit parameter interval, piecewise linear
///        nodal fields, and the discrete frame (length element, tangent,
///        normal) of a closed polygonal curve.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace csflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm_sq() const { return x * x + y * y; }

    /// Counter-clockwise rotation by pi/2: (a,b) -> (-b,a).
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// An element whose chord collapsed: two consecutive curve nodes coincide.
struct DegenerateElementError : std::runtime_error {
    int element;
    explicit DegenerateElementError(int e)
        : std::runtime_error("degenerate element " + std::to_string(e) +
                             ": zero-length chord (mesh collapse)"),
          element(e) {}
};

/// Partition of the periodic unit interval into J elements.
///
/// Element e spans [rho_e, rho_{e+1}] and connects nodes e and (e+1) mod J.
/// Nodes are stored 0..J-1; node J is identified with node 0 and never
/// stored, so periodicity has a single source of truth.
class PeriodicMesh {
public:
    /// Uniform partition, all h_e = 1/J. Throws for J < 3 (a closed
    /// polygon needs at least 3 nodes).
    static PeriodicMesh uniform(int element_count);

    /// General partition from breakpoints 0 = rho_0 < ... < rho_J = 1.
    explicit PeriodicMesh(std::vector<double> breakpoints);

    int size() const { return static_cast<int>(h_.size()); }
    double h(int e) const { return h_[static_cast<std::size_t>(e)]; }
    double max_h() const { return max_h_; }
    double node(int i) const { return breakpoints_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    int next(int i) const { return i + 1 == size() ? 0 : i + 1; }
    int prev(int i) const { return i == 0 ? size() - 1 : i - 1; }

private:
    std::vector<double> breakpoints_;  // rho_0..rho_J, size J+1
    std::vector<double> h_;            // element lengths, size J
    double max_h_ = 0.0;
};

/// Piecewise linear scalar function given by one value per node.
class NodalScalarField {
public:
    NodalScalarField() = default;
    explicit NodalScalarField(std::vector<double> values) : v_(std::move(values)) {}

    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return v_; }

    /// Linear interpolant at parameter rho (wrapped into [0,1)).
    double eval(const PeriodicMesh& mesh, double rho) const;

private:
    std::vector<double> v_;
};

/// Piecewise linear plane curve given by one position per node.
class NodalVectorField {
public:
    NodalVectorField() = default;
    explicit NodalVectorField(std::vector<Vec2> values) : v_(std::move(values)) {}

    int size() const { return static_cast<int>(v_.size()); }
    Vec2 operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    const std::vector<Vec2>& values() const { return v_; }

    Vec2 eval(const PeriodicMesh& mesh, double rho) const;

private:
    std::vector<Vec2> v_;
};

/// Element-constant geometric data of a discrete curve: the length element
/// q_e = |X_rho|, the unit tangent, and the unit normal (tangent rotated
/// counter-clockwise by pi/2).
struct ElementFrame {
    std::vector<double> stretch;  // q_e = |chord| / h_e
    std::vector<Vec2> tangent;
    std::vector<Vec2> normal;

    int size() const { return static_cast<int>(stretch.size()); }
};

/// Frame of the polygon X on the given mesh. Throws DegenerateElementError
/// if a chord is shorter than 1e-14 * (polygon length / J); the threshold
/// is scale invariant.
ElementFrame element_frame(const PeriodicMesh& mesh, const NodalVectorField& x);

/// Ratio of the longest polygon edge h_e * q_e to the shortest; 1 for a
/// regular polygon. Quantifies how equidistributed the nodes are.
double mesh_ratio(const PeriodicMesh& mesh, const NodalVectorField& x);

/// Total polygon length, sum over elements of h_e * q_e.
double polygon_length(const PeriodicMesh& mesh, const NodalVectorField& x);

}  // namespace csflow
