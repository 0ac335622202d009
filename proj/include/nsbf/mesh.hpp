#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nsbf {

/**
 * Uniform mesh on [L, U].
 *
 * The point count satisfies M = 1 (mod 5) so the interval splits into whole
 * panels of five subintervals, each integrated with the six-point closed
 * Newton-Cotes rule.
 */
class Mesh {
public:
    /// Price-domain mesh: requires U > L > 0.
    static std::shared_ptr<const Mesh> build(double lower, double upper, std::size_t count);
    /// Generic interval, only U > L is required.
    static std::shared_ptr<const Mesh> uniform(double lower, double upper, std::size_t count);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    std::size_t size() const noexcept { return points_.size(); }
    double step() const noexcept { return step_; }
    double point(std::size_t i) const noexcept { return points_[i]; }
    std::span<const double> points() const noexcept { return points_; }

    bool same_as(const Mesh& other) const noexcept {
        return this == &other ||
               (lower_ == other.lower_ && upper_ == other.upper_ && size() == other.size());
    }

private:
    Mesh(double lower, double upper, std::size_t count);

    double lower_;
    double upper_;
    double step_;
    std::vector<double> points_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Real function sampled on every node of a mesh.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(MeshPtr mesh, std::vector<double> values);
    GridFunction(MeshPtr mesh, double constant);

    static GridFunction sample(MeshPtr mesh, const std::function<double(double)>& f);

    const MeshPtr& mesh() const noexcept { return mesh_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    double sup_norm() const noexcept;
    bool all_finite() const noexcept;

    /// Elementwise transform; `f` receives (y_i, value_i).
    GridFunction map(const std::function<double(double, double)>& f) const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(const GridFunction& other);
    GridFunction& operator/=(const GridFunction& other);
    GridFunction& operator*=(double s);

private:
    void require_same_mesh(const GridFunction& other) const;

    MeshPtr mesh_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(GridFunction a, const GridFunction& b);
GridFunction operator/(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);
GridFunction operator*(GridFunction a, double s);

/// Cumulative integral from the lower endpoint: F(L) = 0, F' = f.
/// Panel end-points use the six-point Newton-Cotes rule; nodes inside a panel
/// integrate the panel's quintic interpolant, so every node has degree-5
/// accuracy.
GridFunction antiderivative(const GridFunction& f);

/// Definite integral over the whole mesh with the composite six-point rule.
double integrate(const GridFunction& f);

/// Weighted scalar product, the integral of g1 * g2 * w over [L, U].
double inner_product(const GridFunction& g1, const GridFunction& g2, const GridFunction& w);

/// Local quintic (six-node Lagrange) interpolation at an arbitrary y in [L, U].
double interpolate(const GridFunction& f, double y);

/// Fourth-order finite-difference derivative: five-point central stencil in
/// the interior, one-sided fourth-order stencils at the two nodes nearest
/// each end.
GridFunction derivative(const GridFunction& f);

}  // namespace nsbf
