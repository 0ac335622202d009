#include "nsbf/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

constexpr std::size_t kPanelNodes = 6;
constexpr std::size_t kPanelWidth = kPanelNodes - 1;

// kPartialWeights[j][i]: integral over [0, j] (in units of h) of the Lagrange
// basis polynomial of node i on the nodes 0..5. Row 5 is the closed six-point
// Newton-Cotes rule 5/288 * (19, 75, 50, 50, 75, 19).
using WeightTable = std::array<std::array<double, kPanelNodes>, kPanelNodes>;

WeightTable make_partial_weights() {
    WeightTable table{};
    for (std::size_t i = 0; i < kPanelNodes; ++i) {
        // Monomial coefficients of the basis polynomial for node i.
        std::array<double, kPanelNodes> coeffs{};
        coeffs[0] = 1.0;
        std::size_t degree = 0;
        double denom = 1.0;
        for (std::size_t k = 0; k < kPanelNodes; ++k) {
            if (k == i) continue;
            const double root = static_cast<double>(k);
            for (std::size_t d = degree + 1; d > 0; --d) {
                coeffs[d] = coeffs[d - 1] - root * coeffs[d];
            }
            coeffs[0] = -root * coeffs[0];
            ++degree;
            denom *= static_cast<double>(i) - root;
        }
        for (std::size_t j = 1; j < kPanelNodes; ++j) {
            const double t = static_cast<double>(j);
            double acc = 0.0;
            double power = t;
            for (std::size_t d = 0; d < kPanelNodes; ++d) {
                acc += coeffs[d] * power / static_cast<double>(d + 1);
                power *= t;
            }
            table[j][i] = acc / denom;
        }
    }
    return table;
}

const WeightTable& partial_weights() {
    static const WeightTable table = make_partial_weights();
    return table;
}

void require_same(const GridFunction& a, const GridFunction& b) {
    if (!a.mesh() || !b.mesh() || !a.mesh()->same_as(*b.mesh())) {
        throw Error(ErrorKind::MeshMismatch, "mesh_quadrature", "grid functions live on different meshes");
    }
}

}  // namespace

Mesh::Mesh(double lower, double upper, std::size_t count)
    : lower_(lower), upper_(upper), step_((upper - lower) / static_cast<double>(count - 1)), points_(count) {
    for (std::size_t i = 0; i < count; ++i) {
        points_[i] = lower + step_ * static_cast<double>(i);
    }
    points_.back() = upper;
}

std::shared_ptr<const Mesh> Mesh::build(double lower, double upper, std::size_t count) {
    if (!(lower > 0.0)) {
        std::ostringstream msg;
        msg << "need L > 0, got L=" << lower;
        throw Error(ErrorKind::InvalidBounds, "mesh_quadrature", msg.str());
    }
    return uniform(lower, upper, count);
}

std::shared_ptr<const Mesh> Mesh::uniform(double lower, double upper, std::size_t count) {
    if (!std::isfinite(lower) || !(upper > lower) || !std::isfinite(upper)) {
        std::ostringstream msg;
        msg << "need U > L, got L=" << lower << " U=" << upper;
        throw Error(ErrorKind::InvalidBounds, "mesh_quadrature", msg.str());
    }
    if (count < kPanelNodes || count % kPanelWidth != 1) {
        std::ostringstream msg;
        msg << "point count must be >= 6 and equal 1 mod 5, got " << count;
        throw Error(ErrorKind::InvalidCount, "mesh_quadrature", msg.str());
    }
    return std::shared_ptr<const Mesh>(new Mesh(lower, upper, count));
}

GridFunction::GridFunction(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (!mesh_ || values_.size() != mesh_->size()) {
        throw Error(ErrorKind::MeshMismatch, "mesh_quadrature", "value count does not match mesh size");
    }
}

GridFunction::GridFunction(MeshPtr mesh, double constant)
    : mesh_(std::move(mesh)), values_(mesh_->size(), constant) {}

GridFunction GridFunction::sample(MeshPtr mesh, const std::function<double(double)>& f) {
    std::vector<double> values(mesh->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = f(mesh->point(i));
    }
    return GridFunction(std::move(mesh), std::move(values));
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction GridFunction::map(const std::function<double(double, double)>& f) const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f(mesh_->point(i), values_[i]);
    }
    return GridFunction(mesh_, std::move(out));
}

void GridFunction::require_same_mesh(const GridFunction& other) const { require_same(*this, other); }

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_mesh(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_mesh(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& other) {
    require_same_mesh(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator/=(const GridFunction& other) {
    require_same_mesh(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] /= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
GridFunction operator/(GridFunction a, const GridFunction& b) { return a /= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }
GridFunction operator*(GridFunction a, double s) { return a *= s; }

GridFunction antiderivative(const GridFunction& f) {
    const auto& mesh = *f.mesh();
    const auto& weights = partial_weights();
    const double h = mesh.step();
    const auto in = f.values();
    std::vector<double> out(in.size(), 0.0);

    double panel_start = 0.0;
    for (std::size_t base = 0; base + kPanelWidth < in.size(); base += kPanelWidth) {
        for (std::size_t j = 1; j <= kPanelWidth; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < kPanelNodes; ++i) {
                acc += weights[j][i] * in[base + i];
            }
            out[base + j] = panel_start + h * acc;
        }
        panel_start = out[base + kPanelWidth];
    }
    return GridFunction(f.mesh(), std::move(out));
}

double integrate(const GridFunction& f) {
    const auto& weights = partial_weights()[kPanelWidth];
    const auto in = f.values();
    double total = 0.0;
    for (std::size_t base = 0; base + kPanelWidth < in.size(); base += kPanelWidth) {
        double acc = 0.0;
        for (std::size_t i = 0; i < kPanelNodes; ++i) acc += weights[i] * in[base + i];
        total += acc;
    }
    return total * f.mesh()->step();
}

double inner_product(const GridFunction& g1, const GridFunction& g2, const GridFunction& w) {
    require_same(g1, g2);
    require_same(g1, w);
    return integrate(g1 * g2 * w);
}

double interpolate(const GridFunction& f, double y) {
    const auto& mesh = *f.mesh();
    const double slack = 1e-12 * (mesh.upper() - mesh.lower());
    if (!(y >= mesh.lower() - slack && y <= mesh.upper() + slack)) {
        std::ostringstream msg;
        msg << "y=" << y << " outside [" << mesh.lower() << ", " << mesh.upper() << "]";
        throw Error(ErrorKind::OutOfRange, "mesh_quadrature", msg.str());
    }
    const double pos = (y - mesh.lower()) / mesh.step();
    const auto last_start = static_cast<long>(mesh.size() - kPanelNodes);
    const long start = std::clamp(static_cast<long>(std::floor(pos)) - 2, 0L, last_start);
    const double t = pos - static_cast<double>(start);

    double result = 0.0;
    for (std::size_t i = 0; i < kPanelNodes; ++i) {
        double basis = 1.0;
        for (std::size_t k = 0; k < kPanelNodes; ++k) {
            if (k == i) continue;
            basis *= (t - static_cast<double>(k)) / (static_cast<double>(i) - static_cast<double>(k));
        }
        result += basis * f[static_cast<std::size_t>(start) + i];
    }
    return result;
}

GridFunction derivative(const GridFunction& f) {
    const auto in = f.values();
    const std::size_t n = in.size();
    const double scale = 1.0 / (12.0 * f.mesh()->step());
    std::vector<double> out(n);

    out[0] = (-25.0 * in[0] + 48.0 * in[1] - 36.0 * in[2] + 16.0 * in[3] - 3.0 * in[4]) * scale;
    out[1] = (-3.0 * in[0] - 10.0 * in[1] + 18.0 * in[2] - 6.0 * in[3] + in[4]) * scale;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        out[i] = (in[i - 2] - 8.0 * in[i - 1] + 8.0 * in[i + 1] - in[i + 2]) * scale;
    }
    out[n - 2] = (3.0 * in[n - 1] + 10.0 * in[n - 2] - 18.0 * in[n - 3] + 6.0 * in[n - 4] - in[n - 5]) * scale;
    out[n - 1] = (25.0 * in[n - 1] - 48.0 * in[n - 2] + 36.0 * in[n - 3] - 16.0 * in[n - 4] + 3.0 * in[n - 5]) * scale;
    return GridFunction(f.mesh(), std::move(out));
}

}  // namespace nsbf
