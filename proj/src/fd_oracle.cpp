#include "nsbf/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf::fd {

namespace {

struct Tridiagonal {
    std::vector<double> lower, diag, upper;
};

// Thomas algorithm; rhs is overwritten with the solution.
void solve_tridiagonal(const Tridiagonal& m, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> c(n), d(n);
    c[0] = m.upper[0] / m.diag[0];
    d[0] = rhs[0] / m.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = m.diag[i] - m.lower[i] * c[i - 1];
        c[i] = i + 1 < n ? m.upper[i] / denom : 0.0;
        d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / denom;
    }
    rhs[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = d[i] - c[i] * rhs[i + 1];
}

double terminal_value(const OptionContract& contract, double y) {
    switch (contract.style) {
        case OptionStyle::Call: return std::max(y - contract.K, 0.0);
        case OptionStyle::Put: return std::max(contract.K - y, 0.0);
        case OptionStyle::Custom: return interpolate(*contract.custom_payoff, y);
    }
    return 0.0;
}

}  // namespace

double FDSolution::at(double y0, std::size_t i) const {
    const auto& row = values.at(i);
    if (!(y0 >= y.front() && y0 <= y.back())) {
        throw Error(ErrorKind::OutOfRange, "fd_oracle", "evaluation point outside the grid");
    }
    const double h = y[1] - y[0];
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    auto k = static_cast<std::ptrdiff_t>(std::floor((y0 - y.front()) / h)) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, n - 4);
    double sum = 0.0;
    for (std::ptrdiff_t a = k; a < k + 4; ++a) {
        double basis = 1.0;
        for (std::ptrdiff_t b = k; b < k + 4; ++b) {
            if (b != a) basis *= (y0 - y[b]) / (y[a] - y[b]);
        }
        sum += basis * row[a];
    }
    return sum;
}

FDSolution solve_pde(const DiffusionSpec& spec, const OptionContract& contract, const FDGrid& grid) {
    validate(contract);
    if (grid.y_count < 201 || grid.t_count < 200) {
        throw Error(ErrorKind::InvalidCount, "fd_oracle", "grid needs y_count >= 201 and t_count >= 200");
    }
    const std::size_t ny = grid.y_count;
    const std::size_t nt = grid.t_count;
    const double L = contract.L;
    const double U = contract.U;
    const double T = contract.T;
    const double dy = (U - L) / static_cast<double>(ny - 1);
    const double dt = T / static_cast<double>(nt);

    FDSolution out;
    out.y.resize(ny);
    for (std::size_t j = 0; j < ny; ++j) out.y[j] = L + dy * static_cast<double>(j);
    out.t.resize(nt + 1);
    for (std::size_t i = 0; i <= nt; ++i) out.t[i] = dt * static_cast<double>(i);
    out.values.assign(nt + 1, std::vector<double>(ny, 0.0));

    // Spatial operator on interior nodes: a v_{j-1} + b v_j + c v_{j+1}.
    const std::size_t m = ny - 2;
    std::vector<double> a(m), b(m), c(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double y = out.y[k + 1];
        const double s = spec.sigma(y);
        const double h = spec.hazard(y);
        const double diffusion = 0.5 * s * s * y * y / (dy * dy);
        const double advection = (spec.rbar(y) - spec.qbar(y) + h) * y / (2.0 * dy);
        a[k] = diffusion - advection;
        b[k] = -2.0 * diffusion - (spec.rbar(y) + h);
        c[k] = diffusion + advection;
    }
    const double rebate = contract.rebate;

    std::vector<double> v(ny);
    double bound = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        v[j] = terminal_value(contract, out.y[j]);
        bound = std::max(bound, std::abs(v[j]));
    }
    bound = std::max(bound, rebate);
    v.front() = 0.0;
    v.back() = rebate;
    out.values[nt] = v;

    // theta = 1 is implicit Euler, theta = 1/2 Crank-Nicolson.
    auto step = [&](double tau, double weight) {
        Tridiagonal sys{std::vector<double>(m), std::vector<double>(m), std::vector<double>(m)};
        std::vector<double> rhs(m);
        const double explicit_w = 1.0 - weight;
        for (std::size_t k = 0; k < m; ++k) {
            const double left = v[k];
            const double mid = v[k + 1];
            const double right = v[k + 2];
            rhs[k] = mid + explicit_w * tau * (a[k] * left + b[k] * mid + c[k] * right);
            sys.lower[k] = -weight * tau * a[k];
            sys.diag[k] = 1.0 - weight * tau * b[k];
            sys.upper[k] = -weight * tau * c[k];
        }
        rhs[m - 1] += weight * tau * c[m - 1] * rebate;
        solve_tridiagonal(sys, rhs);
        for (std::size_t k = 0; k < m; ++k) v[k + 1] = rhs[k];
        v.front() = 0.0;
        v.back() = rebate;
    };

    const std::size_t damping = grid.damping_steps;
    for (std::size_t i = nt; i-- > 0;) {
        if (i + 1 == nt && damping > 0) {
            for (std::size_t q = 0; q < damping; ++q) step(dt / static_cast<double>(damping), 1.0);
        } else {
            step(dt, 0.5);
        }
        for (double x : v) {
            if (!std::isfinite(x) || std::abs(x) > 10.0 * std::max(bound, 1e-300)) {
                std::ostringstream msg;
                msg << "value " << x << " at t=" << out.t[i] << " exceeds 10x the payoff bound";
                throw Error(ErrorKind::InstabilityDetected, "fd_oracle", msg.str());
            }
        }
        out.values[i] = v;
    }
    return out;
}

}  // namespace nsbf::fd
