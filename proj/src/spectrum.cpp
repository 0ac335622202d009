#include "nsbf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

constexpr double kSmallArgument = 1e-8;
constexpr double kRescaleAbove = 1e200;

// Highest odd order kept in the sine-type series.
std::size_t odd_order_cap(const NSBFCoefficients& coeffs) {
    const std::size_t available = coeffs.alpha.empty() ? 0 : coeffs.alpha.size() - 1;
    return std::min(coeffs.order, available);
}

}  // namespace

void bessel_backward_into(double x, std::size_t m_max, std::vector<double>& out) {
    out.assign(m_max + 1, 0.0);
    if (x < kSmallArgument) {
        // j_m(x) ~ x^m / (2m + 1)!!
        double term = 1.0;
        for (std::size_t m = 0; m <= m_max; ++m) {
            if (m > 0) term *= x / static_cast<double>(2 * m + 1);
            out[m] = term;
            if (term == 0.0) break;
        }
        out[0] = 1.0 - x * x / 6.0;
        return;
    }

    const std::size_t start = m_max + static_cast<std::size_t>(std::ceil(x)) + 20;
    double upper = 0.0;
    double current = 1e-30;
    for (std::size_t m = start; m-- > 0;) {
        // current holds j_{m+1}, upper holds j_{m+2}.
        const double next = (2.0 * static_cast<double>(m) + 3.0) / x * current - upper;
        upper = current;
        current = next;
        if (m <= m_max) out[m] = current;
        if (std::abs(current) > kRescaleAbove) {
            const double s = 1.0 / kRescaleAbove;
            current *= s;
            upper *= s;
            for (std::size_t k = m; k <= m_max && k < out.size(); ++k) out[k] *= s;
        }
    }

    const double s = std::sin(x);
    const double j0 = s / x;
    const double j1 = s / (x * x) - std::cos(x) / x;
    // The closed form of j1 cancels for small x, so only the larger of the two
    // anchors the block and keeps its exact value.
    const bool by_j0 = std::abs(j0) >= std::abs(j1) || m_max < 1;
    const double scale = by_j0 ? j0 / out[0] : j1 / out[1];
    for (double& v : out) v *= scale;
    if (by_j0) {
        out[0] = j0;
    } else {
        out[1] = j1;
    }
}

SphericalBesselBlock bessel_backward(double x, std::size_t m_max) {
    SphericalBesselBlock block;
    block.x = x;
    bessel_backward_into(x, std::max<std::size_t>(m_max, 1), block.values);
    block.values.resize(m_max + 1);
    return block;
}

double characteristic(double omega, const NSBFCoefficients& coeffs, const SLCoefficients& c) {
    const std::size_t last = c.mesh->size() - 1;
    const double arg = omega * c.l[last];
    const std::size_t cap = odd_order_cap(coeffs);
    std::vector<double> j;
    bessel_backward_into(arg, std::max<std::size_t>(cap, 1), j);
    double sum = 0.0;
    for (std::size_t k = 1, m = 0; k <= cap; k += 2, ++m) {
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        sum += sign * coeffs.alpha[k][last] * j[k];
    }
    return std::sin(arg) / c.rho[last] + 2.0 * sum;
}

RootGrid medium_root_grid() { return RootGrid{0.0, 15.0, 100, 1e-12}; }

RootGrid short_root_grid() { return RootGrid{0.0, 100.0, 1000, 1e-12}; }

EigenSearch find_eigenvalues(const NSBFCoefficients& coeffs, const SLCoefficients& c, const RootGrid& grid) {
    if (!(grid.omega_lo >= 0.0) || !(grid.omega_hi > grid.omega_lo)) {
        throw Error(ErrorKind::InvalidBounds, "spectrum", "root grid needs 0 <= omega_lo < omega_hi");
    }
    if (grid.count < 2) throw Error(ErrorKind::InvalidCount, "spectrum", "root grid needs at least 2 points");

    const double step = (grid.omega_hi - grid.omega_lo) / static_cast<double>(grid.count);
    auto f = [&](double w) { return characteristic(w, coeffs, c); };

    EigenSearch out;
    double w_prev = grid.omega_lo;
    double f_prev = w_prev > 0.0 ? f(w_prev) : 0.0;
    for (std::size_t i = 1; i <= grid.count; ++i) {
        const double w = grid.omega_lo + step * static_cast<double>(i);
        const double fw = f(w);
        if (fw == 0.0) {
            out.omegas.push_back(w);
        } else if (w_prev > 0.0 && f_prev != 0.0 && (f_prev < 0.0) != (fw < 0.0)) {
            double a = w_prev;
            double b = w;
            double fa = f_prev;
            while (b - a > grid.refine_tol) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            out.omegas.push_back(0.5 * (a + b));
        }
        w_prev = w;
        f_prev = fw;
    }

    // Asymptotic spacing pi / l(U): a grid step that is not well below it, or
    // two roots closer than two steps, means a sign-change pair may be hidden.
    const double spacing = M_PI / c.l[c.mesh->size() - 1];
    std::ostringstream msg;
    if (2.0 * step > spacing) {
        out.possible_missed_roots = true;
        msg << "grid step " << step << " is coarse against root spacing " << spacing;
    }
    for (std::size_t k = 1; k < out.omegas.size(); ++k) {
        if (out.omegas[k] - out.omegas[k - 1] < 2.0 * step) {
            out.possible_missed_roots = true;
            if (msg.tellp() > 0) msg << "; ";
            msg << "roots " << k << " and " << k + 1 << " closer than two grid steps";
            break;
        }
    }
    out.warning = msg.str();
    return out;
}

EigenPair build_eigenfunction(std::size_t n, double omega, const NSBFCoefficients& coeffs, const SLCoefficients& c) {
    const auto& mesh = c.mesh;
    const std::size_t size = mesh->size();
    const std::size_t cap = odd_order_cap(coeffs);

    std::vector<double> values(size);
    std::vector<double> j;
    for (std::size_t i = 0; i < size; ++i) {
        const double arg = omega * c.l[i];
        bessel_backward_into(arg, std::max<std::size_t>(cap, 1), j);
        double sum = 0.0;
        for (std::size_t k = 1, m = 0; k <= cap; k += 2, ++m) {
            const double sign = m % 2 == 0 ? 1.0 : -1.0;
            sum += sign * coeffs.alpha[k][i] * j[k];
        }
        values[i] = std::sin(arg) / c.rho[i] + 2.0 * sum;
    }

    EigenPair pair;
    pair.n = n;
    pair.omega = omega;
    pair.lambda = omega * omega;
    pair.phi = GridFunction(mesh, std::move(values));
    pair.norm_sq = inner_product(pair.phi, pair.phi, c.w);

    const double sup = pair.phi.sup_norm();
    const double at_upper = std::abs(pair.phi[size - 1]);
    if (!(sup > 0.0) || at_upper > kBoundaryTolerance * sup) {
        std::ostringstream msg;
        msg << "eigenfunction " << n << " has |phi(U)|/sup|phi| = " << at_upper / sup;
        throw Error(ErrorKind::BoundaryViolation, "spectrum", msg.str());
    }
    return pair;
}

GridFunction build_eigenfunction_derivative(const EigenPair& pair, const NSBFCoefficients& coeffs,
                                            const SLCoefficients& c) {
    if (!coeffs.has_beta) {
        throw Error(ErrorKind::AssumptionViolated, "spectrum", "eigenfunction derivative needs beta_n");
    }
    const std::size_t size = c.mesh->size();
    const std::size_t cap = std::min(odd_order_cap(coeffs), coeffs.beta.size() - 1);
    const double omega = pair.omega;

    std::vector<double> values(size);
    std::vector<double> j;
    for (std::size_t i = 0; i < size; ++i) {
        const double arg = omega * c.l[i];
        bessel_backward_into(arg, std::max<std::size_t>(cap, 1), j);
        double sum = 0.0;
        for (std::size_t k = 1, m = 0; k <= cap; k += 2, ++m) {
            const double sign = m % 2 == 0 ? 1.0 : -1.0;
            sum += sign * coeffs.beta[k][i] * j[k];
        }
        const double rho = c.rho[i];
        const double bracket = (coeffs.G2[i] * std::sin(arg) + omega * std::cos(arg)) / rho + 2.0 * sum;
        values[i] = c.l_prime[i] * bracket - c.rho_prime[i] / rho * pair.phi[i];
    }
    return GridFunction(c.mesh, std::move(values));
}

std::vector<EigenPair> build_spectrum(const EigenSearch& search, const NSBFCoefficients& coeffs,
                                      const SLCoefficients& c, bool with_derivative) {
    std::vector<EigenPair> pairs;
    pairs.reserve(search.omegas.size());
    for (std::size_t k = 0; k < search.omegas.size(); ++k) {
        EigenPair pair = build_eigenfunction(k + 1, search.omegas[k], coeffs, c);
        if (with_derivative) pair.phi_prime = build_eigenfunction_derivative(pair, coeffs, c);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

}  // namespace nsbf
