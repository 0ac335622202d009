#include "nsbf/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

// Below this l^n the quotient A_n / l^n is not representable.
constexpr double kTinyPower = 1e-280;

std::size_t neighbourhood_count(const Mesh& mesh, double eps) {
    const auto count = static_cast<std::size_t>(std::floor(eps / mesh.step() + 1e-9)) + 1;
    return std::min(count, mesh.size());
}

double sup_abs(const GridFunction& f) { return f.sup_norm(); }

}  // namespace

double IdentityReport::max_residual() const {
    return std::max({sup_abs(alpha_sum), sup_abs(alpha_alternating), beta_sum.size() ? sup_abs(beta_sum) : 0.0,
                     beta_alternating.size() ? sup_abs(beta_alternating) : 0.0});
}

double IdentityReport::residual_at(std::size_t order) const {
    if (max_residual_by_order.empty()) return 0.0;
    return max_residual_by_order[std::min(order, max_residual_by_order.size() - 1)];
}

GridFunction compute_G2(const SLCoefficients& c) {
    const GridFunction boundary = c.rho * c.rho_prime / (2.0 * c.w);
    const GridFunction integrand = c.q / (c.rho * c.rho) + c.rho_prime * c.rho_prime / c.w;
    GridFunction g2 = 0.5 * antiderivative(integrand);
    const double at_lower = boundary[0];
    for (std::size_t i = 0; i < g2.size(); ++i) g2[i] += boundary[i] - at_lower;
    g2[0] = 0.0;
    return g2;
}

GridFunction p_inv_rho_second(const SLCoefficients& c) {
    // (1/rho)' = -rho'/rho^2 analytically; one numerical derivative remains.
    const GridFunction inner = c.p * c.rho_prime / (c.rho * c.rho);
    return -1.0 * derivative(inner);
}

GridFunction compute_G2_unintegrated(const SLCoefficients& c) {
    const GridFunction integrand = (c.q / c.rho - p_inv_rho_second(c)) / c.rho;
    return 0.5 * antiderivative(integrand);
}

double compute_h_tilde(const ParticularSolution& sol, const SLCoefficients& c) {
    return std::sqrt(c.p[0] / c.w[0]) * (sol.g_prime[0] / sol.g[0] + c.rho_prime[0] / c.rho[0]);
}

InitialCoefficients initial_coefficients(const ParticularSolution& sol, const SLCoefficients& c,
                                         const FormalPowerTable& powers, const GridFunction& G1,
                                         const GridFunction& G2) {
    const auto& mesh = c.mesh;
    const std::size_t n = mesh->size();
    const GridFunction& phi1 = powers.phi.at(1);
    const GridFunction& y1 = powers.y.at(1);

    std::vector<double> a0(n), a1(n), b0(n), b1(n), A1(n), B1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = sol.g[i];
        const double gp = sol.g_prime[i];
        const double rho = c.rho[i];
        const double rhop = c.rho_prime[i];
        const double l = c.l[i];
        const double lp = c.l_prime[i];
        const double sqrt_pw = 1.0 / lp;
        const double p = c.p[i];

        a0[i] = 0.5 * (g - 1.0 / rho);
        const double a0p = 0.5 * (gp + rhop / (rho * rho));
        b0[i] = sqrt_pw * (a0p + rhop / rho * a0[i]) - G1[i] / (2.0 * rho);

        A1[i] = 1.5 * (phi1[i] - l / rho);
        if (i == 0 || l <= 0.0) {
            a1[i] = 0.0;
            b1[i] = 0.0;
            B1[i] = 0.0;
            continue;
        }
        a1[i] = A1[i] / l;
        const double num = (gp * y1[i] + 1.0 / (g * p)) * l - g * y1[i] * lp;
        const double a1p = 1.5 * (num / (l * l) + rhop / (rho * rho));
        b1[i] = a1[i] / l + sqrt_pw * (a1p + rhop / rho * a1[i]) - 3.0 * G2[i] / (2.0 * rho);
        B1[i] = l * b1[i];
    }

    InitialCoefficients out;
    out.alpha0 = GridFunction(mesh, a0);
    out.A0 = out.alpha0;
    out.beta0 = GridFunction(mesh, b0);
    out.B0 = out.beta0;
    out.A1 = GridFunction(mesh, std::move(A1));
    out.alpha1 = GridFunction(mesh, std::move(a1));
    out.beta1 = GridFunction(mesh, std::move(b1));
    out.B1 = GridFunction(mesh, std::move(B1));
    return out;
}

RecurrenceIntermediates recurrence_intermediates(std::size_t n, const GridFunction& A_prev2,
                                                 const ParticularSolution& sol, const SLCoefficients& c) {
    const auto& mesh = c.mesh;
    const std::size_t size = mesh->size();
    const double nm1 = static_cast<double>(n) - 1.0;

    std::vector<double> eta_integrand(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double rho = c.rho[i];
        const double g = sol.g[i];
        const double mixed = sol.g_prime[i] * rho + g * c.rho_prime[i];
        eta_integrand[i] = (c.l[i] * mixed + nm1 * rho * g * c.l_prime[i]) * rho * A_prev2[i];
    }
    RecurrenceIntermediates mid;
    mid.eta_tilde = antiderivative(GridFunction(mesh, std::move(eta_integrand)));

    std::vector<double> theta_integrand(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double rho = c.rho[i];
        const double g = sol.g[i];
        theta_integrand[i] =
            (mid.eta_tilde[i] / (rho * rho * g * g) - c.l[i] * A_prev2[i] / g) * c.l_prime[i];
    }
    mid.theta_tilde = antiderivative(GridFunction(mesh, std::move(theta_integrand)));
    return mid;
}

GridFunction recurrence_A(std::size_t n, const GridFunction& A_prev2, const RecurrenceIntermediates& mid,
                          const ParticularSolution& sol, const SLCoefficients& c) {
    const double dn = static_cast<double>(n);
    const double factor = (2.0 * dn + 1.0) / (2.0 * dn - 3.0);
    std::vector<double> out(A_prev2.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double l = c.l[i];
        out[i] = factor * (l * l * A_prev2[i] + 2.0 * (2.0 * dn - 1.0) * sol.g[i] * mid.theta_tilde[i]);
    }
    return GridFunction(c.mesh, std::move(out));
}

GridFunction recurrence_B(std::size_t n, const GridFunction& A_prev2, const GridFunction& B_prev2,
                          const RecurrenceIntermediates& mid, const ParticularSolution& sol, const SLCoefficients& c) {
    const double dn = static_cast<double>(n);
    const double factor = (2.0 * dn + 1.0) / (2.0 * dn - 3.0);
    std::vector<double> out(A_prev2.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double l = c.l[i];
        const double rho = c.rho[i];
        const double g = sol.g[i];
        const double sqrt_pw = 1.0 / c.l_prime[i];
        const double mixed = sol.g_prime[i] * rho + g * c.rho_prime[i];
        const double inner = sqrt_pw * mixed * mid.theta_tilde[i] / rho + mid.eta_tilde[i] / (rho * rho * g);
        out[i] = factor * (l * l * B_prev2[i] + 2.0 * (2.0 * dn - 1.0) * inner - (2.0 * dn - 1.0) * l * A_prev2[i]);
    }
    return GridFunction(c.mesh, std::move(out));
}

GridFunction divide_by_l_power(const GridFunction& scaled, std::size_t n, const GridFunction& l, double eps) {
    const auto& mesh = *scaled.mesh();
    std::vector<double> out(scaled.size(), 0.0);
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double power = std::pow(l[i], static_cast<double>(n));
        out[i] = power > kTinyPower ? scaled[i] / power : 0.0;
    }
    const std::size_t window = neighbourhood_count(mesh, eps);
    std::size_t k0 = 1;
    for (std::size_t i = 2; i < window; ++i) {
        if (std::abs(out[i]) < std::abs(out[k0])) k0 = i;
    }
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k0), 0.0);
    return GridFunction(scaled.mesh(), std::move(out));
}

void recover_alpha_beta(NSBFCoefficients& state, const SLCoefficients& c, double eps) {
    const std::size_t count = state.A.size();
    state.alpha.resize(count);
    if (state.has_beta) state.beta.resize(count);
    for (std::size_t n = 1; n < count; ++n) {
        state.alpha[n] = divide_by_l_power(state.A[n], n, c.l, eps);
        if (state.has_beta) state.beta[n] = divide_by_l_power(state.B[n], n, c.l, eps);
    }
    state.alpha[0] = state.A[0];
    if (state.has_beta) state.beta[0] = state.B[0];
}

namespace {

struct IdentityTargets {
    GridFunction alpha_sum, alpha_alt, beta_sum, beta_alt;
};

IdentityTargets identity_targets(const NSBFCoefficients& state, const SLCoefficients& c) {
    const auto& mesh = c.mesh;
    const std::size_t n = mesh->size();
    const double h = state.h_tilde;
    IdentityTargets t;
    std::vector<double> as(n), aa(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = c.l[i] / (2.0 * c.rho[i]);
        as[i] = (state.G1[i] + state.G2[i]) * scale;
        aa[i] = h * scale;
    }
    t.alpha_sum = GridFunction(mesh, std::move(as));
    t.alpha_alt = GridFunction(mesh, std::move(aa));
    if (!state.has_beta) return t;

    const GridFunction second = p_inv_rho_second(c);
    const double at_lower = c.q[0] / c.w[0] - c.rho[0] / c.w[0] * second[0];
    std::vector<double> bs(n), ba(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = c.rho[i];
        const double w = c.w[i];
        const double g2 = state.G2[i];
        bs[i] = c.l[i] * (c.q[i] / (4.0 * rho * w) - second[i] / (4.0 * w) + (h * g2 + g2 * g2) / (2.0 * rho));
        ba[i] = c.l[i] * (at_lower / (4.0 * rho) + h * g2 / (2.0 * rho));
    }
    t.beta_sum = GridFunction(mesh, std::move(bs));
    t.beta_alt = GridFunction(mesh, std::move(ba));
    return t;
}

}  // namespace

IdentityReport check_identities(const NSBFCoefficients& state, const SLCoefficients& c,
                                const ParticularSolution& /*sol*/) {
    const IdentityTargets targets = identity_targets(state, c);
    const auto& mesh = c.mesh;
    const std::size_t size = mesh->size();

    GridFunction as(mesh, 0.0), aa(mesh, 0.0), bs(mesh, 0.0), ba(mesh, 0.0);
    IdentityReport report;
    for (std::size_t m = 0; m < state.alpha.size(); ++m) {
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            as[i] += state.alpha[m][i];
            aa[i] += sign * state.alpha[m][i];
            worst = std::max({worst, std::abs(as[i] - targets.alpha_sum[i]), std::abs(aa[i] - targets.alpha_alt[i])});
        }
        report.alpha_residual_by_order.push_back(worst);
        for (std::size_t i = 0; i < size && state.has_beta; ++i) {
            bs[i] += state.beta[m][i];
            ba[i] += sign * state.beta[m][i];
            worst = std::max({worst, std::abs(bs[i] - targets.beta_sum[i]), std::abs(ba[i] - targets.beta_alt[i])});
        }
        report.max_residual_by_order.push_back(worst);
    }

    report.alpha_sum = as - targets.alpha_sum;
    report.alpha_alternating = aa - targets.alpha_alt;
    if (state.has_beta) {
        report.beta_sum = bs - targets.beta_sum;
        report.beta_alternating = ba - targets.beta_alt;
    }

    // Plateau of the alpha identities: first order within a factor 2 of the
    // best. Only alpha enters the price, so price-only runs pick the same order.
    const auto& r = report.alpha_residual_by_order;
    const double best = *std::min_element(r.begin(), r.end());
    for (std::size_t m = 0; m < r.size(); ++m) {
        if (r[m] <= 2.0 * best) {
            report.suggested_order = m;
            break;
        }
    }
    return report;
}

LegendreTable::LegendreTable(std::size_t max_degree) : table_(max_degree + 1) {
    for (std::size_t n = 0; n <= max_degree; ++n) table_[n].assign(max_degree + 1, 0.0);
    table_[0][0] = 1.0;
    if (max_degree >= 1) table_[1][1] = 1.0;
    // (n + 1) P_{n+1} = (2n + 1) x P_n - n P_{n-1}
    for (std::size_t n = 1; n < max_degree; ++n) {
        const double dn = static_cast<double>(n);
        for (std::size_t k = 0; k <= n + 1; ++k) {
            const double shifted = k >= 1 ? table_[n][k - 1] : 0.0;
            table_[n + 1][k] = ((2.0 * dn + 1.0) * shifted - dn * table_[n - 1][k]) / (dn + 1.0);
        }
    }
}

GridFunction direct_alpha(std::size_t n, const LegendreTable& table, const FormalPowerTable& powers,
                          const SLCoefficients& c) {
    constexpr std::size_t kMaxDirectOrder = 8;
    if (n > kMaxDirectOrder || n > table.max_degree() || n > powers.max_order) {
        std::ostringstream msg;
        msg << "direct formula requested for order " << n << " (limit " << kMaxDirectOrder << ")";
        throw Error(ErrorKind::OrderTooLarge, "nsbf", msg.str());
    }
    std::vector<double> out(c.mesh->size(), 0.0);
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double l = c.l[i];
        double acc = 0.0;
        double lk = 1.0;
        for (std::size_t k = 0; k <= n; ++k) {
            acc += table.coeff(k, n) * powers.phi[k][i] / lk;
            lk *= l;
        }
        out[i] = (2.0 * static_cast<double>(n) + 1.0) / 2.0 * (acc - 1.0 / c.rho[i]);
    }
    if (n == 0) out[0] = 0.5 * (powers.phi[0][0] - 1.0 / c.rho[0]);
    return GridFunction(c.mesh, std::move(out));
}

NSBFCoefficients compute_nsbf(const SLCoefficients& c, const ParticularSolution& sol, const NsbfOptions& options) {
    const std::size_t max_order = std::max<std::size_t>(options.max_order, 1);
    const FormalPowerTable powers = build_formal_powers(sol, c, 1);

    NSBFCoefficients state;
    state.has_beta = options.with_beta;
    state.G2 = compute_G2(c);
    state.h_tilde = compute_h_tilde(sol, c);
    state.G1 = state.G2.map([h = state.h_tilde](double, double v) { return h + v; });

    const InitialCoefficients init = initial_coefficients(sol, c, powers, state.G1, state.G2);
    state.A = {init.A0, init.A1};
    if (state.has_beta) state.B = {init.B0, init.B1};

    for (std::size_t n = 2; n <= max_order; ++n) {
        const GridFunction& A_prev2 = state.A[n - 2];
        const RecurrenceIntermediates mid = recurrence_intermediates(n, A_prev2, sol, c);
        GridFunction A_n = recurrence_A(n, A_prev2, mid, sol, c);
        if (state.has_beta) state.B.push_back(recurrence_B(n, A_prev2, state.B[n - 2], mid, sol, c));
        state.A.push_back(std::move(A_n));
    }

    const double eps = options.eps_fraction * (c.mesh->upper() - c.mesh->lower());
    recover_alpha_beta(state, c, eps);

    state.identities = check_identities(state, c, sol);
    state.order = options.auto_order ? std::max<std::size_t>(state.identities.suggested_order, 1) : max_order;
    return state;
}

}  // namespace nsbf
