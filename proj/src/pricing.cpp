#include "nsbf/pricing.hpp"

#include <cmath>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

std::size_t capped(std::size_t N, const std::vector<EigenPair>& pairs) { return std::min(N, pairs.size()); }

void require_inside(double y, const EigenPair& pair) {
    const Mesh& mesh = *pair.phi.mesh();
    if (!(y >= mesh.lower() && y <= mesh.upper())) {
        std::ostringstream msg;
        msg << "y=" << y << " outside [" << mesh.lower() << ", " << mesh.upper() << "]";
        throw Error(ErrorKind::OutOfRange, "pricing", msg.str());
    }
}

// int_a^b of the sampled integrand, with a, b anywhere in [L, U].
double partial_integral(const GridFunction& antider, double a, double b) {
    return interpolate(antider, b) - interpolate(antider, a);
}

std::vector<double> uniform_points(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

}  // namespace

std::string to_string(OptionStyle style) {
    switch (style) {
        case OptionStyle::Call: return "call";
        case OptionStyle::Put: return "put";
        case OptionStyle::Custom: return "custom";
    }
    return "unknown";
}

void validate(const OptionContract& contract) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, "pricing", msg); };
    if (!(contract.U > contract.L)) fail("contract.U must exceed contract.L");
    if (!(contract.L > 0.0)) fail("contract.L must be positive");
    if (!(contract.T > 0.0)) fail("contract.T must be positive");
    if (!(contract.rebate >= 0.0)) fail("contract.rebate must be non-negative");
    if (contract.style == OptionStyle::Custom) {
        if (!contract.custom_payoff) fail("contract.payoff is required for a custom style");
    } else if (!(contract.K > contract.L && contract.K < contract.U)) {
        fail("contract.K must lie strictly between L and U");
    }
    if (contract.rebate > 0.0 && contract.style != OptionStyle::Call) fail("contract.rebate needs a call");
}

GridFunction payoff_on(const OptionContract& contract, const MeshPtr& mesh) {
    const double K = contract.K;
    switch (contract.style) {
        case OptionStyle::Call:
            return GridFunction::sample(mesh, [K](double y) { return std::max(y - K, 0.0); });
        case OptionStyle::Put:
            return GridFunction::sample(mesh, [K](double y) { return std::max(K - y, 0.0); });
        case OptionStyle::Custom:
            if (!contract.custom_payoff || !contract.custom_payoff->mesh()->same_as(*mesh)) {
                throw Error(ErrorKind::MeshMismatch, "pricing", "custom payoff is not sampled on the pricing mesh");
            }
            return *contract.custom_payoff;
    }
    return GridFunction(mesh, 0.0);
}

double fourier_coefficient(const GridFunction& payoff, const EigenPair& pair, const SLCoefficients& c) {
    return inner_product(payoff, pair.phi, c.w) / pair.norm_sq;
}

void fourier_coefficients(const GridFunction& payoff, std::vector<EigenPair>& pairs, const SLCoefficients& c) {
    for (EigenPair& pair : pairs) pair.f_n = fourier_coefficient(payoff, pair, c);
}

// Call and put coefficients with the integral split at the strike, so the
// kink does not cost quadrature order.
void payoff_coefficients(const OptionContract& contract, const GridFunction& payoff, std::vector<EigenPair>& pairs,
                         const SLCoefficients& c) {
    if (contract.style == OptionStyle::Custom) {
        fourier_coefficients(payoff, pairs, c);
        return;
    }
    const double K = contract.K;
    const double L = c.mesh->lower();
    const double U = c.mesh->upper();
    const GridFunction y = GridFunction::sample(c.mesh, [](double v) { return v; });
    for (EigenPair& pair : pairs) {
        const GridFunction weighted = pair.phi * c.w;
        const GridFunction m0 = antiderivative(weighted);
        const GridFunction m1 = antiderivative(weighted * y);
        double num = 0.0;
        if (contract.style == OptionStyle::Call) {
            num = partial_integral(m1, K, U) - K * partial_integral(m0, K, U);
        } else {
            num = K * partial_integral(m0, L, K) - partial_integral(m1, L, K);
        }
        pair.f_n = num / pair.norm_sq;
    }
}

std::size_t retained_count(const std::vector<EigenPair>& pairs, double horizon, double cutoff) {
    std::size_t n = 0;
    while (n < pairs.size() && pairs[n].lambda * horizon <= cutoff) ++n;
    return n;
}

double value(double y, double t, double T, const std::vector<EigenPair>& pairs, std::size_t N) {
    const std::size_t count = capped(N, pairs);
    double sum = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        require_inside(y, pairs[n]);
        const double decay = std::exp(-pairs[n].lambda * (T - t));
        sum += pairs[n].f_n * decay * interpolate(pairs[n].phi, y);
    }
    return sum;
}

ValueSurface value_surface(const std::vector<EigenPair>& pairs, const SLCoefficients& c, double T, std::size_t N,
                           std::size_t t_count, std::size_t y_count) {
    ValueSurface s;
    s.t = uniform_points(0.0, T, t_count);
    s.y = uniform_points(c.mesh->lower(), c.mesh->upper(), y_count);
    const std::size_t count = capped(N, pairs);

    std::vector<std::vector<double>> phi_at(count, std::vector<double>(y_count));
    for (std::size_t n = 0; n < count; ++n) {
        for (std::size_t j = 0; j < y_count; ++j) phi_at[n][j] = interpolate(pairs[n].phi, s.y[j]);
    }
    s.values.assign(t_count, std::vector<double>(y_count, 0.0));
    for (std::size_t i = 0; i < t_count; ++i) {
        for (std::size_t n = 0; n < count; ++n) {
            const double decay = pairs[n].f_n * std::exp(-pairs[n].lambda * (T - s.t[i]));
            for (std::size_t j = 0; j < y_count; ++j) s.values[i][j] += decay * phi_at[n][j];
        }
    }
    return s;
}

double delta(double y0, double T, const std::vector<EigenPair>& pairs, std::size_t N) {
    const std::size_t count = capped(N, pairs);
    double sum = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        if (pairs[n].phi_prime.size() == 0) {
            throw Error(ErrorKind::AssumptionViolated, "pricing", "delta needs eigenfunction derivatives");
        }
        require_inside(y0, pairs[n]);
        sum += pairs[n].f_n * interpolate(pairs[n].phi_prime, y0) * std::exp(-pairs[n].lambda * T);
    }
    return sum;
}

double sigma_prime_at(double y0, const DiffusionSpec& spec) {
    if (spec.sigma_prime) return (*spec.sigma_prime)(y0);
    const double h = 1e-4 * std::max(1.0, std::abs(y0));
    return (spec.sigma(y0 + h) - spec.sigma(y0 - h)) / (2.0 * h);
}

double vega(double y0, double delta_value, const DiffusionSpec& spec) {
    const double sp = sigma_prime_at(y0, spec);
    if (sp == 0.0) throw Error(ErrorKind::VegaUndefined, "pricing", "sigma'(y0) = 0, vega is undefined");
    return delta_value / sp;
}

double theta(double y0, double T, const std::vector<EigenPair>& pairs, std::size_t N) {
    const std::size_t count = capped(N, pairs);
    double sum = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        require_inside(y0, pairs[n]);
        sum += pairs[n].f_n * pairs[n].lambda * interpolate(pairs[n].phi, y0) * std::exp(-pairs[n].lambda * T);
    }
    return sum;
}

double contribution(std::size_t n1, std::size_t n2, const std::vector<EigenPair>& pairs, double y0, double t,
                    double T) {
    if (n1 < 1 || n1 > n2 || n2 > pairs.size()) {
        std::ostringstream msg;
        msg << "band " << n1 << ".." << n2 << " outside 1.." << pairs.size();
        throw Error(ErrorKind::BandOutOfRange, "pricing", msg.str());
    }
    double sum = 0.0;
    for (std::size_t n = n1 - 1; n < n2; ++n) {
        require_inside(y0, pairs[n]);
        const double decay = std::exp(-pairs[n].lambda * (T - t));
        sum += pairs[n].f_n * decay * interpolate(pairs[n].phi, y0);
    }
    return sum;
}

double ContributionReport::total() const {
    double sum = 0.0;
    for (const auto& band : bands) sum += band.value;
    return sum;
}

ContributionReport contribution_bands(const std::vector<EigenPair>& pairs, std::size_t N, std::size_t width,
                                      double y0, double t, double T) {
    if (width == 0) throw Error(ErrorKind::InvalidCount, "pricing", "band width must be positive");
    const std::size_t count = capped(N, pairs);
    ContributionReport report;
    for (std::size_t n1 = 1; n1 <= count; n1 += width) {
        const std::size_t n2 = std::min(n1 + width - 1, count);
        report.bands.push_back({n1, n2, contribution(n1, n2, pairs, y0, t, T)});
    }
    return report;
}

RebateExpansion rebate_expansion(const OptionContract& contract, const GridFunction& payoff,
                                 const std::vector<EigenPair>& pairs, const SLCoefficients& c,
                                 const ParticularSolution& sol) {
    RebateExpansion e;
    e.R = contract.rebate;
    e.L = c.mesh->lower();
    e.U = c.mesh->upper();
    const double R = e.R;
    const double width = e.U - e.L;
    const double L = e.L;

    GridFunction ramp = GridFunction::sample(c.mesh, [L, width](double y) { return (y - L) / width; });
    GridFunction source(c.mesh, 0.0);
    if (R != 0.0) {
        if (c.drift.size() == 0 || c.discount.size() == 0) {
            throw Error(ErrorKind::AssumptionViolated, "pricing", "rebate needs drift and discount rates");
        }
        for (std::size_t i = 0; i < source.size(); ++i) {
            const double y = c.mesh->point(i);
            source[i] = R / width * c.drift[i] * y - c.discount[i] * ramp[i] * R;
        }
    }
    e.d.reserve(pairs.size());
    e.s.reserve(pairs.size());
    for (const EigenPair& pair : pairs) {
        const double ramp_n = R != 0.0 ? R * fourier_coefficient(ramp, pair, c) : 0.0;
        e.d.push_back(pair.f_n - ramp_n);
        e.s.push_back(R != 0.0 ? fourier_coefficient(source, pair, c) : 0.0);
    }
    (void)payoff;
    e.steady = GridFunction(c.mesh, 0.0);
    if (R != 0.0) {
        // Second solution of (p u')' - q u = 0 vanishing at L, by reduction of
        // order from g; scaled to R at U it is the steady state V, and
        // S = V - l R.
        const GridFunction inv = GridFunction(c.mesh, 1.0) / (c.p * sol.g * sol.g);
        const GridFunction psi = sol.g * antiderivative(inv);
        const double scale = R / psi.back();
        for (std::size_t i = 0; i < e.steady.size(); ++i) e.steady[i] = scale * psi[i] - ramp[i] * R;
        e.steady[0] = 0.0;
        e.steady[e.steady.size() - 1] = 0.0;
    }
    return e;
}

double value_with_rebate(double y, double t, double T, const std::vector<EigenPair>& pairs,
                         const RebateExpansion& expansion, std::size_t N) {
    const std::size_t count = capped(N, pairs);
    const double tau = T - t;
    double sum = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        require_inside(y, pairs[n]);
        const double decay = std::exp(-pairs[n].lambda * tau);
        double coeff = expansion.d[n] * decay;
        if (expansion.s[n] != 0.0) coeff -= expansion.s[n] / pairs[n].lambda * decay;
        sum += coeff * interpolate(pairs[n].phi, y);
    }
    if (expansion.R == 0.0) return sum;
    return sum + interpolate(expansion.steady, y) + (y - expansion.L) / (expansion.U - expansion.L) * expansion.R;
}

ValueSurface value_surface_with_rebate(const std::vector<EigenPair>& pairs, const RebateExpansion& expansion,
                                       const SLCoefficients& c, double T, std::size_t N, std::size_t t_count,
                                       std::size_t y_count) {
    ValueSurface s;
    s.t = uniform_points(0.0, T, t_count);
    s.y = uniform_points(c.mesh->lower(), c.mesh->upper(), y_count);
    s.values.assign(t_count, std::vector<double>(y_count, 0.0));
    for (std::size_t i = 0; i < t_count; ++i) {
        for (std::size_t j = 0; j < y_count; ++j) s.values[i][j] = value_with_rebate(s.y[j], s.t[i], T, pairs, expansion, N);
    }
    return s;
}

double terminal_reconstruction_error(const GridFunction& payoff, const std::vector<EigenPair>& pairs,
                                     const RebateExpansion& expansion, const SLCoefficients& c, std::size_t N) {
    const std::size_t count = capped(N, pairs);
    const double L = expansion.L;
    const double width = expansion.U - expansion.L;
    const double R = expansion.R;
    GridFunction recon = GridFunction::sample(c.mesh, [L, width, R](double y) { return (y - L) / width * R; });
    if (R != 0.0) recon += expansion.steady;
    for (std::size_t n = 0; n < count; ++n) {
        const double steady_n = expansion.s[n] != 0.0 ? expansion.s[n] / pairs[n].lambda : 0.0;
        recon += (expansion.d[n] - steady_n) * pairs[n].phi;
    }
    const GridFunction err = payoff - recon;
    return std::sqrt(inner_product(err, err, c.w) / inner_product(payoff, payoff, c.w));
}

}  // namespace nsbf
