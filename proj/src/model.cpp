#include "nsbf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

double calibrate_delta(double sigma0, double y0, double beta) { return sigma0 * std::pow(y0, -beta); }

EJDCEVParams make_ejdcev_params(double beta, double gamma, double sigma0, double y0, double rbar, double qbar,
                                double b, double c) {
    EJDCEVParams params;
    params.beta = beta;
    params.gamma = gamma;
    params.sigma0 = sigma0;
    params.y0 = y0;
    params.rbar = rbar;
    params.qbar = qbar;
    params.b = b;
    params.c = c;
    params.delta = calibrate_delta(sigma0, y0, beta);
    return params;
}

DiffusionSpec make_ejdcev(const EJDCEVParams& params) {
    const double delta = params.delta;
    const double beta = params.beta;
    const double gamma = params.gamma;
    const double b = params.b;
    const double c = params.c;

    DiffusionSpec spec;
    std::ostringstream name;
    name << "ejdcev(beta=" << beta << ",gamma=" << gamma << ")";
    spec.name = name.str();
    spec.sigma = [=](double y) { return delta * std::pow(y, beta); };
    spec.sigma_prime = [=](double y) { return delta * beta * std::pow(y, beta - 1.0); };
    spec.rbar = [r = params.rbar](double) { return r; };
    spec.qbar = [q = params.qbar](double) { return q; };
    spec.hazard = [=](double y) {
        // sigma^0 == 1 even where pow would see 0^0.
        const double vol_term = gamma == 0.0 ? 1.0 : std::pow(delta * std::pow(y, beta), gamma);
        return b + c * vol_term;
    };
    return spec;
}

DiffusionSpec make_heat() {
    DiffusionSpec spec;
    spec.name = "heat";
    spec.sigma = [](double y) { return std::sqrt(2.0) / y; };
    spec.sigma_prime = [](double y) { return -std::sqrt(2.0) / (y * y); };
    spec.rbar = [](double) { return 0.0; };
    spec.qbar = [](double) { return 0.0; };
    spec.hazard = [](double) { return 0.0; };
    return spec;
}

ScalarFn drift_of(const DiffusionSpec& spec) {
    return [r = spec.rbar, q = spec.qbar, h = spec.hazard](double y) { return r(y) - q(y) + h(y); };
}

SLCoefficients build_sl_coefficients(const DiffusionSpec& spec, MeshPtr mesh, double gauge) {
    const auto mu = drift_of(spec);
    SLCoefficients c;
    c.mesh = mesh;
    c.sigma = GridFunction::sample(mesh, spec.sigma);
    c.drift = GridFunction::sample(mesh, mu);
    c.discount = GridFunction::sample(mesh, [&](double y) { return spec.rbar(y) + spec.hazard(y); });

    for (std::size_t i = 0; i < mesh->size(); ++i) {
        if (!(c.sigma[i] > 0.0) || !std::isfinite(c.sigma[i])) {
            std::ostringstream msg;
            msg << "sigma(" << mesh->point(i) << ") = " << c.sigma[i] << " is not positive";
            throw Error(ErrorKind::AssumptionViolated, "model", msg.str());
        }
    }

    const auto log_p_density = GridFunction::sample(mesh, [&](double y) {
        const double s = spec.sigma(y);
        return 2.0 * mu(y) / (y * s * s);
    });
    const auto log_p = antiderivative(log_p_density);
    c.p = log_p.map([gauge](double, double v) { return gauge * std::exp(v); });

    std::vector<double> w(mesh->size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double y = mesh->point(i);
        const double s = c.sigma[i];
        w[i] = 2.0 * c.p[i] / (s * s * y * y);
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
            std::ostringstream msg;
            msg << "w(" << y << ") = " << w[i] << " is not positive";
            throw Error(ErrorKind::AssumptionViolated, "model", msg.str());
        }
    }
    c.w = GridFunction(mesh, std::move(w));
    c.q = c.discount * c.w;

    c.l_prime = GridFunction::sample(mesh, [&](double y) { return std::sqrt(2.0) / (y * spec.sigma(y)); });
    c.l = antiderivative(c.l_prime);
    c.l[0] = 0.0;

    c.rho = (c.p * c.w).map([](double, double v) { return std::sqrt(std::sqrt(v)); });

    if (spec.sigma_prime) {
        // log rho = const + (log p - log sigma - log y) / 2
        std::vector<double> rp(mesh->size());
        for (std::size_t i = 0; i < rp.size(); ++i) {
            const double y = mesh->point(i);
            const double s = c.sigma[i];
            const double dlog = mu(y) / (y * s * s) - 0.5 * (*spec.sigma_prime)(y) / s - 0.5 / y;
            rp[i] = c.rho[i] * dlog;
        }
        c.rho_prime = GridFunction(mesh, std::move(rp));
    } else {
        c.rho_prime = derivative(c.rho);
    }
    return c;
}

SLCoefficients sl_coefficients_from_pqw(GridFunction p, GridFunction q, GridFunction w) {
    SLCoefficients c;
    c.mesh = p.mesh();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0) || !(w[i] > 0.0)) {
            throw Error(ErrorKind::AssumptionViolated, "model", "p and w must be positive");
        }
    }
    c.l_prime = (w / p).map([](double, double v) { return std::sqrt(v); });
    c.l = antiderivative(c.l_prime);
    c.rho = (p * w).map([](double, double v) { return std::sqrt(std::sqrt(v)); });
    c.rho_prime = derivative(c.rho);
    c.p = std::move(p);
    c.q = std::move(q);
    c.w = std::move(w);
    return c;
}

CoefficientResiduals identity_p_w_q_consistency(const SLCoefficients& c, const DiffusionSpec& spec) {
    CoefficientResiduals out;
    const auto& mesh = *c.mesh;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double y = mesh.point(i);
        const double s = spec.sigma(y);
        const double w_expected = 2.0 * c.p[i] / (s * s * y * y);
        const double q_expected = (spec.rbar(y) + spec.hazard(y)) * c.w[i];
        out.w_residual = std::max(out.w_residual, std::abs(c.w[i] - w_expected) / std::abs(w_expected));
        const double q_scale = std::max(std::abs(q_expected), std::numeric_limits<double>::min());
        out.q_residual = std::max(out.q_residual, std::abs(c.q[i] - q_expected) / q_scale);
    }
    return out;
}

}  // namespace nsbf
