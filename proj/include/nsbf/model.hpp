#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nsbf/mesh.hpp"

namespace nsbf {

using ScalarFn = std::function<double(double)>;

/// Time-homogeneous killed diffusion dY = mu(Y) Y dt + sigma(Y) Y dB with
/// default intensity h(Y). Rates are per year, volatility per sqrt(year).
struct DiffusionSpec {
    std::string name;
    ScalarFn sigma;
    std::optional<ScalarFn> sigma_prime;
    ScalarFn rbar;
    ScalarFn qbar;
    ScalarFn hazard;
};

/// Extended jump-to-default CEV: sigma(y) = delta * y^beta and
/// h(y) = b + c * sigma(y)^gamma, with constant rate and dividend yield.
struct EJDCEVParams {
    double delta = 0.0;
    double beta = 0.0;
    double b = 0.0;
    double c = 0.0;
    double gamma = 0.0;
    double rbar = 0.0;
    double qbar = 0.0;
    double sigma0 = 0.0;
    double y0 = 0.0;
};

/// delta such that delta * y0^beta = sigma0.
double calibrate_delta(double sigma0, double y0, double beta);

/// EJDCEV parameters with delta calibrated from (sigma0, y0, beta).
EJDCEVParams make_ejdcev_params(double beta, double gamma, double sigma0 = 0.25, double y0 = 100.0,
                                double rbar = 0.1, double qbar = 0.0, double b = 0.02, double c = 0.5);

DiffusionSpec make_ejdcev(const EJDCEVParams& params);

/// Constant-coefficient diffusion sigma(y) = sqrt(2)/y with zero rates and
/// hazard: the pricing operator is d^2/dy^2 and the spectrum is
/// (n pi / (U - L))^2 with sine eigenfunctions.
DiffusionSpec make_heat();

/// Risk-neutral drift mu = rbar - qbar + h that keeps the killed process a
/// martingale.
ScalarFn drift_of(const DiffusionSpec& spec);

/// Sturm-Liouville form of the pricing operator,
///   A = (1/w) [ (p d/dy)' - q ],
/// plus the Liouville variable l and the amplitude rho = (p w)^(1/4).
struct SLCoefficients {
    MeshPtr mesh;
    GridFunction p;
    GridFunction q;
    GridFunction w;
    GridFunction l;
    GridFunction rho;
    GridFunction rho_prime;
    /// sqrt(w / p) = l'(y) = sqrt(2) / (y sigma(y)).
    GridFunction l_prime;
    GridFunction sigma;
    /// r + h, the killing rate.
    GridFunction discount;
    GridFunction drift;
};

/// Builds p, q, w, l, rho, rho' on the mesh. The lower limit of the integral
/// defining p is L; `gauge` multiplies p (and therefore w and q) by a constant,
/// which leaves the spectrum and every price unchanged.
SLCoefficients build_sl_coefficients(const DiffusionSpec& spec, MeshPtr mesh, double gauge = 1.0);

/// Sturm-Liouville coefficients given directly as (p, q, w) samples rather than
/// through a diffusion. rho' is differentiated numerically; the diffusion-only
/// fields (sigma, drift, discount) are left empty.
SLCoefficients sl_coefficients_from_pqw(GridFunction p, GridFunction q, GridFunction w);

struct CoefficientResiduals {
    double w_residual = 0.0;
    double q_residual = 0.0;
};

/// Max relative residuals of w = 2p/(sigma^2 y^2) and q = (r + h) w.
CoefficientResiduals identity_p_w_q_consistency(const SLCoefficients& c, const DiffusionSpec& spec);

}  // namespace nsbf
