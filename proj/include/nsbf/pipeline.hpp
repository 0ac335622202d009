#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nsbf/coefficients.hpp"
#include "nsbf/model.hpp"
#include "nsbf/pricing.hpp"
#include "nsbf/spectrum.hpp"
#include "nsbf/spps.hpp"

namespace nsbf {

/// Where prices and Greeks are read off the eigenfunctions.
enum class Evaluation {
    /// At the requested spot, interpolating between mesh nodes.
    Interpolate,
    /// At the last mesh node not above the requested spot.
    MeshNode,
};

struct Numerics {
    std::size_t mesh_points = 10001;
    std::size_t nsbf_order = 60;
    /// Accept the identity-plateau order (true) or always use nsbf_order.
    bool auto_order = true;
    double eps_fraction = 0.01;
    double spps_tol = 1e-14;
    RootGrid roots = medium_root_grid();
    double lambda_cutoff = kDefaultLambdaCutoff;
    double identity_tol = 1e-6;
    Evaluation evaluation = Evaluation::Interpolate;
    /// Constant multiplying p, w and q; prices do not depend on it.
    double gauge = 1.0;
};

/// Everything computed once per (model, barriers, numerics): coefficients,
/// the spectrum and the eigenfunctions.
struct SpectralSolution {
    DiffusionSpec spec;
    SLCoefficients c;
    ParticularSolution sol;
    NSBFCoefficients coeffs;
    EigenSearch search;
    std::vector<EigenPair> pairs;
    bool with_derivative = false;
};

/// Steps 1-8: mesh, Sturm-Liouville form, particular solution, NSBF
/// coefficients, eigenvalues and eigenfunctions (derivatives on request).
SpectralSolution solve_spectrum(const DiffusionSpec& spec, double L, double U, const Numerics& numerics,
                                bool with_derivative);

struct Diagnostics {
    double identity_residual = 0.0;
    double identity_tol = 0.0;
    double boundary_residual = 0.0;
    std::size_t spps_terms = 0;
    std::size_t roots_found = 0;
    double evaluation_point = 0.0;
    std::vector<std::string> warnings;
};

struct PricingResult {
    double price = 0.0;
    std::optional<double> delta;
    std::optional<double> vega;
    std::optional<double> theta;
    std::size_t N_used = 0;
    std::size_t M_used = 0;
    std::optional<ContributionReport> contributions;
    Diagnostics diagnostics;
};

Diagnostics diagnose(const SpectralSolution& s, const Numerics& numerics, double y_eval);

/// Spot actually used for evaluation under the numerics' convention.
double evaluation_point(double y0, const SLCoefficients& c, Evaluation evaluation);

/// Number of terms kept: lambda_n T <= cutoff. With a rebate the steady part
/// is summed in closed form, so the remaining series decays in time too.
std::size_t terms_used(const std::vector<EigenPair>& pairs, const OptionContract& contract, double cutoff);

/// Steps 9-11 for one contract. Greeks need a spectrum built with
/// derivatives; vega stays empty where sigma'(y0) = 0.
PricingResult price_contract(const SpectralSolution& s, const OptionContract& contract, double y0,
                             const Numerics& numerics, bool with_greeks);

/// Eigenpairs with f_n set for the contract.
std::vector<EigenPair> pairs_for(const SpectralSolution& s, const OptionContract& contract);

}  // namespace nsbf
