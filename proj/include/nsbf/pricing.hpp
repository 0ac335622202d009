#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nsbf/mesh.hpp"
#include "nsbf/model.hpp"
#include "nsbf/spectrum.hpp"
#include "nsbf/spps.hpp"

namespace nsbf {

enum class OptionStyle { Call, Put, Custom };

std::string to_string(OptionStyle style);

struct OptionContract {
    OptionStyle style = OptionStyle::Call;
    double K = 100.0;
    double L = 90.0;
    double U = 120.0;
    double T = 0.5;
    /// Paid on knock-out at the upper barrier (call style only).
    double rebate = 0.0;
    /// Terminal payoff samples for OptionStyle::Custom.
    std::optional<GridFunction> custom_payoff;
};

/// Throws ConfigInvalid when the contract is malformed.
void validate(const OptionContract& contract);

/// Terminal payoff on the mesh.
GridFunction payoff_on(const OptionContract& contract, const MeshPtr& mesh);

/// <f, phi_n>_w / <phi_n, phi_n>_w.
double fourier_coefficient(const GridFunction& payoff, const EigenPair& pair, const SLCoefficients& c);

/// Sets f_n on every pair.
void fourier_coefficients(const GridFunction& payoff, std::vector<EigenPair>& pairs, const SLCoefficients& c);

/// f_n for the contract payoff. Calls and puts integrate exactly up to the
/// strike instead of across the kink; custom payoffs use fourier_coefficients.
void payoff_coefficients(const OptionContract& contract, const GridFunction& payoff, std::vector<EigenPair>& pairs,
                         const SLCoefficients& c);

/// Default lambda_n (T - t) above which a term is dropped (e^-35 ~ 6e-16).
inline constexpr double kDefaultLambdaCutoff = 35.0;

/// Number of leading pairs with lambda_n * horizon <= cutoff.
std::size_t retained_count(const std::vector<EigenPair>& pairs, double horizon, double cutoff = kDefaultLambdaCutoff);

/// v(y, t) = sum_{n <= N} f_n phi_n(y) e^{-lambda_n (T - t)}; phi_n is
/// interpolated between mesh nodes.
double value(double y, double t, double T, const std::vector<EigenPair>& pairs, std::size_t N);

struct ValueSurface {
    std::vector<double> t;
    std::vector<double> y;
    /// values[i][j] = v(y[j], t[i]).
    std::vector<std::vector<double>> values;
};

/// v on a uniform (t, y) grid covering [0, T] x [L, U].
ValueSurface value_surface(const std::vector<EigenPair>& pairs, const SLCoefficients& c, double T,
                           std::size_t N, std::size_t t_count = 101, std::size_t y_count = 101);

/// Delta = sum f_n phi_n'(y0) e^{-lambda_n T}.
double delta(double y0, double T, const std::vector<EigenPair>& pairs, std::size_t N);

/// Vega = Delta / sigma'(y0); throws VegaUndefined when sigma'(y0) = 0.
double vega(double y0, double delta_value, const DiffusionSpec& spec);

/// sigma'(y0), analytic when the spec provides it and a central difference
/// otherwise.
double sigma_prime_at(double y0, const DiffusionSpec& spec);

/// Theta = sum f_n lambda_n phi_n(y0) e^{-lambda_n T}.
double theta(double y0, double T, const std::vector<EigenPair>& pairs, std::size_t N);

/// Partial sum over eigen-indices n1..n2 (1-based, inclusive) at (y0, t).
double contribution(std::size_t n1, std::size_t n2, const std::vector<EigenPair>& pairs, double y0, double t,
                    double T);

struct ContributionBand {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double value = 0.0;
};

struct ContributionReport {
    std::vector<ContributionBand> bands;
    double total() const;
};

/// Consecutive bands of `width` covering 1..N.
ContributionReport contribution_bands(const std::vector<EigenPair>& pairs, std::size_t N, std::size_t width,
                                      double y0, double t, double T);

struct RebateExpansion {
    /// Coefficients of f - l R and of the source A(l R), one per pair.
    std::vector<double> d;
    std::vector<double> s;
    /// Closed form of sum_n (s_n / lambda_n) phi_n: the steady state V with
    /// V(L) = 0, V(U) = R, minus l R. Zero when R = 0.
    GridFunction steady;
    double R = 0.0;
    double L = 0.0;
    double U = 0.0;
};

/// Expands the homogenized terminal data and the source term; l(y) =
/// (y - L)/(U - L) and A(l R) = R/(U - L) mu(y) y - (r + h)(y) l(y) R.
RebateExpansion rebate_expansion(const OptionContract& contract, const GridFunction& payoff,
                                 const std::vector<EigenPair>& pairs, const SLCoefficients& c,
                                 const ParticularSolution& sol);

/// Duhamel solution of the homogenized problem with its time-independent part
/// summed in closed form:
///   v(y, t) = sum_{n <= N} (d_n - s_n/lambda_n) e^{-lambda_n tau} phi_n(y)
///             + S(y) + l(y) R,  tau = T - t.
double value_with_rebate(double y, double t, double T, const std::vector<EigenPair>& pairs,
                         const RebateExpansion& expansion, std::size_t N);

ValueSurface value_surface_with_rebate(const std::vector<EigenPair>& pairs, const RebateExpansion& expansion,
                                       const SLCoefficients& c, double T, std::size_t N,
                                       std::size_t t_count = 101, std::size_t y_count = 101);

/// Weighted L2 distance between the payoff and the t = T reconstruction with
/// N terms, normalized by the payoff norm.
double terminal_reconstruction_error(const GridFunction& payoff, const std::vector<EigenPair>& pairs,
                                     const RebateExpansion& expansion, const SLCoefficients& c, std::size_t N);

}  // namespace nsbf
