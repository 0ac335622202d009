#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsbf/coefficients.hpp"
#include "nsbf/mesh.hpp"
#include "nsbf/model.hpp"

namespace nsbf {

/// j_0(x) .. j_{m_max}(x) for one argument.
struct SphericalBesselBlock {
    double x = 0.0;
    std::vector<double> values;

    double operator[](std::size_t m) const { return values[m]; }
    std::size_t max_order() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// Miller backward recursion j_m = ((2m + 3)/x) j_{m+1} - j_{m+2}, started
/// m_max + ceil(x) + 20 orders up from (0, tiny) and scaled to whichever of
/// the closed forms j_0, j_1 is larger in magnitude.
SphericalBesselBlock bessel_backward(double x, std::size_t m_max);

/// Same as bessel_backward but fills `out` (resized to m_max + 1) to avoid
/// allocations in hot loops.
void bessel_backward_into(double x, std::size_t m_max, std::vector<double>& out);

/// Characteristic function at U:
///   sin(w l(U)) / rho(U) + 2 sum_m (-1)^m alpha_{2m+1}(U) j_{2m+1}(w l(U)),
/// truncated at coeffs.order.
double characteristic(double omega, const NSBFCoefficients& coeffs, const SLCoefficients& c);

struct RootGrid {
    double omega_lo = 0.0;
    double omega_hi = 15.0;
    std::size_t count = 100;
    double refine_tol = 1e-12;
};

/// Grid used for the medium horizon: 100 points on (0, 15].
RootGrid medium_root_grid();
/// Grid used for the one-day horizon: 1000 points on (0, 100].
RootGrid short_root_grid();

struct EigenSearch {
    std::vector<double> omegas;
    bool possible_missed_roots = false;
    std::string warning;
};

/// Scans the characteristic function on the grid, brackets every sign change
/// and refines it by bisection. omega = 0 is never returned.
EigenSearch find_eigenvalues(const NSBFCoefficients& coeffs, const SLCoefficients& c, const RootGrid& grid = {});

struct EigenPair {
    std::size_t n = 0;
    double omega = 0.0;
    double lambda = 0.0;
    GridFunction phi;
    /// Empty unless build_eigenfunction_derivative has been applied.
    GridFunction phi_prime;
    double norm_sq = 0.0;
    double f_n = 0.0;
};

/// Largest |phi(U)| / sup|phi| accepted for an eigenfunction.
inline constexpr double kBoundaryTolerance = 1e-6;

/// phi_n on the mesh (not normalized; norm_sq carries the weight-w norm).
EigenPair build_eigenfunction(std::size_t n, double omega, const NSBFCoefficients& coeffs, const SLCoefficients& c);

/// phi_n' = sqrt(w/p) [ (G2 sin(w l) + w cos(w l)) / rho
///                      + 2 sum_m (-1)^m beta_{2m+1} j_{2m+1}(w l) ] - (rho'/rho) phi_n.
GridFunction build_eigenfunction_derivative(const EigenPair& pair, const NSBFCoefficients& coeffs,
                                            const SLCoefficients& c);

/// Eigenpairs for every root of the search, in increasing order.
std::vector<EigenPair> build_spectrum(const EigenSearch& search, const NSBFCoefficients& coeffs,
                                      const SLCoefficients& c, bool with_derivative);

}  // namespace nsbf
