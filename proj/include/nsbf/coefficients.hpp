#pragma once

#include <cstddef>
#include <vector>

#include "nsbf/mesh.hpp"
#include "nsbf/model.hpp"
#include "nsbf/spps.hpp"

namespace nsbf {

/// Pointwise residuals of the four series identities satisfied by the
/// coefficient functions:
///   sum alpha_m          = (G1 + G2) l / (2 rho)
///   sum (-1)^m alpha_m   = h l / (2 rho)
///   sum beta_m           = l [ q/(4 rho w) - [p (1/rho)']' / (4w) + (h G2 + G2^2)/(2 rho) ]
///   sum (-1)^m beta_m    = l [ (q(L)/w(L) - rho(L)/w(L) [p (1/rho)']'(L)) / (4 rho) + h G2/(2 rho) ]
struct IdentityReport {
    GridFunction alpha_sum;
    GridFunction alpha_alternating;
    GridFunction beta_sum;
    GridFunction beta_alternating;
    /// max over the four identities of the sup-norm residual after truncating
    /// every series at order m (index m = 0..max_order).
    std::vector<double> max_residual_by_order;
    /// Same, restricted to the two alpha identities.
    std::vector<double> alpha_residual_by_order;
    std::size_t suggested_order = 0;

    double max_residual() const;
    /// max_residual_by_order at the given order (clamped to the last one).
    double residual_at(std::size_t order) const;
};

struct NSBFCoefficients {
    std::vector<GridFunction> alpha;
    std::vector<GridFunction> beta;
    std::vector<GridFunction> A;
    std::vector<GridFunction> B;
    GridFunction G1;
    GridFunction G2;
    double h_tilde = 0.0;
    /// Accepted truncation order used by the eigenfunction series.
    std::size_t order = 0;
    bool has_beta = false;
    IdentityReport identities;
};

struct RecurrenceIntermediates {
    GridFunction theta_tilde;
    GridFunction eta_tilde;
};

struct NsbfOptions {
    std::size_t max_order = 60;
    /// Neighbourhood [L, L + eps] scanned when cleaning up the division by l^n,
    /// as a fraction of U - L.
    double eps_fraction = 0.01;
    /// Compute beta_n and the derivative identities. Pricing alone only needs
    /// alpha_n.
    bool with_beta = true;
    /// When false the accepted order is max_order instead of the identity
    /// plateau.
    bool auto_order = true;
};

/// G2 = [rho rho'/(2w)]_L^y + (1/2) int_L^y (q/rho^2 + rho'^2/w).
GridFunction compute_G2(const SLCoefficients& c);

/// G2 from its un-integrated form (1/2) int rho^-1 (q/rho - [p (1/rho)']'),
/// with the inner derivative taken numerically. Cross-check only.
GridFunction compute_G2_unintegrated(const SLCoefficients& c);

/// [p (1/rho)']' with one numerical differentiation.
GridFunction p_inv_rho_second(const SLCoefficients& c);

double compute_h_tilde(const ParticularSolution& sol, const SLCoefficients& c);

struct InitialCoefficients {
    GridFunction alpha0, alpha1, beta0, beta1;
    GridFunction A0, A1, B0, B1;
};

InitialCoefficients initial_coefficients(const ParticularSolution& sol, const SLCoefficients& c,
                                         const FormalPowerTable& powers, const GridFunction& G1,
                                         const GridFunction& G2);

/// theta~_n and eta~_n from A_{n-2}.
RecurrenceIntermediates recurrence_intermediates(std::size_t n, const GridFunction& A_prev2,
                                                 const ParticularSolution& sol, const SLCoefficients& c);

/// A_n from A_{n-2}.
GridFunction recurrence_A(std::size_t n, const GridFunction& A_prev2, const RecurrenceIntermediates& mid,
                          const ParticularSolution& sol, const SLCoefficients& c);

/// B_n from A_{n-2} and B_{n-2}.
GridFunction recurrence_B(std::size_t n, const GridFunction& A_prev2, const GridFunction& B_prev2,
                          const RecurrenceIntermediates& mid, const ParticularSolution& sol, const SLCoefficients& c);

/// Divides A_n = l^n alpha_n by l^n. Inside [L, L + eps] everything before the
/// point where |result| is smallest is round-off amplified by the division and
/// is set to zero (ties go to the smallest index).
GridFunction divide_by_l_power(const GridFunction& scaled, std::size_t n, const GridFunction& l, double eps);

/// Recovers alpha_n, beta_n for every n >= 1 from A_n, B_n.
void recover_alpha_beta(NSBFCoefficients& state, const SLCoefficients& c, double eps);

IdentityReport check_identities(const NSBFCoefficients& state, const SLCoefficients& c,
                                const ParticularSolution& sol);

/// Coefficients of the Legendre polynomials: coeff(k, n) is the x^k
/// coefficient of P_n.
class LegendreTable {
public:
    explicit LegendreTable(std::size_t max_degree);
    double coeff(std::size_t k, std::size_t n) const { return table_[n][k]; }
    std::size_t max_degree() const noexcept { return table_.size() - 1; }

private:
    std::vector<std::vector<double>> table_;
};

/// alpha_n from the closed formula in the formal powers; only meaningful for
/// small n because the Legendre coefficients grow quickly.
GridFunction direct_alpha(std::size_t n, const LegendreTable& table, const FormalPowerTable& powers,
                          const SLCoefficients& c);

/// Full coefficient pipeline: G1, G2, h, initial values, recurrences up to
/// options.max_order, recovery of alpha_n (and beta_n), identity checks, and
/// the accepted truncation order.
NSBFCoefficients compute_nsbf(const SLCoefficients& c, const ParticularSolution& sol, const NsbfOptions& options = {});

}  // namespace nsbf
