#pragma once

#include <cstddef>
#include <vector>

#include "nsbf/mesh.hpp"
#include "nsbf/model.hpp"

namespace nsbf {

/// Non-vanishing solution of (p g')' - q g = 0 with g(L) = 1/rho(L), g'(L) = 0.
struct ParticularSolution {
    GridFunction g;
    GridFunction g_prime;
    std::size_t series_order = 0;
    double tail_norm = 0.0;
};

/// Spectral parameter power series at lambda = 0:
///   g = (1/rho(L)) * sum_k X^(2k),
/// with X^(0) = 1, X^(k) = int_L^y X^(k-1) q for odd k and
/// int_L^y X^(k-1) / p for even k. Summation stops once the newest even term
/// is below `tol` relative to sup|g|.
ParticularSolution solve_particular(const SLCoefficients& c, double tol = 1e-14, std::size_t max_terms = 64);

/// Formal powers Phi_k built from g; Y and Ytilde are the two auxiliary
/// families of iterated integrals alternating between 1/(g^2 p) and g^2 w.
struct FormalPowerTable {
    std::vector<GridFunction> phi;
    std::vector<GridFunction> y;
    std::vector<GridFunction> y_tilde;
    std::size_t max_order = 0;
};

FormalPowerTable build_formal_powers(const ParticularSolution& sol, const SLCoefficients& c, std::size_t max_order);

}  // namespace nsbf
