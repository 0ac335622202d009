#include "nsbf/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

SpectralSolution solve_spectrum(const DiffusionSpec& spec, double L, double U, const Numerics& numerics,
                                bool with_derivative) {
    SpectralSolution s;
    s.spec = spec;
    s.with_derivative = with_derivative;
    s.c = build_sl_coefficients(spec, Mesh::build(L, U, numerics.mesh_points), numerics.gauge);
    s.sol = solve_particular(s.c, numerics.spps_tol);

    NsbfOptions options;
    options.max_order = numerics.nsbf_order;
    options.eps_fraction = numerics.eps_fraction;
    options.with_beta = with_derivative;
    options.auto_order = numerics.auto_order;
    s.coeffs = compute_nsbf(s.c, s.sol, options);

    s.search = find_eigenvalues(s.coeffs, s.c, numerics.roots);
    s.pairs = build_spectrum(s.search, s.coeffs, s.c, with_derivative);
    return s;
}

double evaluation_point(double y0, const SLCoefficients& c, Evaluation evaluation) {
    if (evaluation == Evaluation::Interpolate) return y0;
    const Mesh& mesh = *c.mesh;
    const double k = std::floor((y0 - mesh.lower()) / mesh.step() + 1e-9);
    const auto i = static_cast<std::size_t>(std::max(0.0, k));
    return mesh.point(std::min(i, mesh.size() - 1));
}

Diagnostics diagnose(const SpectralSolution& s, const Numerics& numerics, double y_eval) {
    Diagnostics d;
    d.identity_residual = s.coeffs.identities.residual_at(s.coeffs.order);
    d.identity_tol = numerics.identity_tol;
    d.spps_terms = s.sol.series_order;
    d.roots_found = s.pairs.size();
    d.evaluation_point = y_eval;
    for (const EigenPair& pair : s.pairs) {
        const double sup = pair.phi.sup_norm();
        d.boundary_residual = std::max(d.boundary_residual, std::abs(pair.phi.back()) / sup);
    }
    if (d.identity_residual > numerics.identity_tol) {
        std::ostringstream msg;
        msg << "identity residual " << d.identity_residual << " above " << numerics.identity_tol;
        d.warnings.push_back(msg.str());
    }
    if (s.search.possible_missed_roots) d.warnings.push_back("possible missed roots: " + s.search.warning);
    return d;
}

std::size_t terms_used(const std::vector<EigenPair>& pairs, const OptionContract& contract, double cutoff) {
    return retained_count(pairs, contract.T, cutoff);
}

std::vector<EigenPair> pairs_for(const SpectralSolution& s, const OptionContract& contract) {
    std::vector<EigenPair> pairs = s.pairs;
    const GridFunction payoff = payoff_on(contract, s.c.mesh);
    payoff_coefficients(contract, payoff, pairs, s.c);
    return pairs;
}

PricingResult price_contract(const SpectralSolution& s, const OptionContract& contract, double y0,
                             const Numerics& numerics, bool with_greeks) {
    validate(contract);
    if (with_greeks && !s.with_derivative) {
        throw Error(ErrorKind::AssumptionViolated, "pricing", "Greeks need a spectrum built with derivatives");
    }
    const double y = evaluation_point(y0, s.c, numerics.evaluation);
    const std::vector<EigenPair> pairs = pairs_for(s, contract);

    PricingResult r;
    r.N_used = terms_used(pairs, contract, numerics.lambda_cutoff);
    r.M_used = s.coeffs.order;
    if (contract.rebate > 0.0) {
        const GridFunction payoff = payoff_on(contract, s.c.mesh);
        const RebateExpansion e = rebate_expansion(contract, payoff, pairs, s.c, s.sol);
        r.price = value_with_rebate(y, 0.0, contract.T, pairs, e, r.N_used);
    } else {
        r.price = value(y, 0.0, contract.T, pairs, r.N_used);
    }
    if (with_greeks && contract.rebate == 0.0) {
        r.delta = delta(y, contract.T, pairs, r.N_used);
        r.theta = theta(y, contract.T, pairs, r.N_used);
        try {
            r.vega = vega(y, *r.delta, s.spec);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::VegaUndefined) throw;
        }
    }
    r.diagnostics = diagnose(s, numerics, y);
    return r;
}

}  // namespace nsbf
