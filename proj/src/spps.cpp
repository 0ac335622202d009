#include "nsbf/spps.hpp"

#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

ParticularSolution solve_particular(const SLCoefficients& c, double tol, std::size_t max_terms) {
    const auto& mesh = c.mesh;
    const double seed = 1.0 / c.rho[0];

    GridFunction even_sum(mesh, 1.0);
    GridFunction odd_sum(mesh, 0.0);
    GridFunction term(mesh, 1.0);

    ParticularSolution out;
    out.series_order = 1;
    bool converged = false;
    for (std::size_t k = 1; k <= max_terms; ++k) {
        const GridFunction odd = antiderivative(term * c.q);
        term = antiderivative(odd / c.p);
        odd_sum += odd;
        even_sum += term;
        out.tail_norm = term.sup_norm() * seed;
        if (term.sup_norm() > 0.0) out.series_order = k + 1;
        if (term.sup_norm() <= tol * even_sum.sup_norm()) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "SPPS tail " << out.tail_norm << " above tolerance after " << max_terms << " terms";
        throw Error(ErrorKind::NoConvergence, "spps", msg.str());
    }

    out.g = seed * even_sum;
    out.g_prime = seed * (odd_sum / c.p);
    for (std::size_t i = 0; i < out.g.size(); ++i) {
        if (!(out.g[i] > 0.0)) {
            std::ostringstream msg;
            msg << "particular solution vanishes at y=" << mesh->point(i);
            throw Error(ErrorKind::NotPositive, "spps", msg.str());
        }
    }
    return out;
}

FormalPowerTable build_formal_powers(const ParticularSolution& sol, const SLCoefficients& c, std::size_t max_order) {
    const GridFunction g2w = sol.g * sol.g * c.w;
    const GridFunction inv_g2p = GridFunction(c.mesh, 1.0) / (sol.g * sol.g * c.p);

    FormalPowerTable table;
    table.max_order = max_order;
    table.y.emplace_back(c.mesh, 1.0);
    table.y_tilde.emplace_back(c.mesh, 1.0);
    table.phi.push_back(sol.g);
    for (std::size_t k = 1; k <= max_order; ++k) {
        const double factor = static_cast<double>(k);
        const bool odd = k % 2 == 1;
        GridFunction yk = factor * antiderivative(table.y.back() * (odd ? inv_g2p : g2w));
        GridFunction ytk = factor * antiderivative(table.y_tilde.back() * (odd ? g2w : inv_g2p));
        table.phi.push_back(sol.g * (odd ? yk : ytk));
        table.y.push_back(std::move(yk));
        table.y_tilde.push_back(std::move(ytk));
    }
    return table;
}

}  // namespace nsbf
