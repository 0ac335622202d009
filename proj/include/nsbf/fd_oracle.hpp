#pragma once

#include <cstddef>
#include <vector>

#include "nsbf/model.hpp"
#include "nsbf/pricing.hpp"

namespace nsbf::fd {

struct FDGrid {
    std::size_t y_count = 1201;
    std::size_t t_count = 400;
    /// Fully implicit substeps replacing the first Crank-Nicolson step
    /// (4 gives quarter-steps); 0 disables damping.
    std::size_t damping_steps = 4;
};

struct FDSolution {
    std::vector<double> y;
    /// t[0] = 0 ... t.back() = T.
    std::vector<double> t;
    /// values[i][j] = v(y[j], t[i]).
    std::vector<std::vector<double>> values;

    /// Cubic interpolation in y at the time slice i.
    double at(double y0, std::size_t i = 0) const;
};

/// Crank-Nicolson for v_t + 1/2 sigma^2 y^2 v_yy + mu y v_y - (r + h) v = 0 on
/// [L, U] x [0, T], v(L, t) = 0, v(U, t) = rebate, v(y, T) = payoff.
/// Never shares code with the eigenfunction pricer.
FDSolution solve_pde(const DiffusionSpec& spec, const OptionContract& contract, const FDGrid& grid = {});

}  // namespace nsbf::fd
