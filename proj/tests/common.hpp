#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "nsbf/config.hpp"
#include "nsbf/pipeline.hpp"

namespace testing {

inline nsbf::DiffusionSpec ejdcev(double beta, double gamma) {
    return nsbf::make_ejdcev(nsbf::make_ejdcev_params(beta, gamma));
}

inline nsbf::Numerics medium_numerics() { return nsbf::Numerics{}; }

inline nsbf::Numerics one_day_numerics() {
    nsbf::Numerics n;
    n.roots = nsbf::short_root_grid();
    return n;
}

inline constexpr double kOneDay = 1.0 / 360.0;

/// Spectra are expensive enough to share across test cases.
inline const nsbf::SpectralSolution& medium(double beta, double gamma) {
    static std::map<std::pair<double, double>, nsbf::SpectralSolution> cache;
    auto it = cache.find({beta, gamma});
    if (it == cache.end()) {
        it = cache.emplace(std::make_pair(beta, gamma),
                           nsbf::solve_spectrum(ejdcev(beta, gamma), 90.0, 120.0, medium_numerics(), true))
                 .first;
    }
    return it->second;
}

inline const nsbf::SpectralSolution& one_day(double beta, double gamma) {
    static std::map<std::pair<double, double>, nsbf::SpectralSolution> cache;
    auto it = cache.find({beta, gamma});
    if (it == cache.end()) {
        it = cache.emplace(std::make_pair(beta, gamma),
                           nsbf::solve_spectrum(ejdcev(beta, gamma), 90.0, 120.0, one_day_numerics(), false))
                 .first;
    }
    return it->second;
}

inline nsbf::OptionContract contract(nsbf::OptionStyle style, double K, double T = 0.5, double rebate = 0.0) {
    nsbf::OptionContract k;
    k.style = style;
    k.K = K;
    k.T = T;
    k.rebate = rebate;
    return k;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
