#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "nsbf/error.hpp"
#include "nsbf/fd_oracle.hpp"

using namespace nsbf;
using testing::contract;

namespace {

std::vector<EigenPair> priced(const SpectralSolution& s, const OptionContract& k) { return pairs_for(s, k); }

}  // namespace

TEST_SUITE("pricing") {
    TEST_CASE("contract validation") {
        CHECK_NOTHROW(validate(contract(OptionStyle::Call, 100)));
        CHECK_THROWS_AS(validate(contract(OptionStyle::Call, 130)), Error);
        CHECK_THROWS_AS(validate(contract(OptionStyle::Put, 100, -1.0)), Error);
        CHECK_THROWS_AS(validate(contract(OptionStyle::Call, 100, 0.5, -1.0)), Error);
        CHECK_THROWS_AS(validate(contract(OptionStyle::Custom, 100)), Error);
    }

    TEST_CASE("zero payoff prices to zero") {
        const SpectralSolution& s = testing::medium(-1, 2);
        OptionContract k = contract(OptionStyle::Custom, 100);
        k.custom_payoff = GridFunction(s.c.mesh, 0.0);
        const PricingResult r = price_contract(s, k, 100, testing::medium_numerics(), true);
        CHECK(r.price == 0.0);
        CHECK(*r.delta == 0.0);
    }

    TEST_CASE("an eigenfunction payoff has a single Fourier coefficient") {
        const SpectralSolution& s = testing::medium(-1, 2);
        std::vector<EigenPair> pairs = s.pairs;
        fourier_coefficients(s.pairs[0].phi, pairs, s.c);
        CHECK(std::abs(pairs[0].f_n - 1.0) < 1e-8);
        for (std::size_t n = 1; n < pairs.size(); ++n) CHECK(std::abs(pairs[n].f_n) < 1e-8);
        OptionContract k = contract(OptionStyle::Custom, 100);
        k.custom_payoff = s.pairs[0].phi;
        const double v = price_contract(s, k, 105, testing::medium_numerics(), false).price;
        CHECK(testing::rel_err(v, interpolate(s.pairs[0].phi, 105) * std::exp(-s.pairs[0].lambda * 0.5)) < 1e-8);
    }

    TEST_CASE("exact strike integration matches quadrature of the kinked payoff") {
        const SpectralSolution& s = testing::medium(0.5, 1);
        for (OptionStyle st : {OptionStyle::Call, OptionStyle::Put}) {
            const OptionContract k = contract(st, 100.0005);
            std::vector<EigenPair> exact = s.pairs, quad = s.pairs;
            const GridFunction f = payoff_on(k, s.c.mesh);
            payoff_coefficients(k, f, exact, s.c);
            fourier_coefficients(f, quad, s.c);
            for (std::size_t n = 0; n < exact.size(); ++n) CHECK(std::abs(exact[n].f_n - quad[n].f_n) < 1e-6);
        }
    }

    TEST_CASE("terminal reconstruction shows Gibbs overshoot near U and converges in L2") {
        const SpectralSolution& s = testing::one_day(-1, 2);
        const OptionContract k = contract(OptionStyle::Call, 100);
        const std::vector<EigenPair> pairs = priced(s, k);
        REQUIRE(pairs.size() >= 27);
        const GridFunction f = payoff_on(k, s.c.mesh);
        GridFunction recon(s.c.mesh, 0.0);
        for (std::size_t n = 0; n < 27; ++n) recon += pairs[n].f_n * pairs[n].phi;
        CHECK(recon.sup_norm() > 1.05 * f.sup_norm());
        const RebateExpansion none = rebate_expansion(k, f, pairs, s.c, s.sol);
        double previous = 1e300;
        for (std::size_t N : {5u, 10u, 20u, 27u}) {
            const double err = terminal_reconstruction_error(f, pairs, none, s.c, N);
            CHECK(err < previous);
            previous = err;
        }
    }

    TEST_CASE("barrier values vanish") {
        const SpectralSolution& s = testing::medium(-1, 2);
        const std::vector<EigenPair> pairs = priced(s, contract(OptionStyle::Call, 100));
        const std::size_t N = pairs.size();
        for (double t : {0.0, 0.25, 0.49}) {
            CHECK(std::abs(value(90, t, 0.5, pairs, N)) < 1e-8 * 20);
            CHECK(std::abs(value(120, t, 0.5, pairs, N)) < 1e-8 * 20);
        }
        CHECK_THROWS_AS(value(89, 0, 0.5, pairs, N), Error);
    }

    TEST_CASE("value surface") {
        const SpectralSolution& s = testing::medium(-1, 2);
        const std::vector<EigenPair> pairs = priced(s, contract(OptionStyle::Call, 100));
        const std::size_t N = retained_count(pairs, 0.5);
        const ValueSurface surf = value_surface(pairs, s.c, 0.5, N);
        REQUIRE(surf.t.size() == 101);
        REQUIRE(surf.y.size() == 101);
        for (std::size_t j = 0; j < surf.y.size(); ++j) {
            CHECK(surf.values[0][j] == value(surf.y[j], 0.0, 0.5, pairs, N));
        }
        // Short-horizon spectrum so every slice except t = T is well resolved.
        const SpectralSolution& d = testing::one_day(-1, 2);
        const std::vector<EigenPair> all = priced(d, contract(OptionStyle::Call, 100));
        const ValueSurface full = value_surface(all, d.c, 0.5, all.size());
        for (std::size_t i = 0; i + 1 < full.t.size(); ++i) {
            for (double v : full.values[i]) {
                REQUIRE(v >= -1e-8);
                REQUIRE(v <= 20.0);
            }
        }
    }

    TEST_CASE("truncation: few terms suffice for the medium horizon") {
        const SpectralSolution& s = testing::one_day(-1, 2);
        const std::vector<EigenPair> pairs = priced(s, contract(OptionStyle::Call, 100));
        REQUIRE(pairs.size() >= 45);
        CHECK(std::abs(value(100, 0, 0.5, pairs, 45) - value(100, 0, 0.5, pairs, 6)) < 1e-4);
        double previous = 1e300;
        for (std::size_t N = 1; N <= 6; ++N) {
            const double step = std::abs(value(100, 0, 0.5, pairs, N) - value(100, 0, 0.5, pairs, N + 1));
            CHECK((step < previous || step == 0.0));
            previous = step;
        }
        CHECK(retained_count(pairs, 0.5) >= 4);
        CHECK(retained_count(pairs, 0.5) <= 8);
    }

    TEST_CASE("delta and theta against finite differences") {
        for (auto [beta, gamma] : {std::pair{0.5, 0.0}, std::pair{-1.0, 2.0}, std::pair{-2.0, 1.0}}) {
            const SpectralSolution& s = testing::medium(beta, gamma);
            for (OptionStyle st : {OptionStyle::Call, OptionStyle::Put}) {
                const std::vector<EigenPair> pairs = priced(s, contract(st, 100));
                const std::size_t N = retained_count(pairs, 0.5);
                const double h = 30.0 / 2000.0;
                const double fd_delta = (value(100 + h, 0, 0.5, pairs, N) - value(100 - h, 0, 0.5, pairs, N)) / (2 * h);
                const double dt = 1e-4;
                const double fd_theta = (value(100, 0, 0.5 - dt, pairs, N) - value(100, 0, 0.5 + dt, pairs, N)) / (2 * dt);
                INFO("beta=" << beta << " gamma=" << gamma << " style=" << to_string(st));
                CHECK(testing::rel_err(delta(100, 0.5, pairs, N), fd_delta) < 1e-3);
                CHECK(testing::rel_err(theta(100, 0.5, pairs, N), fd_theta) < 1e-3);
            }
        }
    }

    TEST_CASE("vega") {
        const DiffusionSpec spec = testing::ejdcev(0.5, 0);
        const double sp = sigma_prime_at(100, spec);
        CHECK(sp == doctest::Approx(0.5 * 0.25 / 100));
        CHECK(vega(100, -0.0332, spec) * sp == doctest::Approx(-0.0332).epsilon(1e-14));
        try {
            vega(100, 0.01, testing::ejdcev(0, 1));
            FAIL("expected vega-undefined");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::VegaUndefined);
        }
        const PricingResult r =
            price_contract(testing::medium(0, 1), contract(OptionStyle::Call, 100), 100, testing::medium_numerics(), true);
        CHECK_FALSE(r.vega.has_value());
        CHECK(r.delta.has_value());
    }

    TEST_CASE("contribution bands add up to the price") {
        const SpectralSolution& s = testing::one_day(1, 1);
        const OptionContract k = contract(OptionStyle::Call, 100, testing::kOneDay);
        const std::vector<EigenPair> pairs = priced(s, k);
        const std::size_t N = retained_count(pairs, k.T);
        const double price = value(100, 0, k.T, pairs, N);
        CHECK(contribution(1, N, pairs, 100, 0, k.T) == price);
        const ContributionReport report = contribution_bands(pairs, N, 5, 100, 0, k.T);
        CHECK(std::abs(report.total() - price) < 1e-12);
        CHECK(std::abs(contribution(41, 45, pairs, 100, 0, k.T)) < 5e-6);
        CHECK_THROWS_AS(contribution(5, 4, pairs, 100, 0, k.T), Error);
        CHECK_THROWS_AS(contribution(1, pairs.size() + 1, pairs, 100, 0, k.T), Error);
    }

    TEST_CASE("put plus call stays within the payoff bound") {
        for (auto [beta, gamma] : {std::pair{0.5, 2.0}, std::pair{-2.0, 0.0}}) {
            const SpectralSolution& s = testing::medium(beta, gamma);
            for (double K : {95.0, 100.0, 105.0}) {
                const auto call = price_contract(s, contract(OptionStyle::Call, K), 100, testing::medium_numerics(), false);
                const auto put = price_contract(s, contract(OptionStyle::Put, K), 100, testing::medium_numerics(), false);
                CHECK(call.price > -1e-8);
                CHECK(put.price > -1e-8);
                CHECK(call.price + put.price <= std::max(120 - K, K - 90));
            }
        }
    }

    TEST_CASE("zero rebate is bit-identical to the plain price") {
        const SpectralSolution& s = testing::medium(-1, 2);
        const OptionContract k = contract(OptionStyle::Call, 100);
        const std::vector<EigenPair> pairs = priced(s, k);
        const RebateExpansion e = rebate_expansion(k, payoff_on(k, s.c.mesh), pairs, s.c, s.sol);
        for (std::size_t N : std::vector<std::size_t>{1, 4, pairs.size()}) {
            for (double y : {91.0, 100.0, 117.3}) CHECK(value_with_rebate(y, 0, 0.5, pairs, e, N) == value(y, 0, 0.5, pairs, N));
        }
    }

    TEST_CASE("rebate at U - K smooths the terminal reconstruction") {
        const SpectralSolution& s = testing::one_day(-1, 2);
        const OptionContract plain = contract(OptionStyle::Call, 100);
        const OptionContract rebate = contract(OptionStyle::Call, 100, 0.5, 20.0);
        const std::vector<EigenPair> pairs = priced(s, plain);
        const GridFunction f = payoff_on(plain, s.c.mesh);
        const double e0 = terminal_reconstruction_error(f, pairs, rebate_expansion(plain, f, pairs, s.c, s.sol), s.c, 8);
        const double e1 = terminal_reconstruction_error(f, pairs, rebate_expansion(rebate, f, pairs, s.c, s.sol), s.c, 8);
        CHECK(e1 * 5 < e0);
        const RebateExpansion e = rebate_expansion(rebate, f, pairs, s.c, s.sol);
        CHECK(std::abs(value_with_rebate(120, 0.1, 0.5, pairs, e, pairs.size()) - 20.0) < 1e-8);
        CHECK(std::abs(value_with_rebate(90, 0.1, 0.5, pairs, e, pairs.size())) < 1e-8);
    }

    TEST_CASE("rebate price agrees with the finite-difference oracle") {
        const OptionContract k = contract(OptionStyle::Call, 100, 0.5, 5.0);
        const PricingResult r = price_contract(testing::medium(-1, 2), k, 100, testing::medium_numerics(), false);
        const double fd_price = fd::solve_pde(testing::ejdcev(-1, 2), k).at(100);
        CHECK(std::abs(r.price - fd_price) < 2e-3);
    }

    TEST_CASE("prices do not depend on the gauge of p") {
        for (double kappa : {0.1, 10.0}) {
            nsbf::Numerics n = testing::medium_numerics();
            n.gauge = kappa;
            const SpectralSolution scaled = solve_spectrum(testing::ejdcev(-1, 2), 90, 120, n, true);
            for (OptionStyle st : {OptionStyle::Call, OptionStyle::Put}) {
                const auto a = price_contract(scaled, contract(st, 100), 100, n, true);
                const auto b = price_contract(testing::medium(-1, 2), contract(st, 100), 100, testing::medium_numerics(), true);
                CHECK(testing::rel_err(a.price, b.price) < 1e-9);
                CHECK(testing::rel_err(*a.delta, *b.delta) < 1e-9);
            }
        }
    }
}
