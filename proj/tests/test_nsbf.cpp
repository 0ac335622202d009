#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "nsbf/coefficients.hpp"
#include "nsbf/error.hpp"

using namespace nsbf;

namespace {

struct Setup {
    SLCoefficients c;
    ParticularSolution sol;
    NSBFCoefficients coeffs;
};

Setup setup(const DiffusionSpec& spec, NsbfOptions options = {}) {
    Setup s;
    s.c = build_sl_coefficients(spec, Mesh::build(90, 120, 10001));
    s.sol = solve_particular(s.c);
    s.coeffs = compute_nsbf(s.c, s.sol, options);
    return s;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_SUITE("nsbf") {
    TEST_CASE("G2 vanishes for the constant problem and at L") {
        const Setup heat = setup(make_heat());
        CHECK(heat.coeffs.G2.sup_norm() < 1e-12);
        for (double beta : {-2.0, 0.5, 1.0}) {
            const SLCoefficients c = build_sl_coefficients(testing::ejdcev(beta, 1), Mesh::build(90, 120, 10001));
            CHECK(compute_G2(c).front() == 0.0);
        }
    }

    TEST_CASE("G2 integrated and un-integrated forms agree") {
        const SLCoefficients c = build_sl_coefficients(testing::ejdcev(-1, 2), Mesh::build(90, 120, 10001));
        const GridFunction a = compute_G2(c);
        const GridFunction b = compute_G2_unintegrated(c);
        CHECK((a - b).sup_norm() < 1e-7);
    }

    TEST_CASE("h tilde examples") {
        const Setup heat = setup(make_heat());
        CHECK(std::abs(heat.coeffs.h_tilde) < 1e-12);
        const SLCoefficients c = build_sl_coefficients(testing::ejdcev(1, 0), Mesh::build(90, 120, 10001));
        const ParticularSolution sol = solve_particular(c);
        // g'(L) = 0, so only the rho'/rho term survives. The prefactor is
        // sqrt(p/w) = 1/l'(L), the scaling that makes the alternating identity hold.
        const double expected = std::sqrt(c.p.front() / c.w.front()) * c.rho_prime.front() / c.rho.front();
        CHECK(compute_h_tilde(sol, c) == doctest::Approx(expected).epsilon(1e-14));
        const Setup s = setup(testing::ejdcev(-1, 2));
        CHECK(s.coeffs.identities.alpha_alternating.sup_norm() < 1e-6);
    }

    TEST_CASE("initial coefficients for the constant problem") {
        const Setup heat = setup(make_heat());
        CHECK(heat.coeffs.alpha[0].sup_norm() < 1e-12);
        CHECK(heat.coeffs.beta[0].sup_norm() < 1e-12);
    }

    TEST_CASE("alpha1 has a finite limit at L") {
        const Setup s = setup(testing::ejdcev(-1, 2));
        const GridFunction& a1 = s.coeffs.alpha[1];
        CHECK(a1.all_finite());
        // Smooth approach: the quadratic through nodes 10, 20, 30 predicts the
        // values closer to L, including alpha1(L) itself.
        const double h = s.c.mesh->step();
        const double x1 = 10 * h, x2 = 20 * h, x3 = 30 * h;
        auto quad = [&](double x) {
            return a1[10] * (x - x2) * (x - x3) / ((x1 - x2) * (x1 - x3)) +
                   a1[20] * (x - x1) * (x - x3) / ((x2 - x1) * (x2 - x3)) +
                   a1[30] * (x - x1) * (x - x2) / ((x3 - x1) * (x3 - x2));
        };
        const double scale = std::max(1.0, a1.sup_norm());
        for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(a1[i] - quad(i * h)) < 1e-7 * scale);
    }

    TEST_CASE("constant problem has vanishing coefficients") {
        NsbfOptions o;
        o.auto_order = false;
        o.max_order = 20;
        const Setup heat = setup(make_heat(), o);
        const double lu = heat.c.l.back();
        for (std::size_t n = 0; n <= 20; ++n) {
            // A_n = l^n alpha_n carries round-off amplified by l^n.
            CHECK(heat.coeffs.A[n].sup_norm() < 1e-12 * std::max(1.0, std::pow(lu, n)));
            CHECK(heat.coeffs.alpha[n].sup_norm() < 1e-12);
            CHECK(heat.coeffs.beta[n].sup_norm() < 1e-10);
        }
        for (double r : heat.coeffs.identities.max_residual_by_order) CHECK(r < 1e-10);
    }

    TEST_CASE("scaled coefficients vanish at L") {
        const Setup s = setup(testing::ejdcev(-1, 2));
        for (std::size_t n = 1; n < s.coeffs.A.size(); ++n) {
            CHECK(s.coeffs.A[n].front() == 0.0);
            CHECK(s.coeffs.B[n].front() == 0.0);
        }
        const RecurrenceIntermediates mid = recurrence_intermediates(2, s.coeffs.A[0], s.sol, s.c);
        CHECK(mid.theta_tilde.front() == 0.0);
        CHECK(mid.eta_tilde.front() == 0.0);
        CHECK(recurrence_A(2, s.coeffs.A[0], mid, s.sol, s.c).front() == 0.0);
    }

    TEST_CASE("recovered alpha and beta are finite") {
        NsbfOptions o;
        o.auto_order = false;
        o.max_order = 40;
        const Setup s = setup(testing::ejdcev(1, 1), o);
        for (std::size_t n = 0; n <= 40; ++n) {
            REQUIRE(s.coeffs.alpha[n].all_finite());
            REQUIRE(s.coeffs.beta[n].all_finite());
        }
        // Index 0 needs no division.
        for (std::size_t i = 0; i < s.coeffs.alpha[0].size(); ++i) {
            REQUIRE(s.coeffs.alpha[0][i] == s.coeffs.A[0][i]);
        }
    }

    TEST_CASE("identity residual improves with the truncation order") {
        NsbfOptions o;
        o.auto_order = false;
        o.max_order = 30;
        const Setup s = setup(testing::ejdcev(-1, 2), o);
        const IdentityReport& r = s.coeffs.identities;
        CHECK(r.residual_at(30) < 1e-6);
        CHECK(r.residual_at(2) > r.residual_at(30));
        // Residual falls steadily over the first orders.
        for (std::size_t m = 1; m <= 8; ++m) CHECK(r.alpha_residual_by_order[m] < r.alpha_residual_by_order[m - 1]);
    }

    TEST_CASE("accepted order satisfies all four identities for every parameter set") {
        for (double beta : {0.5, 0.0, -1.0, -2.0, 1.0}) {
            for (double gamma : {0.0, 1.0, 2.0, 3.0}) {
                const Setup s = setup(testing::ejdcev(beta, gamma));
                INFO("beta=" << beta << " gamma=" << gamma << " order=" << s.coeffs.order);
                CHECK(s.coeffs.identities.residual_at(s.coeffs.order) < 1e-6);
            }
        }
    }

    TEST_CASE("Legendre coefficients") {
        const LegendreTable t(12);
        for (int n = 0; n <= 12; ++n) {
            const double lead = factorial(2 * n) / (std::pow(2.0, n) * factorial(n) * factorial(n));
            CHECK(t.coeff(n, n) == doctest::Approx(lead).epsilon(1e-14));
            for (int k = 0; k <= n; ++k) {
                if ((n - k) % 2 != 0) CHECK(t.coeff(k, n) == 0.0);
            }
        }
        CHECK(t.coeff(0, 2) == doctest::Approx(-0.5));
        CHECK(t.coeff(1, 3) == doctest::Approx(-1.5));
    }

    TEST_CASE("direct formula agrees with the recurrence") {
        const Setup s = setup(testing::ejdcev(-1, 2));
        const FormalPowerTable powers = build_formal_powers(s.sol, s.c, 8);
        const LegendreTable table(8);
        const GridFunction a0 = direct_alpha(0, table, powers, s.c);
        CHECK((a0 - s.coeffs.alpha[0]).sup_norm() < 1e-14);
        const GridFunction a1 = direct_alpha(1, table, powers, s.c);
        for (std::size_t i = 100; i < a1.size(); ++i) REQUIRE(std::abs(a1[i] - s.coeffs.alpha[1][i]) < 1e-10);
        const std::size_t start = (s.c.mesh->size() - 1) / 4;
        for (std::size_t n : {2u, 3u, 4u}) {
            const GridFunction d = direct_alpha(n, table, powers, s.c);
            double scale = 0.0, worst = 0.0;
            for (std::size_t i = start; i < d.size(); ++i) {
                scale = std::max(scale, std::abs(s.coeffs.alpha[n][i]));
                worst = std::max(worst, std::abs(d[i] - s.coeffs.alpha[n][i]));
            }
            INFO("n=" << n);
            CHECK(worst < 1e-5 * scale);
        }
        CHECK_THROWS_AS(direct_alpha(9, LegendreTable(9), build_formal_powers(s.sol, s.c, 9), s.c), Error);
    }
}
