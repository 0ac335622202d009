#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "nsbf/error.hpp"
#include "nsbf/spectrum.hpp"

using namespace nsbf;

namespace {

constexpr double kPi = std::numbers::pi;

double sj0(double x) { return std::sin(x) / x; }
double sj1(double x) { return std::sin(x) / (x * x) - std::cos(x) / x; }
double sj2(double x) { return (3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x); }

struct Unit {
    SLCoefficients c;
    NSBFCoefficients coeffs;
};

// p = w = 1, q = 0 on [0, pi], so l(U) = pi and omega_n = n.
Unit unit_interval() {
    const MeshPtr m = Mesh::uniform(0, kPi, 10001);
    Unit u;
    u.c = sl_coefficients_from_pqw(GridFunction(m, 1.0), GridFunction(m, 0.0), GridFunction(m, 1.0));
    u.coeffs = compute_nsbf(u.c, solve_particular(u.c));
    return u;
}

}  // namespace

TEST_SUITE("spectrum") {
    TEST_CASE("Bessel closed forms") {
        CHECK(std::abs(bessel_backward(kPi, 5)[0]) < 1e-14);
        CHECK(bessel_backward(2.0, 5)[1] == doctest::Approx(0.435397774979992).epsilon(1e-13));
        const SphericalBesselBlock b50 = bessel_backward(50.0, 90);
        CHECK(std::abs(b50[0] - sj0(50)) < 1e-12);
        CHECK(std::abs(b50[1] - sj1(50)) < 1e-12);
        CHECK(std::abs(b50[2] - sj2(50)) < 1e-12);
        for (double x : {0.1, 1.0, 10.0, 50.0, 100.0}) {
            const SphericalBesselBlock b = bessel_backward(x, 60);
            INFO("x=" << x);
            CHECK(std::abs(b[0] - sj0(x)) < 1e-12);
            CHECK(std::abs(b[1] - sj1(x)) < 1e-12);
            CHECK(std::abs(b[2] - sj2(x)) < 1e-12);
        }
    }

    TEST_CASE("Bessel block bounds and small arguments") {
        const SphericalBesselBlock zero = bessel_backward(0.0, 10);
        CHECK(zero[0] == 1.0);
        for (std::size_t m = 1; m <= 10; ++m) CHECK(zero[m] == 0.0);
        const SphericalBesselBlock tiny = bessel_backward(1e-9, 4);
        CHECK(tiny[0] == doctest::Approx(1.0));
        CHECK(tiny[1] == doctest::Approx(1e-9 / 3.0));
        for (double x : {0.5, 7.3, 33.0, 140.0}) {
            const SphericalBesselBlock b = bessel_backward(x, 80);
            CHECK(b.max_order() == 80);
            for (double v : b.values) REQUIRE(std::abs(v) <= 1.0);
        }
    }

    TEST_CASE("Bessel backward recursion against the standard library") {
        for (double x : {0.01, 0.3, 1.0, 4.5, 12.0, 27.5, 60.0, 99.0}) {
            const SphericalBesselBlock b = bessel_backward(x, 61);
            for (unsigned m = 0; m <= 61; ++m) {
                const double ref = std::sph_bessel(m, x);
                INFO("x=" << x << " m=" << m);
                REQUIRE(std::abs(b[m] - ref) <= 1e-13 * std::abs(ref) + 2e-15);
            }
        }
    }

    TEST_CASE("characteristic function") {
        const Unit u = unit_interval();
        CHECK(characteristic(0.0, u.coeffs, u.c) == 0.0);
        for (int k = 1; k <= 10; ++k) CHECK(std::abs(characteristic(k, u.coeffs, u.c)) < 1e-11);
        const SpectralSolution& s = testing::medium(1, 1);
        const double root = std::sqrt(4.4047);
        CHECK(characteristic(root - 0.001, s.coeffs, s.c) * characteristic(root + 0.001, s.coeffs, s.c) < 0.0);
        CHECK(characteristic(0.0, s.coeffs, s.c) == 0.0);
    }

    TEST_CASE("roots of the unit problem are the integers") {
        const Unit u = unit_interval();
        RootGrid grid = medium_root_grid();
        grid.omega_hi = 15.5;
        const EigenSearch search = find_eigenvalues(u.coeffs, u.c, grid);
        REQUIRE(search.omegas.size() == 15);
        for (std::size_t n = 0; n < search.omegas.size(); ++n) CHECK(std::abs(search.omegas[n] - (n + 1.0)) < 1e-11);
        CHECK_FALSE(search.possible_missed_roots);
    }

    TEST_CASE("coarse grid triggers the missed-root warning") {
        const Unit u = unit_interval();
        RootGrid grid;
        grid.omega_hi = 15.0;
        grid.count = 10;
        const EigenSearch search = find_eigenvalues(u.coeffs, u.c, grid);
        CHECK(search.possible_missed_roots);
        CHECK_FALSE(search.warning.empty());
    }

    TEST_CASE("eigenfunctions of the unit problem") {
        const Unit u = unit_interval();
        const EigenSearch search = find_eigenvalues(u.coeffs, u.c, medium_root_grid());
        const std::vector<EigenPair> pairs = build_spectrum(search, u.coeffs, u.c, true);
        for (const EigenPair& p : pairs) {
            CHECK(p.phi.front() == 0.0);
            CHECK(p.lambda == doctest::Approx(p.omega * p.omega));
            CHECK(std::abs(p.norm_sq - kPi / 2.0) < 1e-10);
            for (std::size_t i = 0; i < p.phi.size(); i += 17) {
                const double y = u.c.mesh->point(i);
                REQUIRE(std::abs(p.phi[i] - std::sin(p.omega * y)) < 1e-10);
                REQUIRE(std::abs(p.phi_prime[i] - p.omega * std::cos(p.omega * y)) < 1e-8);
            }
        }
    }

    TEST_CASE("EJDCEV eigenfunctions: boundaries, orthogonality, derivative") {
        const SpectralSolution& s = testing::medium(-1, 2);
        REQUIRE(s.pairs.size() >= 2);
        for (const EigenPair& p : s.pairs) {
            CHECK(p.phi.front() == 0.0);
            CHECK(std::abs(p.phi.back()) < kBoundaryTolerance * p.phi.sup_norm());
            CHECK(p.norm_sq > 0.0);
        }
        const EigenPair& a = s.pairs[0];
        const EigenPair& b = s.pairs[1];
        CHECK(std::abs(inner_product(a.phi, b.phi, s.c.w)) / std::sqrt(a.norm_sq * b.norm_sq) < 1e-6);
        CHECK(a.phi_prime.front() > 0.0);
        const GridFunction fd = derivative(a.phi);
        const double scale = a.phi_prime.sup_norm();
        for (std::size_t i = 2; i + 2 < fd.size(); ++i) REQUIRE(std::abs(fd[i] - a.phi_prime[i]) < 1e-4 * scale);
    }

    TEST_CASE("eigenvalues increase and approach the asymptotic spacing") {
        const SpectralSolution& s = testing::one_day(1, 1);
        REQUIRE(s.pairs.size() >= 31);
        for (std::size_t n = 1; n < s.pairs.size(); ++n) CHECK(s.pairs[n].omega > s.pairs[n - 1].omega);
        const double spacing = kPi / s.c.l.back();
        CHECK(std::abs((s.pairs[30].omega - s.pairs[29].omega) - spacing) < 0.01 * spacing);
    }

    TEST_CASE("orthogonality and boundary values up to n = 20") {
        for (auto [beta, gamma] : {std::pair{1.0, 1.0}, std::pair{-2.0, 2.0}}) {
            const SpectralSolution& s = testing::one_day(beta, gamma);
            REQUIRE(s.pairs.size() >= 20);
            for (std::size_t n = 0; n < 20; ++n) {
                CHECK(std::abs(s.pairs[n].phi.back()) < 1e-6 * s.pairs[n].phi.sup_norm());
                for (std::size_t m = 0; m < n; ++m) {
                    const double ip = inner_product(s.pairs[n].phi, s.pairs[m].phi, s.c.w);
                    REQUIRE(std::abs(ip) / std::sqrt(s.pairs[n].norm_sq * s.pairs[m].norm_sq) < 1e-6);
                }
            }
        }
    }

    TEST_CASE("eigenvalues do not depend on the gauge of p") {
        for (double kappa : {0.1, 10.0}) {
            nsbf::Numerics n = testing::medium_numerics();
            n.gauge = kappa;
            const SpectralSolution scaled = solve_spectrum(testing::ejdcev(-1, 2), 90, 120, n, false);
            const SpectralSolution& base = testing::medium(-1, 2);
            REQUIRE(scaled.pairs.size() == base.pairs.size());
            for (std::size_t k = 0; k < base.pairs.size(); ++k) {
                CHECK(testing::rel_err(scaled.pairs[k].omega, base.pairs[k].omega) < 1e-9);
            }
        }
    }

    TEST_CASE("a spurious root is reported as a boundary violation") {
        const SpectralSolution& s = testing::medium(-1, 2);
        CHECK_THROWS_AS(build_eigenfunction(1, s.pairs[0].omega + 0.05, s.coeffs, s.c), Error);
    }
}
