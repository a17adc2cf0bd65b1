#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dlab/errors.hpp"
#include "dlab/special_functions.hpp"
#include "oracles.hpp"

using namespace dlab::special;
using std::numbers::pi;

TEST_CASE("K at the corners and against quadrature") {
    CHECK(complete_K(0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    const double k5 = complete_K(0.5);
    CHECK(std::abs(k5 - oracle::K_quad(0.5)) < 1e-13 * k5);
    CHECK(std::abs(k5 - 1.854074677301372) < 1e-14);
    for (double m = 0.0; m <= 0.99; m += 0.0099) {
        CHECK(std::abs(complete_K(m) - oracle::K_quad(m)) < 1e-12 * complete_K(m));
    }
}

TEST_CASE("K log singularity") {
    for (double d : {1e-6, 1e-9, 1e-12}) {
        const double m = 1.0 - d, e = 1.0 - m;
        CHECK(std::abs(complete_K(m) - 0.5 * std::log(16.0 / e)) < e * std::log(16.0 / e));
    }
}

TEST_CASE("E values") {
    CHECK(complete_E(0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(complete_E(1.0) == 1.0);
    CHECK(std::abs(complete_E(0.5) - oracle::E_quad(0.5)) < 1e-13);
    CHECK(std::abs(complete_E(0.5) - 1.350643881047675) < 1e-14);
    for (double m = 0.0; m <= 0.99; m += 0.033) CHECK(std::abs(complete_E(m) - oracle::E_quad(m)) < 1e-13);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(complete_K(1.0), dlab::DomainError);
    CHECK_THROWS_AS(complete_K(-0.1), dlab::DomainError);
    CHECK_THROWS_AS(complete_E(1.5), dlab::DomainError);
    CHECK_THROWS_AS(EllipticModulus(-1e-3), dlab::DomainError);
    CHECK_THROWS_AS(jacobi_cn(0.3, 1.01), dlab::DomainError);
}

TEST_CASE("Legendre relation") {
    for (double m = 0.01; m < 1.0; m += 0.049) {
        const double lhs = complete_E(m) * complete_K(1 - m) + complete_E(1 - m) * complete_K(m) -
                           complete_K(m) * complete_K(1 - m);
        CHECK(std::abs(lhs - pi / 2) < 1e-11);
    }
}

TEST_CASE("cn special values") {
    for (double m : {0.0, 0.2, 0.5, 0.9, 1.0}) CHECK(jacobi_cn(0.0, m) == doctest::Approx(1.0).epsilon(1e-15));
    for (double z = -7.0; z < 7.0; z += 0.37) CHECK(std::abs(jacobi_cn(z, 0.0) - std::cos(z)) < 1e-14);
    CHECK(std::abs(jacobi_cn(complete_K(0.5), 0.5)) < 1e-13);
    for (double z = -4.0; z < 4.0; z += 0.5) CHECK(std::abs(jacobi_cn(z, 1.0) - oracle::sech(z)) < 1e-14);
}

TEST_CASE("cn inverts the incomplete integral") {
    for (double m : {0.1, 0.5, 0.95}) {
        for (double phi = 0.05; phi < 1.5; phi += 0.2) {
            CHECK(std::abs(jacobi_cn(oracle::F_quad(phi, m), m) - std::cos(phi)) < 1e-12);
        }
    }
}

TEST_CASE("property: sn^2 + cn^2 = 1, periodicity and parity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> um(0.0, 0.999), uz(-20.0, 20.0);
    for (int t = 0; t < 500; ++t) {
        const double m = um(rng), z = uz(rng);
        const auto s = jacobi_sncndn(z, EllipticModulus(m));
        CHECK(std::abs(s.sn * s.sn + s.cn * s.cn - 1.0) < 1e-12);
        CHECK(std::abs(s.dn * s.dn + m * s.sn * s.sn - 1.0) < 1e-12);
        CHECK(std::abs(s.cn) <= 1.0);
        CHECK(std::abs(jacobi_cn(z + 4 * complete_K(m), m) - s.cn) < 1e-10);
        CHECK(jacobi_cn(-z, m) == doctest::Approx(s.cn).epsilon(1e-14));
    }
}
