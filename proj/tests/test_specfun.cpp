#include "modlift/specfun.hpp"

#include "modlift/arith.hpp"
#include "modlift/qforms.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

using namespace modlift::specfun;
using std::numbers::pi;

namespace {

// composite Simpson on [a, b]
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace

TEST_CASE("bessel_k against the standard library and closed forms") {
    for (double s : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5})
        for (double x : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 500.0}) {
            double want = std::cyl_bessel_k(s, x);
            CHECK_MESSAGE(std::abs(bessel_k(s, x) - want) <= 1e-13 * want, "s=" << s << " x=" << x);
        }
    for (double x : {0.2, 1.0, 7.0}) CHECK(bessel_k(0.5, x) == doctest::Approx(std::sqrt(pi / (2 * x)) * std::exp(-x)).epsilon(1e-14));
}

TEST_CASE("bessel_k against the cosine integral") {
    // K_s(x) = Gamma(s+1/2) (2/x)^s / sqrt(pi) int_0^inf cos(x t) (1+t^2)^{-s-1/2} dt, s > 0
    for (double s : {0.75, 1.0, 1.5})
        for (double x : {0.5, 1.0, 3.0}) {
            auto f = [&](double t) { return std::cos(x * t) * std::pow(1 + t * t, -s - 0.5); };
            double T = 4000.0;
            double integral = simpson(f, 0, T, 4000000);
            double want = std::tgamma(s + 0.5) * std::pow(2 / x, s) / std::sqrt(pi) * integral;
            CHECK(bessel_k(s, x) == doctest::Approx(want).epsilon(1e-6));
        }
}

TEST_CASE("beta_half and beta_half_c") {
    for (double s : {0.01, 0.3, 1.0, 4.0, 25.0}) {
        double g = std::sqrt(pi / s);
        CHECK(beta_half(s) == doctest::Approx(g * boost::math::gamma_q(0.5, s)).epsilon(1e-13));
        CHECK(beta_half_c(s) == doctest::Approx(g * boost::math::gamma_p(0.5, s)).epsilon(1e-13));
    }
    CHECK(beta_half(1) + beta_half_c(1) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    // t = 1 + u^2/(1 - u^2) maps [0, 1) onto [1, inf)
    double s4 = 4 * pi;
    double tail = simpson(
        [&](double u) {
            if (u >= 1) return 0.0;
            double t = 1 / (1 - u * u);
            return std::exp(-s4 * t) / std::sqrt(t) * 2 * u / ((1 - u * u) * (1 - u * u));
        },
        0, 1);
    CHECK(std::abs(beta_half(s4) - tail) <= 1e-12);
    for (double s : {-5.0, -1.0, -0.2, 0.0, 0.2, 2.0}) {
        // t = u^2
        double want = 2 * simpson([&](double u) { return std::exp(-s * u * u); }, 0, 1);
        CHECK(beta_half_c(s) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("arcsin_0 is arcsin") {
    for (double a : {1.0, 1.0001, 1.5, 2.0, 4.0, 10.0, 1e4})
        CHECK(std::abs(arcsin_s(a, 0) - std::asin(1 / std::sqrt(a))) <= 1e-10);
    CHECK(arcsin_s(1, 0) == doctest::Approx(pi / 2).epsilon(1e-13));
    CHECK(arcsin_s(4, 0) == doctest::Approx(pi / 6).epsilon(1e-13));
}

TEST_CASE("arcsin_s as an incomplete beta function") {
    for (double a : {1.0, 1.1, 1.7, 3.0, 9.0, 100.0})
        for (double s : {-0.4, 0.0, 0.3, 1.0, 2.5}) {
            double want = std::sqrt(pi) * std::tgamma(s + 1) / (2 * std::tgamma(s + 0.5)) *
                          boost::math::beta(s + 0.5, 0.5, 1 / a);
            CHECK_MESSAGE(std::abs(arcsin_s(a, s) - want) <= 1e-10, "a=" << a << " s=" << s);
        }
}

TEST_CASE("arcsin_s estimate") {
    for (double a : {1.2, 2.0, 5.0, 10.0})
        for (double s : {0.1, 0.5, 1.0, 2.0}) CHECK(arcsin_s(a, s) <= std::pow(a - 1, -s - 0.5));
}

TEST_CASE("Bernoulli polynomials") {
    for (double x : {0.0, 0.3, 0.5, 0.9}) {
        CHECK(bernoulli_poly(1, x) == doctest::Approx(x - 0.5));
        CHECK(bernoulli_poly(2, x) == doctest::Approx(x * x - x + 1.0 / 6));
        CHECK(bernoulli_poly(3, x) == doctest::Approx(x * x * x - 1.5 * x * x + 0.5 * x));
        CHECK(bernoulli_poly(4, x) == doctest::Approx(std::pow(x, 4) - 2 * std::pow(x, 3) + x * x - 1.0 / 30));
    }
}

TEST_CASE("periodized arcsin_1: direct sum against the Bessel expansion") {
    const cplx pts[] = {{0.0, 0.5}, {0.1, 0.7}, {0.25, 1.0}, {0.5, 1.0}, {-0.3, 1.3},
                        {0.37, 0.45}, {0.9, 2.0}, {0.05, 0.8}, {-0.45, 1.6}, {0.2, 3.0}};
    for (cplx z : pts) {
        double lhs = oracle::periodized_arcsin(1.0, z);
        double rhs = arcsin_sum_constant(1.0, z.imag()) + arcsin_sum_oscillatory(1.0, z);
        CHECK_MESSAGE(std::abs(lhs - rhs) <= 1e-6, "z=" << z << " lhs=" << lhs << " rhs=" << rhs);
    }
}

TEST_CASE("script_F as the s -> 0 limit") {
    // quadratic extrapolation of the regularized periodized sum
    for (cplx z : {cplx(0.3, 0.8), cplx(0.0, 1.2)}) {
        double s[3] = {0.2, 0.1, 0.05}, v[3];
        for (int k = 0; k < 3; ++k) v[k] = oracle::periodized_arcsin(s[k], z, 20000) - arcsin_sum_constant(s[k], z.imag());
        double lim = v[0] * s[1] * s[2] / ((s[0] - s[1]) * (s[0] - s[2])) +
                     v[1] * s[0] * s[2] / ((s[1] - s[0]) * (s[1] - s[2])) +
                     v[2] * s[0] * s[1] / ((s[2] - s[0]) * (s[2] - s[1]));
        CHECK(script_F(z) == doctest::Approx(lim).epsilon(1e-3));
    }
}

TEST_CASE("script_F for large y") {
    // y F(z) -> B_2({x})
    for (double x : {0.0, 0.3, 0.5}) {
        double y = 40;
        CHECK(y * script_F(cplx(x, y)) == doctest::Approx(bernoulli_poly(2, x)).epsilon(2e-2));
    }
    CHECK(script_F(cplx(0.3, 2)) == doctest::Approx(script_F(cplx(1.3, 2))).epsilon(1e-12));
    CHECK(script_F(cplx(0.3, 2)) == doctest::Approx(script_F(cplx(-0.3, 2))).epsilon(1e-12));
}

TEST_CASE("script_F_prime against finite differences") {
    for (cplx z : {cplx(0.3, 0.8), cplx(0.71, 1.5)}) {
        double h = 1e-4;
        double fx = (script_F(z + h) - script_F(z - h)) / (2 * h);
        double fy = (script_F(z + cplx(0, h)) - script_F(z - cplx(0, h))) / (2 * h);
        cplx want = 0.5 * cplx(fx, -fy);
        CHECK(std::abs(script_F_prime(z) - want) <= 1e-7);
    }
    CHECK_THROWS(script_F_prime(cplx(1.0, 1.0)));
}

TEST_CASE("L(1) and the class number formula") {
    using modlift::arith::pell_minimal;
    // Delta < 0: L(1) = 2 pi h/(w sqrt|Delta|)
    struct Neg {
        long long d;
        int h, w;
    };
    for (auto [d, h, w] : {Neg{-3, 1, 6}, Neg{-4, 1, 4}, Neg{-7, 1, 2}, Neg{-23, 3, 2}, Neg{-84, 4, 2}, Neg{-163, 1, 2}})
        CHECK(dirichlet_L1(d) == doctest::Approx(2 * pi * h / (w * std::sqrt(-double(d)))).epsilon(1e-12));
    // Delta > 0: L(1) = h+ log(eps+)/sqrt(Delta), eps+ the totally positive unit
    for (long long d : {5, 8, 12, 13, 21, 60, 229}) {
        std::size_t hplus = 0;
        for (auto& f : modlift::qforms::class_representatives(d)) hplus += f.content() == 1;
        double want = hplus * pell_minimal(d).log_epsilon / std::sqrt(double(d));
        CHECK(dirichlet_L1(d) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(dirichlet_L1(5) == doctest::Approx(2 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0)).epsilon(1e-14));
}
