#include "modlift/modfun.hpp"

#include "modlift/arith.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace modlift::modfun;
using modlift::arith::BigInt;
using modlift::qforms::Mat2;
using modlift::qforms::QuadForm;

TEST_CASE("J coefficients against E4^3/Delta") {
    auto want = oracle::j_by_eta(120);
    auto J = j_series(120);
    for (int n = -1; n <= 120; ++n) CHECK(J.exact_coeff(n) == want[n + 1]);
    CHECK(J.exact_coeff(1) == 196884);
    CHECK(J.exact_coeff(2) == 21493760);
    CHECK(J.exact_coeff(0) == 0);
}

TEST_CASE("Faber polynomials against the Hecke formula") {
    // c_m(n) = sum_{a | (m, n)} (m/a) c(m n/a^2)
    const int N = 64;
    auto c = oracle::j_by_eta(4 * N);
    auto cJ = [&](long long k) { return c.at(k + 1); };
    for (int m = 1; m <= 4; ++m) {
        auto F = faber(m, N);
        CHECK(F->exact_coeff(-m) == 1);
        for (int n = -m + 1; n <= 0; ++n) CHECK(F->exact_coeff(n) == 0);
        for (int n = 1; n <= N; ++n) {
            BigInt want = 0;
            for (int a = 1; a <= std::min(m, n); ++a)
                if (m % a == 0 && n % a == 0) want += BigInt(m / a) * cJ((long long)m * n / (a * a));
            CHECK_MESSAGE(F->exact_coeff(n) == want, "m=" << m << " n=" << n);
            double rel = std::abs(F->coeff(n) - want.convert_to<double>()) / want.convert_to<double>();
            CHECK(rel <= 1e-15);
        }
    }
    CHECK(faber(0, 8)->exact_coeff(0) == 1);
}

TEST_CASE("singular moduli") {
    const double s3 = std::sqrt(3.0);
    CHECK(std::abs(eval_Jm(1, {0, 1}).value - 984.0) < 1e-9);
    CHECK(std::abs(eval_Jm(1, {-0.5, s3 / 2}).value + 744.0) < 1e-9);
    CHECK(std::abs(eval_Jm(1, {0, std::sqrt(2.0)}).value - (8000.0 - 744)) < 1e-8);
    CHECK(std::abs(eval_Jm(1, {0.5, std::sqrt(7.0) / 2}).value - (-3375.0 - 744)) < 1e-8);
    CHECK(std::abs(eval_Jm(1, {0.5, std::sqrt(163.0) / 2}).value - (-640320.0 * 640320 * 640320 - 744)) < 1e-9 * 2.6e17);
}

TEST_CASE("J_2 = J^2 - 2 c(1)") {
    for (cplx z : {cplx(0.1, 0.9), cplx(0.37, 1.4), cplx(-0.2, 2.5)}) {
        cplx j = eval_Jm(1, z).value;
        cplx want = j * j - 2.0 * 196884.0;
        CHECK(std::abs(eval_Jm(2, z).value - want) <= 1e-9 * std::abs(want));
    }
}

TEST_CASE("modular invariance and reduction") {
    cplx z(0.13, 0.07);
    auto r = reduce_point(z);
    CHECK(std::abs(r.z.real()) <= 0.5 + 1e-12);
    CHECK(std::abs(r.z) >= 1 - 1e-12);
    CHECK(std::abs(r.gamma.act(z) - r.z) < 1e-12);
    for (int m = 1; m <= 3; ++m) {
        cplx a = eval_Jm(m, z).value, b = eval_Jm(m, r.z).value;
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
    }
    Mat2 g{2, 1, 5, 3};
    cplx w(0.3, 1.1);
    CHECK(std::abs(eval_Jm(1, g.act(w)).value - eval_Jm(1, w).value) < 1e-7);
}

TEST_CASE("truncation is reported") {
    CHECK_THROWS_AS(eval_Jm(3, {0.5, 0.87}, 1e-12, 4), TruncationError);
    auto J = j_series(64);
    CHECK(J.tail_bound(1.0) < 1e-30);
    CHECK(J.tail_bound(std::sqrt(3.0) / 2) > 0);
}

TEST_CASE("cycle integral of 1 is 2 log(eps)/sqrt(D)") {
    for (long long d : {5, 8, 12, 13, 45, 229}) {
        double want = 2 * modlift::arith::pell_minimal(d).log_epsilon / std::sqrt(double(d));
        for (auto& q : modlift::qforms::class_representatives(d)) {
            auto g = modlift::qforms::geodesic_data(q);
            double le = g.log_epsilon;
            auto v = faber_cycle_integral(0, q);
            CHECK(v.value.real() == doctest::Approx(2 * le / std::sqrt(double(d))).epsilon(1e-10));
            CHECK(std::abs(v.value.imag()) < 1e-12);
            if (q.content() == 1) CHECK(le == doctest::Approx(want * std::sqrt(double(d)) / 2).epsilon(1e-12));
        }
    }
}

TEST_CASE("cycle integral: angular and arclength parametrizations agree") {
    for (QuadForm q : {QuadForm{1, 1, -1}, QuadForm{1, 2, -1}, QuadForm{1, 2, -2}, QuadForm{2, 2, -1}, QuadForm{1, 3, -1}}) {
        // the angular path passes close to cusps, where J_m is large; m = 2 only where that stays mild
        std::vector<int> ms{0, 1};
        if (q == QuadForm{1, 1, -1}) ms.push_back(2);
        for (int m : ms) {
            auto Fm = [m](cplx z) { return m == 0 ? cplx(1) : eval_Jm(m, z, 1e-11).value; };
            auto a = cycle_integral(Fm, q, 1e-8);
            auto b = faber_cycle_integral(m, q, 1e-11);
            double scale = std::max(1.0, std::abs(b.value));
            CHECK_MESSAGE(std::abs(a.value - b.value) <= 1e-7 * scale, q << " m=" << m << " angular=" << a.value
                                                                         << " arclength=" << b.value);
        }
    }
}
