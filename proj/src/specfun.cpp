#include "modlift/specfun.hpp"

#include "modlift/arith.hpp"
#include "modlift/quadrature.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace modlift::specfun {

using std::numbers::pi;

double beta_half(double s) {
    if (!(s > 0)) throw std::domain_error("beta_half: s must be positive");
    return std::sqrt(pi / s) * std::erfc(std::sqrt(s));
}

double beta_half_c(double s) {
    if (s > 0) return std::sqrt(pi / s) * std::erf(std::sqrt(s));
    // 2 int_0^1 e^{|s| u^2} du = 2 sum |s|^k / (k! (2k+1)), all terms positive
    double a = -s, term = 1.0, sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
        term *= a / k;
        double add = term / (2 * k + 1);
        sum += add;
        if (add < 1e-17 * sum && k > a) break;
    }
    return 2.0 * sum;
}

double arcsin_s(double a, double s) {
    if (!(a >= 1.0)) throw std::domain_error("arcsin_s: a must be >= 1");
    if (!(s > -1.0)) throw std::domain_error("arcsin_s: s must be > -1");
    // t = sin(theta)
    // integrand (cos^2/(a - 1 + cos^2))^{s + 1/2}, which is 1 for a = 1
    const double am1 = a - 1.0;
    auto f = [=](double th) {
        double c2 = std::cos(th) * std::cos(th);
        double den = am1 + c2;
        return den > 0 ? std::pow(c2 / den, s + 0.5) : 1.0;
    };
    quad::Options opt{1e-15, 1e-14, 4000};
    return quad::integrate_or_throw(f, 0.0, pi / 2, opt, "arcsin_s").value;
}

double bessel_k(double s, double x) {
    if (!(s >= 0 && s <= 1.5)) throw std::domain_error("bessel_k: order outside [0, 3/2]");
    if (!(x > 0)) throw std::domain_error("bessel_k: argument must be positive");
    // K_s(x) = e^{-x} int_0^inf e^{-x (cosh t - 1)} cosh(s t) dt
    double tmax = std::acosh(1.0 + 48.0 / x);
    auto f = [=](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(s * t); };
    quad::Options opt{0.0, 1e-15, 2000};
    auto r = quad::integrate(f, 0.0, tmax, opt);
    if (r.error > 1e-12 * std::abs(r.value)) throw quad::NonConvergence("bessel_k", r.error);
    return std::exp(-x) * r.value;
}

double bernoulli_poly(int m, double x) {
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) {
        double bj;
        if (j == 0) bj = 1.0;
        else if (j == 1) bj = -0.5;
        else if (j % 2 == 1) continue;
        else bj = boost::math::bernoulli_b2n<double>(j / 2);
        sum += boost::math::binomial_coefficient<double>(m, j) * bj * std::pow(x, m - j);
    }
    return sum;
}

namespace {

// sum_{n>=1} cos(2 pi n x)/n^{2p}, x in [0,1]
double cos_zeta(int p, double x) {
    double sign = (p % 2 == 1) ? 1.0 : -1.0;
    return sign * std::pow(2 * pi, 2 * p) * bernoulli_poly(2 * p, x) / (2.0 * std::tgamma(2.0 * p + 1));
}

// sum_{n>=1} sin(2 pi n x)/n^{2p-1}, x in (0,1)
double sin_zeta(int p, double x) {
    double sign = (p % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(2 * pi, 2 * p - 1) * bernoulli_poly(2 * p - 1, x) / (2.0 * std::tgamma(2.0 * p));
}

enum class Weight { Cos, NSin };

// sum_{n>=1} w_n g(n) where g(n) ~ sum_k alpha[k] (2 pi n y)^{-2-2k}.
// Small n exactly; large n as (exact - asymptotic) plus Bernoulli closed forms.
double accelerated_sum(Weight kind, double x, double y, const std::function<double(int)>& g,
                       const std::vector<double>& alpha) {
    x -= std::floor(x);
    const int K = static_cast<int>(alpha.size());
    auto weight = [&](int n) {
        return kind == Weight::Cos ? std::cos(2 * pi * n * x) : n * std::sin(2 * pi * n * x);
    };
    auto asym = [&](int n) {
        double c = 2 * pi * n * y, s = 0.0, c2 = 1.0 / (c * c), pw = c2;
        for (int k = 0; k < K; ++k, pw *= c2) s += alpha[k] * pw;
        return s;
    };
    const double cmin = 15.0;
    int n0 = std::max(1, static_cast<int>(std::ceil(cmin / (2 * pi * y))));
    double sum = 0.0;
    for (int n = 1; n < n0; ++n) sum += weight(n) * g(n);
    for (int k = 0; k < K; ++k) {
        int p = k + 1;
        double closed = (kind == Weight::Cos) ? cos_zeta(p, x) : sin_zeta(p, x);
        for (int n = 1; n < n0; ++n) closed -= weight(n) * std::pow(double(n), -2.0 * p);
        sum += alpha[k] * std::pow(2 * pi * y, -2.0 * p) * closed;
    }
    const double last = std::abs(alpha.back());
    for (int n = n0; n < 200000; ++n) {
        double c = 2 * pi * n * y;
        double bound = last * std::pow(c, -2.0 - 2.0 * K) * n;
        if (bound < 1e-19) break;
        sum += weight(n) * (g(n) - asym(n));
    }
    return sum;
}

// int_0^{pi/2} sin^{s+1}(phi) K_s(c sin phi) d phi, and the companion with K_1 for the y-derivative
double bessel_arc_integral(double s, double c) {
    auto f = [=](double ph) {
        double sp = std::sin(ph);
        if (sp <= 0) return 0.0;
        return std::pow(sp, s + 1) * bessel_k(s, c * sp);
    };
    quad::Options opt{0.0, 1e-15, 4000};
    double brk[] = {0.0, std::min(1.0 / c, pi / 2), std::min(8.0 / c, pi / 2), std::min(40.0 / c, pi / 2), pi / 2};
    double total = 0.0;
    for (int i = 0; i < 4; ++i)
        if (brk[i + 1] > brk[i]) total += quad::integrate(f, brk[i], brk[i + 1], opt).value;
    return total;
}

double bessel_arc_integral_k1(double c) {
    auto f = [=](double ph) {
        double sp = std::sin(ph);
        if (sp <= 0) return 0.0;
        return sp * sp * bessel_k(1.0, c * sp);
    };
    quad::Options opt{0.0, 1e-15, 4000};
    double brk[] = {0.0, std::min(1.0 / c, pi / 2), std::min(8.0 / c, pi / 2), std::min(40.0 / c, pi / 2), pi / 2};
    double total = 0.0;
    for (int i = 0; i < 4; ++i)
        if (brk[i + 1] > brk[i]) total += quad::integrate(f, brk[i], brk[i + 1], opt).value;
    return total;
}

constexpr int kAsymTerms = 5;

}  // namespace

double arcsin_sum_constant(double s, double y) { return y * std::sqrt(pi) * std::tgamma(s) / std::tgamma(s + 0.5); }

double arcsin_sum_oscillatory(double s, cplx z) {
    double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::domain_error("arcsin_sum_oscillatory: z must lie in the upper half plane");
    if (!(s >= 0 && s <= 1.5)) throw std::domain_error("arcsin_sum_oscillatory: s outside [0, 3/2]");
    std::vector<double> alpha(kAsymTerms);
    for (int k = 0; k < kAsymTerms; ++k) alpha[k] = std::tgamma(2.0 * k + 1) * std::tgamma(s + k + 1) / std::tgamma(k + 1.0);
    auto g = [=](int n) {
        double c = 2 * pi * n * y;
        return std::pow(pi * n * y, s) * bessel_arc_integral(s, c);
    };
    return 4 * y * std::sqrt(pi) / std::tgamma(s + 0.5) * accelerated_sum(Weight::Cos, x, y, g, alpha);
}

double script_F(cplx z) { return arcsin_sum_oscillatory(0.0, z); }

cplx script_F_prime(cplx z) {
    double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::domain_error("script_F_prime: z must lie in the upper half plane");
    double frac = x - std::floor(x);
    if (frac < 1e-9 || frac > 1 - 1e-9) throw std::domain_error("script_F_prime: z lies on a line x in Z");
    std::vector<double> a_val(kAsymTerms), a_dy(kAsymTerms);
    for (int k = 0; k < kAsymTerms; ++k) {
        a_val[k] = std::tgamma(2.0 * k + 1);
        a_dy[k] = -(2.0 * k + 1) * a_val[k];
    }
    auto g_val = [=](int n) { return bessel_arc_integral(0.0, 2 * pi * n * y); };
    auto g_dy = [=](int n) {
        double c = 2 * pi * n * y;
        return bessel_arc_integral(0.0, c) - c * bessel_arc_integral_k1(c);
    };
    double fx = -8 * pi * y * accelerated_sum(Weight::NSin, x, y, g_val, a_val);
    double fy = 4 * accelerated_sum(Weight::Cos, x, y, g_dy, a_dy);
    return 0.5 * cplx(fx, -fy);
}

double dirichlet_L1(long long delta) {
    if (!arith::is_fundamental(delta) || delta == 1) throw std::domain_error("dirichlet_L1: Delta must be a fundamental discriminant != 1");
    double sum = 0.0;
    long long n = delta > 0 ? delta : -delta;
    if (delta > 0) {
        for (long long b = 1; b < n; ++b) sum += arith::kronecker(delta, b) * std::log(std::sin(pi * b / n));
        return -sum / std::sqrt(double(n));
    }
    for (long long b = 1; b < n; ++b) sum += arith::kronecker(delta, b) * double(b);
    return -pi * sum / std::pow(double(n), 1.5);
}

}  // namespace modlift::specfun
