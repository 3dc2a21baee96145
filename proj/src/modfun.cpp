#include "modlift/modfun.hpp"

#include "modlift/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace modlift::modfun {

using std::numbers::pi;
using Series = std::vector<BigInt>;  // power series, index = exponent

namespace {

Series mul(const Series& a, const Series& b, std::size_t len) {
    Series out(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Series inverse_unit(const Series& a, std::size_t len) {  // a[0] == 1
    Series out(len, 0);
    out[0] = 1;
    for (std::size_t n = 1; n < len; ++n) {
        BigInt s = 0;
        for (std::size_t k = 1; k <= n && k < a.size(); ++k) s += a[k] * out[n - k];
        out[n] = -s;
    }
    return out;
}

std::vector<double> to_double(const std::vector<BigInt>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.convert_to<double>());
    return out;
}

}  // namespace

double QSeries::tail_bound(double y) const {
    // |c_n| <= sigma(m) exp(4 pi sqrt(m n)) for J_m
    double sig = 0;
    for (auto d : arith::divisors(std::max(m, 1))) sig += double(d);
    double mm = std::max(m, 1);
    double total = 0;
    for (int n = order + 1; n < order + 100000; ++n) {
        double t = sig * std::exp(4 * pi * std::sqrt(mm * n) - 2 * pi * y * n);
        total += t;
        if (t < 1e-30 * std::max(total, 1e-300) || (t < 1e-300 && n > order + 10)) break;
    }
    return total;
}

cplx QSeries::eval(cplx z, int from) const {
    cplx q = std::exp(cplx(0, 2 * pi) * z);
    cplx sum = 0;
    int start = std::max(from, -m);
    cplx qn = std::pow(q, start);
    for (int n = start; n <= order; ++n, qn *= q) {
        double c = coeffs[n + m];
        if (c == 0) continue;
        cplx term = c * qn;
        sum += term;
        if (n > 3 && std::abs(term) < 1e-22 * std::abs(sum)) break;
    }
    return sum;
}

QSeries j_series(int order) {
    if (order < 1) throw std::invalid_argument("j_series: order must be positive");
    const std::size_t len = order + 2;  // q j = sum_{k >= 0} g_k q^k, need g_0 .. g_{order+1}
    Series e4(len, 0);
    e4[0] = 1;
    for (std::size_t n = 1; n < len; ++n) {
        BigInt s3 = 0;
        for (auto d : arith::divisors(static_cast<arith::Int>(n))) s3 += BigInt(d) * d * d;
        e4[n] = 240 * s3;
    }
    Series e4cubed = mul(mul(e4, e4, len), e4, len);
    Series eta24(len, 0);  // prod (1 - q^n)^24
    eta24[0] = 1;
    for (std::size_t n = 1; n < len; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (std::size_t k = len - 1; k >= n; --k) eta24[k] -= eta24[k - n];
        }
    }
    Series g = mul(e4cubed, inverse_unit(eta24, len), len);
    QSeries out;
    out.m = 1;
    out.order = order;
    out.exact.resize(order + 2);
    for (int n = -1; n <= order; ++n) out.exact[n + 1] = g[n + 1];
    out.exact[1] -= 744;
    out.coeffs = to_double(out.exact);
    return out;
}

std::shared_ptr<const QSeries> faber(int m, int order) {
    if (m < 0) throw std::invalid_argument("faber: m must be >= 0");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const QSeries>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({m, order}); it != cache.end()) return it->second;

    // F_1 = J, F_{k+1} = J F_k - sum_{i=1}^{k-1} c_i F_{k-i} - (k+1) c_k, F_0 = 1.
    // F[k][n + k] = coeff of q^n, valid for n <= valid[k].
    const int ord = order + m;
    QSeries j = j_series(ord + m + 1);
    auto c = [&](int n) -> BigInt { return (n < -1 || n > j.order) ? BigInt(0) : j.exact[n + 1]; };
    std::vector<std::vector<BigInt>> F(m + 1);
    std::vector<int> valid(m + 1, ord);
    F[0].assign(ord + 1, 0);
    F[0][0] = 1;
    if (m >= 1) {
        F[1].assign(ord + 2, 0);
        for (int n = -1; n <= ord; ++n) F[1][n + 1] = c(n);
    }
    for (int k = 1; k < m; ++k) {
        const int kk = k + 1;
        valid[kk] = valid[k] - 1;
        std::vector<BigInt> next(valid[kk] + kk + 1, 0);
        for (int n = -kk; n <= valid[kk]; ++n) {
            BigInt s = 0;
            for (int i = -1; n - i >= -k; ++i) {
                int r = n - i;
                if (r > valid[k]) continue;
                s += c(i) * F[k][r + k];
            }
            for (int i = 1; i <= k - 1; ++i) {
                int deg = k - i;
                if (n >= -deg) s -= c(i) * F[deg][n + deg];
            }
            if (n == 0) s -= BigInt(k + 1) * c(k);
            next[n + kk] = s;
        }
        F[kk] = std::move(next);
    }
    auto out = std::make_shared<QSeries>();
    out->m = m;
    out->order = order;
    out->exact = F[m];
    out->exact.resize(order + m + 1);
    out->coeffs = to_double(out->exact);
    cache[{m, order}] = out;
    return out;
}

ModularPoint reduce_point(cplx z) {
    if (!(z.imag() > 0)) throw std::domain_error("reduce_point: z must lie in the upper half plane");
    qforms::Mat2 g;
    for (int iter = 0; iter < 100000; ++iter) {
        double k = std::floor(z.real() + 0.5);
        if (k != 0) {
            z -= k;
            g = qforms::Mat2::T(-static_cast<arith::Int>(k)) * g;
        }
        if (std::norm(z) < 1.0 - 1e-15) {
            z = -1.0 / z;
            g = qforms::Mat2::S() * g;
            continue;
        }
        return {z, g};
    }
    throw std::runtime_error("reduce_point: too many steps");
}

Value eval_Jm(int m, cplx z, double tol, int order) {
    auto series = faber(m, order);
    ModularPoint p = reduce_point(z);
    double tail = series->tail_bound(p.z.imag());
    if (tail > tol) {
        int need = order;
        while (need < 100000) {
            need *= 2;
            QSeries probe;
            probe.m = m;
            probe.order = need;
            if (probe.tail_bound(std::sqrt(3.0) / 2) <= tol) break;
        }
        throw TruncationError("eval_Jm: tail bound " + std::to_string(tail) + " exceeds tolerance at order " +
                                  std::to_string(order) + "; need order " + std::to_string(need),
                              need);
    }
    cplx v = series->eval(p.z);
    double round = 1e-15 * std::exp(2 * pi * m * p.z.imag());
    return {v, tail + round};
}

Value cycle_integral(const std::function<cplx(cplx)>& F, const qforms::QuadForm& q, double tol) {
    auto g = qforms::geodesic_data(q);
    double c0 = g.center(), r = g.radius();
    cplx z0(c0, r);
    cplx z1 = g.automorph.inverse().act(z0);
    double th0 = pi / 2, th1 = std::arg(z1 - c0);
    auto integrand = [&](double th) {
        cplx e = std::polar(1.0, th);
        cplx z = c0 + r * e;
        return F(z) / q.at(z) * cplx(0, r) * e;
    };
    quad::Options opt{tol * 0.5, 1e-14, 4000};
    // panels split evenly in angle keep the endpoint clustering bounded
    const int panels = 8;
    cplx total = 0;
    double err = 0;
    for (int k = 0; k < panels; ++k) {
        double a = th0 + (th1 - th0) * k / panels, b = th0 + (th1 - th0) * (k + 1) / panels;
        auto res = quad::integrate(integrand, a, b, quad::Options{opt.abs_tol / panels, opt.rel_tol, opt.max_intervals});
        if (!res.converged) throw quad::NonConvergence("cycle_integral", res.error);
        total += res.value;
        err += res.error;
    }
    return {total, err};
}

}  // namespace modlift::modfun
