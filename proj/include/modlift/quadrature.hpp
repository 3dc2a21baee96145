#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for real or complex integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace modlift::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 2000;
};

template <class T>
struct Result {
    T value{};
    double error = 0;
    int evaluations = 0;
    bool converged = false;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error " + format(achieved) + ")"), achieved_error(achieved) {}
    double achieved_error;

private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
};

namespace detail {
inline constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F, class T>
Panel<T> gk15(F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T k = fc * wgk[7];
    T g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        T f1 = f(c - dx), f2 = f(c + dx);
        k += (f1 + f2) * wgk[j];
        if (j % 2 == 1) g += (f1 + f2) * wg[j / 2];
    }
    return {a, b, k * h, magnitude((k - g) * h)};
}
}  // namespace detail

template <class F>
auto integrate(F f, double a, double b, const Options& opt = {}) {
    using T = decltype(f(a));
    using detail::Panel;
    Result<T> res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    if (a > b) {
        auto r = integrate(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Panel<T>> heap;
    auto first = detail::gk15<F, T>(f, a, b);
    heap.push(first);
    T total = first.value;
    double err = first.error;
    res.evaluations = 15;
    int count = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) {
        if (count >= opt.max_intervals) {
            res.value = total;
            res.error = err;
            return res;
        }
        Panel<T> worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted in floating point
            res.value = total;
            res.error = err;
            return res;
        }
        auto left = detail::gk15<F, T>(f, worst.a, mid);
        auto right = detail::gk15<F, T>(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
        if (count % 64 == 0) {  // refresh the running sums against drift
            total = T{};
            err = 0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    res.value = total;
    res.error = err;
    res.converged = true;
    return res;
}

template <class F>
auto integrate_or_throw(F f, double a, double b, const Options& opt, const char* what) {
    auto r = integrate(f, a, b, opt);
    if (!r.converged) throw NonConvergence(std::string(what) + ": quadrature did not converge", r.error);
    return r;
}

// Integral over [a, inf) via x = a + t/(1-t).
template <class F>
auto integrate_to_infinity(F f, double a, const Options& opt = {}) {
    auto g = [&](double t) {
        double one_minus = 1.0 - t;
        double x = a + t / one_minus;
        using T = decltype(f(a));
        if (!std::isfinite(x)) return T{};
        return f(x) * (1.0 / (one_minus * one_minus));
    };
    return integrate(g, 0.0, 1.0, opt);
}

}  // namespace modlift::quad
