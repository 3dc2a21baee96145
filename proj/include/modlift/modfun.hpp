#pragma once

#include "modlift/arith.hpp"
#include "modlift/qforms.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace modlift::modfun {

using cplx = std::complex<double>;
using arith::BigInt;

// Laurent q-series sum_{n >= -m} c_n q^n truncated after q^order.
struct QSeries {
    int m = 0;
    int order = 0;
    std::vector<BigInt> exact;  // n = -m .. order
    std::vector<double> coeffs;

    const BigInt& exact_coeff(int n) const { return exact.at(n + m); }
    double coeff(int n) const { return (n < -m || n > order) ? 0.0 : coeffs[n + m]; }
    // bound on sum_{n > order} |c_n| e^{-2 pi n y}
    double tail_bound(double y) const;
    // sum of the terms with n >= from
    cplx eval(cplx z, int from) const;
    cplx eval(cplx z) const { return eval(z, -m); }
};

class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required) : std::runtime_error(what), required_order(required) {}
    int required_order;
};

inline constexpr int kDefaultOrder = 64;

// J = j - 744 to order N.
QSeries j_series(int order = kDefaultOrder);
// J_m: the unique q^{-m} + O(q) polynomial in j. Newton-type recursion on J.
// Memoized per (m, order); thread safe.
std::shared_ptr<const QSeries> faber(int m, int order = kDefaultOrder);

struct ModularPoint {
    cplx z;           // reduced: |x| <= 1/2, |z| >= 1
    qforms::Mat2 gamma;  // gamma . input == z
};
ModularPoint reduce_point(cplx z);

struct Value {
    cplx value;
    double error;
};
// J_m(z) via the fundamental-domain representative; throws TruncationError if
// the tail bound at the configured order exceeds tol.
Value eval_Jm(int m, cplx z, double tol = 1e-10, int order = kDefaultOrder);

// int_{z0}^{M^{-1} z0} F(z) dz / Q(z, 1) along the geodesic of Q, z0 the apex,
// M the automorph. Angular parametrization.
Value cycle_integral(const std::function<cplx(cplx)>& F, const qforms::QuadForm& q, double tol = 1e-10);

// The same integral for F = J_m (m >= 0; m = 0 means F = 1), evaluated over one
// period of the reduction cycle of Q in hyperbolic arclength, with the q^{-m}
// part of each cusp excursion integrated by contour deformation. Oriented so
// the F = 1 value 2 log(eps)/sqrt(D) is positive.
Value faber_cycle_integral(int m, const qforms::QuadForm& q, double tol = 1e-10, int order = kDefaultOrder);

}  // namespace modlift::modfun
