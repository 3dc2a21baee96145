#pragma once

#include "modlift/qforms.hpp"
#include "modlift/traces.hpp"

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace modlift::lift {

using arith::Int;
using cplx = std::complex<double>;

// Fourier data of a weight 1/2 harmonic form in the scalar (Kohnen plus space)
// normalization: holomorphic coefficients c+(D), D >= 0, and finitely many
// non-holomorphic coefficients c-(D), D <= 1.
struct HarmonicCoefficients {
    std::function<double(Int)> c_plus;
    std::map<Int, double> c_minus;

    // h = -8 sqrt(v) + ... with c+(D) = tr_J(D)/(2 pi), c-(0) = -8, c-(1) = 2
    static HarmonicCoefficients h(traces::TraceTable& table);
};

struct Options {
    double tol = 1e-10;  // target for truncated series tails
    int trunc = 64;      // maximal Fourier index
};

struct LiftValue {
    cplx value;
    cplx smooth;
    cplx singular;
    int terms = 0;      // Fourier terms used
    double tail = 0;    // estimated truncation error
    int singular_forms = 0;
};

// The twisted theta lift of f at z; real valued.
LiftValue eval_phi(const HarmonicCoefficients& f, Int delta, cplx z, const Options& opt = {});
// Its z-derivative: holomorphic smooth part plus the rational singular part.
LiftValue eval_phi_prime(const HarmonicCoefficients& f, Int delta, cplx z, const Options& opt = {});

// F_Delta(z) = (1/pi) sum_{m >= 0} tr_{J_m}(Delta) e(m z)
LiftValue eval_F(traces::TraceTable& table, Int delta, cplx z, const Options& opt = {});

struct PeriodFunction {
    std::vector<qforms::QuadForm> forms;
    double scale = 1.0;
    cplx operator()(cplx z) const;  // scale * sum 1/Q(z, 1)
};
// F|S - F = (2/pi) sum_{c < 0 < a} 1/Q(z, 1)
PeriodFunction period_qS(Int delta);
// F|M - F for M in SL2(Z)
PeriodFunction period_q(Int delta, const qforms::Mat2& m);

// (1/sqrt Delta) sum_{c<0<a} [log((z-w)/(i-w)) - log((z-w')/(i-w'))]
cplx cocycle_RS(Int delta, cplx z);

struct ProductValue {
    cplx log_value;  // principal-branch sum of logarithms
    cplx value;
    int terms = 0;
    double tail = 0;
};
// e(-sqrt(Delta) tr_1 z) prod_m prod_b (1 - e(m z + b/Delta))^{(Delta/b) tr_J(Delta m^2)}
ProductValue eval_product(traces::TraceTable& table, Int delta, cplx z, const Options& opt = {});

struct Check {
    std::string name;
    double residual;
    double tol;
    bool ok() const { return residual <= tol; }
};
Check verify_period_relation(traces::TraceTable& table, Int delta, cplx z, double tol = 1e-6);
Check verify_product_S(traces::TraceTable& table, Int delta, cplx z, double tol = 1e-4);
Check verify_product_T(traces::TraceTable& table, Int delta, cplx z, double tol = 1e-10);
Check verify_log_derivative(traces::TraceTable& table, Int delta, cplx z, double tol = 1e-6);

void require_lift_delta(Int delta);  // Delta > 1 fundamental

}  // namespace modlift::lift
