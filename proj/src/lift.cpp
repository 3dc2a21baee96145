#include "modlift/lift.hpp"

#include "modlift/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace modlift::lift {

using std::numbers::pi;
using traces::Kind;

namespace {

cplx e(cplx w) { return std::exp(cplx(0, 2 * pi) * w); }

// Series driver: adds terms m = 1, 2, ... until three consecutive terms are
// below 1e-3 of the running sum and the geometric tail estimate is below tol.
template <class Term>
void sum_series(double y, const Options& opt, Term term, LiftValue& out) {
    const double ratio = std::exp(-2 * pi * y);
    int quiet = 0;
    cplx sum = 0;
    double tail = 0;
    for (int m = 1; m <= opt.trunc; ++m) {
        cplx t = term(m);
        sum += t;
        out.terms = m;
        double mag = std::abs(t);
        // coefficients grow at most linearly in m here; allow a factor 2
        tail = mag * 2 * ratio / (1 - 2 * ratio < 0.1 ? 0.1 : 1 - 2 * ratio);
        quiet = (mag <= 1e-3 * std::abs(sum) || mag <= opt.tol) ? quiet + 1 : 0;
        if (quiet >= 3 && tail <= opt.tol) {
            out.smooth += sum;
            out.tail = tail;
            return;
        }
    }
    throw std::runtime_error("series truncation: trunc = " + std::to_string(opt.trunc) +
                             " reached before the tail criterion was met (tail estimate " + std::to_string(tail) + ")");
}

}  // namespace

void require_lift_delta(Int delta) {
    if (delta <= 1 || !arith::is_fundamental(delta))
        throw std::invalid_argument("Delta must be a fundamental discriminant > 1, got " + std::to_string(delta));
}

HarmonicCoefficients HarmonicCoefficients::h(traces::TraceTable& table) {
    HarmonicCoefficients f;
    f.c_plus = [&table](Int d) -> double {
        if (d == 0) return 0.0;
        if (d < 0 || arith::is_square(d) || ((d % 4) + 4) % 4 > 1) return 0.0;
        return table.get(Kind::Cycle, 1, d).value / (2 * pi);
    };
    f.c_minus = {{0, -8.0}, {1, 2.0}};
    return f;
}

LiftValue eval_phi(const HarmonicCoefficients& f, Int delta, cplx z, const Options& opt) {
    require_lift_delta(delta);
    const double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::domain_error("eval_phi: z must lie in the upper half plane");
    const double sd = std::sqrt(double(delta));
    LiftValue out;
    sum_series(y, opt, [&](int m) {
        double cp = f.c_plus(delta * Int(m) * m);
        if (cp == 0) return cplx(0);
        double s = 0;
        for (Int b = 1; b < delta; ++b) {
            int chi = arith::kronecker(delta, b);
            if (chi) s += chi * std::log(std::abs(1.0 - e(double(m) * z + double(b) / double(delta))));
        }
        return cplx(-4 * cp * s);
    }, out);
    const double L = specfun::dirichlet_L1(delta);
    auto cm = [&](Int d) { auto it = f.c_minus.find(d); return it == f.c_minus.end() ? 0.0 : it->second; };
    out.smooth += sd * L * (2 * f.c_plus(0) + y * cm(0));
    for (const auto& [d, c] : f.c_minus) {
        if (d <= 0 || c == 0) continue;
        for (const auto& q : qforms::forms_containing(delta * d, z)) {
            int chi = qforms::genus_character(delta, q);
            if (!chi) continue;
            double P = q.a * (x * x + y * y) + q.b * x + q.c;
            out.singular += -4 * c / std::sqrt(double(d)) * chi * (std::atan(y * std::sqrt(double(delta * d)) / P) + pi / 2);
            ++out.singular_forms;
        }
        // non-holomorphic coefficients at Delta m^2 need the script-F line
        for (Int m = 1; delta * m * m <= d; ++m) {
            if (delta * m * m != d) continue;
            cplx s = 0;
            for (Int b = 1; b < delta; ++b) {
                int chi = arith::kronecker(delta, b);
                if (chi) s += double(chi) * specfun::script_F(double(m) * z + double(b) / double(delta));
            }
            out.smooth += 2 * c / (sd * double(m)) * s;
        }
    }
    out.value = out.smooth + out.singular;
    return out;
}

LiftValue eval_phi_prime(const HarmonicCoefficients& f, Int delta, cplx z, const Options& opt) {
    require_lift_delta(delta);
    const double y = z.imag();
    if (!(y > 0)) throw std::domain_error("eval_phi_prime: z must lie in the upper half plane");
    const double sd = std::sqrt(double(delta));
    LiftValue out;
    sum_series(y, opt, [&](int m) {
        double cp = f.c_plus(delta * Int(m) * m);
        if (cp == 0) return cplx(0);
        cplx s = 0;
        for (Int b = 1; b < delta; ++b) {
            int chi = arith::kronecker(delta, b);
            if (!chi) continue;
            cplx q = e(double(m) * z + double(b) / double(delta));
            s += double(chi) * q / (1.0 - q);
        }
        return cplx(0, 4 * pi * m * cp) * s;
    }, out);
    const double L = specfun::dirichlet_L1(delta);
    auto it0 = f.c_minus.find(0);
    double c0 = it0 == f.c_minus.end() ? 0.0 : it0->second;
    out.smooth += cplx(0, -0.5) * sd * L * c0;
    for (const auto& [d, c] : f.c_minus) {
        if (d <= 0 || c == 0) continue;
        for (const auto& q : qforms::forms_containing(delta * d, z)) {
            int chi = qforms::genus_character(delta, q);
            if (!chi) continue;
            out.singular += cplx(0, 2 * sd * c * chi) / q.at(z);
            ++out.singular_forms;
        }
        for (Int m = 1; delta * m * m <= d; ++m) {
            if (delta * m * m != d) continue;
            cplx s = 0;
            for (Int b = 1; b < delta; ++b) {
                int chi = arith::kronecker(delta, b);
                if (chi) s += double(chi) * specfun::script_F_prime(double(m) * z + double(b) / double(delta));
            }
            out.smooth += 2 * c / sd * s;
        }
    }
    out.value = out.smooth + out.singular;
    return out;
}

LiftValue eval_F(traces::TraceTable& table, Int delta, cplx z, const Options& opt) {
    require_lift_delta(delta);
    if (!(z.imag() > 0)) throw std::domain_error("eval_F: z must lie in the upper half plane");
    LiftValue out;
    out.smooth = traces::twisted_coefficient(table, delta, 0) / pi;
    sum_series(z.imag(), opt, [&](int m) { return traces::twisted_coefficient(table, delta, m) / pi * e(double(m) * z); }, out);
    out.value = out.smooth;
    return out;
}

cplx PeriodFunction::operator()(cplx z) const {
    cplx s = 0;
    for (const auto& q : forms) s += 1.0 / q.at(z);
    return scale * s;
}

PeriodFunction period_qS(Int delta) {
    require_lift_delta(delta);
    return {qforms::forms_S_period(delta), 2 / pi};
}

PeriodFunction period_q(Int delta, const qforms::Mat2& m) {
    require_lift_delta(delta);
    return {qforms::forms_M_period(delta, m), 2 / pi};
}

cplx cocycle_RS(Int delta, cplx z) {
    require_lift_delta(delta);
    const cplx i(0, 1);
    cplx s = 0;
    for (const auto& q : qforms::forms_S_period(delta)) {
        auto g = qforms::geodesic_data(q);
        s += std::log((z - g.w_plus) / (i - g.w_plus)) - std::log((z - g.w_minus) / (i - g.w_minus));
    }
    return s / std::sqrt(double(delta));
}

ProductValue eval_product(traces::TraceTable& table, Int delta, cplx z, const Options& opt) {
    require_lift_delta(delta);
    if (!(z.imag() > 0)) throw std::domain_error("eval_product: z must lie in the upper half plane");
    const double sd = std::sqrt(double(delta));
    const double tr1 = traces::twisted_coefficient(table, delta, 0);
    LiftValue acc;
    sum_series(z.imag(), opt, [&](int m) {
        double t = table.get(Kind::Cycle, 1, delta * Int(m) * m).value;
        cplx s = 0;
        for (Int b = 1; b < delta; ++b) {
            int chi = arith::kronecker(delta, b);
            if (chi) s += double(chi) * std::log(1.0 - e(double(m) * z + double(b) / double(delta)));
        }
        return t * s;
    }, acc);
    ProductValue out;
    out.log_value = cplx(0, -2 * pi) * sd * tr1 * z + acc.smooth;
    out.value = std::exp(out.log_value);
    out.terms = acc.terms;
    out.tail = acc.tail;
    return out;
}

Check verify_period_relation(traces::TraceTable& table, Int delta, cplx z, double tol) {
    cplx w = -1.0 / z;
    cplx lhs = eval_F(table, delta, w).value / (z * z) - eval_F(table, delta, z).value;
    cplx rhs = period_qS(delta)(z);
    return {"period", std::abs(lhs - rhs), tol};
}

Check verify_product_S(traces::TraceTable& table, Int delta, cplx z, double tol) {
    auto a = eval_product(table, delta, -1.0 / z);
    auto b = eval_product(table, delta, z);
    cplx factor = cplx(0, 2 * pi) * (-2.0 * std::sqrt(double(delta)) * cocycle_RS(delta, z));
    return {"product_S", std::abs(std::exp(a.log_value - b.log_value - factor) - 1.0), tol};
}

Check verify_product_T(traces::TraceTable& table, Int delta, cplx z, double tol) {
    auto a = eval_product(table, delta, z + 1.0);
    auto b = eval_product(table, delta, z);
    double tr1 = traces::twisted_coefficient(table, delta, 0);
    cplx expect = std::exp(cplx(0, -2 * pi) * std::sqrt(double(delta)) * tr1);
    return {"product_T", std::abs(a.value / b.value - expect) / std::abs(expect), tol};
}

Check verify_log_derivative(traces::TraceTable& table, Int delta, cplx z, double tol) {
    const double h = 1e-4;
    auto lp = [&](cplx w) { return eval_product(table, delta, w).log_value; };
    // fourth-order central difference in the x direction
    cplx d = (-lp(z + 2 * h) + 8.0 * lp(z + h) - 8.0 * lp(z - h) + lp(z - 2 * h)) / (12 * h);
    cplx expect = cplx(0, -2 * pi * pi) * std::sqrt(double(delta)) * eval_F(table, delta, z).value;
    return {"log_derivative", std::abs(d - expect) / std::abs(expect), tol};
}

}  // namespace modlift::lift
