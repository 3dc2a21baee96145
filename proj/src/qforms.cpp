#include "modlift/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace modlift::qforms {

using arith::gcd;
using arith::isqrt;

Int QuadForm::content() const { return gcd(gcd(std::abs(a), std::abs(b)), std::abs(c)); }

QuadForm QuadForm::primitive_part() const {
    Int g = content();
    if (g == 0) throw std::invalid_argument("zero form");
    return {a / g, b / g, c / g};
}

std::ostream& operator<<(std::ostream& os, const QuadForm& f) {
    return os << '[' << f.a << ',' << f.b << ',' << f.c << ']';
}

QuadForm compose(const QuadForm& f, const Mat2& m) {
    return {f.a * m.p * m.p + f.b * m.p * m.r + f.c * m.r * m.r,
            2 * f.a * m.p * m.q + f.b * (m.p * m.s + m.q * m.r) + 2 * f.c * m.r * m.s,
            f.a * m.q * m.q + f.b * m.q * m.s + f.c * m.s * m.s};
}

bool is_reduced_definite(const QuadForm& f) {
    if (!(std::abs(f.b) <= f.a && f.a <= f.c)) return false;
    if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

Reduction reduce_definite(const QuadForm& f0) {
    if (f0.disc() >= 0 || f0.a <= 0) throw std::invalid_argument("reduce_definite: form is not positive definite");
    QuadForm f = f0;
    Mat2 m;
    auto apply = [&](const Mat2& g) {
        f = compose(f, g);
        m = m * g;
    };
    for (;;) {
        // bring b into (-a, a]
        Int num = f.a - f.b, den = 2 * f.a;
        Int k = num / den - ((num % den != 0 && num < 0) ? 1 : 0);
        if (k != 0) apply(Mat2::T(k));
        if (f.a > f.c) {
            apply(Mat2::S());
            continue;
        }
        if (f.a == f.c && f.b < 0) apply(Mat2::S());
        break;
    }
    return {f, m};
}

bool is_reduced_indefinite(const QuadForm& f) {
    Int d = f.disc();
    if (d <= 0) return false;
    double sd = std::sqrt(double(d));
    double a2 = 2.0 * std::abs(double(f.a));
    return f.b > 0 && f.b < sd && sd - f.b < a2 && a2 < sd + f.b;
}

Mat2 rho_step(const QuadForm& f) {
    Int d = f.disc();
    Int s = isqrt(d);
    Int m = 2 * std::abs(f.c);
    // b' = -b mod 2|c|, sqrt D - 2|c| < b' < sqrt D
    Int lo = s - m + 1;  // s < sqrt d, s + 1 > sqrt d, so b' in [s - m + 1, s]
    Int r = ((-f.b - lo) % m + m) % m;
    Int bp = lo + r;
    Int t = (bp + f.b) / (2 * f.c);
    return {0, -1, 1, t};
}

QuadForm rho(const QuadForm& f) { return compose(f, rho_step(f)); }

Reduction reduce_indefinite(const QuadForm& f0) {
    Int d = f0.disc();
    if (d <= 0 || arith::is_square(d)) throw std::invalid_argument("reduce_indefinite: needs positive nonsquare discriminant");
    double sd = std::sqrt(double(d));
    QuadForm f = f0;
    Mat2 m;
    for (int iter = 0; !is_reduced_indefinite(f); ++iter) {
        if (iter > 100000) throw std::runtime_error("reduce_indefinite: no progress");
        Int mod = 2 * std::abs(f.c);
        Int bp;
        if (double(std::abs(f.c)) > sd) {
            // b' in (-|c|, |c|]
            Int lo = -std::abs(f.c) + 1;
            bp = lo + ((-f.b - lo) % mod + mod) % mod;
        } else {
            Int lo = isqrt(d) - mod + 1;
            bp = lo + ((-f.b - lo) % mod + mod) % mod;
        }
        Mat2 g{0, -1, 1, (bp + f.b) / (2 * f.c)};
        f = compose(f, g);
        m = m * g;
    }
    return {f, m};
}

std::vector<QuadForm> reduce_cycle(const QuadForm& start) {
    std::vector<QuadForm> cyc{start};
    for (QuadForm g = rho(start); g != start; g = rho(g)) {
        cyc.push_back(g);
        if (cyc.size() > 1000000) throw std::runtime_error("reduce_cycle: cycle too long");
    }
    return cyc;
}

std::vector<QuadForm> class_representatives(Int disc) {
    arith::Discriminant checked(disc);
    std::vector<QuadForm> out;
    if (disc < 0) {
        Int amax = isqrt(-disc / 3);
        for (Int a = 1; a <= amax; ++a) {
            for (Int b = -a + 1; b <= a; ++b) {
                Int num = b * b - disc;
                if (num % (4 * a) != 0) continue;
                QuadForm f{a, b, num / (4 * a)};
                if (is_reduced_definite(f)) out.push_back(f);
            }
        }
        return out;
    }
    double sd = std::sqrt(double(disc));
    std::set<QuadForm> seen;
    for (Int b = 1; b < sd; ++b) {
        Int num = b * b - disc;  // 4ac
        if (num % 4 != 0) continue;
        Int ac = num / 4;
        for (Int a : arith::divisors(ac)) {
            for (Int sa : {a, -a}) {
                QuadForm f{sa, b, ac / sa};
                if (!is_reduced_indefinite(f) || seen.count(f)) continue;
                auto cyc = reduce_cycle(f);
                seen.insert(cyc.begin(), cyc.end());
                auto pos = std::find_if(cyc.begin(), cyc.end(), [](const QuadForm& g) { return g.a > 0; });
                out.push_back(*pos);
            }
        }
    }
    return out;
}

int stabilizer_order(const QuadForm& f) {
    QuadForm r = reduce_definite(f).form;
    if (r.a == r.b && r.b == r.c) return 3;
    if (r.b == 0 && r.a == r.c) return 2;
    return 1;
}

HeegnerPoint heegner_point(const QuadForm& f) {
    Int d = f.disc();
    if (d >= 0 || f.a <= 0) throw std::invalid_argument("heegner_point: form is not positive definite");
    cplx z(-double(f.b) / (2.0 * f.a), std::sqrt(double(-d)) / (2.0 * f.a));
    return {f, z, stabilizer_order(f)};
}

int genus_character(Int delta, const QuadForm& f) {
    Int d = f.disc();
    if (delta == 0 || d % delta != 0) throw std::invalid_argument("genus_character: Delta does not divide disc");
    Int dd = d / delta;
    if (((dd % 4) + 4) % 4 > 1) throw std::invalid_argument("genus_character: disc/Delta is not 0,1 mod 4");
    if (gcd(f.content(), std::abs(delta)) > 1) return 0;
    // Q represents an integer coprime to Delta; search small coprime pairs
    for (Int h = 1; h < 200; ++h) {
        for (Int x = -h; x <= h; ++x) {
            for (Int y : {h - std::abs(x), -(h - std::abs(x))}) {
                if (gcd(std::abs(x), std::abs(y)) != 1) continue;
                Int n = f.a * x * x + f.b * x * y + f.c * y * y;
                if (n != 0 && gcd(std::abs(n), std::abs(delta)) == 1) return arith::kronecker(delta, n);
                if (y == 0) break;
            }
        }
    }
    throw std::runtime_error("genus_character: no represented integer coprime to Delta found");
}

GeodesicClass geodesic_data(const QuadForm& f) {
    Int d = f.disc();
    if (d <= 0 || arith::is_square(d)) throw std::invalid_argument("geodesic_data: needs positive nonsquare discriminant");
    if (f.a == 0) throw std::invalid_argument("geodesic_data: a = 0 only occurs for square discriminants");
    double sd = std::sqrt(double(d));
    double r1 = (-f.b + sd) / (2.0 * f.a), r2 = (-f.b - sd) / (2.0 * f.a);
    QuadForm pp = f.primitive_part();
    auto pell = arith::pell_minimal(pp.disc());
    if (pell.u > 1000000000 || pell.t > 4000000000LL)
        throw std::overflow_error("geodesic_data: automorph entries exceed 64-bit range");
    Int t = static_cast<Int>(pell.t), u = static_cast<Int>(pell.u);
    Mat2 m{(t - pp.b * u) / 2, -pp.c * u, pp.a * u, (t + pp.b * u) / 2};
    return {f, std::max(r1, r2), std::min(r1, r2), m, pell.log_epsilon};
}

double p_value(const QuadForm& f, cplx z) {
    double x = z.real(), y = z.imag();
    return -(f.a * (x * x + y * y) + f.b * x + f.c) / y;
}

bool indicator(const QuadForm& f, cplx z) {
    double x = z.real(), y = z.imag();
    double v = f.a * (x * x + y * y) + f.b * x + f.c;
    double scale = std::abs(double(f.a)) * (x * x + y * y) + std::abs(double(f.b) * x) + std::abs(double(f.c));
    return v < -kBoundaryTol * std::max(1.0, scale);
}

std::vector<QuadForm> forms_containing(Int disc, cplx z) {
    if (disc <= 0) throw std::invalid_argument("forms_containing: needs positive discriminant");
    double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::invalid_argument("forms_containing: z must lie in the upper half plane");
    double sd = std::sqrt(double(disc));
    std::vector<QuadForm> out;
    // apex height sqrt(D)/(2a) must exceed y
    for (Int a = 1; double(a) < sd / (2.0 * y); ++a) {
        // (x + b/2a)^2 + y^2 < D/4a^2  =>  |2 a x + b| < sqrt(D - 4 a^2 y^2)
        double w = std::sqrt(std::max(0.0, double(disc) - 4.0 * a * a * y * y));
        Int blo = static_cast<Int>(std::floor(-2.0 * a * x - w)) - 1;
        Int bhi = static_cast<Int>(std::ceil(-2.0 * a * x + w)) + 1;
        for (Int b = blo; b <= bhi; ++b) {
            Int num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            QuadForm f{a, b, num / (4 * a)};
            if (indicator(f, z)) out.push_back(f);
        }
    }
    return out;
}

std::vector<QuadForm> forms_S_period(Int disc) {
    if (disc <= 0 || arith::is_square(disc)) throw std::invalid_argument("forms_S_period: needs positive nonsquare discriminant");
    std::vector<QuadForm> out;
    for (Int b = -isqrt(disc); b * b < disc; ++b) {
        Int num = disc - b * b;  // 4 a |c|
        if (num % 4 != 0) continue;
        for (Int a : arith::divisors(num / 4)) out.push_back({a, b, -(num / 4) / a});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuadForm> forms_M_period(Int disc, const Mat2& m) {
    if (disc <= 0 || arith::is_square(disc)) throw std::invalid_argument("forms_M_period: needs positive nonsquare discriminant");
    if (m.det() != 1) throw std::invalid_argument("forms_M_period: matrix not in SL2(Z)");
    std::vector<QuadForm> out;
    if (m.r == 0) return out;
    // a_{X o M^{-1}} = X(s, -r)
    const Int u = m.s, v = -m.r;
    double x0 = double(u) / double(v);
    double sd = std::sqrt(double(disc));
    Int amax = disc * m.r * m.r / 4;
    for (Int a = 1; a <= amax; ++a) {
        Int blo = static_cast<Int>(std::floor(-2.0 * a * x0 - sd)) - 1;
        Int bhi = static_cast<Int>(std::ceil(-2.0 * a * x0 + sd)) + 1;
        for (Int b = blo; b <= bhi; ++b) {
            Int num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            QuadForm f{a, b, num / (4 * a)};
            if (f.a * u * u + f.b * u * v + f.c * v * v < 0) out.push_back(f);
        }
    }
    return out;
}

}  // namespace modlift::qforms
