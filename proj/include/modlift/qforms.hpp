#pragma once

#include "modlift/arith.hpp"

#include <array>
#include <complex>
#include <optional>
#include <ostream>
#include <vector>

namespace modlift::qforms {

using arith::Int;
using cplx = std::complex<double>;

// [a, b, c] <-> a x^2 + b x y + c y^2
struct QuadForm {
    Int a = 0, b = 0, c = 0;

    Int disc() const { return b * b - 4 * a * c; }
    Int content() const;
    QuadForm primitive_part() const;
    QuadForm operator-() const { return {-a, -b, -c}; }
    bool operator==(const QuadForm&) const = default;
    auto operator<=>(const QuadForm&) const = default;

    double value(double x, double y) const { return a * x * x + b * x * y + c * y * y; }
    cplx at(cplx z) const { return (double(a) * z + double(b)) * z + double(c); }  // Q(z, 1)
};

std::ostream& operator<<(std::ostream&, const QuadForm&);

// Integer 2x2 matrix [[p, q], [r, s]].
struct Mat2 {
    Int p = 1, q = 0, r = 0, s = 1;

    Int det() const { return p * s - q * r; }
    Mat2 operator*(const Mat2& o) const {
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
    }
    Mat2 inverse() const { return {s, -q, -r, p}; }  // det 1
    bool operator==(const Mat2&) const = default;
    cplx act(cplx z) const { return (double(p) * z + double(q)) / (double(r) * z + double(s)); }

    static Mat2 T(Int k = 1) { return {1, k, 0, 1}; }
    static Mat2 S() { return {0, -1, 1, 0}; }
};

// (Q o M)(x, y) = Q(p x + q y, r x + s y)
QuadForm compose(const QuadForm& f, const Mat2& m);

struct Reduction {
    QuadForm form;
    Mat2 transform;  // compose(input, transform) == form
};

// Positive definite forms: |b| <= a <= c, b >= 0 if |b| = a or a = c.
Reduction reduce_definite(const QuadForm& f);
bool is_reduced_definite(const QuadForm& f);

// Indefinite forms: 0 < b < sqrt D, sqrt D - b < 2|a| < sqrt D + b.
bool is_reduced_indefinite(const QuadForm& f);
QuadForm rho(const QuadForm& f);  // next form in the reduction cycle
Reduction reduce_indefinite(const QuadForm& f);  // to a reduced form in the same class
Mat2 rho_step(const QuadForm& f);  // rho(f) == compose(f, rho_step(f))
std::vector<QuadForm> reduce_cycle(const QuadForm& reduced);

// One representative of every SL2(Z) class of discriminant D, primitive or not.
// D < 0: the reduced positive definite forms. D > 0: one form with a > 0 per
// reduction cycle.
std::vector<QuadForm> class_representatives(Int disc);

int stabilizer_order(const QuadForm& f);  // 3, 2 or 1 in PSL2(Z), definite forms

struct HeegnerPoint {
    QuadForm form;
    cplx z;
    int weight_denominator;  // |stabilizer|
};
HeegnerPoint heegner_point(const QuadForm& f);

// chi_Delta on forms of discriminant Delta * D.
int genus_character(Int delta, const QuadForm& f);

struct GeodesicClass {
    QuadForm form;
    double w_plus;   // larger root of Q(x, 1)
    double w_minus;  // smaller root
    double center() const { return 0.5 * (w_plus + w_minus); }
    double radius() const { return 0.5 * (w_plus - w_minus); }
    Mat2 automorph;  // fixes the form, primitive solution of the Pell equation
    double log_epsilon;
};
GeodesicClass geodesic_data(const QuadForm& f);

double p_value(const QuadForm& f, cplx z);   // -(a|z|^2 + b x + c)/y
bool indicator(const QuadForm& f, cplx z);   // a|z|^2 + b x + c < 0, boundary counts as 0

// All forms of discriminant D > 0 with a > 0 whose geodesic encloses z.
std::vector<QuadForm> forms_containing(Int disc, cplx z);

// Forms with c < 0 < a.
std::vector<QuadForm> forms_S_period(Int disc);

// Forms X with a_X > 0 > a_{X o M^{-1}}; for M = S this is forms_S_period.
std::vector<QuadForm> forms_M_period(Int disc, const Mat2& m);

inline constexpr double kBoundaryTol = 1e-12;

}  // namespace modlift::qforms
