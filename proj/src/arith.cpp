#include "modlift/arith.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace modlift::arith {

Int gcd(Int a, Int b) { return std::gcd(a, b); }

Int isqrt(Int n) {
    if (n < 0) throw std::domain_error("isqrt of negative number");
    Int r = static_cast<Int>(std::sqrt(static_cast<long double>(n)));
    // compare by division; (r + 1)^2 overflows near 2^63
    while (r > 0 && r > n / r) --r;
    while (r + 1 <= n / (r + 1)) ++r;
    return r;
}

bool is_square(Int n) {
    if (n < 0) return false;
    Int r = isqrt(n);
    return r * r == n;
}

int kronecker(Int d, Int n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) result = -result;
    }
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v > 0) {
        if (d % 2 == 0) return 0;
        Int r8 = ((d % 8) + 8) % 8;
        if ((v & 1) && (r8 == 3 || r8 == 5)) result = -result;
    }
    // Jacobi (d/n), n odd positive
    Int a = ((d % n) + n) % n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            Int r8 = n % 8;
            if (r8 == 3 || r8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

static bool squarefree(Int n) {
    if (n < 0) n = -n;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
    }
    return true;
}

bool is_fundamental(Int d) {
    if (d == 1) return true;
    Int r4 = ((d % 4) + 4) % 4;
    if (r4 == 1) return squarefree(d);
    if (r4 != 0) return false;
    Int m = d / 4;
    Int m4 = ((m % 4) + 4) % 4;
    return (m4 == 2 || m4 == 3) && squarefree(m);
}

Discriminant::Discriminant(Int value) : value_(value) {
    Int r4 = ((value % 4) + 4) % 4;
    if (r4 != 0 && r4 != 1)
        throw std::invalid_argument("discriminant must be 0 or 1 mod 4: " + std::to_string(value));
    if (is_square(value))
        throw std::invalid_argument("discriminant must not be a square: " + std::to_string(value));
}

PellSolution pell_minimal(Int d) {
    if (d <= 0 || is_square(d) || (((d % 4) + 4) % 4 > 1))
        throw std::invalid_argument("pell_minimal needs a positive nonsquare discriminant");
    // Continued fraction of (b + sqrt d)/2, b = d mod 2: the reduced quadratic
    // irrational of discriminant d. Track convergents until the norm is +-1 with
    // the right parity; t = 2p - b q, u = q.
    const Int b = d % 2;
    // x = (P + sqrt d)/Q with Q | d - P^2
    Int P = b, Q = 2;
    const Int s = isqrt(d);
    BigInt p0 = 1, q0 = 0, p1, q1;
    Int a = (P + s) / Q;
    p1 = a;
    q1 = 1;
    for (int iter = 0; iter < 1000000; ++iter) {
        // convergent p1/q1 of (b + sqrt d)/2; test norm of (2 p1 - b q1) + q1 sqrt d
        BigInt t = 2 * p1 - b * q1;
        BigInt n = t * t - BigInt(d) * q1 * q1;
        if (n == 4) {
            boost::multiprecision::cpp_bin_float_50 tf(t), uf(q1);
            auto eps = (tf + uf * boost::multiprecision::sqrt(boost::multiprecision::cpp_bin_float_50(d))) / 2;
            return {t, q1, static_cast<double>(boost::multiprecision::log(eps))};
        }
        P = a * Q - P;
        Q = (d - P * P) / Q;
        a = (P + s) / Q;
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    throw std::runtime_error("pell_minimal: continued fraction did not terminate");
}

std::vector<Int> divisors(Int n) {
    if (n == 0) throw std::invalid_argument("divisors of zero");
    if (n < 0) n = -n;
    std::vector<Int> lo, hi;
    for (Int k = 1; k * k <= n; ++k) {
        if (n % k == 0) {
            lo.push_back(k);
            if (k != n / k) hi.push_back(n / k);
        }
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

}  // namespace modlift::arith
