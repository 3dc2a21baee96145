#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace modlift::arith {

using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;

Int gcd(Int a, Int b);
bool is_square(Int n);
Int isqrt(Int n);  // floor(sqrt(n)), n >= 0

// Kronecker symbol (d/n), defined for all integers d, n.
int kronecker(Int d, Int n);

// Fundamental discriminant test; 1 counts as fundamental.
bool is_fundamental(Int d);

class Discriminant {
public:
    explicit Discriminant(Int value);  // throws unless value = 0,1 mod 4 and nonsquare
    Int value() const { return value_; }
    bool positive() const { return value_ > 0; }
    bool fundamental() const { return is_fundamental(value_); }

private:
    Int value_;
};

// Minimal t,u > 0 with t^2 - D u^2 = 4; D > 0 nonsquare, D = 0,1 mod 4.
struct PellSolution {
    BigInt t;
    BigInt u;
    double log_epsilon;  // log((t + u sqrt D)/2)
};
PellSolution pell_minimal(Int d);

std::vector<Int> divisors(Int n);  // positive divisors in increasing order

}  // namespace modlift::arith
