#ifndef QMF_CYCLOTOMIC_HPP
#define QMF_CYCLOTOMIC_HPP

#include <map>
#include <string>
#include <vector>

#include "qmf/hp.hpp"
#include "qmf/rational.hpp"

#include "json.hpp"

namespace qmf {

unsigned long euler_phi(unsigned long n);

// Dense coefficient list of the N-th cyclotomic polynomial Phi_N (monic,
// integer coefficients, stored as Rational). Computed by iterated exact
// division of x^N - 1 by Phi_d over the proper divisors d of N; cached,
// safe for concurrent callers.
const std::vector<Rational>& cyclotomic_poly(unsigned long n);

// Exact element of Q(zeta_N), stored as a sparse polynomial in zeta_N
// canonically reduced modulo Phi_N (all stored exponents < phi(N)).
// Values in different moduli compare and combine by lifting to the lcm.
class Cyclotomic {
public:
    Cyclotomic() : n_(1) {}
    explicit Cyclotomic(const Rational& r);
    explicit Cyclotomic(long v) : Cyclotomic(rat(v)) {}

    // zeta_k^a
    static Cyclotomic root_of_unity(unsigned long k, long a);

    // sum of c * zeta_n^j from (exponent -> coefficient) terms, one reduction
    static Cyclotomic from_terms(unsigned long n, const std::map<unsigned long, Rational>& terms);

    unsigned long modulus() const { return n_; }
    const std::map<unsigned long, Rational>& coeffs() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    bool is_rational() const;
    Rational rational_value() const; // requires is_rational()

    Cyclotomic lifted_to(unsigned long m) const; // requires n_ | m

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);
    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
    Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
    Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }
    Cyclotomic& operator/=(const Cyclotomic& b) { return *this = *this / b; }
    friend Cyclotomic operator*(const Cyclotomic& a, const Rational& s);

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    Cyclotomic pow(long e) const;
    // multiplicative inverse via extended polynomial gcd with Phi_N
    Cyclotomic inverse() const;
    // zeta -> zeta^{-1}
    Cyclotomic conjugated() const;

    // Numerical value sum c_j e^{2 pi i j / N}. Each term is correctly
    // rounded at prec+16 guard bits, so the result error is below
    // 2^{-prec+margin} with margin <= ceil(log2(#terms)) + 2.
    Complex embed(long prec) const;

    // canonical ASCII form, e.g. "3 - 2*z3" or "1/2*z16^3"
    std::string str() const;

    nlohmann::json to_json() const;
    static Cyclotomic from_json(const nlohmann::json& j);

private:
    void reduce_(std::vector<Rational>& dense);

    unsigned long n_;
    std::map<unsigned long, Rational> c_;
};

// (1 + sign * zeta_N^m)^{-1} without a polynomial gcd, via the closed forms
//   1/(1-w) = -(1/e) sum_{j=1}^{e-1} j w^j        (w of order e >= 2)
//   1/(1+w) =  (1/2) sum_{j=0}^{e-1} (-1)^j w^j   (w of odd order e)
// reducing the even-order "+" case to the "-" case with w' = -w.
// Throws DivisionByZero when the binomial vanishes.
Cyclotomic binomial_unit_inverse(unsigned long n, long m, int sign);

} // namespace qmf

#endif
