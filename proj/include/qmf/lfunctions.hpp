#ifndef QMF_LFUNCTIONS_HPP
#define QMF_LFUNCTIONS_HPP

#include <vector>

#include "qmf/cyclotomic.hpp"
#include "qmf/strange.hpp"

namespace qmf {

// Periodic coefficient sequence chi(1), ..., chi(c) with chi(n+c) = chi(n).
// The mean-value-zero flag is decided exactly; it is the hypothesis that
// makes L(s, chi) entire and the heat-sum asymptotics valid.
struct PeriodicSequence {
    unsigned long period = 1;
    std::vector<Cyclotomic> values; // values[j] = chi(j+1)
    bool meanValueZero = false;

    const Cyclotomic& at(unsigned long n) const // chi(n), n >= 1
    {
        return values[(n - 1) % period];
    }
    static PeriodicSequence of(std::vector<Cyclotomic> vals);
    PeriodicSequence doubled() const; // same sequence, period 2c
};

// chi(n) = (-zeta)^{n^2} for zeta = e^{2 pi i a/k}, k odd; period 2k.
// Throws NotMeanValueZero if the exact period sum fails to vanish.
PeriodicSequence chi_L1(const RationalPoint& zeta);

// chi(n) = [n odd] e^{2 pi i x n^2 / 8} for x = a/k, k even; period 8k.
// The symbol (2/n)^2 is read as the indicator of odd n.
PeriodicSequence chi_L2(const RationalPoint& zeta);

// exact Bernoulli polynomial B_m(x), coefficient list by ascending power
const std::vector<Rational>& bernoulli_polynomial(unsigned long m);

// L(-n, chi) = -(c^n/(n+1)) sum_{a=1}^{c} chi(a) B_{n+1}(a/c), exact.
// Requires chi.meanValueZero.
Cyclotomic L_value(const PeriodicSequence& chi, unsigned long n);

// H10 realizes the substitution q = zeta e^{-t} into the F10 strange sum
// after q -> q^{1/8}, i.e. factors 1 - Q^{2j} over 1 - Q^{2j+1} with
// Q = zeta e^{-t}. The printed display pairs zeta^j with e^{-(2j+1)t},
// which is internally inconsistent and fails the Corollary's expansion;
// H10Printed keeps that literal reading available for the record.
enum class HWhich { H9, H10, H10Printed };

struct HValue {
    Complex value;
    Real tailBound;
    unsigned long terms = 0;
};

// Numerical H_9(t, zeta) / H_10(t, zeta) per their displayed product sums,
// evaluated in tail-corrected form: the literal series sum_n P_n diverges
// (P_n tends to the nonzero infinite product P_inf), so the partial sums
// grow linearly by (N+1) P_inf; subtracting that drift,
//     sum_{n<=N} (P_n - P_inf)
// converges geometrically and carries the same asymptotic expansion in t.
// k odd is required for H9, k even for H10.
HValue H_eval(HWhich which, double t, const RationalPoint& zeta, long prec);

// exact generalized quadratic Gauss sum G(a,b,c) in Q(zeta_c)
Cyclotomic gauss_sum(long a, long b, unsigned long c);

struct AsymptoticOrder {
    unsigned long order;
    Complex fitted;      // coefficient of t^order from the pure fit
    Complex exactValue;  // (-1)^n L(-2n-1, chi) / n!
    double absError;
    double relError;
};

struct AsymptoticReport {
    std::vector<AsymptoticOrder> orders;
    // successive-subtraction diagnostics: for each order, the value of
    // (h(t) - truncation)/t^j at the smallest grid point
    std::vector<Complex> subtraction;
    nlohmann::json to_json() const;
};

// Fits sum_n n chi(n) e^{-n^2 t} ~ sum_j A_j t^j on the grid by solving the
// Vandermonde system at high precision (pure fit; independent of the
// Bernoulli formula), then compares against exact L_value outputs.
AsymptoticReport asymptotic_check(const PeriodicSequence& chi,
                                  const std::vector<double>& t_grid,
                                  unsigned long maxOrder, long prec);

// heat sum sum_{n>=1} n chi(n) e^{-n^2 t}
Complex heat_sum(const PeriodicSequence& chi, const Real& t, long prec);

} // namespace qmf

#endif
