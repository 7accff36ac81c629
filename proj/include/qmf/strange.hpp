#ifndef QMF_STRANGE_HPP
#define QMF_STRANGE_HPP

#include <optional>
#include <string>

#include "qmf/cyclotomic.hpp"
#include "qmf/qseries.hpp"
#include "qmf/rational.hpp"

namespace qmf {

// Reduced rational x = a/k standing for the root of unity q = e^{2 pi i x}.
// Every fractional power is read through x: q^c := e^{2 pi i x c}, which
// pins the branches of q^{1/2} and q^{1/16} once and for all.
struct RationalPoint {
    long a = 0;
    unsigned long k = 1;

    static RationalPoint of(long a, long k);
    static RationalPoint of(const Rational& x);
    Rational x() const { return rat(a, static_cast<long>(k)); }
    // -1/x (requires a != 0)
    RationalPoint s_image() const;
    RationalPoint translated(long m) const { return of(a + m * static_cast<long>(k), static_cast<long>(k)); }
    std::string str() const { return to_string(x()); }
};

// exact q^c = e^{2 pi i x c} as a cyclotomic number
Cyclotomic q_power(const RationalPoint& x, const Rational& c);

enum class Component { F = 0, Theta1 = 1, Theta2 = 2, Theta3 = 3 };

Component component_from_string(const std::string& s);
std::string component_name(Component c);

// domain rule of phi_i at x (order parity); throws OutsideDomain if violated
void check_domain(Component i, const RationalPoint& x);
bool in_domain(Component i, const RationalPoint& x);

// exact theta_{i,n}(x): theta_{1,n} = (q;q)_n / (-q;q)_n,
// theta_{2,n} = q^{1/16} (q;q)_n / (q^{1/2};q)_{n+1},
// theta_{3,n} = (zeta16/zeta12) q^{1/16} (q;q)_n / (-q^{1/2};q)_{n+1},
// F_n = (q;q)_n
Cyclotomic finite_product(Component i, unsigned long n, const RationalPoint& x);

struct StrangeValue {
    Cyclotomic exact;
    unsigned long termsUsed = 0;
    Component component = Component::F;

    nlohmann::json to_json(long prec = 64) const;
};

// finite evaluation of the strange series: terms n >= k vanish because the
// numerator contains (q;q)_n
StrangeValue strange_eval(Component i, const RationalPoint& x);

// Checks, as an identity of exact bivariate Laurent polynomials in (a, p)
// with p = q^alpha, the inversion law
//   (a^{-1}; q^{-alpha})_n = (-1)^n a^{-n} q^{-alpha n(n-1)/2} (a; q^alpha)_n.
// This is the expansion-validated form; the printed source carries a^n and
// q^{+alpha n(n-1)/2}, which fails already at n = 1.
bool invert_pochhammer_check(unsigned long n, const Rational& alpha);
// the printed variant, kept for documentation of the discrepancy
bool invert_pochhammer_printed_form(unsigned long n, const Rational& alpha);

// G_1(q) = 2 sum q^{2n+1} (q;q)_{2n} / ((1+q^{2n+1}) (-q;q)_{2n})
QSeries g1_series(const Rational& trunc);
// Fine-identity route: 1 + ((q-1)/2) sum (q;q)_n/(-q;q)_n (-q)^n
QSeries g1_fine_series(const Rational& trunc);
// kernel for components 2-3: sum q^n (q^2;q^2)_n / (q^3;q^2)_n
QSeries g23_kernel_series(const Rational& trunc);

Cyclotomic g1_exact(const RationalPoint& x);
Cyclotomic g1_fine_exact(const RationalPoint& x);
Cyclotomic g23_kernel_exact(const RationalPoint& x);

} // namespace qmf

#endif
