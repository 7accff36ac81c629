#include "qmf/strange.hpp"

#include <numeric>

namespace qmf {

RationalPoint RationalPoint::of(long a, long k)
{
    if (k == 0) fail(ErrorKind::Internal, "rational point with k = 0");
    if (k < 0) {
        a = -a;
        k = -k;
    }
    long g = std::gcd(std::abs(a), k);
    if (g > 1) {
        a /= g;
        k /= g;
    }
    return RationalPoint{a, static_cast<unsigned long>(k)};
}

RationalPoint RationalPoint::of(const Rational& x)
{
    return of(static_cast<long>(x.get_num().get_si()),
              static_cast<long>(x.get_den().get_si()));
}

RationalPoint RationalPoint::s_image() const
{
    if (a == 0) fail(ErrorKind::OutsideDomain, "-1/x undefined at x = 0");
    return of(-static_cast<long>(k), a);
}

Cyclotomic q_power(const RationalPoint& x, const Rational& c)
{
    Rational e = x.x() * c; // q^c = e^{2 pi i e}
    long num = static_cast<long>(e.get_num().get_si());
    long den = static_cast<long>(e.get_den().get_si());
    return Cyclotomic::root_of_unity(static_cast<unsigned long>(den), num);
}

Component component_from_string(const std::string& s)
{
    if (s == "1") return Component::Theta1;
    if (s == "2") return Component::Theta2;
    if (s == "3") return Component::Theta3;
    if (s == "F" || s == "f") return Component::F;
    fail(ErrorKind::Internal, "unknown component: " + s);
}

std::string component_name(Component c)
{
    switch (c) {
        case Component::F: return "F";
        case Component::Theta1: return "1";
        case Component::Theta2: return "2";
        case Component::Theta3: return "3";
    }
    return "?";
}

bool in_domain(Component i, const RationalPoint& x)
{
    switch (i) {
        case Component::Theta1: return x.k % 2 == 1;
        case Component::Theta3: return x.k % 2 == 0;
        default: return true;
    }
}

void check_domain(Component i, const RationalPoint& x)
{
    if (!in_domain(i, x))
        fail(ErrorKind::OutsideDomain,
             "component " + component_name(i) + " undefined at x = " + x.str() +
                 (i == Component::Theta1 ? " (needs odd order)" : " (needs even order)"));
}

namespace {

// working cyclotomic field for exact evaluation at x = a/k
unsigned long working_modulus(Component i, const RationalPoint& x)
{
    unsigned long k = x.k;
    switch (i) {
        case Component::F:
        case Component::Theta1: return k;
        default: return std::lcm(48ul, 16ul * k);
    }
}

// exponent of q^c inside Q(zeta_N): q^c = zeta_N^m
long zeta_exponent(const RationalPoint& x, const Rational& c, unsigned long n)
{
    Rational m = x.x() * c * static_cast<long>(n);
    if (!is_integer(m)) fail(ErrorKind::Internal, "exponent outside working field");
    long v = static_cast<long>(m.get_num().get_si()) % static_cast<long>(n);
    if (v < 0) v += static_cast<long>(n);
    return v;
}

struct TermStream {
    // incremental state for theta_{i,n} as n grows
    Component comp;
    RationalPoint x;
    unsigned long n_field;
    Cyclotomic prefactor{1};
    Cyclotomic num{1};      // (q;q)_n
    Cyclotomic invden{1};   // inverse of the component's denominator so far
    unsigned long n = 0;

    TermStream(Component i, const RationalPoint& pt) : comp(i), x(pt)
    {
        n_field = working_modulus(i, pt);
        if (i == Component::Theta2) {
            prefactor = q_power(x, rat(1, 16)).lifted_to(n_field);
        } else if (i == Component::Theta3) {
            prefactor = (Cyclotomic::root_of_unity(48, -1) * q_power(x, rat(1, 16)))
                            .lifted_to(n_field);
        }
    }

    // include the denominator factor indexed j (the (...)_{n+1} factor of
    // term n is j = n)
    void push_denominator(unsigned long j)
    {
        int sign = 0;
        Rational c;
        switch (comp) {
            case Component::F: return;
            case Component::Theta1:
                sign = +1;
                c = rat(static_cast<long>(j) + 1); // factors (1 + q^{j+1}), j+1 = 1..n
                break;
            case Component::Theta2:
                sign = -1;
                c = rat(1, 2) + static_cast<long>(j); // (1 - q^{1/2 + j})
                break;
            case Component::Theta3:
                sign = +1;
                c = rat(1, 2) + static_cast<long>(j);
                break;
        }
        long m = zeta_exponent(x, c, n_field);
        try {
            invden *= binomial_unit_inverse(n_field, m, sign);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::DivisionByZero)
                fail(ErrorKind::DenominatorVanishes,
                     "component " + component_name(comp) + " at x = " + x.str() +
                         ": factor (1 " + (sign > 0 ? "+" : "-") + " q^" + to_string(c) +
                         ") vanishes");
            throw;
        }
    }

    // value of theta_{i,n}; advances the stream
    Cyclotomic next()
    {
        if (n > 0) {
            // numerator factor (1 - q^n)
            num *= Cyclotomic(1) -
                   Cyclotomic::root_of_unity(n_field, zeta_exponent(x, rat(static_cast<long>(n)), n_field));
        }
        switch (comp) {
            case Component::F:
                break;
            case Component::Theta1:
                if (n > 0) push_denominator(n - 1); // adds (1 + q^n)
                break;
            case Component::Theta2:
            case Component::Theta3:
                push_denominator(n); // (...)_{n+1} gains factor j = n
                break;
        }
        ++n;
        return prefactor * num * invden;
    }
};

} // namespace

Cyclotomic finite_product(Component i, unsigned long n, const RationalPoint& x)
{
    TermStream stream(i, x);
    Cyclotomic term;
    for (unsigned long m = 0; m <= n; ++m) term = stream.next();
    return term;
}

StrangeValue strange_eval(Component i, const RationalPoint& x)
{
    check_domain(i, x);
    TermStream stream(i, x);
    Cyclotomic sum;
    for (unsigned long n = 0; n < x.k; ++n) sum += stream.next();
    return StrangeValue{sum, x.k, i};
}

nlohmann::json StrangeValue::to_json(long prec) const
{
    Complex v = exact.embed(prec);
    nlohmann::json j = exact.to_json();
    j["component"] = component_name(component);
    j["termsUsed"] = termsUsed;
    j["exact"] = exact.str();
    j["decimal"] = {v.re().str(), v.im().str()};
    return j;
}

// ---- inversion identity (bivariate Laurent check) ------------------------

namespace {

// Laurent polynomial in a and p with integer coefficients
using BiLaurent = std::map<std::pair<long, long>, long>;

BiLaurent bi_mul(const BiLaurent& f, const BiLaurent& g)
{
    BiLaurent r;
    for (const auto& [ef, cf] : f)
        for (const auto& [eg, cg] : g) {
            auto key = std::make_pair(ef.first + eg.first, ef.second + eg.second);
            r[key] += cf * cg;
            if (r[key] == 0) r.erase(key);
        }
    return r;
}

BiLaurent bi_monomial(long c, long ea, long ep)
{
    BiLaurent r;
    if (c != 0) r[{ea, ep}] = c;
    return r;
}

BiLaurent bi_sub(BiLaurent f, const BiLaurent& g)
{
    for (const auto& [e, c] : g) {
        f[e] -= c;
        if (f[e] == 0) f.erase(e);
    }
    return f;
}

// (a^{s}; p^{s})_n-style product prod_{i=0}^{n-1} (1 - a^{sa} p^{sp * i})
BiLaurent inversion_product(unsigned long n, long sa, long sp)
{
    BiLaurent acc = bi_monomial(1, 0, 0);
    for (unsigned long i = 0; i < n; ++i)
        acc = bi_mul(acc, bi_sub(bi_monomial(1, 0, 0),
                                 bi_monomial(1, sa, sp * static_cast<long>(i))));
    return acc;
}

} // namespace

bool invert_pochhammer_check(unsigned long n, const Rational& alpha)
{
    if (alpha == 0) fail(ErrorKind::Internal, "alpha must be nonzero");
    // identity in p := q^alpha, so the exponent alpha only scales the p-grid
    BiLaurent lhs = inversion_product(n, -1, -1);
    long tri = static_cast<long>(n) * (static_cast<long>(n) - 1) / 2;
    BiLaurent rhs = bi_mul(
        bi_monomial(n % 2 ? -1 : 1, -static_cast<long>(n), -tri),
        inversion_product(n, +1, +1));
    return lhs == rhs;
}

bool invert_pochhammer_printed_form(unsigned long n, const Rational& alpha)
{
    if (alpha == 0) fail(ErrorKind::Internal, "alpha must be nonzero");
    BiLaurent lhs = inversion_product(n, -1, -1);
    long tri = static_cast<long>(n) * (static_cast<long>(n) - 1) / 2;
    BiLaurent rhs = bi_mul(bi_monomial(n % 2 ? -1 : 1, static_cast<long>(n), tri),
                           inversion_product(n, +1, +1));
    return lhs == rhs;
}

// ---- inverse q-series ------------------------------------------------------

QSeries g1_series(const Rational& trunc)
{
    QSeries acc(trunc, 1);
    for (long n = 0; rat(2 * n + 1) < trunc; ++n) {
        QSeries num = pochhammer<Rational>(rat(1), rat(1), rat(1), 2 * n, trunc);
        QSeries den = pochhammer<Rational>(rat(-1), rat(1), rat(1), 2 * n, trunc) *
                      (QSeries::one(trunc) + QSeries::monomial(rat(1), rat(2 * n + 1), trunc));
        QSeries term = (num * den.reciprocal()).shifted(rat(2 * n + 1)).scaled(rat(2));
        acc = acc + term.truncated(trunc);
    }
    return acc;
}

QSeries g1_fine_series(const Rational& trunc)
{
    // 1 + ((q-1)/2) sum_n (q;q)_n / (-q;q)_n (-q)^n
    QSeries sum(trunc, 1);
    for (long n = 0; rat(n) < trunc; ++n) {
        QSeries num = pochhammer<Rational>(rat(1), rat(1), rat(1), n, trunc);
        QSeries den = pochhammer<Rational>(rat(-1), rat(1), rat(1), n, trunc);
        QSeries term = (num * den.reciprocal()).shifted(rat(n)).scaled(rat(n % 2 ? -1 : 1));
        sum = sum + term.truncated(trunc);
    }
    QSeries half_qm1 = QSeries::monomial(rat(1, 2), rat(1), trunc + 1) -
                       QSeries::monomial(rat(1, 2), rat(0), trunc + 1);
    return (QSeries::one(trunc) + half_qm1 * sum).truncated(trunc);
}

QSeries g23_kernel_series(const Rational& trunc)
{
    QSeries acc(trunc, 1);
    for (long n = 0; rat(n) < trunc; ++n) {
        QSeries num = pochhammer<Rational>(rat(1), rat(2), rat(2), n, trunc);
        QSeries den = pochhammer<Rational>(rat(1), rat(3), rat(2), n, trunc);
        QSeries term = (num * den.reciprocal()).shifted(rat(n));
        acc = acc + term.truncated(trunc);
    }
    return acc;
}

namespace {

Cyclotomic guarded_binomial_inverse(const RationalPoint& x, unsigned long n_field,
                                    const Rational& c, int sign, const char* what)
{
    long m = zeta_exponent(x, c, n_field);
    try {
        return binomial_unit_inverse(n_field, m, sign);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::DivisionByZero)
            fail(ErrorKind::DenominatorVanishes,
                 std::string(what) + " at x = " + x.str() + ": factor (1 " +
                     (sign > 0 ? "+" : "-") + " q^" + to_string(c) + ") vanishes");
        throw;
    }
}

} // namespace

Cyclotomic g1_exact(const RationalPoint& x)
{
    unsigned long k = x.k;
    unsigned long n_field = k;
    Cyclotomic sum;
    Cyclotomic num(1);    // (q;q)_{2n}
    Cyclotomic invden(1); // 1 / (-q;q)_{2n}
    for (unsigned long n = 0; 2 * n < k; ++n) {
        if (n > 0) {
            for (unsigned long j = 2 * n - 1; j <= 2 * n; ++j) {
                num *= Cyclotomic(1) - Cyclotomic::root_of_unity(
                                           n_field, zeta_exponent(x, rat(static_cast<long>(j)), n_field));
                invden *= guarded_binomial_inverse(x, n_field, rat(static_cast<long>(j)), +1, "G1");
            }
        }
        Cyclotomic qpow = Cyclotomic::root_of_unity(
            n_field, zeta_exponent(x, rat(2 * static_cast<long>(n) + 1), n_field));
        Cyclotomic inv1p =
            guarded_binomial_inverse(x, n_field, rat(2 * static_cast<long>(n) + 1), +1, "G1");
        sum += qpow * num * invden * inv1p * rat(2);
    }
    return sum;
}

Cyclotomic g1_fine_exact(const RationalPoint& x)
{
    unsigned long k = x.k;
    unsigned long n_field = k;
    Cyclotomic sum;
    Cyclotomic ratio(1); // (q;q)_n / (-q;q)_n
    Cyclotomic mq = -Cyclotomic::root_of_unity(n_field, zeta_exponent(x, rat(1), n_field));
    Cyclotomic mqn(1); // (-q)^n
    for (unsigned long n = 0; n < k; ++n) {
        if (n > 0) {
            Rational c = rat(static_cast<long>(n));
            ratio *= Cyclotomic(1) -
                     Cyclotomic::root_of_unity(n_field, zeta_exponent(x, c, n_field));
            ratio *= guarded_binomial_inverse(x, n_field, c, +1, "G1 Fine");
            mqn *= mq;
        }
        sum += ratio * mqn;
    }
    Cyclotomic q1 = Cyclotomic::root_of_unity(n_field, zeta_exponent(x, rat(1), n_field));
    return Cyclotomic(1) + (q1 - Cyclotomic(1)) * rat(1, 2) * sum;
}

Cyclotomic g23_kernel_exact(const RationalPoint& x)
{
    unsigned long k = x.k;
    unsigned long n_field = k;
    // numerator (q^2;q^2)_n dies at the first n with 2n = 0 mod k
    unsigned long n_stop = (k % 2 == 0) ? k / 2 : k;
    Cyclotomic sum;
    Cyclotomic num(1);
    Cyclotomic invden(1);
    for (unsigned long n = 0; n < n_stop; ++n) {
        if (n > 0) {
            num *= Cyclotomic(1) - Cyclotomic::root_of_unity(
                                       n_field, zeta_exponent(x, rat(2 * static_cast<long>(n)), n_field));
            invden *= guarded_binomial_inverse(
                x, n_field, rat(2 * static_cast<long>(n) + 1), -1, "G23 kernel");
        }
        Cyclotomic qpow = Cyclotomic::root_of_unity(
            n_field, zeta_exponent(x, rat(static_cast<long>(n)), n_field));
        sum += qpow * num * invden;
    }
    return sum;
}

} // namespace qmf
