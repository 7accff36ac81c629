#include "qmf/qseries.hpp"

namespace qmf {

PuiseuxSeries<Cyclotomic> promote(const PuiseuxSeries<Rational>& f)
{
    PuiseuxSeries<Cyclotomic> r(f.trunc(), f.exp_denom());
    for (const auto& [m, c] : f.raw_terms()) r.insert_add(m, Cyclotomic(c));
    return r;
}

CycSeries twisted(const CycSeries& f, const Cyclotomic& tau)
{
    CycSeries r(f.trunc(), f.exp_denom());
    for (const auto& [m, c] : f.raw_terms()) r.insert_add(m, c * tau.pow(m));
    return r;
}

CycSeries translated(const CycSeries& f, const Rational& h)
{
    long p = static_cast<long>(h.get_num().get_si());
    long s = static_cast<long>(h.get_den().get_si());
    long d = f.exp_denom();
    CycSeries r(f.trunc(), d);
    // q^{m/d} -> e^{2 pi i h m / d} q^{m/d}
    for (const auto& [m, c] : f.raw_terms())
        r.insert_add(m, c * Cyclotomic::root_of_unity(static_cast<unsigned long>(s * d), p * m));
    return r;
}

namespace {

Rational eta_slack(const std::vector<std::pair<Rational, int>>& factors)
{
    Rational slack(1);
    for (const auto& [r, e] : factors) slack += r / 24 * (2 * std::abs(e));
    return slack;
}

template <class C>
PuiseuxSeries<C> eta_product(const std::vector<std::pair<Rational, int>>& factors,
                             const Rational& trunc)
{
    if (factors.empty()) fail(ErrorKind::Internal, "empty eta quotient");
    Rational work = trunc + eta_slack(factors);
    PuiseuxSeries<C> acc = PuiseuxSeries<C>::one(work);
    for (const auto& [r, e] : factors) {
        auto f = eta_factor<C>(r, work);
        acc = acc * f.pow(e);
    }
    if (acc.trunc() < trunc)
        fail(ErrorKind::InsufficientTruncation, "eta expansion lost precision");
    return acc.truncated(trunc);
}

} // namespace

PuiseuxSeries<Cyclotomic> eta_expansion(const EtaQuotientSpec& spec, const Rational& trunc)
{
    return eta_product<Cyclotomic>(spec.factors, trunc).scaled(spec.prefactor);
}

PuiseuxSeries<Rational> eta_quotient_rational(
    const std::vector<std::pair<Rational, int>>& factors, const Rational& trunc)
{
    return eta_product<Rational>(factors, trunc);
}

CycSeries eta_half_shift(const Rational& scale, const Rational& trunc)
{
    // eta(scale z + 1/2): shift first in the w = scale z variable, then
    // rescale exponents
    Rational inner_trunc = trunc / scale;
    CycSeries base = eta_factor<Cyclotomic>(rat(1), inner_trunc);
    return translated(base, rat(1, 2)).exponents_scaled(scale);
}

QSeries theta1_series(const Rational& trunc)
{
    QSeries r(trunc, 1);
    r.insert_add(0, rat(1));
    for (long n = 1; rat(n * n) < trunc; ++n)
        r.insert_add(n * n, rat(n % 2 ? -2 : 2));
    return r;
}

QSeries F10_series(const Rational& trunc)
{
    QSeries r(trunc, 1);
    for (long n = 0; rat((2 * n + 1) * (2 * n + 1)) < trunc; ++n)
        r.insert_add((2 * n + 1) * (2 * n + 1), rat(1));
    return r;
}

CycSeries theta2_series(const Rational& trunc)
{
    return promote(F10_series(trunc * 16)).exponents_scaled(rat(1, 16));
}

CycSeries theta3_series(const Rational& trunc)
{
    CycSeries f10 = promote(F10_series(trunc * 16));
    CycSeries tw = twisted(f10, Cyclotomic::root_of_unity(16, 1));
    return tw.exponents_scaled(rat(1, 16))
        .scaled(Cyclotomic::root_of_unity(12, -1));
}

EtaQuotientSpec theta1_eta_spec()
{
    return EtaQuotientSpec{{{rat(1), 2}, {rat(2), -1}}, Cyclotomic(1)};
}

EtaQuotientSpec theta2_eta_spec()
{
    return EtaQuotientSpec{{{rat(1), 2}, {rat(1, 2), -1}}, Cyclotomic(1)};
}

EtaQuotientSpec theta3_eta_alt_spec()
{
    return EtaQuotientSpec{{{rat(1, 2), 1}, {rat(2), 1}, {rat(1), -1}},
                           Cyclotomic::root_of_unity(48, -1)};
}

} // namespace qmf
