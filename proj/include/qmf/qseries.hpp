#ifndef QMF_QSERIES_HPP
#define QMF_QSERIES_HPP

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qmf/cyclotomic.hpp"
#include "qmf/errors.hpp"
#include "qmf/rational.hpp"

#include "json.hpp"

namespace qmf {

// ---- coefficient ring glue --------------------------------------------

inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(const Cyclotomic& c) { return c.is_zero(); }
inline Rational coeff_inverse(const Rational& c)
{
    if (c == 0) fail(ErrorKind::DivisionByZero, "series: invert zero coefficient");
    return 1 / c;
}
inline Cyclotomic coeff_inverse(const Cyclotomic& c) { return c.inverse(); }
inline std::string coeff_str(const Rational& c) { return to_string(c); }
inline std::string coeff_str(const Cyclotomic& c) { return c.str(); }

template <class C>
C coeff_from_rational(const Rational& r)
{
    if constexpr (std::is_same_v<C, Rational>)
        return r;
    else
        return C(r);
}

// Exact linear combination sum_r c_r sqrt(r) over squarefree radicands r.
// Closed under ring operations; the image of the half-derivative operator.
template <class C>
class SurdSum {
public:
    SurdSum() = default;
    explicit SurdSum(const C& c) { add_term(1, c); }
    // c * sqrt(rad); rad need not be squarefree, it is normalized here
    static SurdSum radical(unsigned long rad, const C& c)
    {
        SurdSum s;
        unsigned long square = 1, core = 1;
        for (unsigned long p = 2; p * p <= rad; ++p) {
            unsigned long e = 0;
            while (rad % p == 0) { rad /= p; ++e; }
            for (unsigned long i = 0; i + 1 < e; i += 2) square *= p;
            if (e % 2) core *= p;
        }
        core *= rad;
        s.add_term(core, c * rat(static_cast<long>(square)));
        return s;
    }

    const std::map<unsigned long, C>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    // true when the value lies in the base ring (radicand 1 only)
    bool is_plain() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == 1); }
    C plain() const
    {
        if (t_.empty()) return C();
        if (!is_plain()) fail(ErrorKind::Internal, "surd value has irrational part");
        return t_.begin()->second;
    }

    void add_term(unsigned long rad, const C& c)
    {
        if (coeff_is_zero(c)) return;
        auto it = t_.find(rad);
        if (it == t_.end()) {
            t_[rad] = c;
        } else {
            it->second = it->second + c;
            if (coeff_is_zero(it->second)) t_.erase(it);
        }
    }

    friend SurdSum operator+(const SurdSum& a, const SurdSum& b)
    {
        SurdSum r = a;
        for (const auto& [rad, c] : b.t_) r.add_term(rad, c);
        return r;
    }
    friend SurdSum operator-(const SurdSum& a, const SurdSum& b) { return a + (-b); }
    SurdSum operator-() const
    {
        SurdSum r;
        for (const auto& [rad, c] : t_) r.t_[rad] = -c;
        return r;
    }
    friend SurdSum operator*(const SurdSum& a, const SurdSum& b)
    {
        SurdSum r;
        for (const auto& [ra, ca] : a.t_)
            for (const auto& [rb, cb] : b.t_) {
                unsigned long g = std::gcd(ra, rb);
                r.add_term((ra / g) * (rb / g), ca * cb * rat(static_cast<long>(g)));
            }
        return r;
    }
    friend bool operator==(const SurdSum& a, const SurdSum& b) { return a.t_ == b.t_; }

    Complex embed(long prec) const
    {
        Complex acc = Complex::zero(prec + 16);
        for (const auto& [rad, c] : t_) {
            Real root = sqrt(Real::of(static_cast<long>(rad), prec + 16));
            if constexpr (std::is_same_v<C, Rational>) {
                acc += Complex(Real::of(c, prec + 16) * root, Real::of(0L, prec + 16));
            } else {
                acc += c.embed(prec) * root;
            }
        }
        return acc;
    }

    std::string str() const
    {
        if (t_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [rad, c] : t_) {
            if (!first) out << " + ";
            first = false;
            out << "(" << coeff_str(c) << ")";
            if (rad != 1) out << "*sqrt(" << rad << ")";
        }
        return out.str();
    }

private:
    std::map<unsigned long, C> t_;
};

template <class C>
bool coeff_is_zero(const SurdSum<C>& c)
{
    return c.is_zero();
}
template <class C>
std::string coeff_str(const SurdSum<C>& c)
{
    return c.str();
}
template <class C>
SurdSum<C> coeff_inverse(const SurdSum<C>& c)
{
    // only single-radical values are invertible here; that covers every
    // leading coefficient the series engine meets
    if (c.terms().size() != 1) fail(ErrorKind::Internal, "surd inverse of a sum");
    auto [rad, coeff] = *c.terms().begin();
    // 1/(c sqrt(r)) = (1/(c r)) sqrt(r)
    return SurdSum<C>::radical(rad, coeff_inverse(coeff * rat(static_cast<long>(rad))));
}

// ---- truncated Puiseux series -----------------------------------------

// Formal series sum_m a_m q^{m/d} with exact coefficients. truncOrder T
// means every exponent < T is exactly represented; arithmetic propagates
// the bound conservatively and never extends it.
template <class C>
class PuiseuxSeries {
public:
    PuiseuxSeries() : d_(1), trunc_(0) {}
    PuiseuxSeries(Rational trunc, long d = 1) : d_(d), trunc_(std::move(trunc)) {}

    static PuiseuxSeries monomial(const C& c, const Rational& e, const Rational& trunc)
    {
        long d = static_cast<long>(e.get_den().get_si());
        PuiseuxSeries s(trunc, d);
        if (e < trunc && !coeff_is_zero(c))
            s.a_[static_cast<long>(e.get_num().get_si())] = c;
        return s;
    }
    static PuiseuxSeries one(const Rational& trunc, long d = 1)
    {
        return monomial(coeff_from_rational<C>(rat(1)), rat(0), trunc);
    }

    long exp_denom() const { return d_; }
    const Rational& trunc() const { return trunc_; }
    const std::map<long, C>& raw_terms() const { return a_; }
    bool is_zero() const { return a_.empty(); }

    Rational exponent_of(long m) const { return rat(m, d_); }
    std::optional<std::pair<Rational, C>> leading() const
    {
        if (a_.empty()) return std::nullopt;
        return std::make_pair(exponent_of(a_.begin()->first), a_.begin()->second);
    }

    C coeff(const Rational& e) const
    {
        if (e >= trunc_)
            fail(ErrorKind::InsufficientTruncation, "coefficient beyond truncation order");
        Rational idx = e * d_;
        if (!is_integer(idx)) return C();
        auto it = a_.find(static_cast<long>(idx.get_num().get_si()));
        return it == a_.end() ? C() : it->second;
    }

    PuiseuxSeries with_denom(long d) const
    {
        if (d == d_) return *this;
        if (d % d_ != 0) fail(ErrorKind::Internal, "series denominator not a multiple");
        PuiseuxSeries r(trunc_, d);
        long s = d / d_;
        for (const auto& [m, c] : a_) r.a_[m * s] = c;
        return r;
    }

    PuiseuxSeries truncated(const Rational& t) const
    {
        PuiseuxSeries r(std::min(trunc_, t), d_);
        long bound = index_bound(r.trunc_, d_);
        for (const auto& [m, c] : a_)
            if (m < bound) r.a_[m] = c;
        return r;
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        long d = std::lcm(a.d_, b.d_);
        PuiseuxSeries x = a.with_denom(d), y = b.with_denom(d);
        PuiseuxSeries r(std::min(a.trunc_, b.trunc_), d);
        long bound = index_bound(r.trunc_, d);
        for (const auto& [m, c] : x.a_)
            if (m < bound) r.a_[m] = c;
        for (const auto& [m, c] : y.a_)
            if (m < bound) r.insert_add(m, c);
        return r;
    }
    PuiseuxSeries operator-() const
    {
        PuiseuxSeries r(trunc_, d_);
        for (const auto& [m, c] : a_) r.a_[m] = -c;
        return r;
    }
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        return a + (-b);
    }

    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        long d = std::lcm(a.d_, b.d_);
        PuiseuxSeries x = a.with_denom(d), y = b.with_denom(d);
        // error terms: O(q^{Ta}) * y starts at Ta + lead(y), and symmetrically
        Rational t;
        if (x.a_.empty() && y.a_.empty()) {
            t = a.trunc_ + b.trunc_;
        } else if (x.a_.empty()) {
            t = a.trunc_ + rat(y.a_.begin()->first, d);
        } else if (y.a_.empty()) {
            t = b.trunc_ + rat(x.a_.begin()->first, d);
        } else {
            t = std::min(a.trunc_ + rat(y.a_.begin()->first, d),
                         b.trunc_ + rat(x.a_.begin()->first, d));
        }
        PuiseuxSeries r(t, d);
        long bound = index_bound(t, d);
        for (const auto& [i, ci] : x.a_) {
            for (const auto& [j, cj] : y.a_) {
                if (i + j >= bound) break; // y iterated in increasing order
                r.insert_add(i + j, ci * cj);
            }
        }
        return r;
    }

    PuiseuxSeries scaled(const C& s) const
    {
        PuiseuxSeries r(trunc_, d_);
        if (coeff_is_zero(s)) return r;
        for (const auto& [m, c] : a_) {
            C v = c * s;
            if (!coeff_is_zero(v)) r.a_[m] = v;
        }
        return r;
    }

    // multiply by q^e
    PuiseuxSeries shifted(const Rational& e) const
    {
        long d = std::lcm(d_, static_cast<long>(e.get_den().get_si()));
        PuiseuxSeries x = with_denom(d);
        Rational ed = e * d;
        long off = static_cast<long>(ed.get_num().get_si());
        PuiseuxSeries r(trunc_ + e, d);
        for (const auto& [m, c] : x.a_) r.a_[m + off] = c;
        return r;
    }

    // q -> q^s (s > 0), exponents scale by s
    PuiseuxSeries exponents_scaled(const Rational& s) const
    {
        if (s <= 0) fail(ErrorKind::Internal, "exponent scale must be positive");
        long p = static_cast<long>(s.get_num().get_si());
        long r0 = static_cast<long>(s.get_den().get_si());
        PuiseuxSeries r(trunc_ * s, d_ * r0);
        for (const auto& [m, c] : a_) r.a_[m * p] = c;
        return r;
    }

    // 1/f for f with invertible leading coefficient
    PuiseuxSeries reciprocal() const
    {
        if (a_.empty()) fail(ErrorKind::DivisionByZero, "reciprocal of zero series");
        long lead = a_.begin()->first;
        C clead = a_.begin()->second;
        C cinv = coeff_inverse(clead);
        // g = f * cinv * q^{-lead} = 1 + h, h with positive exponents
        Rational t = trunc_ - rat(2 * lead, d_);
        PuiseuxSeries r(t, d_);
        long bound = index_bound(t + rat(lead, d_), d_); // working bound for 1/g
        std::map<long, C> g;
        for (const auto& [m, c] : a_) g[m - lead] = c * cinv;
        std::map<long, C> inv;
        inv[0] = coeff_from_rational<C>(rat(1));
        // b_m = -sum_{0 < j <= m} g_j b_{m-j}, processed in increasing m;
        // every contribution to rhs[m] comes from an already-final b_{m-j}
        {
            std::map<long, C> rhs;
            for (const auto& [j, cj] : g) {
                if (j == 0) continue;
                if (j < bound) {
                    C neg = -cj;
                    auto it0 = rhs.find(j);
                    if (it0 == rhs.end())
                        rhs[j] = neg;
                    else
                        it0->second = it0->second + neg;
                }
            }
            while (!rhs.empty()) {
                auto it2 = rhs.begin();
                long m = it2->first;
                C bm = it2->second;
                rhs.erase(it2);
                if (m >= bound) break;
                if (coeff_is_zero(bm)) continue;
                inv[m] = bm;
                for (const auto& [j, cj] : g) {
                    if (j == 0) continue;
                    long mm = m + j;
                    if (mm >= bound) break;
                    C add = -(cj * bm);
                    auto it3 = rhs.find(mm);
                    if (it3 == rhs.end())
                        rhs[mm] = add;
                    else
                        it3->second = it3->second + add;
                }
            }
        }
        long obound = index_bound(t, d_);
        for (const auto& [m, c] : inv) {
            long mi = m - lead;
            if (mi >= obound) continue;
            C v = c * cinv;
            if (!coeff_is_zero(v)) r.a_[mi] = v;
        }
        return r;
    }

    PuiseuxSeries pow(long e) const
    {
        if (e == 0) return one(trunc_, d_);
        PuiseuxSeries base = e > 0 ? *this : reciprocal();
        unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
        PuiseuxSeries acc = base;
        --k;
        while (k) {
            acc = acc * base;
            --k;
        }
        return acc;
    }

    std::string str() const
    {
        if (a_.empty()) return "O(q^" + to_string(trunc_) + ")";
        std::ostringstream out;
        bool first = true;
        for (const auto& [m, c] : a_) {
            if (!first) out << " + ";
            first = false;
            out << "(" << coeff_str(c) << ")";
            if (m != 0) out << "*q^(" << to_string(rat(m, d_)) << ")";
        }
        out << " + O(q^" << to_string(trunc_) << ")";
        return out.str();
    }

    nlohmann::json to_json() const
    {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [m, c] : a_)
            terms.push_back({{"exponent", to_string(rat(m, d_))}, {"coeff", coeff_str(c)}});
        return {{"terms", terms}, {"trunc", to_string(trunc_)}};
    }

    // smallest index m with m/d >= t
    static long index_bound(const Rational& t, long d)
    {
        Rational td = t * d;
        mpz_class b;
        mpz_cdiv_q(b.get_mpz_t(), td.get_num().get_mpz_t(), td.get_den().get_mpz_t());
        return static_cast<long>(b.get_si());
    }

    void insert_add(long m, const C& c)
    {
        if (coeff_is_zero(c)) return;
        auto it = a_.find(m);
        if (it == a_.end()) {
            a_[m] = c;
        } else {
            it->second = it->second + c;
            if (coeff_is_zero(it->second)) a_.erase(it);
        }
    }

private:
    long d_;
    std::map<long, C> a_;
    Rational trunc_;
};

using QSeries = PuiseuxSeries<Rational>;
using CycSeries = PuiseuxSeries<Cyclotomic>;

// ---- operations ---------------------------------------------------------

// (coeff q^{a}; t_coeff q^{t})_n = prod_{i<n} (1 - coeff t_coeff^i q^{a+it});
// n = nullopt means the infinite product, truncated soundly. The usual
// (+-q^a; q^t)_n calls pass coeff = -+1.
template <class C>
PuiseuxSeries<C> pochhammer(const C& coeff, const Rational& a_exp, const C& t_coeff,
                            const Rational& t_exp, std::optional<long> n,
                            const Rational& trunc)
{
    long d = lcm_long(static_cast<long>(a_exp.get_den().get_si()),
                      static_cast<long>(t_exp.get_den().get_si()));
    if (!n.has_value()) {
        if (t_exp <= 0)
            fail(ErrorKind::NonTerminating, "infinite Pochhammer with nonpositive step");
        if (a_exp <= 0)
            fail(ErrorKind::NonTerminating, "infinite Pochhammer with nonpositive start");
    }
    PuiseuxSeries<C> acc = PuiseuxSeries<C>::one(trunc, d);
    C fc = coeff;
    Rational e = a_exp;
    for (long i = 0; !n.has_value() || i < *n; ++i) {
        if (!n.has_value() && e >= trunc) break; // further factors are 1 + O(q^trunc)
        PuiseuxSeries<C> factor =
            PuiseuxSeries<C>::one(trunc, d) - PuiseuxSeries<C>::monomial(fc, e, trunc);
        acc = acc * factor;
        e += t_exp;
        fc = fc * t_coeff;
    }
    return acc;
}

template <class C>
PuiseuxSeries<C> pochhammer(const C& coeff, const Rational& a_exp, const Rational& t_exp,
                            std::optional<long> n, const Rational& trunc)
{
    return pochhammer(coeff, a_exp, coeff_from_rational<C>(rat(1)), t_exp, n, trunc);
}

// exact coefficient-wise equality below upTo
template <class C>
bool series_equal(const PuiseuxSeries<C>& f, const PuiseuxSeries<C>& g, const Rational& upTo)
{
    if (f.trunc() < upTo || g.trunc() < upTo)
        fail(ErrorKind::InsufficientTruncation, "series_equal beyond truncation");
    long d = std::lcm(f.exp_denom(), g.exp_denom());
    auto ff = f.with_denom(d), gg = g.with_denom(d);
    long bound = PuiseuxSeries<C>::index_bound(upTo, d);
    auto it = ff.raw_terms().begin();
    auto jt = gg.raw_terms().begin();
    while (true) {
        while (it != ff.raw_terms().end() && it->first >= bound) it = ff.raw_terms().end();
        while (jt != gg.raw_terms().end() && jt->first >= bound) jt = gg.raw_terms().end();
        bool fe = it == ff.raw_terms().end();
        bool ge = jt == gg.raw_terms().end();
        if (fe && ge) return true;
        if (fe != ge) return false;
        if (it->first != jt->first || !(it->second == jt->second)) return false;
        ++it;
        ++jt;
    }
}

PuiseuxSeries<Cyclotomic> promote(const PuiseuxSeries<Rational>& f);

// coefficient at q^{m/d} multiplied by tau^m (substitution z -> z + h with
// tau the exact root e^{2 pi i h / d})
CycSeries twisted(const CycSeries& f, const Cyclotomic& tau);

// substitution z -> z + h on the exponent lattice (1/d)Z: exact phase twist
CycSeries translated(const CycSeries& f, const Rational& h);

// ---- eta quotients and theta series -------------------------------------

struct EtaQuotientSpec {
    // product of eta(scale * z)^exponent over factors, times prefactor
    std::vector<std::pair<Rational, int>> factors;
    Cyclotomic prefactor = Cyclotomic(1);
};

// q-expansion of eta(scale z) = q^{scale/24} (q^scale; q^scale)_inf
template <class C>
PuiseuxSeries<C> eta_factor(const Rational& scale, const Rational& trunc)
{
    auto prod = pochhammer<C>(coeff_from_rational<C>(rat(1)), scale, scale, std::nullopt,
                              trunc - scale / 24);
    return prod.shifted(scale / 24);
}

PuiseuxSeries<Cyclotomic> eta_expansion(const EtaQuotientSpec& spec, const Rational& trunc);
PuiseuxSeries<Rational> eta_quotient_rational(const std::vector<std::pair<Rational, int>>& factors,
                                              const Rational& trunc);

// eta(scale z + 1/2)
CycSeries eta_half_shift(const Rational& scale, const Rational& trunc);

// named expansions
QSeries theta1_series(const Rational& trunc);            // 1 + 2 sum (-1)^n q^{n^2}
QSeries F10_series(const Rational& trunc);               // sum q^{(2n+1)^2}
CycSeries theta2_series(const Rational& trunc);          // F10(q^{1/16})
CycSeries theta3_series(const Rational& trunc);          // zeta12^{-1} F10(zeta16 q^{1/16})
EtaQuotientSpec theta1_eta_spec();
EtaQuotientSpec theta2_eta_spec();
EtaQuotientSpec theta3_eta_alt_spec();                   // zeta48^{-1} eta(z/2) eta(2z) / eta(z)

// sqrt-theta: sum a(n) q^{n/d} -> sum sqrt(n/d) a(n) q^{n/d}, constant
// term annihilated; coefficients exact as SurdSum values
template <class C>
PuiseuxSeries<SurdSum<C>> half_derivative(const PuiseuxSeries<C>& f)
{
    PuiseuxSeries<SurdSum<C>> r(f.trunc(), f.exp_denom());
    long d = f.exp_denom();
    for (const auto& [m, c] : f.raw_terms()) {
        if (m == 0) continue;
        if (m < 0) fail(ErrorKind::Internal, "half-derivative of negative exponent");
        // sqrt(m/d) = sqrt(m d)/d
        SurdSum<C> factor = SurdSum<C>::radical(static_cast<unsigned long>(m * d),
                                                coeff_from_rational<C>(rat(1, d)));
        r.insert_add(m, factor * SurdSum<C>(c));
    }
    return r;
}

} // namespace qmf

#endif
