#include "qmf/cyclotomic.hpp"

#include <mutex>
#include <numeric>
#include <sstream>

#include "qmf/errors.hpp"

namespace qmf {

unsigned long euler_phi(unsigned long n)
{
    unsigned long result = n;
    unsigned long m = n;
    for (unsigned long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

namespace {

// exact division of polynomials over Q; remainder must come out zero
std::vector<Rational> poly_divide_exact(std::vector<Rational> num,
                                        const std::vector<Rational>& den)
{
    long dn = static_cast<long>(num.size()) - 1;
    long dd = static_cast<long>(den.size()) - 1;
    if (dd < 0 || den[dd] == 0) fail(ErrorKind::Internal, "bad divisor");
    std::vector<Rational> quot(dn - dd + 1, Rational(0));
    for (long i = dn; i >= dd; --i) {
        if (num[i] == 0) continue;
        Rational f = num[i] / den[dd];
        quot[i - dd] = f;
        for (long j = 0; j <= dd; ++j) num[i - dd + j] -= f * den[j];
    }
    for (const auto& c : num)
        if (c != 0) fail(ErrorKind::Internal, "inexact cyclotomic division");
    return quot;
}

std::mutex g_phi_mutex;
std::map<unsigned long, std::vector<Rational>> g_phi_cache;

const std::vector<Rational>& cyclotomic_poly_locked(unsigned long n)
{
    auto it = g_phi_cache.find(n);
    if (it != g_phi_cache.end()) return it->second;

    // x^n - 1
    std::vector<Rational> f(n + 1, Rational(0));
    f[0] = -1;
    f[n] = 1;
    for (unsigned long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        f = poly_divide_exact(std::move(f), cyclotomic_poly_locked(d));
    }
    return g_phi_cache.emplace(n, std::move(f)).first->second;
}

} // namespace

const std::vector<Rational>& cyclotomic_poly(unsigned long n)
{
    if (n == 0) fail(ErrorKind::Internal, "Phi_0 undefined");
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    return cyclotomic_poly_locked(n);
}

Cyclotomic::Cyclotomic(const Rational& r) : n_(1)
{
    if (r != 0) c_[0] = r;
}

void Cyclotomic::reduce_(std::vector<Rational>& dense)
{
    const auto& phi = cyclotomic_poly(n_);
    long dd = static_cast<long>(phi.size()) - 1;
    for (long i = static_cast<long>(dense.size()) - 1; i >= dd; --i) {
        if (dense[i] == 0) continue;
        Rational f = dense[i]; // phi is monic
        for (long j = 0; j <= dd; ++j)
            if (phi[j] != 0) dense[i - dd + j] -= f * phi[j];
    }
    c_.clear();
    for (long i = 0; i < dd && i < static_cast<long>(dense.size()); ++i)
        if (dense[i] != 0) c_[static_cast<unsigned long>(i)] = dense[i];
}

Cyclotomic Cyclotomic::root_of_unity(unsigned long k, long a)
{
    if (k == 0) fail(ErrorKind::Internal, "root_of_unity with k = 0");
    Cyclotomic r;
    r.n_ = k;
    long e = a % static_cast<long>(k);
    if (e < 0) e += static_cast<long>(k);
    std::vector<Rational> dense(k, Rational(0));
    dense[static_cast<unsigned long>(e)] = 1;
    r.reduce_(dense);
    return r;
}

Cyclotomic Cyclotomic::from_terms(unsigned long n, const std::map<unsigned long, Rational>& terms)
{
    Cyclotomic r;
    r.n_ = n;
    std::vector<Rational> dense(n, Rational(0));
    for (const auto& [j, c] : terms) dense.at(j % n) += c;
    r.reduce_(dense);
    return r;
}

bool Cyclotomic::is_rational() const
{
    return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0);
}

Rational Cyclotomic::rational_value() const
{
    if (c_.empty()) return Rational(0);
    if (!is_rational()) fail(ErrorKind::Internal, "not a rational value: " + str());
    return c_.begin()->second;
}

Cyclotomic Cyclotomic::lifted_to(unsigned long m) const
{
    if (m % n_ != 0) fail(ErrorKind::Internal, "lift target not a multiple");
    if (m == n_) return *this;
    Cyclotomic r;
    r.n_ = m;
    unsigned long scale = m / n_;
    std::vector<Rational> dense(m, Rational(0));
    for (const auto& [j, c] : c_) dense[j * scale] = c;
    r.reduce_(dense);
    return r;
}

namespace {
unsigned long common_modulus(const Cyclotomic& a, const Cyclotomic& b)
{
    return std::lcm(a.modulus(), b.modulus());
}
} // namespace

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b)
{
    unsigned long m = common_modulus(a, b);
    Cyclotomic x = a.lifted_to(m);
    Cyclotomic y = b.lifted_to(m);
    for (const auto& [j, c] : y.c_) {
        auto it = x.c_.find(j);
        if (it == x.c_.end()) {
            x.c_[j] = c;
        } else {
            it->second += c;
            if (it->second == 0) x.c_.erase(it);
        }
    }
    return x;
}

Cyclotomic Cyclotomic::operator-() const
{
    Cyclotomic r = *this;
    for (auto& [j, c] : r.c_) c = -c;
    return r;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b)
{
    return a + (-b);
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b)
{
    unsigned long m = common_modulus(a, b);
    Cyclotomic x = a.lifted_to(m);
    Cyclotomic y = b.lifted_to(m);
    Cyclotomic r;
    r.n_ = m;
    if (x.c_.empty() || y.c_.empty()) return r;
    // convolve in the group ring Q[x]/(x^m - 1), then reduce mod Phi_m
    std::vector<Rational> dense(m, Rational(0));
    for (const auto& [i, ci] : x.c_)
        for (const auto& [j, cj] : y.c_)
            dense[(i + j) % m] += ci * cj;
    r.reduce_(dense);
    return r;
}

Cyclotomic operator*(const Cyclotomic& a, const Rational& s)
{
    Cyclotomic r = a;
    if (s == 0) {
        r.c_.clear();
        return r;
    }
    for (auto& [j, c] : r.c_) c *= s;
    return r;
}

Cyclotomic Cyclotomic::pow(long e) const
{
    if (e == 0) return Cyclotomic(rat(1));
    if (e < 0) return inverse().pow(-e);
    Cyclotomic base = *this;
    Cyclotomic acc(rat(1));
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc *= base;
        if (k >>= 1) base *= base;
    }
    return acc;
}

Cyclotomic Cyclotomic::inverse() const
{
    if (is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero cyclotomic");
    if (is_rational()) return Cyclotomic(1 / rational_value());

    // extended Euclid in Q[x]: s * a + t * Phi_N = gcd; Phi_N irreducible,
    // so gcd is a nonzero constant and s/gcd is the inverse of a mod Phi_N
    using Poly = std::vector<Rational>;
    auto degree = [](const Poly& p) -> long {
        for (long i = static_cast<long>(p.size()) - 1; i >= 0; --i)
            if (p[i] != 0) return i;
        return -1;
    };
    Poly r0 = cyclotomic_poly(n_);
    Poly r1(euler_phi(n_), Rational(0));
    for (const auto& [j, c] : c_) r1[j] = c;
    Poly s0{Rational(0)}, s1{Rational(1)};

    while (true) {
        long d1 = degree(r1);
        if (d1 < 0) fail(ErrorKind::Internal, "cyclotomic gcd collapsed");
        if (d1 == 0) {
            Cyclotomic inv;
            inv.n_ = n_;
            Rational g = r1[0];
            std::vector<Rational> dense(n_, Rational(0));
            for (size_t i = 0; i < s1.size() && i < dense.size(); ++i) dense[i] = s1[i] / g;
            inv.reduce_(dense);
            return inv;
        }
        long d0 = degree(r0);
        // r0 = q r1 + r; s0 -= q s1
        while (d0 >= d1) {
            Rational f = r0[d0] / r1[d1];
            for (long j = 0; j <= d1; ++j)
                if (r1[j] != 0) r0[d0 - d1 + j] -= f * r1[j];
            if (s0.size() < s1.size() + static_cast<size_t>(d0 - d1))
                s0.resize(s1.size() + static_cast<size_t>(d0 - d1), Rational(0));
            for (size_t j = 0; j < s1.size(); ++j)
                if (s1[j] != 0) s0[j + static_cast<size_t>(d0 - d1)] -= f * s1[j];
            d0 = degree(r0);
        }
        std::swap(r0, r1);
        std::swap(s0, s1);
    }
}

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b)
{
    if (b.is_zero()) fail(ErrorKind::DivisionByZero, "cyclotomic division by zero");
    if (b.is_rational()) return a * (1 / b.rational_value());
    unsigned long m = common_modulus(a, b);
    return a.lifted_to(m) * b.lifted_to(m).inverse();
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b)
{
    unsigned long m = common_modulus(a, b);
    return a.lifted_to(m).c_ == b.lifted_to(m).c_;
}

Cyclotomic Cyclotomic::conjugated() const
{
    Cyclotomic r;
    r.n_ = n_;
    std::vector<Rational> dense(n_, Rational(0));
    for (const auto& [j, c] : c_) dense[j == 0 ? 0 : n_ - j] = c;
    r.reduce_(dense);
    return r;
}

Complex Cyclotomic::embed(long prec) const
{
    long p = prec + 16;
    Complex acc = Complex::zero(p);
    Real two_pi = Real::pi(p) * 2;
    for (const auto& [j, c] : c_) {
        Real coeff = Real::of(c, p);
        if (j == 0) {
            acc += Complex(coeff, Real::of(0L, p));
            continue;
        }
        Real angle = two_pi * Real::of(rat(static_cast<long>(j), static_cast<long>(n_)), p);
        acc += Complex(coeff * cos(angle), coeff * sin(angle));
    }
    return acc;
}

std::string Cyclotomic::str() const
{
    if (c_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [j, c] : c_) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (j == 0) {
            out << to_string(a);
        } else {
            if (a != 1) out << to_string(a) << "*";
            out << "z" << n_;
            if (j > 1) out << "^" << j;
        }
    }
    return out.str();
}

nlohmann::json Cyclotomic::to_json() const
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [j, c] : c_)
        coeffs.push_back({j, to_string(c)});
    return {{"field", n_}, {"coeffs", coeffs}};
}

Cyclotomic Cyclotomic::from_json(const nlohmann::json& j)
{
    Cyclotomic r;
    r.n_ = j.at("field").get<unsigned long>();
    std::vector<Rational> dense(r.n_, Rational(0));
    for (const auto& term : j.at("coeffs"))
        dense.at(term.at(0).get<unsigned long>()) = rat_from_string(term.at(1).get<std::string>());
    r.reduce_(dense);
    return r;
}

Cyclotomic binomial_unit_inverse(unsigned long n, long m, int sign)
{
    long e = m % static_cast<long>(n);
    if (e < 0) e += static_cast<long>(n);
    unsigned long em = static_cast<unsigned long>(e);
    unsigned long order = n / std::gcd(n, em); // order of w = zeta_n^m

    if (sign > 0) {
        // 1 + w = 1 - (-w); for even order -w = w^{1+order/2} shifts inside
        // the group, for odd order use the alternating geometric sum
        if (order % 2 == 0) {
            unsigned long half = (order / 2) * (n / order);
            return binomial_unit_inverse(n, static_cast<long>((em + half) % n), -1);
        }
        std::map<unsigned long, Rational> terms;
        for (unsigned long j = 0; j < order; ++j)
            terms[(em * j) % n] += rat(j % 2 == 0 ? 1 : -1, 2);
        return Cyclotomic::from_terms(n, terms);
    }

    // 1 - w
    if (order == 1) fail(ErrorKind::DivisionByZero, "binomial 1 - 1 vanishes");
    std::map<unsigned long, Rational> terms;
    for (unsigned long j = 1; j < order; ++j)
        terms[(em * j) % n] += rat(-static_cast<long>(j), static_cast<long>(order));
    return Cyclotomic::from_terms(n, terms);
}

} // namespace qmf
