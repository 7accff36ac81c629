#include "qmf/lfunctions.hpp"

#include <mutex>

namespace qmf {

PeriodicSequence PeriodicSequence::of(std::vector<Cyclotomic> vals)
{
    PeriodicSequence s;
    s.period = vals.size();
    s.values = std::move(vals);
    Cyclotomic sum;
    for (const auto& v : s.values) sum += v;
    s.meanValueZero = sum.is_zero();
    return s;
}

PeriodicSequence PeriodicSequence::doubled() const
{
    std::vector<Cyclotomic> vals = values;
    vals.insert(vals.end(), values.begin(), values.end());
    return of(std::move(vals));
}

PeriodicSequence chi_L1(const RationalPoint& zeta)
{
    if (zeta.k % 2 == 0)
        fail(ErrorKind::OutsideDomain, "chi_L1 needs an odd-order root of unity");
    unsigned long k = zeta.k;
    unsigned long c = 2 * k;
    // -zeta = e^{2 pi i (2a + k) / (2k)}
    long top = 2 * zeta.a + static_cast<long>(k);
    std::vector<Cyclotomic> vals;
    vals.reserve(c);
    for (unsigned long n = 1; n <= c; ++n) {
        long e = static_cast<long>((static_cast<unsigned long long>(n) * n) % c);
        vals.push_back(Cyclotomic::root_of_unity(c, top * e));
    }
    auto chi = PeriodicSequence::of(std::move(vals));
    if (!chi.meanValueZero)
        fail(ErrorKind::NotMeanValueZero, "chi_L1 period sum is nonzero at " + zeta.str());
    return chi;
}

PeriodicSequence chi_L2(const RationalPoint& zeta)
{
    if (zeta.k % 2 != 0)
        fail(ErrorKind::OutsideDomain, "chi_L2 needs an even-order root of unity");
    unsigned long c = 8 * zeta.k;
    std::vector<Cyclotomic> vals;
    vals.reserve(c);
    for (unsigned long n = 1; n <= c; ++n) {
        if (n % 2 == 0) {
            vals.emplace_back();
            continue;
        }
        unsigned long e = static_cast<unsigned long>(
            (static_cast<unsigned long long>(n) * n) % c);
        vals.push_back(Cyclotomic::root_of_unity(c, zeta.a * static_cast<long>(e)));
    }
    auto chi = PeriodicSequence::of(std::move(vals));
    if (!chi.meanValueZero)
        fail(ErrorKind::NotMeanValueZero, "chi_L2 period sum is nonzero at " + zeta.str());
    return chi;
}

namespace {
std::mutex g_bernoulli_mutex;
std::vector<Rational> g_bernoulli_numbers; // B_0, B_1(-1/2), B_2, ...
std::map<unsigned long, std::vector<Rational>> g_bernoulli_polys;

void extend_bernoulli_numbers(unsigned long m)
{
    if (g_bernoulli_numbers.empty()) g_bernoulli_numbers.push_back(rat(1));
    while (g_bernoulli_numbers.size() <= m) {
        unsigned long n = g_bernoulli_numbers.size();
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        Rational acc(0);
        Rational binom(1); // C(n+1, j)
        for (unsigned long j = 0; j < n; ++j) {
            acc += binom * g_bernoulli_numbers[j];
            binom *= rat(static_cast<long>(n + 1 - j), static_cast<long>(j + 1));
        }
        g_bernoulli_numbers.push_back(-acc / binom);
    }
}
} // namespace

const std::vector<Rational>& bernoulli_polynomial(unsigned long m)
{
    std::lock_guard<std::mutex> lock(g_bernoulli_mutex);
    auto it = g_bernoulli_polys.find(m);
    if (it != g_bernoulli_polys.end()) return it->second;
    extend_bernoulli_numbers(m);
    // B_m(x) = sum_k C(m,k) B_k x^{m-k}
    std::vector<Rational> coeffs(m + 1, Rational(0));
    Rational binom(1);
    for (unsigned long k = 0; k <= m; ++k) {
        coeffs[m - k] = binom * g_bernoulli_numbers[k];
        if (k < m) binom *= rat(static_cast<long>(m - k), static_cast<long>(k + 1));
    }
    return g_bernoulli_polys.emplace(m, std::move(coeffs)).first->second;
}

namespace {
Rational poly_eval(const std::vector<Rational>& coeffs, const Rational& x)
{
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}
} // namespace

Cyclotomic L_value(const PeriodicSequence& chi, unsigned long n)
{
    if (!chi.meanValueZero)
        fail(ErrorKind::NotMeanValueZero, "L_value requires a mean-value-zero sequence");
    unsigned long c = chi.period;
    const auto& bpoly = bernoulli_polynomial(n + 1);
    Cyclotomic acc;
    for (unsigned long a = 1; a <= c; ++a) {
        if (chi.values[a - 1].is_zero()) continue;
        acc += chi.values[a - 1] *
               poly_eval(bpoly, rat(static_cast<long>(a), static_cast<long>(c)));
    }
    Rational scale = -rat(1, static_cast<long>(n + 1));
    for (unsigned long i = 0; i < n; ++i) scale *= rat(static_cast<long>(c));
    return acc * scale;
}

HValue H_eval(HWhich which, double t, const RationalPoint& zeta, long prec)
{
    if (t <= 0) fail(ErrorKind::Internal, "H_eval needs t > 0");
    if (which == HWhich::H9 && zeta.k % 2 == 0)
        fail(ErrorKind::OutsideDomain, "H9 needs odd order");
    if (which != HWhich::H9 && zeta.k % 2 != 0)
        fail(ErrorKind::OutsideDomain, "H10 needs even order");

    long p = prec + 16;
    const unsigned long term_cap = 4'000'000;
    // ratio factors die like e^{-jt}; stop once they are numerically 1
    double need = (static_cast<double>(p) + 8.0) * 0.6931471805599453 / t;
    unsigned long cutoff = static_cast<unsigned long>(need) + 2;
    if (cutoff > term_cap)
        fail(ErrorKind::NonConvergent, "H_eval term cap exceeded at this t/precision");

    Real tr = Real::of(t, p);
    // zeta^j e^{-s t} realized via e^{2 pi i j x - s t}
    auto unit = [&](long j, long s) {
        Real mag = exp(tr * (-s));
        Rational jx = zeta.x() * j;
        Real ph = Real::pi(p) * 2 * Real::of(jx, p);
        return Complex(mag * cos(ph), mag * sin(ph));
    };

    std::vector<Complex> ratios;
    ratios.reserve(cutoff);
    Complex first = Complex::one(p); // P_0
    for (unsigned long j = 1; j <= cutoff; ++j) {
        long lj = static_cast<long>(j);
        Complex num, den;
        switch (which) {
            case HWhich::H9:
                num = Complex::one(p) - unit(lj, lj);
                den = Complex::one(p) + unit(lj, lj);
                break;
            case HWhich::H10:
                // (Q^2;Q^2)_n / (Q;Q^2)_{n+1}, Q = zeta e^{-t}
                num = Complex::one(p) - unit(2 * lj, 2 * lj);
                den = Complex::one(p) - unit(2 * lj + 1, 2 * lj + 1);
                break;
            case HWhich::H10Printed:
                num = Complex::one(p) - unit(lj, 2 * lj);
                den = Complex::one(p) - unit(lj, 2 * lj + 1);
                break;
        }
        ratios.push_back(num / den);
    }
    if (which == HWhich::H10) {
        // the denominator's j = 0 factor 1 - Q belongs to every term
        first = Complex::one(p) / (Complex::one(p) - unit(1, 1));
    }

    Complex pinf = first;
    for (const auto& r : ratios) pinf *= r;

    Complex partial = first;
    Complex sum = first - pinf; // n = 0 term
    for (unsigned long n = 1; n <= cutoff; ++n) {
        partial *= ratios[n - 1];
        sum += partial - pinf;
    }
    // the truncated drift-corrected tail is geometric in e^{-t}
    Real tail = abs(partial - pinf) / (Real::of(1L, p) - exp(-tr));

    Complex value(p);
    if (which == HWhich::H9) {
        value = sum * Real::of(rat(-1, 4), p);
        tail = tail / 4;
    } else {
        // -2 (zeta e^{-t})^{1/8} with (zeta e^{-t})^{1/8} := e^{2 pi i x/8} e^{-t/8}
        Real mag = exp(tr / (-8));
        Rational x8 = zeta.x() / 8;
        Real ph = Real::pi(p) * 2 * Real::of(x8, p);
        Complex pre = Complex(mag * cos(ph), mag * sin(ph)) * Real::of(-2L, p);
        value = sum * pre;
        tail = tail * 2;
    }
    return HValue{value, tail, cutoff + 1};
}

Cyclotomic gauss_sum(long a, long b, unsigned long c)
{
    if (c == 0) fail(ErrorKind::Internal, "gauss_sum needs c >= 1");
    std::map<unsigned long, Rational> terms;
    for (unsigned long n = 0; n < c; ++n) {
        long long e = (static_cast<long long>(a) * static_cast<long long>(n) * n +
                       static_cast<long long>(b) * n) %
                      static_cast<long long>(c);
        if (e < 0) e += c;
        terms[static_cast<unsigned long>(e)] += 1;
    }
    return Cyclotomic::from_terms(c, terms);
}

Complex heat_sum(const PeriodicSequence& chi, const Real& t, long prec)
{
    long p = prec + 16;
    // term magnitude n e^{-n^2 t} peaks at n = sqrt(1/(2t)) and decays past
    // it; stop once past the peak and below threshold, with the tail
    // bounded by a geometric series in e^{-(2N+1)t}
    Real threshold = Real::pow2(-p - 8, p);
    double td = t.to_double();
    unsigned long peak = static_cast<unsigned long>(std::sqrt(1.0 / (2.0 * td))) + 1;
    std::vector<Complex> embeds;
    embeds.reserve(chi.period);
    for (const auto& v : chi.values) embeds.push_back(v.embed(p));

    Complex acc = Complex::zero(p);
    for (unsigned long n = 1;; ++n) {
        const Complex& cv = embeds[(n - 1) % chi.period];
        Real w = exp(t * (-static_cast<long>(n * n))) * static_cast<long>(n);
        if (!cv.is_zero()) acc += cv * w;
        if (n > peak && w < threshold) break;
        if (n > 100'000'000ul) fail(ErrorKind::NonConvergent, "heat_sum term cap");
    }
    return acc;
}

namespace {

// solve the square complex system M x = b (M real Vandermonde) in place
std::vector<Complex> solve_vandermonde(const std::vector<double>& ts,
                                       const std::vector<Complex>& rhs,
                                       unsigned long m, long prec)
{
    unsigned long npts = ts.size();
    std::vector<std::vector<Real>> M(npts);
    for (unsigned long i = 0; i < npts; ++i) {
        Real ti = Real::of(ts[i], prec);
        Real pw = Real::of(1L, prec);
        for (unsigned long j = 0; j <= m; ++j) {
            M[i].push_back(pw);
            pw *= ti;
        }
    }
    // least squares not needed: require npts == m+1
    if (npts != m + 1) fail(ErrorKind::FitUnstable, "grid size must be maxOrder + 1");
    std::vector<Complex> b = rhs;
    // Gaussian elimination with partial pivoting
    std::vector<unsigned long> rows(npts);
    for (unsigned long i = 0; i < npts; ++i) rows[i] = i;
    for (unsigned long col = 0; col <= m; ++col) {
        unsigned long best = col;
        for (unsigned long r = col; r < npts; ++r)
            if (abs(M[rows[r]][col]) > abs(M[rows[best]][col])) best = r;
        std::swap(rows[col], rows[best]);
        const Real& piv = M[rows[col]][col];
        if (piv.is_zero()) fail(ErrorKind::FitUnstable, "singular fit matrix");
        for (unsigned long r = col + 1; r < npts; ++r) {
            Real f = M[rows[r]][col] / piv;
            if (f.is_zero()) continue;
            for (unsigned long j = col; j <= m; ++j) M[rows[r]][j] -= f * M[rows[col]][j];
            b[rows[r]] -= b[rows[col]] * f;
        }
    }
    std::vector<Complex> x(m + 1, Complex::zero(prec));
    for (long col = static_cast<long>(m); col >= 0; --col) {
        Complex acc = b[rows[col]];
        for (unsigned long j = col + 1; j <= m; ++j)
            acc -= x[j] * M[rows[col]][j];
        x[col] = acc / M[rows[col]][col];
    }
    return x;
}

} // namespace

AsymptoticReport asymptotic_check(const PeriodicSequence& chi,
                                  const std::vector<double>& t_grid,
                                  unsigned long maxOrder, long prec)
{
    if (!chi.meanValueZero)
        fail(ErrorKind::NotMeanValueZero, "asymptotic_check requires mean value zero");
    if (t_grid.size() < maxOrder + 1)
        fail(ErrorKind::FitUnstable, "need at least maxOrder+1 grid points");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] >= t_grid[i - 1])
            fail(ErrorKind::FitUnstable, "t grid must decrease");

    long p = prec + 16;
    std::vector<double> ts(t_grid.begin(), t_grid.begin() + maxOrder + 1);
    std::vector<Complex> h;
    for (double t : ts) h.push_back(heat_sum(chi, Real::of(t, p), p));

    auto fitted = solve_vandermonde(ts, h, maxOrder, p);

    AsymptoticReport rep;
    Rational factorial(1);
    for (unsigned long j = 0; j <= maxOrder; ++j) {
        if (j > 0) factorial *= rat(static_cast<long>(j));
        Cyclotomic lv = L_value(chi, 2 * j + 1);
        Rational coeff = rat(j % 2 ? -1 : 1) / factorial;
        Complex exact = lv.embed(p) * Real::of(coeff, p);
        double abs_err = abs(fitted[j] - exact).to_double();
        double rel = abs_err / std::max(1e-300, abs(exact).to_double());
        rep.orders.push_back(AsymptoticOrder{j, fitted[j], exact, abs_err, rel});
    }

    // successive subtraction at the smallest grid point using exact values
    Real tmin = Real::of(t_grid.back(), p);
    Complex hmin = heat_sum(chi, tmin, p);
    Complex rem = hmin;
    Real tpow = Real::of(1L, p);
    for (unsigned long j = 0; j <= maxOrder; ++j) {
        rep.subtraction.push_back(rem / tpow);
        rem -= rep.orders[j].exactValue * tpow;
        tpow *= tmin;
    }
    return rep;
}

nlohmann::json AsymptoticReport::to_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& o : orders) {
        arr.push_back({{"order", o.order},
                       {"fitted", {o.fitted.re().str(20), o.fitted.im().str(20)}},
                       {"exact", {o.exactValue.re().str(20), o.exactValue.im().str(20)}},
                       {"absError", o.absError},
                       {"relError", o.relError}});
    }
    return {{"orders", arr}};
}

} // namespace qmf
