// Acceptance harness: one line per criterion, nonzero exit when any fails.
// Each check pins its tolerance in code; failures print the measured values
// and, where applicable, the exact mathematical discrepancy behind them.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "qmf/eichler.hpp"
#include "qmf/lfunctions.hpp"
#include "qmf/modular.hpp"

using namespace qmf;

namespace {

int g_failures = 0;

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void report(int criterion, bool pass, const std::string& summary,
            const std::vector<std::string>& detail = {})
{
    std::printf("criterion %d: %s  %s\n", criterion, pass ? "PASS" : "FAIL",
                summary.c_str());
    for (const auto& d : detail) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

Cyclotomic zeta(unsigned long k, long a = 1) { return Cyclotomic::root_of_unity(k, a); }

Cyclotomic table_exact(unsigned long k)
{
    switch (k) {
        case 3: return Cyclotomic(3) - zeta(3) * rat(2);
        case 5:
            return Cyclotomic(3) - zeta(5) * rat(8) - zeta(5, 2) * rat(2) - zeta(5, 3) * rat(2);
        case 7:
            return Cyclotomic(7) - zeta(7) * rat(10) - zeta(7, 2) * rat(2) + zeta(7, 4) * rat(6);
        case 9: return Cyclotomic(3) - zeta(9) * rat(16) + zeta(9, 4) * rat(8);
        default: fail(ErrorKind::Internal, "no table row");
    }
}

// 1. table reproduction at 128 bits, each row under 60 s
void criterion1()
{
    QuadratureConfig cfg; // defaults: eps 1e-9, upper 1e9, relTol 1e-8, 128 bits
    bool pass = true;
    std::vector<std::string> detail;
    for (unsigned long k : {3ul, 5ul, 7ul, 9ul}) {
        RationalPoint x = RationalPoint::of(1, static_cast<long>(k));
        auto v = strange_eval(Component::Theta1, x);
        bool exact_ok = (v.exact == table_exact(k));
        long p = cfg.precision + 16;
        Real pi = Real::pi(p);
        Complex expected = v.exact.embed(cfg.precision) * Complex(-pi, pi);
        auto om = omega(x, cfg);
        double diff = abs(om.value - expected).to_double();
        bool row_ok = exact_ok && diff < 5e-3 && om.seconds < 60.0;
        pass = pass && row_ok;
        std::ostringstream line;
        line << "k=" << k << ": exact " << (exact_ok ? "ok" : "MISMATCH") << ", |Omega - pi i(1+i) phi1| = "
             << diff << ", " << om.seconds << " s";
        detail.push_back(line.str());
    }
    report(1, pass, "table rows k in {3,5,7,9}: exact values and integrals within 5e-3",
           detail);
}

// 2. theorem 1(1) exact inversion plus the q-series comparison
void criterion2()
{
    double t0 = omp_get_wtime();
    bool exact_ok = true;
    for (long k = 1; k <= 15; k += 2) {
        for (long a = 1; a < k || (k == 1 && a == 1); ++a) {
            if (std::gcd(a, k) != 1) continue;
            exact_ok =
                exact_ok && (strange_eval(Component::Theta1, RationalPoint::of(-a, k)).exact ==
                             g1_exact(RationalPoint::of(a, k)));
            exact_ok = exact_ok && (g1_fine_exact(RationalPoint::of(a, k)) ==
                                    g1_exact(RationalPoint::of(a, k)));
        }
    }

    Rational upTo = rat(30);
    auto g1 = g1_series(upTo + 1);
    auto fine = g1_fine_series(upTo + 1);
    bool series_ok = series_equal(g1, fine, upTo);
    double ttotal = omp_get_wtime() - t0;

    std::vector<std::string> detail;
    detail.push_back(std::string("exact values at -a/k, odd k <= 15: ") +
                     (exact_ok ? "all equal" : "MISMATCH"));
    detail.push_back(std::string("q-series agreement to exponent 30: ") +
                     (series_ok ? "equal" : "NOT EQUAL"));
    if (!series_ok) {
        // the two regularizations differ by (1/2) theta1(q), supported on
        // square exponents; that function vanishes to infinite order at
        // every root of unity, which is why all exact evaluations above agree
        auto gap = fine - g1;
        auto half_theta = theta1_series(upTo + 1).scaled(rat(1, 2));
        bool identified = series_equal(gap, half_theta, upTo);
        detail.push_back(std::string("difference (fine - paired) equals theta1(q)/2 exactly: ") +
                         (identified ? "confirmed to exponent 30" : "NO"));
        detail.push_back("first differing coefficients at exponents 0, 1, 4, 9, 16, 25");
    }
    detail.push_back("runtime " + sci(ttotal) + " s (budget 10 s)");
    report(2, exact_ok && series_ok && ttotal < 10.0,
           "theorem 1(1): exact inversion identity and Fine-form series agreement", detail);
}

// 3. translation rows exact for 20 sample rationals
void criterion3()
{
    bool pass = true;
    int count = 0;
    // row 1 at odd order
    for (auto [a, k] : std::initializer_list<std::pair<long, long>>{
             {0, 1}, {1, 3}, {2, 3}, {1, 5}, {3, 5}, {1, 7}, {1, 9}, {2, 9}, {1, 11}, {1, 13}}) {
        RationalPoint x = RationalPoint::of(a, k);
        pass = pass && (strange_eval(Component::Theta1, x.translated(1)).exact ==
                        strange_eval(Component::Theta1, x).exact);
        ++count;
    }
    // rows 2-3 at even order
    for (auto [a, k] : std::initializer_list<std::pair<long, long>>{
             {1, 2}, {1, 4}, {3, 4}, {1, 6}, {5, 6}, {1, 8}, {3, 8}, {1, 10}, {3, 10}, {1, 12}}) {
        RationalPoint x = RationalPoint::of(a, k);
        pass = pass && (strange_eval(Component::Theta2, x.translated(1)).exact ==
                        zeta(12) * strange_eval(Component::Theta3, x).exact);
        pass = pass && (strange_eval(Component::Theta3, x.translated(1)).exact ==
                        zeta(24) * strange_eval(Component::Theta2, x).exact);
        ++count;
    }
    report(3, pass,
           "translation rows exact as cyclotomic identities at " + std::to_string(count) +
               " sample rationals");
}

// 4. S rows numeric with the normalization constants recorded
void criterion4()
{
    QuadratureConfig cfg; // defaults
    bool pass = true;
    std::vector<std::string> detail;
    for (long k : {3L, 5L, 7L}) {
        auto rep = verify_quantum_transform(RationalPoint::of(1, k), cfg);
        double worst = 0;
        int applicable = 0;
        for (const auto& row : rep.rows) {
            if (row.row <= 3 || row.status != "OK") continue;
            ++applicable;
            worst = std::max(worst, row.residual);
        }
        bool ok = applicable == 2 && worst < 1e-3;
        pass = pass && ok;
        std::ostringstream line;
        line << "x = 1/" << k << ": " << applicable << " applicable S rows, max residual "
             << worst;
        if (rep.lambda1 && rep.lambda2)
            line << ", normalization lambda = (" << rep.lambda1->str(8) << ", "
                 << rep.lambda2->str(8) << ")";
        detail.push_back(line.str());
    }
    report(4, pass, "S-transformation rows residual < 1e-3 at x in {1/3, 1/5, 1/7}", detail);
}

// 5. modularity of H at 128 bits plus the eta identity
void criterion5()
{
    long prec = 128;
    std::mt19937 rng(20240809);
    std::uniform_real_distribution<double> dre(-0.6, 0.6), dim(0.3, 1.5);
    bool pass = true;
    double worst_t = 0, worst_s = 0, worst_eta = 0;
    for (int i = 0; i < 10; ++i) {
        Complex z = Complex::of(dre(rng), dim(rng), prec);
        auto res = verify_transformations(z, prec);
        worst_t = std::max(worst_t, res.t_residual.to_double());
        worst_s = std::max(worst_s, res.s_residual.to_double());

        Complex half = Complex::of(0.5, 0.0, prec);
        Complex lhs = eta(z + half, prec) * eta(z, prec) * eta(z * Real::of(4L, prec), prec);
        Complex e2 = eta(z * Real::of(2L, prec), prec);
        Complex rhs = Cyclotomic::root_of_unity(48, 1).embed(prec) * e2 * e2 * e2;
        worst_eta = std::max(worst_eta, abs(lhs - rhs).to_double());
    }
    pass = worst_t < 1e-20 && worst_s < 1e-20 && worst_eta < 1e-20;

    Rational tr = rat(10);
    bool symbolic = series_equal(
        eta_half_shift(rat(1), tr),
        eta_expansion(EtaQuotientSpec{{{rat(2), 3}, {rat(1), -1}, {rat(4), -1}},
                                      Cyclotomic::root_of_unity(48, 1)},
                      tr),
        tr);
    pass = pass && symbolic;
    report(5, pass, "H transformation and eta identity residuals < 1e-20 at 128 bits",
           {"max T residual " + sci(worst_t),
            "max S residual " + sci(worst_s),
            "max eta identity residual " + sci(worst_eta),
            std::string("symbolic eta identity to q^10: ") + (symbolic ? "equal" : "NOT EQUAL")});
}

// 6. corollary asymptotics: residual scaling and heat-sum coefficients
void criterion6()
{
    long prec = 160;
    bool pass = true;
    std::vector<std::string> detail;

    auto run_ratio = [&](HWhich which, const RationalPoint& x, double t1) {
        auto chi = which == HWhich::H9 ? chi_L1(x) : chi_L2(x);
        auto expansion = [&](double t) {
            Complex acc = Complex::zero(prec);
            Rational fact(1);
            for (unsigned long n = 0; n <= 3; ++n) {
                if (n) fact *= rat(static_cast<long>(n));
                Rational coeff = rat(n % 2 ? -1 : 1) / fact;
                if (which != HWhich::H9)
                    for (unsigned long i = 0; i < n; ++i) coeff /= 8;
                Real tp = Real::of(1L, prec);
                for (unsigned long i = 0; i < n; ++i) tp *= Real::of(t, prec);
                acc += L_value(chi, 2 * n + 1).embed(prec) * (Real::of(coeff, prec) * tp);
            }
            return acc;
        };
        double r1 = abs(H_eval(which, t1, x, prec).value - expansion(t1)).to_double();
        double r2 = abs(H_eval(which, t1 / 2, x, prec).value - expansion(t1 / 2)).to_double();
        return r1 / r2;
    };

    // the stated grid starts at t = 0.1
    double ratio9 = run_ratio(HWhich::H9, RationalPoint::of(1, 3), 0.1);
    double ratio10 = run_ratio(HWhich::H10, RationalPoint::of(1, 2), 0.1);
    bool ok9 = std::abs(ratio9 - 16.0) <= 3.2;
    bool ok10 = std::abs(ratio10 - 16.0) <= 3.2;
    detail.push_back("H9(zeta3) halving ratio from t=0.1: " + sci(ratio9) +
                     (ok9 ? "" : "  [outside 16 +- 20%]"));
    detail.push_back("H10(-1) halving ratio from t=0.1: " + sci(ratio10) +
                     (ok10 ? "" : "  [outside 16 +- 20%]"));
    if (!ok9 || !ok10) {
        // at t = 0.1 the degree-3 truncation is outside the asymptotic
        // regime for these characters (periods 6 and 16: the series'
        // own higher terms and the infinite-order-vanishing product term
        // are still comparable to t^4); the same ratio on a finer grid:
        double fine9 = run_ratio(HWhich::H9, RationalPoint::of(1, 3), 0.00625);
        double fine10 = run_ratio(HWhich::H10, RationalPoint::of(1, 2), 0.00625);
        detail.push_back("same ratio from t=0.00625: H9 " + sci(fine9) + ", H10 " +
                         sci(fine10) + "  (t^4 scaling holds asymptotically)");
    }

    // fitted heat-sum coefficients against the exact Bernoulli-formula values
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.006 * std::pow(0.72, i));
    auto rep1 = asymptotic_check(chi_L1(RationalPoint::of(1, 3)), grid, 9, 320);
    auto rep2 = asymptotic_check(chi_L2(RationalPoint::of(1, 2)), grid, 9, 320);
    bool fit_ok = true;
    for (unsigned long j = 0; j <= 2; ++j) {
        fit_ok = fit_ok && rep1.orders[j].relError < 5e-7 && rep2.orders[j].relError < 5e-7;
        detail.push_back("fit order " + std::to_string(j) + ": rel err L1 " +
                         sci(rep1.orders[j].relError) + ", L2 " +
                         sci(rep2.orders[j].relError));
    }

    pass = ok9 && ok10 && fit_ok;
    report(6, pass, "corollary asymptotics: t^4 residual scaling and 6-digit L-value fits",
           detail);
}

// 7. mean-value-zero and Gauss-sum facts, exact enumeration
void criterion7()
{
    bool mz = true;
    for (long k = 1; k <= 15; k += 2)
        for (long a = 1; a <= k; ++a) {
            if (std::gcd(a, k) != 1) continue;
            mz = mz && chi_L1(RationalPoint::of(a, k)).meanValueZero;
        }
    for (long k = 2; k <= 14; k += 2)
        for (long a = 1; a <= k; ++a) {
            if (std::gcd(a, k) != 1) continue;
            mz = mz && chi_L2(RationalPoint::of(a, k)).meanValueZero;
        }
    bool gs = true;
    for (unsigned long c = 1; c <= 64; ++c) {
        for (long a = 1; a < static_cast<long>(c); ++a) {
            if (std::gcd(a, static_cast<long>(c)) != 1) continue;
            if (c % 4 == 2) gs = gs && gauss_sum(a, 0, c).is_zero();
            if (c % 4 == 0)
                for (long b = 1; b < static_cast<long>(c); b += 2)
                    gs = gs && gauss_sum(a, b, c).is_zero();
        }
    }
    report(7, mz && gs, "mean-value-zero (k <= 15 / 14) and Gauss-sum vanishing (c <= 64), exact",
           {std::string("mean value zero: ") + (mz ? "ok" : "FAIL"),
            std::string("Gauss sums: ") + (gs ? "ok" : "FAIL")});
}

// 8. property suites
void criterion8()
{
    bool pass = true;
    std::vector<std::string> detail;

    // embed homomorphism on random small cyclotomics
    {
        std::mt19937 rng(4711);
        bool ok = true;
        long prec = 128;
        for (int trial = 0; trial < 25; ++trial) {
            unsigned long k1 = 1 + rng() % 16, k2 = 1 + rng() % 16;
            Cyclotomic x, y;
            for (int t = 0; t < 3; ++t) {
                x += zeta(k1, static_cast<long>(rng() % k1)) * rat(static_cast<long>(rng() % 9) - 4);
                y += zeta(k2, static_cast<long>(rng() % k2)) * rat(static_cast<long>(rng() % 9) - 4);
            }
            double lhs = abs((x * y).embed(prec) - x.embed(prec) * y.embed(prec)).to_double();
            double scale = 1.0 + abs(x.embed(prec) * y.embed(prec)).to_double();
            ok = ok && lhs / scale < std::ldexp(1.0, -118);
        }
        pass = pass && ok;
        detail.push_back(std::string("embed homomorphism: ") + (ok ? "ok" : "FAIL"));
    }

    // corrected inversion identity symbolically for n <= 12
    {
        bool ok = true;
        for (unsigned long n = 0; n <= 12; ++n)
            ok = ok && invert_pochhammer_check(n, rat(1)) && invert_pochhammer_check(n, rat(3, 2));
        pass = pass && ok;
        detail.push_back(std::string("inversion identity n <= 12: ") + (ok ? "ok" : "FAIL"));
    }

    // half-derivative linearity
    {
        std::mt19937 rng(999);
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            QSeries f(rat(12), 2), g(rat(12), 2);
            for (int t = 0; t < 6; ++t) {
                f.insert_add(static_cast<long>(rng() % 20), rat(static_cast<long>(rng() % 9) - 4));
                g.insert_add(static_cast<long>(rng() % 20), rat(static_cast<long>(rng() % 9) - 4));
            }
            Rational alpha = rat(static_cast<long>(rng() % 5) - 2);
            Rational beta = rat(static_cast<long>(rng() % 5) - 2, 3);
            auto lhs = half_derivative(f.scaled(alpha) + g.scaled(beta));
            auto rhs = half_derivative(f).scaled(SurdSum<Rational>(alpha)) +
                       half_derivative(g).scaled(SurdSum<Rational>(beta));
            ok = ok && series_equal(lhs, rhs, rat(10));
        }
        pass = pass && ok;
        detail.push_back(std::string("half-derivative linearity: ") + (ok ? "ok" : "FAIL"));
    }

    // quadrature robustness: eps refinement and contour independence
    {
        QuadratureConfig cfg;
        cfg.relTol = 1e-6;
        auto a = omega(RationalPoint::of(1, 3), cfg);
        QuadratureConfig cfg2 = cfg;
        cfg2.eps = 1e-12;
        auto b = omega(RationalPoint::of(1, 3), cfg2);
        bool ok_eps = abs(a.value - b.value).to_double() < 1e-6;

        auto g_default = g_period(1, RationalPoint::of(1, 3), cfg);
        PathSpec detour;
        long p = cfg.precision + 16;
        detour.waypoints = {Complex::of(0.0, 0.2, p), Complex::of(-0.3, 0.8, p),
                            Complex::of(0.0, 2.0, p)};
        auto g_detour = g_period(1, RationalPoint::of(1, 3), cfg, detour);
        bool ok_path = abs(g_default.value - g_detour.value).to_double() <
                       g_default.errorEstimate.to_double() +
                           g_detour.errorEstimate.to_double() + 1e-7;

        QuadratureConfig cfg3 = cfg;
        cfg3.relTol = 5e-7;
        auto c = omega(RationalPoint::of(1, 3), cfg3);
        bool ok_tol = abs(a.value - c.value).to_double() <=
                      a.errorEstimate.to_double() + c.errorEstimate.to_double() + 1e-18;

        pass = pass && ok_eps && ok_path && ok_tol;
        detail.push_back(std::string("eps robustness: ") + (ok_eps ? "ok" : "FAIL"));
        detail.push_back(std::string("contour independence: ") + (ok_path ? "ok" : "FAIL"));
        detail.push_back(std::string("tolerance-halving self-consistency: ") +
                         (ok_tol ? "ok" : "FAIL"));
    }

    report(8, pass, "property suites (exact arithmetic, inversion, linearity, quadrature)",
           detail);
}

} // namespace

int main()
{
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
