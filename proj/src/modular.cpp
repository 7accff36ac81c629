#include "qmf/modular.hpp"

#include <omp.h>

#include <cmath>

namespace qmf {

namespace {

// zeta16^{(2n+1)^2} = zeta16 * (-1)^{n(n+1)/2}: odd squares are 1 or 9 mod 16
bool theta3_term_negative(unsigned long n)
{
    return ((n * (n + 1) / 2) % 2) != 0;
}

// working precision: guard bits cover both the summation length and the
// error doubling along the binary powering chains for block start terms
long theta_working_prec(long prec, unsigned long need)
{
    long extra = 0;
    while ((1ul << extra) < need + 4) ++extra;
    return prec + 16 + 2 * extra;
}

Complex cpow_ul(const Complex& base, unsigned long e)
{
    long p = base.prec();
    Complex acc = Complex::one(p);
    Complex b = base;
    while (e) {
        if (e & 1) acc *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return acc;
}

long round_to_long(const Real& x)
{
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_round(t, x.raw());
    long v = mpfr_get_si(t, MPFR_RNDN);
    mpfr_clear(t);
    return v;
}

} // namespace

Complex eta(const Complex& z, long prec)
{
    long p = prec + 16;
    if (!(z.im() > 0.0)) fail(ErrorKind::Internal, "eta needs Im z > 0");
    Complex w = z.at_prec(p);
    Complex mult = Complex::one(p);
    Complex zeta24 = Cyclotomic::root_of_unity(24, 1).embed(p);

    for (int iter = 0;; ++iter) {
        if (iter > 4096) fail(ErrorKind::PrecisionUnreachable, "eta reduction stalled");
        long m = round_to_long(w.re());
        if (m != 0) {
            w = Complex(w.re() - Real::of(m, p), w.im());
            long r = ((m % 24) + 24) % 24;
            mult *= cpow_ul(zeta24, static_cast<unsigned long>(r));
        }
        Real n2 = w.re() * w.re() + w.im() * w.im();
        if (n2 < 0.998) {
            // eta(w) = sqrt(w'/i) eta(w') with w' = -1/w
            Complex wp = -Complex::one(p) / w;
            Complex ratio(wp.im(), -wp.re()); // w'/i
            mult *= sqrt(ratio);
            w = wp;
        } else if (w.im() > 0.5) {
            break;
        } else {
            // |w| >= 1 but low height: another shift will move it
            if (std::abs(round_to_long(w.re())) == 0)
                break; // fundamental-domain boundary, fine to sum
        }
    }

    // pentagonal series for (q;q)_inf at q = e^{2 pi i w}
    Complex q = exp_2pi_i(w);
    Real threshold = Real::pow2(-p - 8, p);
    Complex sum = Complex::one(p);
    for (long j = 1;; ++j) {
        // exponents j(3j-1)/2 and j(3j+1)/2
        Complex t1 = cpow_ul(q, static_cast<unsigned long>(j * (3 * j - 1) / 2));
        Complex t2 = cpow_ul(q, static_cast<unsigned long>(j * (3 * j + 1) / 2));
        Complex add = t1 + t2;
        if (j % 2) {
            sum -= add;
        } else {
            sum += add;
        }
        if (abs1(t1) < threshold) break;
        if (j > 1'000'000) fail(ErrorKind::PrecisionUnreachable, "eta series cap");
    }
    return mult * exp_2pi_i(w / Real::of(24L, p)) * sum;
}

Complex eta_quotient_value(const EtaQuotientSpec& spec, const Complex& z, long prec)
{
    long p = prec + 16;
    Complex acc = spec.prefactor.embed(p);
    for (const auto& [r, e] : spec.factors) {
        Complex v = eta(z * Real::of(r, p), prec + 8);
        Complex pw = cpow_ul(v, static_cast<unsigned long>(std::abs(e)));
        if (e >= 0) {
            acc *= pw;
        } else {
            acc = acc / pw;
        }
    }
    return acc;
}

namespace {

// number of terms needed so that the tail of the component's theta series
// is below 2^{-prec-8}
unsigned long theta_terms_needed(int comp, double y, long prec)
{
    double bits = static_cast<double>(prec) + 24.0;
    double decay = 2.0 * M_PI * y; // per unit exponent
    double target = bits * 0.6931471805599453 / decay;
    double n;
    if (comp == 1) {
        n = std::sqrt(std::max(target, 1.0)) + 2.0;
    } else {
        n = (std::sqrt(std::max(16.0 * target, 1.0)) - 1.0) / 2.0 + 2.0;
    }
    return static_cast<unsigned long>(n) + 4;
}

// partial theta sum over n in [n0, n1)
Complex theta_block(int comp, const Complex& q, const Complex& p16, unsigned long n0,
                    unsigned long n1, long p)
{
    Complex sum = Complex::zero(p);
    if (comp == 1) {
        // terms 2 (-1)^n q^{n^2}, n >= 1
        if (n0 < 1) n0 = 1;
        if (n0 >= n1) return sum;
        Complex term = cpow_ul(q, n0 * n0);
        Complex ratio = cpow_ul(q, 2 * n0 + 1);
        Complex q2 = q * q;
        for (unsigned long n = n0; n < n1; ++n) {
            if (n % 2) {
                sum -= term;
            } else {
                sum += term;
            }
            term *= ratio;
            ratio *= q2;
        }
        return sum + sum;
    }
    // components 2, 3: sum (+-1)^n p^{(2n+1)^2}
    Complex term = cpow_ul(p16, (2 * n0 + 1) * (2 * n0 + 1));
    Complex ratio = cpow_ul(p16, 8 * (n0 + 1));
    Complex p8 = cpow_ul(p16, 8);
    for (unsigned long n = n0; n < n1; ++n) {
        if (comp == 3 && theta3_term_negative(n)) {
            sum -= term;
        } else {
            sum += term;
        }
        term *= ratio;
        ratio *= p8;
    }
    return sum;
}

} // namespace

Complex theta_component_serial(int i, const Complex& z, long prec, long term_cap)
{
    if (!(z.im() > 0.0)) fail(ErrorKind::Internal, "theta needs Im z > 0");
    long p = theta_working_prec(prec, theta_terms_needed(i, z.im().to_double(), prec));
    Real threshold = Real::pow2(-prec - 24, p);
    Complex zw = z.at_prec(p);
    Complex p16 = exp_2pi_i(zw / Real::of(16L, p));
    Complex q = cpow_ul(p16, 16);
    Complex sum = Complex::zero(p);
    if (i == 1) {
        Complex term = q;             // q^{n^2} at n = 1
        Complex ratio = cpow_ul(q, 3); // q^{2n+1} at n = 1
        Complex q2 = q * q;
        long n = 1;
        for (;; ++n) {
            if (n > term_cap) fail(ErrorKind::PrecisionUnreachable, "theta1 term cap");
            if (n % 2) {
                sum -= term;
            } else {
                sum += term;
            }
            if (abs1(term) < threshold) break;
            term *= ratio;
            ratio *= q2;
        }
        return Complex::one(p) + sum + sum;
    }
    Complex term = p16;                // p^{(2n+1)^2} at n = 0
    Complex ratio = cpow_ul(p16, 8);   // p^{8(n+1)} at n = 0
    Complex p8 = ratio;
    long n = 0;
    for (;; ++n) {
        if (n > term_cap) fail(ErrorKind::PrecisionUnreachable, "theta term cap");
        if (i == 3 && theta3_term_negative(static_cast<unsigned long>(n))) {
            sum -= term;
        } else {
            sum += term;
        }
        if (abs1(term) < threshold) break;
        term *= ratio;
        ratio *= p8;
    }
    if (i == 3) sum *= Cyclotomic::root_of_unity(48, -1).embed(p);
    return sum;
}

Complex theta_component(int i, const Complex& z, long prec, const ThetaOptions& opt)
{
    if (!(z.im() > 0.0)) fail(ErrorKind::Internal, "theta needs Im z > 0");
    double y = z.im().to_double();
    unsigned long need = theta_terms_needed(i, y, prec);
    if (need > static_cast<unsigned long>(opt.term_cap))
        fail(ErrorKind::PrecisionUnreachable, "theta series needs too many terms");

    const unsigned long block = 4096;
    if (!opt.blocked || need <= 2 * block)
        return theta_component_serial(i, z, prec, opt.term_cap);

    long p = theta_working_prec(prec, need);
    Complex zw = z.at_prec(p);
    Complex p16 = exp_2pi_i(zw / Real::of(16L, p));
    Complex q = cpow_ul(p16, 16);
    unsigned long nblocks = (need + block - 1) / block;
    std::vector<Complex> partials(nblocks, Complex::zero(p));
    int jobs = opt.jobs > 0 ? opt.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (unsigned long b = 0; b < nblocks; ++b)
        partials[b] = theta_block(i, q, p16, b * block, std::min((b + 1) * block, need), p);

    // fixed-order reduction keeps the result independent of scheduling
    Complex sum = Complex::zero(p);
    for (const auto& v : partials) sum += v;
    if (i == 1) return Complex::one(p) + sum;
    if (i == 3) return sum * Cyclotomic::root_of_unity(48, -1).embed(p);
    return sum;
}

std::array<Complex, 3> H_vector(const Complex& z, long prec, const ThetaOptions& opt)
{
    return {theta_component(1, z, prec, opt), theta_component(2, z, prec, opt),
            theta_component(3, z, prec, opt)};
}

std::array<Complex, 3> H_vector_eta(const Complex& z, long prec)
{
    return {eta_quotient_value(theta1_eta_spec(), z, prec),
            eta_quotient_value(theta2_eta_spec(), z, prec),
            eta_quotient_value(theta3_eta_alt_spec(), z, prec)};
}

namespace {
Cyclotomic sqrt2_cyc()
{
    // sqrt 2 = zeta8 - zeta8^3
    return Cyclotomic::root_of_unity(8, 1) - Cyclotomic::root_of_unity(8, 3);
}
} // namespace

const std::array<std::array<Cyclotomic, 3>, 3>& matrix_T()
{
    static const std::array<std::array<Cyclotomic, 3>, 3> m = {{
        {Cyclotomic(1), Cyclotomic(0), Cyclotomic(0)},
        {Cyclotomic(0), Cyclotomic(0), Cyclotomic::root_of_unity(12, 1)},
        {Cyclotomic(0), Cyclotomic::root_of_unity(24, 1), Cyclotomic(0)},
    }};
    return m;
}

const std::array<std::array<Cyclotomic, 3>, 3>& matrix_S()
{
    static const std::array<std::array<Cyclotomic, 3>, 3> m = {{
        {Cyclotomic(0), sqrt2_cyc(), Cyclotomic(0)},
        {sqrt2_cyc() * rat(1, 2), Cyclotomic(0), Cyclotomic(0)},
        {Cyclotomic(0), Cyclotomic(0), Cyclotomic(1)},
    }};
    return m;
}

TransformResiduals verify_transformations(const Complex& z, long prec,
                                          const ThetaOptions& opt)
{
    long p = prec + 16;
    auto h = H_vector(z, prec, opt);
    auto ht = H_vector(z + Complex::one(p), prec, opt);
    auto hs = H_vector(-Complex::one(p) / z, prec, opt);

    Real t_res = Real::of(0L, p);
    Real s_res = Real::of(0L, p);
    // (z/i)^{1/2}, principal branch
    Complex zi = Complex(z.im(), -z.re()); // z/i
    Complex root = sqrt(zi);
    for (int r = 0; r < 3; ++r) {
        Complex mt = Complex::zero(p), ms = Complex::zero(p);
        for (int c = 0; c < 3; ++c) {
            if (!matrix_T()[r][c].is_zero()) mt += matrix_T()[r][c].embed(p) * h[c];
            if (!matrix_S()[r][c].is_zero()) ms += matrix_S()[r][c].embed(p) * h[c];
        }
        Real dt = abs(ht[r] - mt);
        Real ds = abs(hs[r] - root * ms);
        t_res += dt * dt;
        s_res += ds * ds;
    }
    return TransformResiduals{sqrt(t_res), sqrt(s_res)};
}

Complex half_theta_sum(int i, const Complex& z, long prec)
{
    long p = prec + 16;
    Real threshold = Real::pow2(-p - 8, p);
    double y = z.im().to_double();
    Complex p16 = exp_2pi_i(z.at_prec(p) / Real::of(16L, p));
    Complex q = cpow_ul(p16, 16);
    Complex sum = Complex::zero(p);
    if (i == 1) {
        // 2 sum (-1)^n n q^{n^2}; |term| peaks near n* = sqrt(1/(4 pi y))
        unsigned long peak = static_cast<unsigned long>(std::sqrt(1.0 / (4.0 * M_PI * y))) + 1;
        Complex term = q;
        Complex ratio = cpow_ul(q, 3);
        Complex q2 = q * q;
        for (unsigned long n = 1;; ++n) {
            Complex contrib = term * Real::of(static_cast<long>(n), p);
            if (n % 2) {
                sum -= contrib;
            } else {
                sum += contrib;
            }
            if (n > peak && abs1(contrib) < threshold) break;
            if (n > 100'000'000ul) fail(ErrorKind::PrecisionUnreachable, "half theta cap");
            term *= ratio;
            ratio *= q2;
        }
        return sum + sum;
    }
    // components 2, 3: sum (+-1)^n (2n+1) p^{(2n+1)^2}; theta3 carries zeta16
    unsigned long peak =
        static_cast<unsigned long>(std::sqrt(16.0 / (4.0 * M_PI * y)) / 2.0) + 1;
    Complex term = p16;
    Complex ratio = cpow_ul(p16, 8);
    Complex p8 = ratio;
    for (unsigned long n = 0;; ++n) {
        Complex contrib = term * Real::of(static_cast<long>(2 * n + 1), p);
        if (i == 3 && theta3_term_negative(n)) {
            sum -= contrib;
        } else {
            sum += contrib;
        }
        if (n > peak && abs1(contrib) < threshold) break;
        if (n > 100'000'000ul) fail(ErrorKind::PrecisionUnreachable, "half theta cap");
        term *= ratio;
        ratio *= p8;
    }
    if (i == 3) sum *= Cyclotomic::root_of_unity(16, 1).embed(p);
    return sum;
}

RadialReport radial_limit_check(Component i, const RationalPoint& x,
                                const std::vector<double>& t_grid, long prec)
{
    if (i == Component::F)
        fail(ErrorKind::UndefinedComponent, "radial check covers theta components only");
    if (!in_domain(i, x))
        fail(ErrorKind::UndefinedComponent,
             "component " + component_name(i) + " undefined at " + x.str());
    RadialReport rep;
    rep.component = i;
    rep.x = x;
    rep.exact = strange_eval(i, x).exact;

    long p = prec + 16;
    Complex exact_val = rep.exact.embed(p);
    int comp = static_cast<int>(i);
    Real two_pi = Real::pi(p) * 2;
    for (double t : t_grid) {
        // q = e^{2 pi i x} e^{-t}  <=>  z = x + i t/(2 pi)
        Complex z(Real::of(x.x(), p), Real::of(t, p) / two_pi);
        Complex ht = half_theta_sum(comp, z, prec);
        rep.samples.push_back(RadialSample{t, ht, exact_val / ht});
    }
    size_t n = rep.samples.size();
    if (n >= 1) {
        // Neville extrapolation of the ratio polynomial to t = 0
        std::vector<Complex> v;
        for (const auto& s : rep.samples) v.push_back(s.ratio);
        for (size_t j = 1; j < n; ++j) {
            for (size_t i = 0; i + j < n; ++i) {
                double ti = rep.samples[i].t, tj = rep.samples[i + j].t;
                Real wj = Real::of(tj / (tj - ti), p);
                Real wi = Real::of(ti / (tj - ti), p);
                v[i] = v[i] * wj - v[i + 1] * wi;
            }
        }
        rep.extrapolatedConstant = v[0];
    }
    return rep;
}

nlohmann::json RadialReport::to_json() const
{
    nlohmann::json samples_json = nlohmann::json::array();
    for (const auto& s : samples) {
        samples_json.push_back({{"t", s.t},
                                {"halfTheta", {s.halfTheta.re().str(20), s.halfTheta.im().str(20)}},
                                {"ratio", {s.ratio.re().str(20), s.ratio.im().str(20)}}});
    }
    return {{"component", component_name(component)},
            {"x", x.str()},
            {"exact", exact.str()},
            {"samples", samples_json},
            {"constant", {extrapolatedConstant.re().str(20), extrapolatedConstant.im().str(20)}}};
}

double log2_theta_bound(int i, std::complex<double> z)
{
    // reduce with the vector transformation law, tracking entrywise
    // magnitudes; everything is an upper bound
    double log2scale = 0.0;
    double A[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const double s2 = std::sqrt(2.0);
    for (int iter = 0; iter < 20000; ++iter) {
        double m = std::nearbyint(z.real());
        if (m != 0) {
            z -= m;
            if (static_cast<long long>(m) % 2 != 0) {
                // |M_T^m| swaps rows 2 and 3 for odd m
                for (int r = 0; r < 3; ++r) std::swap(A[r][1], A[r][2]);
            }
        }
        if (std::norm(z) < 0.995 && std::abs(z) > 0) {
            std::complex<double> w = -1.0 / z;
            log2scale += 0.5 * std::log2(std::abs(w));
            // A <- A * |M_S|
            for (int r = 0; r < 3; ++r) {
                double c0 = A[r][0], c1 = A[r][1];
                A[r][0] = c1 / s2;
                A[r][1] = c0 * s2;
            }
            z = w;
        } else {
            break;
        }
    }
    double y = z.imag();
    // log2 bounds of |theta_j| at the reduced point
    double lh[3];
    double l2e = 1.4426950408889634; // log2(e)
    lh[0] = std::log2(1.0 + 3.0 * std::exp(-2.0 * M_PI * std::min(y, 600.0)));
    double le2 = -2.0 * M_PI * y / 16.0 * l2e; // log2 e^{-2 pi y/16}
    lh[1] = le2 + 1.0;
    lh[2] = le2 + 1.0;
    // log-sum-exp over the row of A
    double best = -1e300;
    double row[3];
    for (int j = 0; j < 3; ++j) {
        if (A[i - 1][j] <= 0) {
            row[j] = -1e300;
            continue;
        }
        row[j] = std::log2(A[i - 1][j]) + lh[j];
        best = std::max(best, row[j]);
    }
    double acc = 0;
    for (int j = 0; j < 3; ++j) acc += std::exp2(std::max(row[j] - best, -300.0));
    return log2scale + best + std::log2(acc);
}

} // namespace qmf
