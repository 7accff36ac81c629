#ifndef QMF_HP_HPP
#define QMF_HP_HPP

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "qmf/rational.hpp"

namespace qmf {

// High-precision real backed by mpfr_t. Every value carries its own working
// precision in bits; binary operations produce results at the minimum of the
// operand precisions, so precision never silently inflates.
class Real {
public:
    static constexpr long kMinPrec = 24;

    Real() : Real(53) {}
    explicit Real(long prec)
    {
        mpfr_init2(v_, std::max(prec, kMinPrec));
        mpfr_set_nan(v_);
    }
    Real(const Real& o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept
    {
        mpfr_init2(v_, kMinPrec);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    long prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    static Real of(long x, long prec)
    {
        Real r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(double x, long prec)
    {
        Real r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(const Rational& x, long prec)
    {
        Real r(prec);
        mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static Real pi(long prec)
    {
        Real r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    // 2^e, exact
    static Real pow2(long e, long prec)
    {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    std::string str(size_t digits = 0) const;

    friend Real operator+(const Real& a, const Real& b) { return binop(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return binop(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return binop(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return binop(a, b, mpfr_div); }
    Real operator-() const
    {
        Real r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& b) { mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }

    friend Real operator*(const Real& a, long b)
    {
        Real r(a.prec());
        mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, long b)
    {
        Real r(a.prec());
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }

    friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }

    friend Real abs(const Real& a) { return unop(a, mpfr_abs); }
    friend Real sqrt(const Real& a) { return unop(a, mpfr_sqrt); }
    friend Real exp(const Real& a) { return unop(a, mpfr_exp); }
    friend Real log(const Real& a) { return unop(a, mpfr_log); }
    friend Real sin(const Real& a) { return unop(a, mpfr_sin); }
    friend Real cos(const Real& a) { return unop(a, mpfr_cos); }
    friend Real atan2(const Real& y, const Real& x)
    {
        Real r(std::min(y.prec(), x.prec()));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend Real pow(const Real& a, const Real& e)
    {
        Real r(std::min(a.prec(), e.prec()));
        mpfr_pow(r.v_, a.v_, e.v_, MPFR_RNDN);
        return r;
    }
    friend Real hypot(const Real& a, const Real& b)
    {
        Real r(std::min(a.prec(), b.prec()));
        mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

private:
    using BinFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    using UnFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
    static Real binop(const Real& a, const Real& b, BinFn f)
    {
        Real r(std::min(a.prec(), b.prec()));
        f(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    static Real unop(const Real& a, UnFn f)
    {
        Real r(a.prec());
        f(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

// Complex number over Real. The working precision of a value is the minimum
// of its parts; all transcendental functions use the principal branch, i.e.
// arguments taken in (-pi, pi].
class Complex {
public:
    Complex() = default;
    explicit Complex(long prec) : re_(prec), im_(prec) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

    static Complex of(double re, double im, long prec)
    {
        return Complex(Real::of(re, prec), Real::of(im, prec));
    }
    static Complex of(long re, long im, long prec)
    {
        return Complex(Real::of(re, prec), Real::of(im, prec));
    }
    static Complex zero(long prec) { return of(0L, 0L, prec); }
    static Complex one(long prec) { return of(1L, 0L, prec); }
    static Complex i_unit(long prec) { return of(0L, 1L, prec); }

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    Real& re() { return re_; }
    Real& im() { return im_; }
    long prec() const { return std::min(re_.prec(), im_.prec()); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    // copy at precision p (exact when p >= current precision)
    Complex at_prec(long p) const
    {
        Complex r(p);
        mpfr_set(r.re_.raw(), re_.raw(), MPFR_RNDN);
        mpfr_set(r.im_.raw(), im_.raw(), MPFR_RNDN);
        return r;
    }

    friend Complex operator+(const Complex& a, const Complex& b)
    {
        return Complex(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend Complex operator-(const Complex& a, const Complex& b)
    {
        return Complex(a.re_ - b.re_, a.im_ - b.im_);
    }
    Complex operator-() const { return Complex(-re_, -im_); }
    friend Complex operator*(const Complex& a, const Complex& b)
    {
        return Complex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend Complex operator*(const Complex& a, const Real& s)
    {
        return Complex(a.re_ * s, a.im_ * s);
    }
    friend Complex operator/(const Complex& a, const Real& s)
    {
        return Complex(a.re_ / s, a.im_ / s);
    }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        Real n2 = b.re_ * b.re_ + b.im_ * b.im_;
        return Complex((a.re_ * b.re_ + a.im_ * b.im_) / n2,
                       (a.im_ * b.re_ - a.re_ * b.im_) / n2);
    }
    Complex& operator+=(const Complex& b)
    {
        re_ += b.re_;
        im_ += b.im_;
        return *this;
    }
    Complex& operator-=(const Complex& b)
    {
        re_ -= b.re_;
        im_ -= b.im_;
        return *this;
    }
    Complex& operator*=(const Complex& b) { return *this = *this * b; }

    friend Complex conj(const Complex& a) { return Complex(a.re_, -a.im_); }
    friend Real abs(const Complex& a) { return hypot(a.re_, a.im_); }
    // |re| + |im|; cheap norm for cutoff tests
    friend Real abs1(const Complex& a) { return abs(a.re_) + abs(a.im_); }
    friend Real arg(const Complex& a) { return atan2(a.im_, a.re_); }

    friend Complex exp(const Complex& a)
    {
        Real m = exp(a.re_);
        return Complex(m * cos(a.im_), m * sin(a.im_));
    }
    friend Complex log(const Complex& a)
    {
        return Complex(log(abs(a)), arg(a));
    }
    friend Complex sqrt(const Complex& a) { return pow_rational(a, rat(1, 2)); }

    // principal branch a^e for rational exponent e
    friend Complex pow_rational(const Complex& a, const Rational& e)
    {
        long p = a.prec();
        if (a.is_zero()) return zero(p);
        return exp(log(a) * Real::of(e, p));
    }

    std::string str(size_t digits = 0) const;

private:
    Real re_{53};
    Real im_{53};
};

// e^{2 pi i z} at the precision of z
Complex exp_2pi_i(const Complex& z);

} // namespace qmf

#endif
