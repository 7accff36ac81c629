#include "qmf/hp.hpp"

#include <cstdlib>
#include <sstream>

namespace qmf {

std::string Real::str(size_t digits) const
{
    if (is_nan()) return "nan";
    if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
    if (is_zero()) return "0";
    if (digits == 0)
        digits = static_cast<size_t>(static_cast<double>(prec()) * 0.30103) + 1;
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string d = neg ? mant.substr(1) : mant;
    // strip trailing zeros but keep one digit
    size_t last = d.find_last_not_of('0');
    if (last != std::string::npos) d = d.substr(0, std::max<size_t>(last + 1, 1));

    std::ostringstream out;
    if (neg) out << '-';
    if (e > 0 && static_cast<size_t>(e) <= d.size() + 4 && e <= 16) {
        if (static_cast<size_t>(e) >= d.size()) {
            out << d << std::string(e - d.size(), '0');
        } else {
            out << d.substr(0, e) << '.' << d.substr(e);
        }
    } else if (e <= 0 && e > -4) {
        out << "0." << std::string(-e, '0') << d;
    } else {
        out << "0." << d << "e" << e;
    }
    return out.str();
}

std::string Complex::str(size_t digits) const
{
    std::string rs = re_.str(digits);
    std::string is = im_.str(digits);
    if (im_.is_zero()) return rs;
    std::string sign = " + ";
    if (!is.empty() && is[0] == '-') {
        sign = " - ";
        is = is.substr(1);
    }
    return rs + sign + is + "i";
}

Complex exp_2pi_i(const Complex& z)
{
    long p = z.prec();
    Real two_pi = Real::pi(p) * 2;
    // e^{2 pi i (x+iy)} = e^{-2 pi y} (cos 2 pi x, sin 2 pi x)
    Real m = exp(-(two_pi * z.im()));
    Real ph = two_pi * z.re();
    return Complex(m * cos(ph), m * sin(ph));
}

} // namespace qmf
