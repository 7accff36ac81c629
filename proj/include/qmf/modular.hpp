#ifndef QMF_MODULAR_HPP
#define QMF_MODULAR_HPP

#include <array>
#include <complex>
#include <vector>

#include "qmf/hp.hpp"
#include "qmf/qseries.hpp"
#include "qmf/strange.hpp"

namespace qmf {

struct ThetaOptions {
    long term_cap = 8'000'000;
    int jobs = 0;        // 0: library default (all threads)
    bool blocked = true; // false: force the plain serial recurrence
};

// Dedekind eta via pentagonal-number series after T/S reduction into the
// fundamental domain (the reduction applies the usual transformation laws
// to keep Im z workable near the real axis).
Complex eta(const Complex& z, long prec);

Complex eta_quotient_value(const EtaQuotientSpec& spec, const Complex& z, long prec);

// theta components by direct series summation:
//   theta1 = 1 + 2 sum (-1)^n q^{n^2}
//   theta2 = sum p^{(2n+1)^2},                 p = e^{2 pi i z/16}
//   theta3 = zeta48^{-1} sum (-1)^n p^{(2n+1)^2}
// The blocked kernel splits the recurrence into fixed-size blocks whose
// partial sums reduce in index order, so results do not depend on the
// thread count; the serial reference is the plain recurrence.
Complex theta_component(int i, const Complex& z, long prec, const ThetaOptions& opt = {});
Complex theta_component_serial(int i, const Complex& z, long prec, long term_cap = 8'000'000);

std::array<Complex, 3> H_vector(const Complex& z, long prec, const ThetaOptions& opt = {});
std::array<Complex, 3> H_vector_eta(const Complex& z, long prec);

// exact transformation matrices of Theorem 1(2); sqrt(2) lives in Q(zeta_8)
const std::array<std::array<Cyclotomic, 3>, 3>& matrix_T();
const std::array<std::array<Cyclotomic, 3>, 3>& matrix_S();

struct TransformResiduals {
    Real t_residual; // ||H(z+1) - M_T H(z)||
    Real s_residual; // ||H(-1/z) - (z/i)^{1/2} M_S H(z)||
};
TransformResiduals verify_transformations(const Complex& z, long prec,
                                          const ThetaOptions& opt = {});

// half-derivative theta sums, summed past the unimodal peak of n |q|^{n^2}
// with the tail below 2^{-prec-8}
Complex half_theta_sum(int i, const Complex& z, long prec);

struct RadialSample {
    double t;
    Complex halfTheta; // sqrt-theta sum at q = e^{2 pi i x} e^{-t}
    Complex ratio;     // exact / halfTheta
};

struct RadialReport {
    Component component;
    RationalPoint x;
    Cyclotomic exact;
    std::vector<RadialSample> samples;
    Complex extrapolatedConstant; // Richardson limit of the ratios
    nlohmann::json to_json() const;
};

// Evaluates the half-derivative theta series along q = e^{2 pi i x} e^{-t}
// and reports the empirical constant linking it to the exact strange value
// phi_i(x). Throws UndefinedComponent outside the component's domain.
RadialReport radial_limit_check(Component i, const RationalPoint& x,
                                const std::vector<double>& t_grid, long prec);

// cheap double-precision upper bound on log2 |theta_i(z)| via modular
// reduction; used to discard invisible quadrature panels near the real axis
double log2_theta_bound(int i, std::complex<double> z);

} // namespace qmf

#endif
