#ifndef QMF_EICHLER_HPP
#define QMF_EICHLER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmf/modular.hpp"
#include "qmf/strange.hpp"

namespace qmf {

struct QuadratureConfig {
    double eps = 1e-9;    // lower cutoff height of the vertical rays
    double upper = 1e9;   // top height
    double relTol = 1e-8; // target relative error
    int maxDepth = 26;    // adaptive bisection cap
    long precision = 128; // working precision in bits
    int jobs = 0;         // 0: all threads
    int glOrder = 16;     // Gauss-Legendre nodes per panel
};

struct PeriodIntegralResult {
    Complex value;
    Real errorEstimate;
    long nodesUsed = 0;
    double seconds = 0;

    nlohmann::json to_json() const;
};

// Omega(x) = integral over the vertical ray z = x + i t, t in [eps, upper],
// of theta_1(z) (z - x)^{-3/2}, principal branch: (it)^{-3/2} =
// t^{-3/2} e^{-3 pi i/4}.
PeriodIntegralResult omega(const RationalPoint& x, const QuadratureConfig& cfg);

// f*(x) = (-i/(pi(1+i))) * integral_{x (+i eps)}^{i upper} theta_i(z) (z-x)^{-3/2} dz
// for rational x (the Im x -> 0 limit of the lower-half-plane prescription)
PeriodIntegralResult f_star(int comp, const RationalPoint& x, const QuadratureConfig& cfg);

// f*(x) for x in the lower half plane: contour from conj(x) upward
PeriodIntegralResult f_star_lower(int comp, const Complex& x, const QuadratureConfig& cfg);

// contour from 0 to i upper; empty waypoints = the straight vertical ray.
// Waypoints describe a detour: the first and last must be purely imaginary;
// the path runs 0 -> (vertical) -> W_1 -> ... -> W_m -> (vertical) -> i upper.
struct PathSpec {
    std::vector<Complex> waypoints;
};

// g_i(x) = (-i/(pi(1+i))) * integral_0^{i infty} theta_i(z) (z - x)^{-3/2} dz
PeriodIntegralResult g_period(int comp, const RationalPoint& x, const QuadratureConfig& cfg,
                              const PathSpec& path = {});
PeriodIntegralResult g_period_at(int comp, const Complex& x, const QuadratureConfig& cfg,
                                 const PathSpec& path = {});

struct QuantumRow {
    int row = 0; // 1..6: three translation rows, three S rows
    std::string description;
    std::string status; // "OK" or "SKIPPED"
    std::string reason; // set when skipped
    Complex lhs, rhs;
    double residual = 0;
    bool exact = false; // translation rows compare exactly
};

struct QuantumReport {
    RationalPoint x;
    std::vector<QuantumRow> rows;
    // per-component normalization lambda_i in phi_i = lambda_i theta_i^*,
    // solved from the two applicable S rows; expected (1, 1)
    std::optional<Complex> lambda1, lambda2;
    nlohmann::json to_json() const;
};

// Evaluates the six scalar equations of Theorem-type vector transformation
// laws at x: translation rows exactly through the strange sums, S rows
// numerically through g_period. Rows with undefined components are SKIPPED.
QuantumReport verify_quantum_transform(const RationalPoint& x, const QuadratureConfig& cfg);

// Prop-style check in the lower half plane, where all components are
// defined: residual of (x/-i)^{-3/2} f*(-1/x) + M_S f*(x) = M_S g(x)
std::array<Real, 3> verify_lower_half_transform(const Complex& x_lower,
                                                const QuadratureConfig& cfg);

// shared adaptive engine, exposed for the benchmark target
struct ContourIntegrand {
    std::function<Complex(const Complex& z, long prec)> f;
    std::function<double(std::complex<double>)> log2bound; // may be empty
};
struct Segment {
    bool logray = true; // z = base + i e^u, u in [p0, p1]; else line A -> B
    Complex base;
    double p0 = 0, p1 = 0;
    Complex A, B;
};
PeriodIntegralResult integrate_contour(const ContourIntegrand& fn,
                                       const std::vector<Segment>& segments,
                                       const QuadratureConfig& cfg);

// (z/-i)^{-3/2}, principal branch
Complex slash_weight(const Complex& z, long prec);

} // namespace qmf

#endif
