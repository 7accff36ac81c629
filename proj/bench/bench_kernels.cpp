// Timing comparison of the parallel kernels against their serial
// references: the blocked theta summation and the adaptive period-integral
// quadrature. Run manually; prints a small table.

#include <omp.h>

#include <cstdio>

#include "qmf/eichler.hpp"
#include "qmf/modular.hpp"

using namespace qmf;

namespace {

template <typename F>
double time_call(F&& f, int repeats = 1)
{
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        double t0 = omp_get_wtime();
        f();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

} // namespace

int main()
{
    int threads = omp_get_max_threads();
    std::printf("threads available: %d\n\n", threads);

    // theta summation near the real axis: ~3e5 terms per evaluation
    {
        long prec = 192;
        Complex z = Complex::of(1.0 / 3.0, 2.0e-8, prec + 64);
        Complex ref(prec), par(prec);
        ThetaOptions serial_opt;
        serial_opt.blocked = false;
        double t_serial = time_call([&] { ref = theta_component_serial(1, z, prec); }, 2);
        ThetaOptions omp_opt;
        double t_blocked = time_call([&] { par = theta_component(1, z, prec, omp_opt); }, 2);
        double diff = abs(ref - par).to_double();
        std::printf("theta1 at Im z = 2e-8, 192 bits\n");
        std::printf("  serial reference: %8.3f s\n", t_serial);
        std::printf("  blocked (%d thr): %8.3f s   speedup %.2fx   |diff| = %.2e\n\n",
                    threads, t_blocked, t_serial / t_blocked, diff);
    }

    // period integral: panel evaluations in parallel
    {
        QuadratureConfig cfg;
        cfg.relTol = 1e-8;
        RationalPoint x = RationalPoint::of(1, 5);
        PeriodIntegralResult a, b;
        cfg.jobs = 1;
        double t1 = time_call([&] { a = omega(x, cfg); });
        cfg.jobs = threads;
        double tn = time_call([&] { b = omega(x, cfg); });
        std::printf("omega(1/5), relTol 1e-8, 128 bits\n");
        std::printf("  1 thread : %8.3f s  (%ld nodes)\n", t1, a.nodesUsed);
        std::printf("  %d threads: %8.3f s   speedup %.2fx   |diff| = %.2e\n\n", threads, tn,
                    t1 / tn, abs(a.value - b.value).to_double());
    }

    // the expensive case: theta2 along the g contour
    {
        QuadratureConfig cfg;
        cfg.relTol = 1e-6;
        RationalPoint x = RationalPoint::of(1, 3);
        PeriodIntegralResult a, b;
        cfg.jobs = 1;
        double t1 = time_call([&] { a = g_period(2, x, cfg); });
        cfg.jobs = threads;
        double tn = time_call([&] { b = g_period(2, x, cfg); });
        std::printf("g_2(1/3), relTol 1e-6, 128 bits\n");
        std::printf("  1 thread : %8.3f s  (%ld nodes)\n", t1, a.nodesUsed);
        std::printf("  %d threads: %8.3f s   speedup %.2fx   |diff| = %.2e\n", threads, tn,
                    t1 / tn, abs(a.value - b.value).to_double());
    }
    return 0;
}
