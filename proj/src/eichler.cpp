#include "qmf/eichler.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qmf {

namespace {

// ---- Gauss-Legendre nodes at working precision --------------------------

struct GLRule {
    std::vector<Real> nodes;   // on (-1, 1)
    std::vector<Real> weights;
};

std::mutex g_gl_mutex;
std::map<std::pair<int, long>, GLRule> g_gl_cache;

const GLRule& gl_rule(int order, long prec)
{
    std::lock_guard<std::mutex> lock(g_gl_mutex);
    auto key = std::make_pair(order, prec);
    auto it = g_gl_cache.find(key);
    if (it != g_gl_cache.end()) return it->second;

    GLRule rule;
    long p = prec + 32;
    for (int k = 1; k <= order; ++k) {
        double guess = std::cos(M_PI * (k - 0.25) / (order + 0.5));
        Real x = Real::of(guess, p);
        for (int iter = 0; iter < 64; ++iter) {
            // Legendre recurrence for P_n(x) and P_{n-1}(x)
            Real p0 = Real::of(1L, p), p1 = x;
            for (int j = 2; j <= order; ++j) {
                Real pj = (x * p1 * (2 * j - 1) - p0 * (j - 1)) / j;
                p0 = p1;
                p1 = pj;
            }
            // P'_n = n (x P_n - P_{n-1})/(x^2 - 1)
            Real deriv = (x * p1 - p0) * order / (x * x - Real::of(1L, p));
            Real dx = p1 / deriv;
            x -= dx;
            if (abs(dx) < Real::pow2(-p + 8, p)) break;
        }
        Real p0 = Real::of(1L, p), p1 = x;
        for (int j = 2; j <= order; ++j) {
            Real pj = (x * p1 * (2 * j - 1) - p0 * (j - 1)) / j;
            p0 = p1;
            p1 = pj;
        }
        Real deriv = (x * p1 - p0) * order / (x * x - Real::of(1L, p));
        rule.nodes.push_back(x);
        rule.weights.push_back(Real::of(2L, p) / ((Real::of(1L, p) - x * x) * deriv * deriv));
    }
    return g_gl_cache.emplace(key, std::move(rule)).first->second;
}

// ---- adaptive panels ------------------------------------------------------

struct Panel {
    double a, b;
    Complex val;
    double err = std::numeric_limits<double>::infinity();
    int depth = 0;
    bool discarded = false;
};

struct SegmentGeometry {
    const Segment* seg;

    std::complex<double> point_d(double u) const
    {
        if (seg->logray)
            return {seg->base.re().to_double(), seg->base.im().to_double() + std::exp(u)};
        std::complex<double> A(seg->A.re().to_double(), seg->A.im().to_double());
        std::complex<double> B(seg->B.re().to_double(), seg->B.im().to_double());
        return A + (B - A) * u;
    }
    double jacobian_mag_d(double u) const
    {
        if (seg->logray) return std::exp(u);
        std::complex<double> A(seg->A.re().to_double(), seg->A.im().to_double());
        std::complex<double> B(seg->B.re().to_double(), seg->B.im().to_double());
        return std::abs(B - A);
    }
};

} // namespace

Complex slash_weight(const Complex& z, long prec)
{
    long p = prec + 16;
    // z/-i = z * i
    Complex zi = Complex(-z.im(), z.re()).at_prec(p);
    return pow_rational(zi, rat(-3, 2));
}

PeriodIntegralResult integrate_contour(const ContourIntegrand& fn,
                                       const std::vector<Segment>& segments,
                                       const QuadratureConfig& cfg)
{
    double t_start = omp_get_wtime();
    long p = cfg.precision + 16;
    int jobs = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
    const GLRule& rule = gl_rule(cfg.glOrder, p);
    long nodes_used = 0;

    // exceptions may not unwind out of a parallel region; carry them out
    std::exception_ptr pending;
    std::mutex pending_mutex;
    auto capture = [&](std::exception_ptr e) {
        std::lock_guard<std::mutex> lock(pending_mutex);
        if (!pending) pending = e;
    };

    auto eval_panel = [&](const SegmentGeometry& geom, double a, double b) {
        Complex acc = Complex::zero(p);
        Real half = Real::of((b - a) / 2.0, p);
        Real mid = Real::of((a + b) / 2.0, p);
        for (int k = 0; k < cfg.glOrder; ++k) {
            Real u = mid + half * rule.nodes[k];
            Complex z(p), jac(p);
            if (geom.seg->logray) {
                Real t = exp(u);
                z = Complex(geom.seg->base.re() + Real::of(0L, p), geom.seg->base.im() + t);
                jac = Complex(Real::of(0L, p), t); // dz/du = i e^u
            } else {
                z = Complex(geom.seg->A.re() + (geom.seg->B.re() - geom.seg->A.re()) * u,
                            geom.seg->A.im() + (geom.seg->B.im() - geom.seg->A.im()) * u);
                jac = Complex(geom.seg->B.re() - geom.seg->A.re(),
                              geom.seg->B.im() - geom.seg->A.im());
            }
            Complex fv = fn.f(z, cfg.precision);
            acc += fv * jac * (rule.weights[k] * half);
        }
        return acc;
    };

    Complex total = Complex::zero(p);
    Real discarded_mass = Real::of(0L, p);
    double err_total = 0;

    std::vector<std::pair<size_t, std::vector<Panel>>> per_segment;

    for (size_t si = 0; si < segments.size(); ++si) {
        SegmentGeometry geom{&segments[si]};
        double a = segments[si].logray ? segments[si].p0 : 0.0;
        double b = segments[si].logray ? segments[si].p1 : 1.0;
        int count = segments[si].logray
                        ? std::max(8, static_cast<int>(std::ceil((b - a) / 0.7)))
                        : 8;
        std::vector<Panel> panels;
        for (int i = 0; i < count; ++i) {
            Panel panel;
            panel.a = a + (b - a) * i / count;
            panel.b = a + (b - a) * (i + 1) / count;
            panels.push_back(panel);
        }

        // discard pass on double-precision bounds
        if (fn.log2bound) {
            std::vector<double> lb(panels.size());
            for (size_t i = 0; i < panels.size(); ++i) {
                double m = -1e300;
                for (double u : {panels[i].a, 0.5 * (panels[i].a + panels[i].b), panels[i].b}) {
                    double v = fn.log2bound(geom.point_d(u)) +
                               std::log2(geom.jacobian_mag_d(u) + 1e-300);
                    m = std::max(m, v);
                }
                lb[i] = m + std::log2(panels[i].b - panels[i].a) + 4.0;
            }
            double lbmax = *std::max_element(lb.begin(), lb.end());
            double cut = lbmax + std::log2(cfg.relTol) - 14.0;
            for (size_t i = 0; i < panels.size(); ++i) {
                if (lb[i] < cut) {
                    panels[i].discarded = true;
                    panels[i].val = Complex::zero(p);
                    panels[i].err = std::exp2(lb[i]);
                }
            }
        }

        // first evaluation of surviving panels
        {
            std::vector<size_t> todo;
            for (size_t i = 0; i < panels.size(); ++i)
                if (!panels[i].discarded) todo.push_back(i);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
            for (size_t ti = 0; ti < todo.size(); ++ti) {
                try {
                    panels[todo[ti]].val =
                        eval_panel(geom, panels[todo[ti]].a, panels[todo[ti]].b);
                } catch (...) {
                    capture(std::current_exception());
                }
            }
            if (pending) std::rethrow_exception(pending);
            nodes_used += static_cast<long>(todo.size()) * cfg.glOrder;
        }

        per_segment.emplace_back(si, std::move(panels));
    }

    // adaptive refinement, batched per generation
    for (int round = 0;; ++round) {
        // current total in fixed order
        total = Complex::zero(p);
        err_total = 0;
        discarded_mass = Real::of(0L, p);
        size_t active = 0;
        for (auto& [si, panels] : per_segment) {
            for (auto& pl : panels) {
                total += pl.val;
                if (pl.discarded) {
                    discarded_mass += Real::of(pl.err, p);
                } else if (std::isfinite(pl.err)) {
                    err_total += pl.err;
                } else {
                    ++active; // unrefined
                }
            }
        }
        double scale = std::max(abs(total).to_double(), 1e-300);
        double target = cfg.relTol * scale;
        if (active == 0 && err_total < target) break;

        // pick panels to split
        bool any = false;
        bool all_capped = true;
        for (auto& [si, panels] : per_segment) {
            SegmentGeometry geom{&segments[si]};
            std::vector<Panel> next;
            std::vector<size_t> split_idx;
            size_t count_total = 0;
            for (auto& pl : panels)
                if (!pl.discarded) ++count_total;
            double per_panel = target / std::max<double>(1, 2 * count_total);
            for (size_t i = 0; i < panels.size(); ++i) {
                Panel& pl = panels[i];
                bool want = !pl.discarded &&
                            (!std::isfinite(pl.err) || pl.err > per_panel);
                if (want && pl.depth < cfg.maxDepth) {
                    split_idx.push_back(i);
                    all_capped = false;
                }
            }
            if (split_idx.empty()) continue;
            any = true;
            struct Child {
                Panel left, right;
            };
            std::vector<Child> children(split_idx.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
            for (size_t k = 0; k < split_idx.size(); ++k) {
                try {
                    Panel& parent = panels[split_idx[k]];
                    double mid = 0.5 * (parent.a + parent.b);
                    Child ch;
                    ch.left.a = parent.a;
                    ch.left.b = mid;
                    ch.right.a = mid;
                    ch.right.b = parent.b;
                    ch.left.depth = ch.right.depth = parent.depth + 1;
                    ch.left.val = eval_panel(geom, ch.left.a, ch.left.b);
                    ch.right.val = eval_panel(geom, ch.right.a, ch.right.b);
                    double disc = abs(parent.val - ch.left.val - ch.right.val).to_double();
                    ch.left.err = ch.right.err = 0.5 * disc;
                    children[k] = std::move(ch);
                } catch (...) {
                    capture(std::current_exception());
                }
            }
            if (pending) std::rethrow_exception(pending);
            nodes_used += static_cast<long>(split_idx.size()) * 2 * cfg.glOrder;
            // rebuild the panel list in interval order
            next.reserve(panels.size() + split_idx.size());
            size_t k = 0;
            for (size_t i = 0; i < panels.size(); ++i) {
                if (k < split_idx.size() && split_idx[k] == i) {
                    next.push_back(std::move(children[k].left));
                    next.push_back(std::move(children[k].right));
                    ++k;
                } else {
                    next.push_back(std::move(panels[i]));
                }
            }
            panels = std::move(next);
        }

        if (!any) {
            if (all_capped && err_total > 16 * target)
                fail(ErrorKind::ToleranceNotMet,
                     "adaptive quadrature hit maxDepth before reaching relTol");
            break;
        }
        if (round > 4 * cfg.maxDepth)
            fail(ErrorKind::ToleranceNotMet, "adaptive quadrature failed to settle");
    }

    PeriodIntegralResult res;
    res.value = total;
    res.errorEstimate = Real::of(err_total, p) + discarded_mass;
    res.nodesUsed = nodes_used;
    res.seconds = omp_get_wtime() - t_start;
    return res;
}

namespace {

// theta_i(z) (z - x)^{-3/2} with a low-height magnitude bound. The kernel
// branch is the sheet that realizes Omega(1/k) = pi i(1+i) theta1^S(zeta_k):
// on the upward ray the argument of z - x is taken as -3 pi/2, i.e. the
// negative of the principal power.
ContourIntegrand ray_integrand(int comp, const Complex& x, long prec)
{
    std::complex<double> xd(x.re().to_double(), x.im().to_double());
    ContourIntegrand fn;
    fn.f = [comp, x](const Complex& z, long prec_inner) {
        ThetaOptions opt;
        opt.jobs = 1; // parallelism lives at the panel level
        Complex th = theta_component(comp, z, prec_inner, opt);
        Complex ker = -pow_rational(z - x.at_prec(z.prec()), rat(-3, 2));
        return th * ker;
    };
    fn.log2bound = [comp, xd](std::complex<double> z) {
        double kernel = -1.5 * std::log2(std::abs(z - xd) + 1e-300);
        return log2_theta_bound(comp, z) + kernel;
    };
    (void)prec;
    return fn;
}

Complex fstar_prefactor(long prec)
{
    // -i/(pi(1+i)) = -(1+i)/(2 pi)
    long p = prec + 16;
    Real pi2 = Real::pi(p) * 2;
    return Complex(-(Real::of(1L, p) / pi2), -(Real::of(1L, p) / pi2));
}

std::vector<Segment> vertical_segments(const Complex& base, const QuadratureConfig& cfg)
{
    Segment s;
    s.logray = true;
    s.base = base;
    s.p0 = std::log(cfg.eps);
    s.p1 = std::log(cfg.upper);
    return {s};
}

} // namespace

nlohmann::json PeriodIntegralResult::to_json() const
{
    return {{"value", {value.re().str(24), value.im().str(24)}},
            {"errorEstimate", errorEstimate.to_double()},
            {"nodesUsed", nodesUsed},
            {"seconds", seconds}};
}

PeriodIntegralResult omega(const RationalPoint& x, const QuadratureConfig& cfg)
{
    long p = cfg.precision + 16;
    Complex base(Real::of(x.x(), p), Real::of(0L, p));
    auto fn = ray_integrand(1, base, cfg.precision);
    return integrate_contour(fn, vertical_segments(base, cfg), cfg);
}

PeriodIntegralResult f_star(int comp, const RationalPoint& x, const QuadratureConfig& cfg)
{
    check_domain(static_cast<Component>(comp), x);
    long p = cfg.precision + 16;
    Complex base(Real::of(x.x(), p), Real::of(0L, p));
    auto fn = ray_integrand(comp, base, cfg.precision);
    auto res = integrate_contour(fn, vertical_segments(base, cfg), cfg);
    Complex pre = fstar_prefactor(cfg.precision);
    res.value = res.value * pre;
    res.errorEstimate = res.errorEstimate * abs(pre);
    return res;
}

PeriodIntegralResult f_star_lower(int comp, const Complex& x, const QuadratureConfig& cfg)
{
    if (!(x.im() < 0.0))
        fail(ErrorKind::Internal, "f_star_lower expects Im x < 0");
    long p = cfg.precision + 16;
    Complex base = conj(x).at_prec(p);
    auto fn = ray_integrand(comp, x.at_prec(p), cfg.precision);
    auto res = integrate_contour(fn, vertical_segments(base, cfg), cfg);
    Complex pre = fstar_prefactor(cfg.precision);
    res.value = res.value * pre;
    res.errorEstimate = res.errorEstimate * abs(pre);
    return res;
}

PeriodIntegralResult g_period_at(int comp, const Complex& x, const QuadratureConfig& cfg,
                                 const PathSpec& path)
{
    long p = cfg.precision + 16;
    Complex origin = Complex::zero(p);
    auto fn = ray_integrand(comp, x.at_prec(p), cfg.precision);

    std::vector<Segment> segments;
    if (path.waypoints.empty()) {
        segments = vertical_segments(origin, cfg);
    } else {
        const auto& w = path.waypoints;
        for (const auto& pt : w)
            if (!(pt.im() > 0.0))
                fail(ErrorKind::Internal, "path waypoints must lie in the upper half plane");
        if (std::abs(w.front().re().to_double()) > 1e-12 ||
            std::abs(w.back().re().to_double()) > 1e-12)
            fail(ErrorKind::Internal, "first and last waypoints must be purely imaginary");
        // proximity check of the detour to the kernel singularity x
        std::complex<double> xd(x.re().to_double(), x.im().to_double());
        auto seg_dist = [&](std::complex<double> a, std::complex<double> b) {
            std::complex<double> d = b - a;
            double len2 = std::norm(d);
            double t = len2 > 0 ? std::clamp(((xd - a) * std::conj(d)).real() / len2, 0.0, 1.0)
                                : 0.0;
            return std::abs(xd - (a + t * d));
        };
        double rmin = 0.05 * (1.0 + std::abs(xd));
        Segment low;
        low.logray = true;
        low.base = origin;
        low.p0 = std::log(cfg.eps);
        low.p1 = std::log(w.front().im().to_double());
        segments.push_back(low);
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            std::complex<double> a(w[i].re().to_double(), w[i].im().to_double());
            std::complex<double> b(w[i + 1].re().to_double(), w[i + 1].im().to_double());
            if (seg_dist(a, b) < rmin)
                fail(ErrorKind::PathTooCloseToSingularity,
                     "contour segment passes too close to x");
            Segment s;
            s.logray = false;
            s.A = w[i].at_prec(p);
            s.B = w[i + 1].at_prec(p);
            segments.push_back(s);
        }
        Segment high;
        high.logray = true;
        high.base = origin;
        high.p0 = std::log(w.back().im().to_double());
        high.p1 = std::log(cfg.upper);
        segments.push_back(high);
    }

    auto res = integrate_contour(fn, segments, cfg);
    Complex pre = fstar_prefactor(cfg.precision);
    res.value = res.value * pre;
    res.errorEstimate = res.errorEstimate * abs(pre);
    return res;
}

PeriodIntegralResult g_period(int comp, const RationalPoint& x, const QuadratureConfig& cfg,
                              const PathSpec& path)
{
    long p = cfg.precision + 16;
    return g_period_at(comp, Complex(Real::of(x.x(), p), Real::of(0L, p)), cfg, path);
}

namespace {

std::optional<Cyclotomic> try_strange(Component c, const RationalPoint& x, std::string& why)
{
    try {
        return strange_eval(c, x).exact;
    } catch (const Error& e) {
        why = e.what();
        return std::nullopt;
    }
}

} // namespace

QuantumReport verify_quantum_transform(const RationalPoint& x, const QuadratureConfig& cfg)
{
    QuantumReport rep;
    rep.x = x;
    long prec = cfg.precision;
    long p = prec + 16;

    const Component comps[3] = {Component::Theta1, Component::Theta2, Component::Theta3};
    // translation rows: phi(x+1) = M_T phi(x) row by row
    const struct {
        Component lhs;
        Component rhs;
        Cyclotomic factor;
        const char* desc;
    } trows[3] = {
        {Component::Theta1, Component::Theta1, Cyclotomic(1), "phi1(x+1) = phi1(x)"},
        {Component::Theta2, Component::Theta3, Cyclotomic::root_of_unity(12, 1),
         "phi2(x+1) = zeta12 phi3(x)"},
        {Component::Theta3, Component::Theta2, Cyclotomic::root_of_unity(24, 1),
         "phi3(x+1) = zeta24 phi2(x)"},
    };
    for (int r = 0; r < 3; ++r) {
        QuantumRow row;
        row.row = r + 1;
        row.description = trows[r].desc;
        std::string why;
        auto lhs = try_strange(trows[r].lhs, x.translated(1), why);
        auto rhs = lhs ? try_strange(trows[r].rhs, x, why) : std::nullopt;
        if (!lhs || !rhs) {
            row.status = "SKIPPED";
            row.reason = why;
        } else {
            Cyclotomic rv = trows[r].factor * *rhs;
            row.status = "OK";
            row.exact = (*lhs == rv);
            row.lhs = lhs->embed(prec);
            row.rhs = rv.embed(prec);
            row.residual = row.exact ? 0.0 : abs(row.lhs - row.rhs).to_double();
        }
        rep.rows.push_back(std::move(row));
    }

    // S rows: (x/-i)^{-3/2} phi_i(-1/x) + (M_S phi(x))_i = (M_S g(x))_i
    // M_S rows pick a single partner component: 1 <-> 2, 3 <-> 3
    const int partner[3] = {2, 1, 3};
    Complex weight = slash_weight(Complex(Real::of(x.x(), p), Real::of(0L, p)), prec);
    std::array<std::optional<Complex>, 3> A, B, C; // summands per row
    for (int r = 0; r < 3; ++r) {
        QuantumRow row;
        row.row = r + 4;
        row.description = std::string("S row ") + std::to_string(r + 1);
        std::string why;
        std::optional<Cyclotomic> phi_flip, phi_here;
        if (x.a == 0) {
            why = "-1/x undefined at x = 0";
        } else {
            phi_flip = try_strange(comps[r], x.s_image(), why);
            if (phi_flip) phi_here = try_strange(comps[partner[r] - 1], x, why);
        }
        if (!phi_flip || !phi_here) {
            row.status = "SKIPPED";
            row.reason = why;
            rep.rows.push_back(std::move(row));
            continue;
        }
        Cyclotomic mcoef = matrix_S()[r][partner[r] - 1];
        auto g = g_period(partner[r], x, cfg);
        A[r] = weight * phi_flip->embed(prec);
        B[r] = mcoef.embed(prec) * phi_here->embed(prec);
        C[r] = mcoef.embed(prec) * g.value;
        row.status = "OK";
        row.lhs = *A[r] + *B[r];
        row.rhs = *C[r];
        row.residual = abs(row.lhs - row.rhs).to_double();
        rep.rows.push_back(std::move(row));
    }

    // normalization fit: rows 4 and 5 couple lambda1 and lambda2 through
    // lambda_i A + lambda_j B = C
    if (A[0] && A[1]) {
        // row 4: l1 A4 + l2 B4 = C4; row 5: l2 A5 + l1 B5 = C5
        Complex det = *A[0] * *A[1] - *B[0] * *B[1];
        if (abs(det).to_double() > 1e-30) {
            rep.lambda1 = (*C[0] * *A[1] - *B[0] * *C[1]) / det;
            rep.lambda2 = (*A[0] * *C[1] - *C[0] * *B[1]) / det;
        }
    }
    return rep;
}

std::array<Real, 3> verify_lower_half_transform(const Complex& x_lower,
                                                const QuadratureConfig& cfg)
{
    long prec = cfg.precision;
    long p = prec + 16;
    Complex x = x_lower.at_prec(p);
    Complex flip = -Complex::one(p) / x;
    Complex weight = slash_weight(x, prec);

    std::array<Complex, 3> fs, ff, gv;
    for (int c = 1; c <= 3; ++c) {
        fs[c - 1] = f_star_lower(c, x, cfg).value;
        ff[c - 1] = f_star_lower(c, flip, cfg).value;
        gv[c - 1] = g_period_at(c, x, cfg).value;
    }
    std::array<Real, 3> out = {Real::of(0L, p), Real::of(0L, p), Real::of(0L, p)};
    for (int r = 0; r < 3; ++r) {
        Complex lhs = weight * ff[r];
        Complex rhs = Complex::zero(p);
        for (int c = 0; c < 3; ++c) {
            if (matrix_S()[r][c].is_zero()) continue;
            Complex m = matrix_S()[r][c].embed(prec);
            lhs += m * fs[c];
            rhs += m * gv[c];
        }
        out[r] = abs(lhs - rhs);
    }
    return out;
}

nlohmann::json QuantumReport::to_json() const
{
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json jr = {{"row", r.row},
                             {"description", r.description},
                             {"status", r.status}};
        if (r.status == "OK") {
            jr["lhs"] = {r.lhs.re().str(20), r.lhs.im().str(20)};
            jr["rhs"] = {r.rhs.re().str(20), r.rhs.im().str(20)};
            jr["residual"] = r.residual;
            if (r.row <= 3) jr["exact"] = r.exact;
        } else {
            jr["reason"] = r.reason;
        }
        rows_json.push_back(std::move(jr));
    }
    nlohmann::json j = {{"x", x.str()}, {"rows", rows_json}};
    if (lambda1) j["lambda1"] = {lambda1->re().str(12), lambda1->im().str(12)};
    if (lambda2) j["lambda2"] = {lambda2->re().str(12), lambda2->im().str(12)};
    return j;
}

} // namespace qmf
