#include "mvindep/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "mvindep/errors.hpp"

namespace mvindep::sf {

namespace {

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                const QuadratureSpec& spec) {
    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod(f, a, b);
    double value = first.value;
    double error = first.error;
    panels.push(first);
    int subdivisions = 0;
    while (error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(value))) {
        if (subdivisions >= spec.max_subdivisions)
            throw ConvergenceError("integrate: subdivision budget exhausted", value, error);
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw ConvergenceError("integrate: panel width at machine precision", value, error);
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }
    // Re-sum to shed the drift of the running updates.
    double total = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        panels.pop();
    }
    return total;
}

// ∫_a^b f(u) du with u = end ∓ (b-a)e^{-t}, t = s/(1-s).
double integrate_exp_mapped(const std::function<double(double)>& f, double a, double b,
                            bool toward_right, const QuadratureSpec& spec) {
    const double width = b - a;
    auto mapped = [&](double s) -> double {
        if (s >= 1.0) return 0.0;
        const double t = s / (1.0 - s);
        const double gap = width * std::exp(-t);
        if (gap == 0.0) return 0.0;
        const double u = toward_right ? b - gap : a + gap;
        if (u <= a || u >= b) return 0.0;
        const double jacobian = gap / ((1.0 - s) * (1.0 - s));
        return f(u) * jacobian;
    };
    return adaptive(mapped, 0.0, 1.0, spec);
}

}  // namespace

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a < b)) throw DomainError("integrate: requires a < b");
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        throw DomainError("integrate: tolerances must be positive and budget >= 1");
    if (!f.eval) throw DomainError("integrate: empty integrand");

    if (f.singular_left && f.singular_right) {
        const double mid = 0.5 * (a + b);
        // Halve tolerances so the sum meets the requested bound.
        QuadratureSpec half = spec;
        half.abs_tol *= 0.5;
        return integrate_exp_mapped(f.eval, a, mid, false, half) +
               integrate_exp_mapped(f.eval, mid, b, true, half);
    }
    if (f.singular_right) return integrate_exp_mapped(f.eval, a, b, true, spec);
    if (f.singular_left) return integrate_exp_mapped(f.eval, a, b, false, spec);
    return adaptive(f.eval, a, b, spec);
}

double find_root(const std::function<double(double)>& g, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw DomainError("find_root: tol must be positive");
    if (!(lo < hi)) throw DomainError("find_root: requires lo < hi");
    double a = lo;
    double b = hi;
    double fa = g(a);
    double fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0))
        throw BracketError("find_root: no sign change on the bracket");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < 500; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;

        const bool finite = std::isfinite(fa) && std::isfinite(fb) && std::isfinite(fc);
        if (finite && std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;  // secant
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            const double min2 = std::fabs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = g(b);
        if (std::isnan(fb)) throw DomainError("find_root: function returned NaN");
    }
    throw ConvergenceError("find_root: iteration budget exhausted", b, std::fabs(c - b));
}

}  // namespace mvindep::sf
