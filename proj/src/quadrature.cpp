#include "secrescope/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

namespace secrescope {

namespace {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const Integrand& f, double a, double b, long& evals) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
    evals += 21;
    // The non-recursive path reports |K - G| on the reference interval [-1, 1].
    return {a, b, v, err * 0.5 * (b - a)};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt,
                     const std::vector<double>& breakpoints) {
    QuadResult res;
    if (a == b) return res;
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        Panel p = gk21(f, pts[i], pts[i + 1], res.evals);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (panels >= opt.max_panels) {
            res.converged = false;
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            res.converged = false;
            heap.push(worst);
            break;
        }
        Panel l = gk21(f, worst.a, mid, res.evals);
        Panel r = gk21(f, mid, worst.b, res.evals);
        total += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    // Re-sum to shed accumulated rounding from the running totals.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = sum;
    res.error = err;
    return res;
}

QuadResult integrate_to_infinity(const Integrand& f, double a, double scale, const QuadOptions& opt) {
    if (!(scale > 0.0)) scale = 1.0;
    // Geometric scan to locate the peak and the point where the tail is negligible.
    std::vector<double> grid;
    double lo = a + scale * 1e-8;
    double x = lo;
    double peak = 0.0;
    double cutoff = 0.0;
    int quiet = 0;
    long evals = 0;
    while (x < a + scale * 1e12) {
        double v = std::abs(f(x));
        ++evals;
        grid.push_back(x);
        if (v > peak) {
            peak = v;
            quiet = 0;
        } else if (v < opt.cutoff_ratio * peak && x > a + scale) {
            if (++quiet >= 4) {
                cutoff = x;
                break;
            }
        } else {
            quiet = 0;
        }
        x = a + (x - a) * 1.6;
    }
    if (cutoff == 0.0) cutoff = x;

    std::vector<double> breaks;
    for (double g : grid)
        if (g < cutoff) breaks.push_back(g);
    QuadResult res = integrate(f, a, cutoff, opt, breaks);
    res.evals += evals;
    for (int k = 0; k < 30; ++k) {
        QuadResult tail = integrate(f, cutoff, 2.0 * cutoff, opt);
        res.evals += tail.evals;
        res.value += tail.value;
        res.error += tail.error;
        res.converged = res.converged && tail.converged;
        cutoff *= 2.0;
        if (std::abs(tail.value) < opt.doubling_tol) break;
        if (k == 29) res.converged = false;
    }
    res.cutoff = cutoff;
    return res;
}

}  // namespace secrescope
