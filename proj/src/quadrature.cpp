#include "randopt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace randopt::quad {
namespace {

// Kronrod 15-point abscissae on [-1, 1], positive half; even indices are
// the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

std::vector<double> clip_breaks(std::vector<double> pts, double a, double b) {
    std::erase_if(pts, [&](double x) { return !(x > a && x < b) || !std::isfinite(x); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Result integrate(const Integrand& f, double a, double b, std::span<const double> breaks,
                 Tolerance tol) {
    Result out;
    if (!(b > a)) return out;

    std::vector<double> edges{a};
    for (double x : clip_breaks({breaks.begin(), breaks.end()}, a, b)) edges.push_back(x);
    edges.push_back(b);

    std::priority_queue<Panel> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = gk15(f, edges[i], edges[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }

    int panels = static_cast<int>(heap.size());
    while (error > std::max(tol.abs, tol.rel * std::abs(value)) && panels < tol.max_panels) {
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        // Panel no longer splittable in floating point.
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum from the panels to shed drift accumulated by the running update.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = value;
    out.error = error;
    out.panels = panels;
    out.converged = error <= std::max(tol.abs, tol.rel * std::abs(value));
    return out;
}

}  // namespace randopt::quad
