#include "polfocus/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace polfocus::quad {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (positive half; the rule is symmetric)
// with the embedded 7-point Gauss rule on the odd-indexed nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg{0.129484966168870, 0.279705391489277, 0.381830050505119,
                                    0.417959183673469};

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    double resabs;  // L1 mass of the integrand on the panel
    long id;        // creation order; ties in the heap break on it for determinism
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.id < y.id;  // older panel first among equals
    }
};

// A resolved panel's Kronrod-Gauss discrepancy bottoms out at rounding level
// relative to the integrand's L1 mass; below this floor subdivision only
// chases noise, so the floor counts as converged. Keeps the stopping rule
// invariant under a uniform rescaling of the integrand.
constexpr double kNoiseFloor = 50.0 * std::numeric_limits<double>::epsilon();

Panel evaluate_panel(const std::function<cplx(double)>& f, double a, double b, long id) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx kron = kWgk[7] * fc;
    cplx gauss = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[static_cast<size_t>(j)];
        const cplx lo = f(c - dx);
        const cplx hi = f(c + dx);
        const cplx pair = lo + hi;
        kron += kWgk[static_cast<size_t>(j)] * pair;
        resabs += kWgk[static_cast<size_t>(j)] * (std::abs(lo) + std::abs(hi));
        if (j % 2 == 1) gauss += kWg[static_cast<size_t>(j / 2)] * pair;
    }
    kron *= h;
    gauss *= h;
    resabs *= h;
    return Panel{a, b, kron, std::abs(kron - gauss), resabs, id};
}

}  // namespace

QuadratureResult<cplx> integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                          const QuadratureSpec& spec) {
    if (!(b > a)) throw std::invalid_argument("integrate_interval: requires b > a");
    if (spec.max_subdivisions < 1)
        throw std::invalid_argument("integrate_interval: max_subdivisions must be positive");
    if (spec.rule_points != 15)
        throw std::invalid_argument("integrate_interval: only the 15-point rule is implemented");

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    long next_id = 0;
    heap.push(evaluate_panel(f, a, b, next_id++));

    int splits = 0;
    cplx total = heap.top().value;
    double total_err = heap.top().error;
    double total_resabs = heap.top().resabs;

    auto tolerance = [&](const cplx& v, double resabs) {
        return std::max({spec.abs_tol, spec.rel_tol * std::abs(v), kNoiseFloor * resabs});
    };

    while (total_err > tolerance(total, total_resabs) && splits < spec.max_subdivisions) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval has collapsed to machine resolution; keep it as is.
            heap.push(Panel{worst.a, worst.b, worst.value, 0.0, worst.resabs, worst.id});
            ++splits;
            continue;
        }
        const Panel left = evaluate_panel(f, worst.a, mid, next_id++);
        const Panel right = evaluate_panel(f, mid, worst.b, next_id++);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        ++splits;
    }

    // Recompute value and error by summing panels in spatial order: the running
    // update above drifts, and a fixed order keeps reruns bitwise identical.
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    cplx value = 0.0;
    double error = 0.0;
    double resabs = 0.0;
    for (const auto& p : panels) {
        value += p.value;
        error += p.error;
        resabs += p.resabs;
    }

    QuadratureResult<cplx> out;
    out.value = value;
    out.error_estimate = error;
    out.subdivisions = splits;
    out.converged = error <= tolerance(value, resabs);
    return out;
}

namespace {

QuadratureSpec tightened(const QuadratureSpec& spec) {
    QuadratureSpec inner = spec;
    inner.rel_tol = spec.rel_tol * 0.1;
    inner.abs_tol = spec.abs_tol * 0.1;
    return inner;
}

void check_cap_domain(double theta_max) {
    if (!(theta_max > 0.0) || theta_max > 1.45)
        throw std::domain_error("integrate_cap: theta_max must lie in (0, 1.45]");
}

}  // namespace

QuadratureResult<cplx> integrate_cap(const std::function<cplx(double, double)>& f,
                                     double theta_max, const std::function<double(double)>& weight,
                                     const QuadratureSpec& spec) {
    check_cap_domain(theta_max);
    const QuadratureSpec inner = tightened(spec);

    bool inner_converged = true;
    double inner_error = 0.0;
    int inner_subdiv = 0;

    auto theta_integrand = [&](double theta) -> cplx {
        const auto phi_result = integrate_interval(
            [&](double phi) { return f(theta, phi); }, 0.0, 2.0 * M_PI, inner);
        inner_converged = inner_converged && phi_result.converged;
        inner_error = std::max(inner_error, phi_result.error_estimate);
        inner_subdiv = std::max(inner_subdiv, phi_result.subdivisions);
        return weight(theta) * phi_result.value;
    };

    auto outer = integrate_interval(theta_integrand, 0.0, theta_max, spec);
    outer.converged = outer.converged && inner_converged;
    outer.error_estimate = std::max(outer.error_estimate, inner_error);
    outer.subdivisions = std::max(outer.subdivisions, inner_subdiv);
    return outer;
}

namespace {

template <typename Runner>
QuadratureResult<Matrix3c> componentwise(const Runner& run_component) {
    QuadratureResult<Matrix3c> out;
    out.converged = true;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const QuadratureResult<cplx> r = run_component(i, j);
            out.value(i, j) = r.value;
            out.error_estimate = std::max(out.error_estimate, r.error_estimate);
            out.subdivisions = std::max(out.subdivisions, r.subdivisions);
            out.converged = out.converged && r.converged;
        }
    }
    return out;
}

}  // namespace

QuadratureResult<Matrix3c> integrate_cap(const std::function<Matrix3c(double, double)>& f,
                                         double theta_max,
                                         const std::function<double(double)>& weight,
                                         const QuadratureSpec& spec) {
    check_cap_domain(theta_max);
    return componentwise([&](int i, int j) {
        return integrate_cap([&](double theta, double phi) { return f(theta, phi)(i, j); },
                             theta_max, weight, spec);
    });
}

QuadratureResult<cplx> integrate_box3(const std::function<cplx(const WaveVector&)>& f,
                                      const Box3& box, const QuadratureSpec& spec) {
    if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y) || !(box.hi.z > box.lo.z))
        throw std::invalid_argument("integrate_box3: box must have positive extent");

    const QuadratureSpec mid = tightened(spec);
    const QuadratureSpec inner = tightened(mid);

    bool nested_converged = true;
    double nested_error = 0.0;
    int nested_subdiv = 0;

    auto x_integrand = [&](double kx) -> cplx {
        auto y_integrand = [&](double ky) -> cplx {
            const auto rz = integrate_interval(
                [&](double kz) { return f(WaveVector{kx, ky, kz}); }, box.lo.z, box.hi.z, inner);
            nested_converged = nested_converged && rz.converged;
            nested_error = std::max(nested_error, rz.error_estimate);
            nested_subdiv = std::max(nested_subdiv, rz.subdivisions);
            return rz.value;
        };
        const auto ry = integrate_interval(y_integrand, box.lo.y, box.hi.y, mid);
        nested_converged = nested_converged && ry.converged;
        nested_error = std::max(nested_error, ry.error_estimate);
        nested_subdiv = std::max(nested_subdiv, ry.subdivisions);
        return ry.value;
    };

    auto out = integrate_interval(x_integrand, box.lo.x, box.hi.x, spec);
    const double measure = 1.0 / std::pow(2.0 * M_PI, 3);
    out.value *= measure;
    out.error_estimate = std::max(out.error_estimate, nested_error) * measure;
    out.converged = out.converged && nested_converged;
    out.subdivisions = std::max(out.subdivisions, nested_subdiv);
    return out;
}

QuadratureResult<Matrix3c> integrate_box3(const std::function<Matrix3c(const WaveVector&)>& f,
                                          const Box3& box, const QuadratureSpec& spec) {
    return componentwise([&](int i, int j) {
        return integrate_box3([&](const WaveVector& k) { return f(k)(i, j); }, box, spec);
    });
}

}  // namespace polfocus::quad
