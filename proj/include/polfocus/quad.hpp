#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "polfocus/types.hpp"

namespace polfocus::quad {

/// Controls for the adaptive Gauss–Kronrod integrator. Convergence requires the
/// global error estimate to fall below max(abs_tol, rel_tol * |value|) or to
/// reach the double-precision floor of ~50 eps relative to the integrand's L1
/// mass, beyond which subdivision only resolves rounding noise.
/// rule_points names the panel rule; only the 15-point Kronrod extension of
/// the 7-point Gauss rule is implemented, so any other value is rejected.
struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 20000;
    int rule_points = 15;
};

template <typename T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

/// Running aggregate over several quadrature runs: worst error estimate,
/// largest panel count, and whether every run converged. Library functions
/// that integrate internally accept an optional pointer to one of these so
/// callers can report diagnostics without re-running the integrals.
struct QuadratureStats {
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = true;

    template <typename T>
    void absorb(const QuadratureResult<T>& r) {
        error_estimate = std::max(error_estimate, r.error_estimate);
        subdivisions = std::max(subdivisions, r.subdivisions);
        converged = converged && r.converged;
    }
};

/// Thrown when the subdivision budget runs out before the tolerance is met.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double estimate)
        : std::runtime_error(what), error_estimate_(estimate) {}
    double error_estimate() const { return error_estimate_; }

  private:
    double error_estimate_;
};

/// Adaptive 7-15 Gauss–Kronrod quadrature of a complex integrand over [a, b].
/// Subdivision order and summation order are fixed, so results are bitwise
/// reproducible for a given integrand and spec.
QuadratureResult<cplx> integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                          const QuadratureSpec& spec = {});

/// Integral over the spherical cap theta in [0, theta_max], phi in [0, 2pi) of
/// weight(theta) * f(theta, phi), iterated as an adaptive theta integral whose
/// integrand is an adaptive phi integral (run at a tenth of the requested
/// tolerance). theta_max must lie in (0, 1.45]: the weights in use blow up at
/// grazing angles, so the cap is kept clear of pi/2.
QuadratureResult<cplx> integrate_cap(const std::function<cplx(double, double)>& f,
                                     double theta_max, const std::function<double(double)>& weight,
                                     const QuadratureSpec& spec = {});

/// Matrix-valued cap integral; each of the nine components is integrated
/// independently with the scalar engine, so it commutes componentwise with
/// the scalar overload. Error estimate and subdivision count are the maxima
/// over components.
QuadratureResult<Matrix3c> integrate_cap(const std::function<Matrix3c(double, double)>& f,
                                         double theta_max,
                                         const std::function<double(double)>& weight,
                                         const QuadratureSpec& spec = {});

/// Axis-aligned integration box in wave-vector space.
struct Box3 {
    Vec3 lo;
    Vec3 hi;
};

/// Integral of f over the box with respect to the mode measure
/// d^3k / (2pi)^3 — the (2pi)^-3 factor is applied here and nowhere else.
/// Iterated adaptively as x(y(z)), inner levels at a tenth of the tolerance.
QuadratureResult<cplx> integrate_box3(const std::function<cplx(const WaveVector&)>& f,
                                      const Box3& box, const QuadratureSpec& spec = {});

/// Componentwise matrix version of the box integral (see the cap overload).
QuadratureResult<Matrix3c> integrate_box3(const std::function<Matrix3c(const WaveVector&)>& f,
                                          const Box3& box, const QuadratureSpec& spec = {});

}  // namespace polfocus::quad
