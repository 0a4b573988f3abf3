#include "polfocus/lens.hpp"

#include <cmath>

namespace polfocus::lens {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kThetaCap = 1.45;

double validation_tolerance(const quad::QuadratureSpec& spec) {
    return 10.0 * std::max(spec.rel_tol, spec.abs_tol);
}

void check_theta_max(double theta_max) {
    if (!(theta_max > 0.0) || theta_max > kThetaCap)
        throw std::domain_error("lens: theta_max must lie in (0, 1.45]");
}

}  // namespace

LensSpec LensSpec::from_geometry(double focal_length, double aperture_radius) {
    if (!(focal_length > 0.0) || !(aperture_radius > 0.0))
        throw std::invalid_argument("LensSpec: focal length and aperture must be positive");
    LensSpec spec{focal_length, aperture_radius};
    check_theta_max(spec.theta_max());
    return spec;
}

LensSpec LensSpec::from_theta_max(double theta_max, double focal_length) {
    check_theta_max(theta_max);
    if (!(focal_length > 0.0))
        throw std::invalid_argument("LensSpec: focal length must be positive");
    return LensSpec{focal_length, focal_length * std::tan(theta_max)};
}

double theta_of_r(double r, double f) {
    if (!(r >= 0.0) || !(f > 0.0)) throw std::invalid_argument("theta_of_r: requires r >= 0, f > 0");
    return std::atan(r / f);
}

Vec3 deflect_direction(double theta, double phi) {
    const double s = std::sin(theta);
    return {-s * std::cos(phi), -s * std::sin(phi), std::cos(theta)};
}

CVec3 refract_polarization(const CVec3& pol_in, double theta, double phi) {
    if (std::abs(norm(pol_in) - 1.0) > kUnitTol)
        throw std::domain_error("refract_polarization: input polarization is not unit length");
    if (std::abs(pol_in.z) > kUnitTol)
        throw std::domain_error("refract_polarization: input polarization is not transverse to z");

    const Vec3 r_hat{std::cos(phi), std::sin(phi), 0.0};
    const Vec3 phi_hat{-std::sin(phi), std::cos(phi), 0.0};
    const cplx a_r = dot(pol_in, to_complex(r_hat));
    const cplx a_phi = dot(pol_in, to_complex(phi_hat));
    const Vec3 r_tilted{std::cos(theta) * r_hat.x, std::cos(theta) * r_hat.y, std::sin(theta)};
    return a_r * to_complex(r_tilted) + a_phi * to_complex(phi_hat);
}

double field_strength(double theta, double R, double f) {
    if (!(R > 0.0) || !(f > 0.0)) throw std::invalid_argument("field_strength: requires R, f > 0");
    return std::pow(std::cos(theta), -1.5) * f / R;
}

ConvergingSphericalWave lens_output_state(const LensSpec& lens, const CVec3& pol_in) {
    ConvergingSphericalWave state;
    state.theta_max = lens.theta_max();
    state.incoming_polarization = pol_in;
    (void)refract_polarization(pol_in, 0.0, 0.0);  // validate the polarization up front
    return state;
}

DensityMatrix3 lens_density(const ConvergingSphericalWave& state, const quad::QuadratureSpec& spec,
                            quad::QuadratureStats* stats) {
    check_theta_max(state.theta_max);
    auto weight = [&](double theta) {
        const double e = state.strength(theta);
        return e * e * std::sin(theta);
    };

    const auto num = quad::integrate_cap(
        [&](double theta, double phi) {
            const CVec3 a = state.ray_polarization(theta, phi);
            return outer(a, a);
        },
        state.theta_max, weight, spec);
    const auto den = quad::integrate_cap([](double, double) { return cplx(1.0, 0.0); },
                                         state.theta_max, weight, spec);
    if (stats) {
        stats->absorb(num);
        stats->absorb(den);
    }
    if (!num.converged || !den.converged)
        throw quad::QuadratureError("lens_density: quadrature did not converge",
                                    std::max(num.error_estimate, den.error_estimate));
    return DensityMatrix3::checked((1.0 / std::real(den.value)) * num.value,
                                   validation_tolerance(spec));
}

DensityMatrix3 lens_series_density(double theta_max, int helicity) {
    if (!(theta_max > 0.0) || !(theta_max < 0.5))
        throw std::domain_error("lens_series_density: theta_max must lie in (0, 0.5)");
    if (helicity != 1 && helicity != -1)
        throw std::invalid_argument("lens_series_density: helicity must be +1 or -1");
    const double zz = 0.25 * theta_max * theta_max;
    const double t = 1.0 - zz;
    Matrix3c m;
    m(0, 0) = m(1, 1) = 0.5 * t;
    m(0, 1) = cplx(0.0, -0.5 * t * helicity);
    m(1, 0) = cplx(0.0, 0.5 * t * helicity);
    m(2, 2) = zz;
    return DensityMatrix3::checked(m, 1e-12);
}

CVec3 circular_polarization(int helicity) {
    if (helicity != 1 && helicity != -1)
        throw std::domain_error("circular_polarization: helicity must be +1 or -1");
    const double s = 1.0 / std::sqrt(2.0);
    return {s, cplx(0.0, helicity * s), 0.0};
}

double error_probability_lens(double theta_max, const quad::QuadratureSpec& spec) {
    check_theta_max(theta_max);
    const LensSpec lensspec = LensSpec::from_theta_max(theta_max);
    const DensityMatrix3 rho_plus =
        lens_density(lens_output_state(lensspec, circular_polarization(+1)), spec);
    const DensityMatrix3 rho_minus =
        lens_density(lens_output_state(lensspec, circular_polarization(-1)), spec);
    return error_probability(rho_plus, rho_minus);
}

double lens_rho_zz_closed_form(double theta_max) {
    check_theta_max(theta_max);
    const double t2 = std::pow(std::tan(theta_max), 2);
    return (0.5 * t2 + std::log(std::cos(theta_max))) / t2;
}

cplx lens_rho_xy_closed_form(double theta_max) {
    check_theta_max(theta_max);
    const double t2 = std::pow(std::tan(theta_max), 2);
    return cplx(0.0, -(1.0 / std::cos(theta_max) - 1.0) / t2);
}

}  // namespace polfocus::lens
