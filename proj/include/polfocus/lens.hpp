#pragma once

#include "polfocus/polmat3.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/types.hpp"

namespace polfocus::lens {

/// Thin ideal lens described by focal length and aperture radius. The cone
/// half-angle follows from tan(theta_max) = aperture_radius / focal_length
/// and must stay below 1.45 rad, clear of the grazing-ray divergence.
struct LensSpec {
    double focal_length = 0.0;    // m
    double aperture_radius = 0.0; // m

    [[nodiscard]] static LensSpec from_geometry(double focal_length, double aperture_radius);
    /// Convenience: aperture chosen so the cone half-angle equals theta_max.
    [[nodiscard]] static LensSpec from_theta_max(double theta_max, double focal_length = 1.0);

    [[nodiscard]] double theta_max() const { return std::atan(aperture_radius / focal_length); }
    [[nodiscard]] double focal_ratio() const { return focal_length / (2.0 * aperture_radius); }
};

/// Cone angle of the ray through radius r on the lens plane: atan(r/f).
[[nodiscard]] double theta_of_r(double r, double f);

/// Direction of the deflected ray: -sin(theta)(cos(phi), sin(phi), 0) + cos(theta) z_hat.
[[nodiscard]] Vec3 deflect_direction(double theta, double phi);

/// Polarization transport through the lens: the radial component of the
/// incoming transverse polarization tilts into (cos(theta) r_hat + sin(theta) z_hat),
/// the azimuthal component is unchanged. Linear in pol_in; the output is unit
/// and transversal to deflect_direction(theta, phi). Requires |pol_in| = 1 and
/// pol_in . z_hat = 0 within 1e-12, else std::domain_error.
[[nodiscard]] CVec3 refract_polarization(const CVec3& pol_in, double theta, double phi);

/// Field strength of the converging wave at spherical radius R from the
/// focus: (cos(theta))^{-3/2} * f / R, from energy conservation across the
/// ray tube (the incoming wavefront is planar, the outgoing one spherical).
[[nodiscard]] double field_strength(double theta, double R, double f);

/// Post-lens state: a spherical wave converging on the focus, carrying a
/// per-ray polarization and the relative strength (cos(theta))^{-3/2}.
struct ConvergingSphericalWave {
    double theta_max = 0.0;
    CVec3 incoming_polarization;

    [[nodiscard]] CVec3 ray_polarization(double theta, double phi) const {
        return refract_polarization(incoming_polarization, theta, phi);
    }
    [[nodiscard]] double strength(double theta) const {
        return std::pow(std::cos(theta), -1.5);
    }
};

/// Bundle the ray-tracing maps for a given lens and incoming transverse
/// polarization. Validation as in refract_polarization.
[[nodiscard]] ConvergingSphericalWave lens_output_state(const LensSpec& lens, const CVec3& pol_in);

/// Unit circular polarization (1, i*helicity, 0)/sqrt(2); helicity must be
/// +1 or -1, else std::domain_error.
[[nodiscard]] CVec3 circular_polarization(int helicity);

/// Density matrix of the converging wave: the angular integral of the ray
/// polarization outer products with weight strength(theta)^2 sin(theta),
/// normalized. Throws quad::QuadratureError on non-convergence. Optional
/// `stats` collects the quadrature diagnostics.
[[nodiscard]] DensityMatrix3 lens_density(const ConvergingSphericalWave& state,
                                          const quad::QuadratureSpec& spec = {},
                                          quad::QuadratureStats* stats = nullptr);

/// Leading-order form of the focused circular state: (1 - theta_max^2/4)
/// times the circular projector on the x,y block plus theta_max^2/4 in the zz
/// corner. Valid for 0 < theta_max < 0.5.
[[nodiscard]] DensityMatrix3 lens_series_density(double theta_max, int helicity);

/// Helstrom error probability between the two circular-input lens densities,
/// computed by quadrature; approaches theta_max^2/8 for small cones.
[[nodiscard]] double error_probability_lens(double theta_max,
                                            const quad::QuadratureSpec& spec = {});

/// Analytic zz entry of the circular-input lens density:
/// (tan^2(tm)/2 + ln cos(tm)) / tan^2(tm), from the azimuthal average
/// sin^2(theta)/2 and the antiderivative of tan^3.
[[nodiscard]] double lens_rho_zz_closed_form(double theta_max);

/// Analytic xy entry for helicity +1: -i (sec(tm) - 1) / tan^2(tm), from the
/// azimuthal average -i cos(theta)/2 and the antiderivative of sin/cos^2.
[[nodiscard]] cplx lens_rho_xy_closed_form(double theta_max);

}  // namespace polfocus::lens
