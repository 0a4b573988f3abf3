#include <cmath>

#include "doctest.h"
#include "polfocus/lens.hpp"
#include "polfocus/modes.hpp"

using namespace polfocus;
using namespace polfocus::lens;

namespace {

quad::QuadratureSpec tight_spec() {
    quad::QuadratureSpec s;
    s.rel_tol = 1e-10;
    s.abs_tol = 1e-13;
    return s;
}

// Value-exact comparison: every arithmetic step of the two integrations is a
// mirror image, so the densities must agree without any tolerance.  (operator==
// deliberately identifies +0.0 with -0.0, which std::conj flips on the test side.)
bool exactly_equal(const cplx& a, const cplx& b) {
    return a.real() == b.real() && a.imag() == b.imag();
}

double closed_form_error_probability(double tm) {
    const double sec = 1.0 / std::cos(tm);
    const double tan2 = std::pow(std::tan(tm), 2.0);
    return 0.5 - (sec - 1.0) / tan2;
}

}  // namespace

TEST_SUITE("lens") {
    TEST_CASE("geometry: cone angle, focal ratio, validation") {
        const LensSpec by_angle = LensSpec::from_theta_max(0.4);
        CHECK(by_angle.theta_max() == doctest::Approx(0.4).epsilon(1e-15));
        const LensSpec by_geometry = LensSpec::from_geometry(2.0, 1.0);
        CHECK(by_geometry.theta_max() == doctest::Approx(std::atan(0.5)).epsilon(1e-15));
        CHECK(by_geometry.focal_ratio() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(theta_of_r(1.0, 2.0) == doctest::Approx(std::atan(0.5)).epsilon(1e-15));

        CHECK_THROWS_AS(LensSpec::from_geometry(-1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(LensSpec::from_geometry(1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(LensSpec::from_theta_max(0.0), std::domain_error);
        CHECK_THROWS_AS(LensSpec::from_theta_max(1.46), std::domain_error);
        CHECK_THROWS_AS(theta_of_r(-1.0, 1.0), std::invalid_argument);
    }

    TEST_CASE("rays: deflected directions are unit and converge on the axis") {
        CHECK(norm(deflect_direction(0.0, 0.3) - Vec3{0.0, 0.0, 1.0}) < 1e-15);
        const Vec3 d = deflect_direction(0.4, 1.1);
        CHECK(std::abs(norm(d) - 1.0) < 1e-15);
        CHECK(d.z == doctest::Approx(std::cos(0.4)).epsilon(1e-15));
        CHECK(d.x == doctest::Approx(-std::sin(0.4) * std::cos(1.1)).epsilon(1e-15));
    }

    TEST_CASE("refraction: radial tilt, azimuthal invariance, transversality") {
        const CVec3 ex = to_complex(Vec3{1.0, 0.0, 0.0});
        const CVec3 ey = to_complex(Vec3{0.0, 1.0, 0.0});
        const double theta = 0.5;

        const CVec3 radial = refract_polarization(ex, theta, 0.0);
        CHECK(norm(radial - to_complex(Vec3{std::cos(theta), 0.0, std::sin(theta)})) < 1e-15);
        const CVec3 azimuthal = refract_polarization(ey, theta, 0.0);
        CHECK(norm(azimuthal - ey) < 1e-15);

        for (double phi : {0.0, 0.9, 2.4, 5.1}) {
            const CVec3 out = refract_polarization(circular_polarization(+1), theta, phi);
            CHECK(std::abs(norm(out) - 1.0) < 1e-14);
            CHECK(std::abs(dot(out, to_complex(deflect_direction(theta, phi)))) < 1e-14);
        }

        const CVec3 tilted{cplx{0.8, 0.0}, cplx{0.0, 0.0}, cplx{0.6, 0.0}};
        CHECK_THROWS_AS(refract_polarization(tilted, theta, 0.0), std::domain_error);
        const CVec3 overlong{cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}};
        CHECK_THROWS_AS(refract_polarization(overlong, theta, 0.0), std::domain_error);
    }

    TEST_CASE("refraction transports the circular pair onto the local basis") {
        // The tilt map is the minimal rotation taking +z onto the deflected
        // ray, which is exactly how the circular basis itself is transported:
        // the refracted circular input matches it with no residual phase.
        for (double theta : {0.1, 0.7, 1.3}) {
            for (double phi : {0.2, 1.7, 4.0}) {
                const CVec3 refracted = refract_polarization(circular_polarization(+1), theta, phi);
                const modes::HelicityBasis basis =
                    modes::helicity_basis(deflect_direction(theta, phi));
                CHECK(norm(refracted - basis.eps_plus) < 1e-13);
            }
        }
    }

    TEST_CASE("field strength: inverse radius with the aperture-angle boost") {
        CHECK(field_strength(0.0, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(field_strength(0.5, 1.0, 1.0) ==
              doctest::Approx(std::pow(std::cos(0.5), -1.5)).epsilon(1e-15));
        CHECK_THROWS_AS(field_strength(0.3, 0.0, 1.0), std::invalid_argument);

        const ConvergingSphericalWave state{0.5, circular_polarization(+1)};
        CHECK(state.strength(0.3) == doctest::Approx(std::pow(std::cos(0.3), -1.5)).epsilon(1e-15));
    }

    TEST_CASE("circular polarization labels") {
        const CVec3 plus = circular_polarization(+1);
        CHECK(std::abs(plus.x - cplx{1.0 / std::sqrt(2.0), 0.0}) < 1e-16);
        CHECK(std::abs(plus.y - cplx{0.0, 1.0 / std::sqrt(2.0)}) < 1e-16);
        CHECK(std::abs(plus.z) == 0.0);
        CHECK(norm(circular_polarization(-1) - conj(plus)) < 1e-16);
        CHECK_THROWS_AS(circular_polarization(0), std::domain_error);
        CHECK_THROWS_AS(circular_polarization(2), std::domain_error);
    }

    TEST_CASE("focused density matches both closed-form entries") {
        const quad::QuadratureSpec spec = tight_spec();
        for (double tm : {0.1, 0.3, 0.5, 0.8, 1.0}) {
            const ConvergingSphericalWave state{tm, circular_polarization(+1)};
            quad::QuadratureStats stats;
            const DensityMatrix3 rho = lens_density(state, spec, &stats);
            CHECK(stats.converged);
            CHECK(std::abs(std::real(rho(2, 2)) - lens_rho_zz_closed_form(tm)) < 1e-9);
            CHECK(std::abs(rho(0, 1) - lens_rho_xy_closed_form(tm)) < 1e-9);
            // Transverse populations share the remaining weight equally and
            // the block structure leaves the z row empty.
            CHECK(std::abs(rho(0, 0) - rho(1, 1)) < 1e-10);
            CHECK(std::abs(rho(0, 2)) < 1e-10);
            CHECK(std::abs(rho(1, 2)) < 1e-10);
        }
        CHECK(lens_rho_zz_closed_form(0.5) == doctest::Approx(0.062453).epsilon(1e-4));
    }

    TEST_CASE("opposite circular inputs give exactly conjugate densities") {
        const ConvergingSphericalWave plus{0.6, circular_polarization(+1)};
        const ConvergingSphericalWave minus{0.6, circular_polarization(-1)};
        const DensityMatrix3 rp = lens_density(plus);
        const DensityMatrix3 rm = lens_density(minus);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(exactly_equal(rm(i, j), std::conj(rp(i, j))));
    }

    TEST_CASE("focused density is invariant under rotations about the axis") {
        const ConvergingSphericalWave state{0.7, circular_polarization(+1)};
        const DensityMatrix3 rho = lens_density(state);
        const Rotation3 rz = Rotation3::about_axis(Vec3{0.0, 0.0, 1.0}, 1.234);
        CHECK(max_abs(rotate_density(rho, rz).matrix() - rho.matrix()) < 1e-12);
    }

    TEST_CASE("series form: structure and domain") {
        const double tm = 0.2;
        const DensityMatrix3 rho = lens_series_density(tm, +1);
        const double zz = 0.25 * tm * tm;
        CHECK(std::abs(rho(2, 2) - cplx{zz, 0.0}) < 1e-16);
        CHECK(std::abs(rho(0, 0) - cplx{0.5 * (1.0 - zz), 0.0}) < 1e-16);
        CHECK(std::abs(rho(0, 1) - cplx{0.0, -0.5 * (1.0 - zz)}) < 1e-16);
        CHECK(max_abs(lens_series_density(tm, -1).matrix() - conj(rho.matrix())) == 0.0);

        CHECK_THROWS_AS(lens_series_density(0.5, +1), std::domain_error);
        CHECK_THROWS_AS(lens_series_density(0.0, +1), std::domain_error);
        CHECK_THROWS_AS(lens_series_density(0.2, 0), std::invalid_argument);

        const DensityMatrix3 quad_rho =
            lens_density(ConvergingSphericalWave{tm, circular_polarization(+1)}, tight_spec());
        CHECK(max_abs(quad_rho.matrix() - rho.matrix()) < 0.5 * std::pow(tm, 4.0));
    }

    TEST_CASE("distinguishability tracks the closed form and the small-angle law") {
        const quad::QuadratureSpec spec = tight_spec();
        for (double tm : {0.1, 0.2, 0.4}) {
            const double pe = error_probability_lens(tm, spec);
            CHECK(std::abs(pe - closed_form_error_probability(tm)) < 1e-9);
            CHECK(std::abs(pe - tm * tm / 8.0) <= 0.5 * std::pow(tm, 4.0));
        }
        CHECK(error_probability_lens(0.1, spec) == doctest::Approx(0.00125208).epsilon(1e-4));
    }

    TEST_CASE("density rejects an unusable cone and a tilted polarization") {
        CHECK_THROWS_AS(
            lens_density(ConvergingSphericalWave{0.0, circular_polarization(+1)}),
            std::domain_error);
        CHECK_THROWS_AS(
            lens_density(ConvergingSphericalWave{1.5, circular_polarization(+1)}),
            std::domain_error);
        const CVec3 tilted{cplx{0.8, 0.0}, cplx{0.0, 0.0}, cplx{0.6, 0.0}};
        CHECK_THROWS_AS(lens_output_state(LensSpec::from_theta_max(0.4), tilted),
                        std::domain_error);
    }

    TEST_CASE("non-convergence surfaces as the dedicated error type") {
        quad::QuadratureSpec starved;
        starved.rel_tol = 1e-12;
        starved.abs_tol = 1e-15;
        starved.max_subdivisions = 1;
        CHECK_THROWS_AS(
            lens_density(ConvergingSphericalWave{1.2, circular_polarization(+1)}, starved),
            quad::QuadratureError);
    }
}
