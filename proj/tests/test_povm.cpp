#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "polfocus/povm.hpp"
#include "polfocus/reduce.hpp"

using namespace polfocus;
using namespace polfocus::povm;

namespace {

constexpr double kPi = 3.14159265358979323846;

const Vec3 kX{1.0, 0.0, 0.0};
const Vec3 kY{0.0, 1.0, 0.0};
const Vec3 kZ{0.0, 0.0, 1.0};

struct SplitMix64 {
    std::uint64_t state;
    double next_unit() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    Vec3 unit_vector(double zmin) {
        const double z = zmin + (1.0 - zmin) * next_unit();
        const double phi = 2.0 * kPi * next_unit();
        const double s = std::sqrt(1.0 - z * z);
        return {s * std::cos(phi), s * std::sin(phi), z};
    }
};

quad::QuadratureSpec loose_spec(double rel) {
    quad::QuadratureSpec s;
    s.rel_tol = rel;
    s.abs_tol = rel * 1e-3;
    return s;
}

}  // namespace

TEST_SUITE("povm") {
    TEST_CASE("transversal part: projection identities") {
        CHECK(norm(transversal_part(kX, WaveVector{0.0, 0.0, 4.0}) - to_complex(kX)) < 1e-15);
        CHECK(norm(transversal_part(kZ, WaveVector{0.0, 0.0, 4.0})) < 1e-15);
        // No singular axis for the geometric projection.
        CHECK(norm(transversal_part(kX, WaveVector{0.0, 0.0, -4.0}) - to_complex(kX)) < 1e-15);

        const double s = 1.0 / std::sqrt(2.0);
        const CVec3 half = transversal_part(kX, WaveVector{s, 0.0, s});
        CHECK(norm(half - CVec3{cplx{0.5, 0.0}, cplx{0.0, 0.0}, cplx{-0.5, 0.0}}) < 1e-15);
        CHECK(norm2(half) == doctest::Approx(0.5).epsilon(1e-14));

        CHECK_THROWS_AS(transversal_part(Vec3{1.0, 1.0, 0.0}, WaveVector{0.0, 0.0, 1.0}),
                        std::domain_error);
    }

    TEST_CASE("decomposition: circular coefficients close the norm identity") {
        SplitMix64 rng{0x706f766dULL};
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const Vec3 j = rng.unit_vector(-1.0);
            const WaveVector k = 3.0 * rng.unit_vector(-0.89);
            const DirectionDecomposition d = decompose_direction(j, k);
            const double total = std::norm(d.x_plus) + std::norm(d.x_minus) + d.x_long * d.x_long;
            worst = std::max(worst, std::abs(total - 1.0));
            worst = std::max(worst, std::abs(d.x_long - dot(j, normalized(k))));

            // The circular reconstruction agrees with the geometric projection.
            const modes::HelicityBasis basis = modes::helicity_basis(k);
            const CVec3 rebuilt = std::conj(d.x_plus) * basis.eps_plus +
                                  std::conj(d.x_minus) * basis.eps_minus;
            worst = std::max(worst, norm(rebuilt - transversal_part(j, k)));
        }
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("completeness: summed elements resolve the transversal projector") {
        CHECK(completeness_defect(WaveVector{0.0, 0.0, 1.0}) <= 1e-12);
        CHECK(completeness_defect(WaveVector{0.3, -0.4, 0.8}) <= 1e-12);
        CHECK(completeness_defect(WaveVector{0.0, 0.0, -2.0}) <= 1e-12);
        CHECK(direction_state_completeness_at(WaveVector{0.2, 0.7, 0.4}) <= 1e-12);
        CHECK(direction_state_completeness(200, 0x5eedULL) <= 1e-12);
        CHECK_THROWS_AS(direction_state_completeness(0, 1ULL), std::invalid_argument);
    }

    TEST_CASE("plane waves: aligned and crossed analyzers") {
        const modes::PhotonMode mode =
            modes::plane_wave_mode(WaveVector{0.0, 0.0, 5.0}, to_complex(kX));
        CHECK(povm_expectation(mode, kX) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(povm_expectation(mode, kY) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(povm_expectation(mode, kZ) == doctest::Approx(0.0).epsilon(1e-14));
    }

    TEST_CASE("gaussian packet: outcome statistics match the density diagonal") {
        const modes::GaussianPacket p = modes::GaussianPacket::from_spreads(1.0, 0.05, 0.02, +1);
        const modes::PhotonMode mode = modes::gaussian_helicity_mode(p);
        const quad::QuadratureSpec spec = loose_spec(1e-5);
        const double tol = 10.0 * spec.rel_tol;

        const DensityMatrix3 rho = reduce::effective_density(mode, spec);
        const double px = povm_expectation(mode, kX, spec);
        const double py = povm_expectation(mode, kY, spec);
        const double pz = povm_expectation(mode, kZ, spec);

        CHECK(std::abs(px - std::real(rho(0, 0))) < tol);
        CHECK(std::abs(py - std::real(rho(1, 1))) < tol);
        CHECK(std::abs(pz - std::real(rho(2, 2))) < tol);
        CHECK(std::abs(px + py + pz - 1.0) < 3.0 * spec.rel_tol);

        // The longitudinal outcome carries the omega^2/2 correction.
        const double omega = modes::omega_parameter(p);
        CHECK(pz == doctest::Approx(0.5 * omega * omega).epsilon(0.02));

        // A skew analyzer contracts the density matrix on both sides.
        const Vec3 skew = normalized(Vec3{1.0, 1.0, 1.0});
        const CVec3 jc = to_complex(skew);
        CHECK(std::abs(povm_expectation(mode, skew, spec) -
                       std::real(inner(jc, rho.matrix() * jc))) < tol);
    }

    TEST_CASE("expectations transform covariantly with the mode") {
        const modes::GaussianPacket p = modes::GaussianPacket::from_spreads(1.0, 0.05, 0.02, +1);
        const modes::PhotonMode mode = modes::gaussian_helicity_mode(p);
        const Rotation3 r = Rotation3::about_axis(normalized(Vec3{0.2, 1.0, 0.1}), 0.9);
        const quad::QuadratureSpec spec = loose_spec(1e-5);
        const Vec3 j = normalized(Vec3{0.3, -0.5, 0.8});
        CHECK(std::abs(povm_expectation(mode, j, spec) -
                       povm_expectation(modes::rotate_mode(mode, r), r.apply(j), spec)) <
              10.0 * spec.rel_tol);
    }

    TEST_CASE("discrete modes: exact weighted outcome sums") {
        const CVec3 ey = to_complex(kY);
        std::vector<modes::ModeAtom> atoms{
            {1.0, WaveVector{0.0, 0.0, 2.0}, to_complex(kX)},
            {3.0, WaveVector{0.0, 0.0, 5.0}, ey}};
        const modes::PhotonMode mode = modes::PhotonMode::discrete(atoms);
        CHECK(povm_expectation(mode, kX) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(povm_expectation(mode, kY) == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(povm_expectation(mode, kZ) == doctest::Approx(0.0).epsilon(1e-14));
    }
}
