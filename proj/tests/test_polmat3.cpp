#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "polfocus/polmat3.hpp"

using namespace polfocus;

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix3c hermitian_sample() {
    Matrix3c m;
    m(0, 0) = 0.5;
    m(1, 1) = 0.3;
    m(2, 2) = 0.2;
    m(0, 1) = cplx{0.1, 0.05};
    m(1, 0) = std::conj(m(0, 1));
    m(0, 2) = cplx{-0.02, 0.07};
    m(2, 0) = std::conj(m(0, 2));
    m(1, 2) = cplx{0.04, -0.01};
    m(2, 1) = std::conj(m(1, 2));
    return m;
}

bool close(const cplx& a, const cplx& b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("polmat3") {
    TEST_CASE("rotations: axis images, composition, inverse") {
        const Rotation3 r = Rotation3::about_axis(Vec3{0.0, 0.0, 1.0}, kPi / 2.0);
        const Vec3 image = r.apply(Vec3{1.0, 0.0, 0.0});
        CHECK(norm(image - Vec3{0.0, 1.0, 0.0}) < 1e-15);

        const Rotation3 b = Rotation3::between(Vec3{0.0, 0.0, 1.0}, Vec3{1.0, 0.0, 0.0});
        CHECK(norm(b.apply(Vec3{0.0, 0.0, 1.0}) - Vec3{1.0, 0.0, 0.0}) < 1e-15);

        const Rotation3 round_trip = b.transposed() * b;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(round_trip(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);
    }

    TEST_CASE("rotations: degenerate and invalid input is rejected") {
        CHECK_THROWS_AS(Rotation3::between(Vec3{0.0, 0.0, 1.0}, Vec3{0.0, 0.0, -1.0}),
                        std::domain_error);
        // A reflection is orthogonal but has determinant -1.
        CHECK_THROWS_AS(Rotation3::from_matrix({1, 0, 0, 0, 1, 0, 0, 0, -1}),
                        std::invalid_argument);
        CHECK_THROWS_AS(Rotation3::from_matrix({1, 0.1, 0, 0, 1, 0, 0, 0, 1}),
                        std::invalid_argument);
    }

    TEST_CASE("eigensolver: reconstruction and orthonormality") {
        const Matrix3c a = hermitian_sample();
        const Eigensystem3 sys = eigensystem_hermitian3(a);

        CHECK(sys.values[0] >= sys.values[1]);
        CHECK(sys.values[1] >= sys.values[2]);

        Matrix3c rebuilt = Matrix3c::zero();
        for (int i = 0; i < 3; ++i)
            rebuilt = rebuilt + cplx{sys.values[static_cast<size_t>(i)], 0.0} *
                                    outer(sys.vectors[static_cast<size_t>(i)],
                                          sys.vectors[static_cast<size_t>(i)]);
        CHECK(max_abs(rebuilt - a) < 1e-13);

        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(close(inner(sys.vectors[static_cast<size_t>(i)],
                                  sys.vectors[static_cast<size_t>(j)]),
                            i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0}, 1e-13));
    }

    TEST_CASE("eigensolver: degenerate spectra") {
        const Eigensystem3 iso = eigensystem_hermitian3(Matrix3c::identity());
        for (double v : iso.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

        Matrix3c two = Matrix3c::zero();
        two(0, 0) = 0.4;
        two(1, 1) = 0.4;
        two(2, 2) = 0.2;
        const Eigensystem3 sys = eigensystem_hermitian3(two);
        CHECK(sys.values[0] == doctest::Approx(0.4).epsilon(1e-14));
        CHECK(sys.values[1] == doctest::Approx(0.4).epsilon(1e-14));
        CHECK(sys.values[2] == doctest::Approx(0.2).epsilon(1e-14));
        Matrix3c rebuilt = Matrix3c::zero();
        for (int i = 0; i < 3; ++i)
            rebuilt = rebuilt + cplx{sys.values[static_cast<size_t>(i)], 0.0} *
                                    outer(sys.vectors[static_cast<size_t>(i)],
                                          sys.vectors[static_cast<size_t>(i)]);
        CHECK(max_abs(rebuilt - two) < 1e-13);
    }

    TEST_CASE("eigensolver: rejects non-Hermitian input") {
        Matrix3c bad = Matrix3c::identity();
        bad(0, 1) = cplx{0.2, 0.0};  // missing the conjugate partner
        CHECK_THROWS_AS(eigensystem_hermitian3(bad), std::domain_error);
    }

    TEST_CASE("density: validation catches each broken axiom") {
        Matrix3c ok = Matrix3c::zero();
        ok(0, 0) = 0.6;
        ok(1, 1) = 0.4;
        CHECK_NOTHROW(DensityMatrix3::checked(ok, 1e-12));

        Matrix3c bad_trace = ok;
        bad_trace(1, 1) = 0.5;
        CHECK_THROWS_AS(DensityMatrix3::checked(bad_trace, 1e-12), std::invalid_argument);

        Matrix3c negative = Matrix3c::zero();
        negative(0, 0) = 1.2;
        negative(1, 1) = -0.2;
        CHECK_THROWS_AS(DensityMatrix3::checked(negative, 1e-12), std::invalid_argument);

        Matrix3c skew = ok;
        skew(0, 1) = cplx{0.0, 0.1};
        skew(1, 0) = cplx{0.0, 0.1};  // equal, not conjugate
        CHECK_THROWS_AS(DensityMatrix3::checked(skew, 1e-12), std::invalid_argument);
    }

    TEST_CASE("density: weighted outer products normalize and validate") {
        const CVec3 ex{cplx{1.0, 0.0}, {}, {}};
        const CVec3 ey{{}, cplx{1.0, 0.0}, {}};
        const std::vector<std::pair<double, CVec3>> samples{{3.0, ex}, {1.0, ey}};
        const DensityMatrix3 rho = DensityMatrix3::from_weighted_outer_products(samples);
        CHECK(std::real(rho(0, 0)) == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(std::real(rho(1, 1)) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(rho(2, 2)) < 1e-15);

        const std::vector<std::pair<double, CVec3>> negative{{-1.0, ex}};
        CHECK_THROWS_AS(DensityMatrix3::from_weighted_outer_products(negative),
                        std::invalid_argument);
        const std::vector<std::pair<double, CVec3>> empty;
        CHECK_THROWS_AS(DensityMatrix3::from_weighted_outer_products(empty), std::domain_error);
        const std::vector<std::pair<double, CVec3>> weightless{{0.0, ex}};
        CHECK_THROWS_AS(DensityMatrix3::from_weighted_outer_products(weightless),
                        std::domain_error);
    }

    TEST_CASE("density: rotation conjugation acts on pure states as on vectors") {
        const CVec3 ex{cplx{1.0, 0.0}, {}, {}};
        const DensityMatrix3 rho =
            DensityMatrix3::from_weighted_outer_products(std::vector<std::pair<double, CVec3>>{{1.0, ex}});
        const Rotation3 r = Rotation3::about_axis(Vec3{0.0, 0.0, 1.0}, kPi / 2.0);
        const DensityMatrix3 rotated = rotate_density(rho, r);
        CHECK(std::real(rotated(1, 1)) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(trace(rotated.matrix()) - cplx{1.0, 0.0}) < 1e-13);
    }

    TEST_CASE("distinguishability: extreme pairs and rotation invariance") {
        const CVec3 ex{cplx{1.0, 0.0}, {}, {}};
        const CVec3 ey{{}, cplx{1.0, 0.0}, {}};
        using Samples = std::vector<std::pair<double, CVec3>>;
        const DensityMatrix3 px = DensityMatrix3::from_weighted_outer_products(Samples{{1.0, ex}});
        const DensityMatrix3 py = DensityMatrix3::from_weighted_outer_products(Samples{{1.0, ey}});

        CHECK(trace_distance_term(px, px) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(trace_distance_term(px, py) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(error_probability(px, px) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(error_probability(px, py) == doctest::Approx(0.0).epsilon(1e-13));

        const DensityMatrix3 mixed = DensityMatrix3::from_weighted_outer_products(
            Samples{{0.7, ex}, {0.3, CVec3{cplx{0.0, 0.0}, cplx{0.6, 0.0}, cplx{0.0, 0.8}}}});
        const Rotation3 r = Rotation3::about_axis(normalized(Vec3{1.0, 2.0, -0.5}), 0.83);
        CHECK(error_probability(px, mixed) ==
              doctest::Approx(error_probability(rotate_density(px, r), rotate_density(mixed, r)))
                  .epsilon(1e-12));
    }
}
