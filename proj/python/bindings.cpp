#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polfocus/detector.hpp"
#include "polfocus/lens.hpp"
#include "polfocus/modes.hpp"
#include "polfocus/polmat3.hpp"
#include "polfocus/povm.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/reduce.hpp"

namespace py = pybind11;
using namespace polfocus;

namespace {

using NestedMatrix = std::vector<std::vector<cplx>>;

NestedMatrix to_nested(const Matrix3c& m) {
    NestedMatrix out(3, std::vector<cplx>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[static_cast<size_t>(i)][static_cast<size_t>(j)] = m(i, j);
    return out;
}

NestedMatrix to_nested(const Matrix2c& m) {
    NestedMatrix out(2, std::vector<cplx>(2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[static_cast<size_t>(i)][static_cast<size_t>(j)] = m(i, j);
    return out;
}

Matrix3c from_nested(const NestedMatrix& rows) {
    if (rows.size() != 3) throw std::invalid_argument("expected a 3x3 matrix");
    Matrix3c m;
    for (int i = 0; i < 3; ++i) {
        if (rows[static_cast<size_t>(i)].size() != 3)
            throw std::invalid_argument("expected a 3x3 matrix");
        for (int j = 0; j < 3; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return m;
}

Vec3 vec3_of(const std::array<double, 3>& v) { return Vec3{v[0], v[1], v[2]}; }

std::vector<cplx> cvec_list(const CVec3& v) { return {v.x, v.y, v.z}; }

quad::QuadratureSpec spec_of(double rel_tol) {
    quad::QuadratureSpec s;
    s.rel_tol = rel_tol;
    s.abs_tol = rel_tol * 1e-3;
    return s;
}

DensityMatrix3 density_of(const NestedMatrix& rows, double tol) {
    return DensityMatrix3::checked(from_nested(rows), tol);
}

}  // namespace

PYBIND11_MODULE(_polfocus, m) {
    m.doc() = "effective polarization of focused single-photon states";

    m.def(
        "helicity_basis",
        [](const std::array<double, 3>& k) {
            const modes::HelicityBasis basis = modes::helicity_basis(vec3_of(k));
            py::dict out;
            out["eps_plus"] = cvec_list(basis.eps_plus);
            out["eps_minus"] = cvec_list(basis.eps_minus);
            out["k_hat"] = std::array<double, 3>{basis.k_hat.x, basis.k_hat.y, basis.k_hat.z};
            return out;
        },
        py::arg("k"),
        "Transverse circular unit vectors and propagation direction for a wave vector.");

    // ---- 3x3 density matrix utilities ----

    m.def(
        "error_probability",
        [](const NestedMatrix& a, const NestedMatrix& b, double tol) {
            return error_probability(density_of(a, tol), density_of(b, tol));
        },
        py::arg("rho_a"), py::arg("rho_b"), py::arg("tol") = 1e-8,
        "Minimum-error probability for discriminating two equally likely states.");

    m.def(
        "trace_distance_term",
        [](const NestedMatrix& a, const NestedMatrix& b, double tol) {
            return trace_distance_term(density_of(a, tol), density_of(b, tol));
        },
        py::arg("rho_a"), py::arg("rho_b"), py::arg("tol") = 1e-8,
        "Sum of absolute eigenvalues of rho_a - rho_b.");

    m.def(
        "eigenvalues",
        [](const NestedMatrix& a) {
            const Eigensystem3 sys = eigensystem_hermitian3(from_nested(a));
            return sys.values;
        },
        py::arg("matrix"), "Descending eigenvalues of a Hermitian 3x3 matrix.");

    // ---- focusing lens ----

    m.def(
        "lens_density",
        [](double theta_max, int helicity, double rel_tol) {
            const lens::ConvergingSphericalWave state{theta_max,
                                                      lens::circular_polarization(helicity)};
            return to_nested(lens::lens_density(state, spec_of(rel_tol)).matrix());
        },
        py::arg("theta_max"), py::arg("helicity") = 1, py::arg("rel_tol") = 1e-9,
        "Effective density matrix of a circular input focused into a cone.");

    m.def(
        "lens_series_density",
        [](double theta_max, int helicity) {
            return to_nested(lens::lens_series_density(theta_max, helicity).matrix());
        },
        py::arg("theta_max"), py::arg("helicity") = 1,
        "Small-angle series form of the focused density matrix.");

    m.def(
        "error_probability_lens",
        [](double theta_max, double rel_tol) {
            return lens::error_probability_lens(theta_max, spec_of(rel_tol));
        },
        py::arg("theta_max"), py::arg("rel_tol") = 1e-9,
        "Distinguishability of the two focused circular inputs.");

    m.def("lens_rho_zz_closed_form", &lens::lens_rho_zz_closed_form, py::arg("theta_max"));
    m.def("lens_rho_xy_closed_form", &lens::lens_rho_xy_closed_form, py::arg("theta_max"));

    // ---- Gaussian wave packets ----

    m.def(
        "gaussian_density",
        [](double k0, double delta_r, double delta_z, int helicity, double rel_tol) {
            const modes::GaussianPacket packet =
                modes::GaussianPacket::from_spreads(k0, delta_r, delta_z, helicity);
            return to_nested(
                reduce::effective_density(modes::gaussian_helicity_mode(packet), spec_of(rel_tol))
                    .matrix());
        },
        py::arg("k0"), py::arg("delta_r"), py::arg("delta_z"), py::arg("helicity") = 1,
        py::arg("rel_tol") = 1e-6,
        "Effective density matrix of a circular Gaussian packet.");

    m.def(
        "naive_reduced_2x2",
        [](double k0, double delta_r, double delta_z, int helicity, double rel_tol) {
            const modes::GaussianPacket packet =
                modes::GaussianPacket::from_spreads(k0, delta_r, delta_z, helicity);
            return to_nested(
                reduce::naive_reduced_2x2(modes::gaussian_helicity_mode(packet), spec_of(rel_tol)));
        },
        py::arg("k0"), py::arg("delta_r"), py::arg("delta_z"), py::arg("helicity") = 1,
        py::arg("rel_tol") = 1e-6,
        "Transverse 2x2 reduction that ignores the longitudinal component.");

    m.def(
        "paraxial_series_density",
        [](double omega, int helicity) {
            return to_nested(reduce::paraxial_series_density(omega, helicity).matrix());
        },
        py::arg("omega"), py::arg("helicity") = 1,
        "Leading-order density matrix of a paraxial circular packet.");

    m.def("paraxial_series_error_probability", &reduce::paraxial_series_error_probability,
          py::arg("omega"));

    m.def(
        "omega_from_density",
        [](const NestedMatrix& rho, double tol) {
            return reduce::omega_from_density(density_of(rho, tol));
        },
        py::arg("rho"), py::arg("tol") = 1e-8,
        "Angular-spread parameter recovered from the longitudinal population.");

    // ---- measurement model ----

    m.def(
        "completeness_defect",
        [](const std::array<double, 3>& k) { return povm::completeness_defect(vec3_of(k)); },
        py::arg("k"),
        "Deviation of the summed measurement operators from the transverse projector.");

    m.def("direction_state_completeness", &povm::direction_state_completeness,
          py::arg("samples") = 100, py::arg("seed") = std::uint64_t{0x706f6c666f637573ULL},
          "Worst reconstruction defect over random wave vectors.");

    m.def(
        "povm_expectation",
        [](double theta_max, const std::array<double, 3>& j, int helicity, double rel_tol) {
            // Expectation against the focused state expressed through its density matrix.
            const lens::ConvergingSphericalWave state{theta_max,
                                                      lens::circular_polarization(helicity)};
            const DensityMatrix3 rho = lens::lens_density(state, spec_of(rel_tol));
            const Vec3 unit = normalized(vec3_of(j));
            const CVec3 jc = to_complex(unit);
            return std::real(inner(jc, rho.matrix() * jc));
        },
        py::arg("theta_max"), py::arg("j"), py::arg("helicity") = 1, py::arg("rel_tol") = 1e-9,
        "Detection probability along an analyzer direction for the focused state.");

    // ---- detector ----

    m.def("detector_p_z_closed_form", &detector::detector_p_z_closed_form, py::arg("theta_max"));

    m.def(
        "detection_discrepancy",
        [](double theta_max, double rel_tol) {
            return detector::detection_discrepancy(theta_max, spec_of(rel_tol));
        },
        py::arg("theta_max"), py::arg("rel_tol") = 1e-9,
        "Largest gap between detector probabilities and density-matrix populations.");

    m.def(
        "photocurrents_spherical",
        [](double theta_max, int helicity, double rel_tol) {
            const lens::ConvergingSphericalWave state{theta_max,
                                                      lens::circular_polarization(helicity)};
            const detector::PhotocurrentTriple cur = detector::photocurrents_spherical(
                state, detector::DetectorScenario::spherical(), spec_of(rel_tol));
            py::dict out;
            out["i_x"] = cur.i_x;
            out["i_y"] = cur.i_y;
            out["i_z"] = cur.i_z;
            out["p_x"] = cur.p_x;
            out["p_y"] = cur.p_y;
            out["p_z"] = cur.p_z;
            return out;
        },
        py::arg("theta_max"), py::arg("helicity") = 1, py::arg("rel_tol") = 1e-9,
        "Cartesian photocurrents of a focused state on a planar detector.");
}
