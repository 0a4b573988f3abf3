#include "polfocus/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polfocus/detector.hpp"
#include "polfocus/lens.hpp"
#include "polfocus/modes.hpp"
#include "polfocus/polmat3.hpp"
#include "polfocus/povm.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/reduce.hpp"

namespace polfocus::cli {

namespace {

using nlohmann::json;  // std::map-backed: object keys serialize sorted, so
                       // identical inputs produce byte-identical reports

// ---------------------------------------------------------------- formatting

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json matrix3_json(const Matrix3c& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int j = 0; j < 3; ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json matrix2_json(const Matrix2c& m) {
    json rows = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

// ------------------------------------------------------------ shared options

struct CommonOptions {
    double tol = 1e-9;
    int max_subdivisions = 20000;
    std::string out;
    std::string format = "json";
    std::string config;

    [[nodiscard]] quad::QuadratureSpec spec() const {
        if (!(tol > 0.0) || !(tol < 1.0))
            throw std::invalid_argument("tol must lie in (0, 1)");
        if (max_subdivisions < 1)
            throw std::invalid_argument("max-subdivisions must be positive");
        quad::QuadratureSpec s;
        s.rel_tol = tol;
        s.abs_tol = tol * 1e-3;
        s.max_subdivisions = max_subdivisions;
        return s;
    }
};

void add_common_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--tol", o.tol,
                    "relative quadrature tolerance (absolute tolerance is tol/1000)");
    cmd->add_option("--max-subdivisions", o.max_subdivisions,
                    "adaptive panel budget per integral");
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--config", o.config,
                    "JSON or key = value file supplying defaults; explicit flags win");
}

json quadrature_block(const CommonOptions& common,
                      const std::map<std::string, quad::QuadratureStats>& stats) {
    const quad::QuadratureSpec s = common.spec();
    json estimates = json::object();
    bool all_converged = true;
    for (const auto& [name, st] : stats) {
        estimates[name] = st.error_estimate;
        all_converged = all_converged && st.converged;
    }
    return json{{"tol", {{"rel", s.rel_tol}, {"abs", s.abs_tol}}},
                {"error_estimates", estimates},
                {"converged", all_converged}};
}

json make_report(const std::string& command, json params, json matrices, json scalars,
                 json oracle_values, json residuals, json quadrature) {
    return json{{"command", command},
                {"params", std::move(params)},
                {"results",
                 {{"matrices", std::move(matrices)},
                  {"scalars", std::move(scalars)},
                  {"oracle_values", std::move(oracle_values)},
                  {"residuals", std::move(residuals)}}},
                {"quadrature", std::move(quadrature)}};
}

// -------------------------------------------------------------- CSV rendering

void flatten_csv(const std::string& prefix, const json& v, std::ostream& os) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten_csv(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), os);
    } else if (v.is_array()) {
        for (size_t i = 0; i < v.size(); ++i)
            flatten_csv(prefix + "[" + std::to_string(i) + "]", v[i], os);
    } else if (v.is_number_float()) {
        os << prefix << "," << format_double(v.get<double>()) << "\n";
    } else if (v.is_number_unsigned()) {
        os << prefix << "," << v.get<std::uint64_t>() << "\n";
    } else if (v.is_number_integer()) {
        os << prefix << "," << v.get<std::int64_t>() << "\n";
    } else if (v.is_boolean()) {
        os << prefix << "," << (v.get<bool>() ? "true" : "false") << "\n";
    } else if (v.is_string()) {
        os << prefix << "," << v.get<std::string>() << "\n";
    } else if (v.is_null()) {
        os << prefix << ",\n";
    }
}

void csv_cell(const json& cell, std::ostream& os) {
    if (cell.is_number_float())
        os << format_double(cell.get<double>());
    else if (cell.is_null())
        ;  // empty cell
    else
        os << cell.dump();
}

std::string to_csv(const json& report) {
    std::ostringstream os;
    const json& results = report.at("results");
    if (results.contains("rows")) {
        // Table layout for sweeps: one header, one line per row, then the
        // fitted scalars as comment lines.
        const json& rows = results.at("rows");
        if (!rows.empty()) {
            std::vector<std::string> keys;
            for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
                keys.push_back(it.key());
            for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
            os << "\n";
            for (const auto& row : rows) {
                for (size_t i = 0; i < keys.size(); ++i) {
                    if (i) os << ",";
                    csv_cell(row.at(keys[i]), os);
                }
                os << "\n";
            }
        }
        for (auto it = results.at("scalars").begin(); it != results.at("scalars").end(); ++it) {
            os << "# " << it.key() << " = ";
            csv_cell(it.value(), os);
            os << "\n";
        }
    } else {
        os << "key,value\n";
        flatten_csv("command", report.at("command"), os);
        flatten_csv("params", report.at("params"), os);
        flatten_csv("results", results, os);
        flatten_csv("quadrature", report.at("quadrature"), os);
    }
    return os.str();
}

void emit_report(const json& report, const CommonOptions& common) {
    const std::string text = common.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
    if (common.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file: " + common.out);
    file << text;
    if (!file) throw std::runtime_error("failed while writing " + common.out);
}

// ------------------------------------------------------------- config files

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::pair<std::string, std::string>> entries;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        json obj;
        try {
            obj = json::parse(body);
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
        }
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const json& v = it.value();
            if (v.is_string())
                entries.emplace_back(it.key(), v.get<std::string>());
            else if (v.is_number() || v.is_boolean())
                entries.emplace_back(it.key(), v.dump());
            else
                throw std::invalid_argument("config: unsupported value type for key " + it.key());
        }
    } else {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: expected key = value, got: " + t);
            const std::string key = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            if (key.empty()) throw std::invalid_argument("config: empty key in line: " + t);
            entries.emplace_back(key, value);
        }
    }
    return entries;
}

/// Append config-file entries as --key=value tokens for every option the
/// command line does not set explicitly, so flags override the file.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return args;

    for (const auto& [key, value] : parse_config_file(path)) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                present = true;
                break;
            }
        }
        if (!present) args.push_back(flag + "=" + value);
    }
    return args;
}

// --------------------------------------------------------------- lens command

json run_lens(const lens::LensSpec& lspec, const CommonOptions& common) {
    const quad::QuadratureSpec spec = common.spec();
    const double tm = lspec.theta_max();

    quad::QuadratureStats stats_plus, stats_minus;
    const DensityMatrix3 rho_plus = lens::lens_density(
        lens::lens_output_state(lspec, lens::circular_polarization(+1)), spec, &stats_plus);
    const DensityMatrix3 rho_minus = lens::lens_density(
        lens::lens_output_state(lspec, lens::circular_polarization(-1)), spec, &stats_minus);

    const double pe = error_probability(rho_plus, rho_minus);
    const double zz_oracle = lens::lens_rho_zz_closed_form(tm);
    const cplx xy_oracle = lens::lens_rho_xy_closed_form(tm);

    json matrices{{"rho_plus", matrix3_json(rho_plus.matrix())},
                  {"rho_minus", matrix3_json(rho_minus.matrix())}};
    json residuals{
        {"conjugation", max_abs(rho_minus.matrix() - conj(rho_plus.matrix()))},
        {"rho_zz_vs_closed_form", std::abs(std::real(rho_plus(2, 2)) - zz_oracle)},
        {"rho_xy_vs_closed_form", std::abs(rho_plus(0, 1) - xy_oracle)}};
    if (tm < 0.5) {
        const DensityMatrix3 series_plus = lens::lens_series_density(tm, +1);
        const DensityMatrix3 series_minus = lens::lens_series_density(tm, -1);
        matrices["rho_series_plus"] = matrix3_json(series_plus.matrix());
        matrices["rho_series_minus"] = matrix3_json(series_minus.matrix());
        residuals["series_plus"] = max_abs(rho_plus.matrix() - series_plus.matrix());
        residuals["series_minus"] = max_abs(rho_minus.matrix() - series_minus.matrix());
    }

    json scalars{{"theta_max", tm},
                 {"focal_ratio", lspec.focal_ratio()},
                 {"rho_zz", std::real(rho_plus(2, 2))},
                 {"error_probability", pe},
                 {"error_probability_series", tm * tm / 8.0}};
    json oracle_values{{"rho_zz_closed_form", zz_oracle},
                       {"rho_xy_closed_form", complex_json(xy_oracle)}};
    json params{{"theta-max", tm},
                {"focal-length", lspec.focal_length},
                {"aperture-radius", lspec.aperture_radius},
                {"tol", common.tol},
                {"max-subdivisions", common.max_subdivisions},
                {"format", common.format}};

    return make_report("lens", std::move(params), std::move(matrices), std::move(scalars),
                       std::move(oracle_values), std::move(residuals),
                       quadrature_block(common, {{"rho_plus", stats_plus},
                                                 {"rho_minus", stats_minus}}));
}

// ---------------------------------------------------------- wavepacket command

json run_wavepacket(const modes::GaussianPacket& packet, const CommonOptions& common) {
    const quad::QuadratureSpec spec = common.spec();
    const double omega = modes::omega_parameter(packet);

    modes::GaussianPacket plus = packet;
    plus.helicity = +1;
    modes::GaussianPacket minus = packet;
    minus.helicity = -1;

    quad::QuadratureStats stats_plus, stats_minus, stats_naive;
    const DensityMatrix3 rho_plus =
        reduce::effective_density(modes::gaussian_helicity_mode(plus), spec, &stats_plus);
    const DensityMatrix3 rho_minus =
        reduce::effective_density(modes::gaussian_helicity_mode(minus), spec, &stats_minus);
    const Matrix2c naive =
        reduce::naive_reduced_2x2(modes::gaussian_helicity_mode(packet), spec, &stats_naive);

    const DensityMatrix3 series_plus = reduce::paraxial_series_density(omega, +1);
    const DensityMatrix3 series_minus = reduce::paraxial_series_density(omega, -1);
    const double pe = error_probability(rho_plus, rho_minus);

    json matrices{{"rho_plus", matrix3_json(rho_plus.matrix())},
                  {"rho_minus", matrix3_json(rho_minus.matrix())},
                  {"rho_series_plus", matrix3_json(series_plus.matrix())},
                  {"rho_series_minus", matrix3_json(series_minus.matrix())},
                  {"naive_2x2", matrix2_json(naive)}};
    json scalars{{"omega", omega},
                 {"rho_zz", std::real(rho_plus(2, 2))},
                 {"rho_zz_series", 0.5 * omega * omega},
                 {"error_probability", pe},
                 {"error_probability_series", reduce::paraxial_series_error_probability(omega)}};
    json oracle_values{{"omega_recovered", reduce::omega_from_density(rho_plus)}};
    json residuals{
        {"conjugation", max_abs(rho_minus.matrix() - conj(rho_plus.matrix()))},
        {"series_plus", max_abs(rho_plus.matrix() - series_plus.matrix())},
        {"series_minus", max_abs(rho_minus.matrix() - series_minus.matrix())},
        {"block", reduce::block_residual(rho_plus, Vec3{0.0, 0.0, 1.0})}};
    json params{{"k0", packet.k0},
                {"delta-r", packet.delta_r},
                {"delta-z", packet.delta_z},
                {"helicity", packet.helicity},
                {"tol", common.tol},
                {"max-subdivisions", common.max_subdivisions},
                {"format", common.format}};

    return make_report("wavepacket", std::move(params), std::move(matrices), std::move(scalars),
                       std::move(oracle_values), std::move(residuals),
                       quadrature_block(common, {{"rho_plus", stats_plus},
                                                 {"rho_minus", stats_minus},
                                                 {"naive_2x2", stats_naive}}));
}

// ------------------------------------------------------------ detector command

json run_detector_spherical(double theta_max, int helicity, const CommonOptions& common) {
    const quad::QuadratureSpec spec = common.spec();
    const lens::ConvergingSphericalWave state{theta_max, lens::circular_polarization(helicity)};

    quad::QuadratureStats stats_currents, stats_fractions, stats_rho;
    const detector::PhotocurrentTriple cur = detector::photocurrents_spherical(
        state, detector::DetectorScenario::spherical(), spec, &stats_currents);
    const std::array<double, 3> w = detector::energy_fractions(state, spec, &stats_fractions);
    const DensityMatrix3 rho = lens::lens_density(state, spec, &stats_rho);

    const std::array<double, 3> p{cur.p_x, cur.p_y, cur.p_z};
    double p_vs_rho = 0.0;
    double w_vs_rho = 0.0;
    for (int j = 0; j < 3; ++j) {
        p_vs_rho = std::max(p_vs_rho, std::abs(p[static_cast<size_t>(j)] - std::real(rho(j, j))));
        w_vs_rho = std::max(w_vs_rho, std::abs(w[static_cast<size_t>(j)] - std::real(rho(j, j))));
    }
    const double p_z_oracle = detector::detector_p_z_closed_form(theta_max);
    const double zz_oracle = lens::lens_rho_zz_closed_form(theta_max);

    json matrices{{"rho", matrix3_json(rho.matrix())}};
    json scalars{{"theta_max", theta_max}, {"helicity", helicity},
                 {"I_x", cur.i_x},         {"I_y", cur.i_y},
                 {"I_z", cur.i_z},         {"p_x", cur.p_x},
                 {"p_y", cur.p_y},         {"p_z", cur.p_z},
                 {"W_x", w[0]},            {"W_y", w[1]},
                 {"W_z", w[2]},            {"rho_zz", std::real(rho(2, 2))},
                 {"discrepancy", p_vs_rho}};
    json oracle_values{{"p_z_closed_form", p_z_oracle},
                       {"rho_zz_closed_form", zz_oracle},
                       {"discrepancy_closed_form", std::abs(p_z_oracle - zz_oracle)}};
    json residuals{{"p_vs_rho", p_vs_rho},
                   {"W_vs_rho", w_vs_rho},
                   {"p_z_vs_closed_form", std::abs(cur.p_z - p_z_oracle)}};
    json params{{"wavefront", "spherical"},
                {"theta-max", theta_max},
                {"helicity", helicity},
                {"tol", common.tol},
                {"max-subdivisions", common.max_subdivisions},
                {"format", common.format}};

    return make_report("detector", std::move(params), std::move(matrices), std::move(scalars),
                       std::move(oracle_values), std::move(residuals),
                       quadrature_block(common, {{"currents", stats_currents},
                                                 {"fractions", stats_fractions},
                                                 {"rho", stats_rho}}));
}

json run_detector_planar(const modes::GaussianPacket& packet, const CommonOptions& common) {
    const quad::QuadratureSpec spec = common.spec();
    const modes::PhotonMode beam = modes::paraxial_beam_mode(packet);

    quad::QuadratureStats stats_currents, stats_rho;
    const detector::PhotocurrentTriple cur = detector::photocurrents_planar(
        beam, detector::DetectorScenario::planar(), spec, &stats_currents);
    const DensityMatrix3 rho = reduce::effective_density(beam, spec, &stats_rho);

    // For planar wavefronts the energy fractions are the density diagonal,
    // so p_j recovering rho_jj is the identity under test.
    const std::array<double, 3> p{cur.p_x, cur.p_y, cur.p_z};
    double p_vs_rho = 0.0;
    for (int j = 0; j < 3; ++j)
        p_vs_rho = std::max(p_vs_rho, std::abs(p[static_cast<size_t>(j)] - std::real(rho(j, j))));

    json matrices{{"rho", matrix3_json(rho.matrix())}};
    json scalars{{"omega", modes::omega_parameter(packet)},
                 {"helicity", packet.helicity},
                 {"I_x", cur.i_x},
                 {"I_y", cur.i_y},
                 {"I_z", cur.i_z},
                 {"p_x", cur.p_x},
                 {"p_y", cur.p_y},
                 {"p_z", cur.p_z},
                 {"W_x", std::real(rho(0, 0))},
                 {"W_y", std::real(rho(1, 1))},
                 {"W_z", std::real(rho(2, 2))},
                 {"rho_zz", std::real(rho(2, 2))}};
    json oracle_values = json::object();
    json residuals{{"p_vs_rho", p_vs_rho}};
    json params{{"wavefront", "planar"},
                {"k0", packet.k0},
                {"delta-r", packet.delta_r},
                {"delta-z", packet.delta_z},
                {"helicity", packet.helicity},
                {"tol", common.tol},
                {"max-subdivisions", common.max_subdivisions},
                {"format", common.format}};

    return make_report("detector", std::move(params), std::move(matrices), std::move(scalars),
                       std::move(oracle_values), std::move(residuals),
                       quadrature_block(common, {{"currents", stats_currents},
                                                 {"rho", stats_rho}}));
}

// ---------------------------------------------------------- povm-check command

json run_povm_check(int samples, std::uint64_t seed, const CommonOptions& common) {
    const double defect = povm::direction_state_completeness(samples, seed);

    json scalars{{"samples", samples}, {"seed", seed}};
    json residuals{{"max_completeness_defect", defect}};
    json params{{"samples", samples},
                {"seed", seed},
                {"tol", common.tol},
                {"format", common.format}};

    return make_report("povm-check", std::move(params), json::object(), std::move(scalars),
                       json::object(), std::move(residuals), quadrature_block(common, {}));
}

// --------------------------------------------------------------- sweep command

std::optional<double> fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::nullopt;
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

json run_sweep(double theta_min, double theta_max, int points, const CommonOptions& common) {
    if (!(theta_min > 0.0) || !(theta_max > theta_min) || theta_max > 1.0)
        throw std::invalid_argument("sweep requires 0 < theta-min < theta-max <= 1.0");
    if (points < 2) throw std::invalid_argument("sweep requires at least 2 points");

    const quad::QuadratureSpec spec = common.spec();
    quad::QuadratureStats stats;

    json rows = json::array();
    std::vector<double> thetas, pes, discrepancies, series_residuals;
    const double lmin = std::log(theta_min);
    const double lmax = std::log(theta_max);
    for (int i = 0; i < points; ++i) {
        const double tm = std::exp(lmin + (lmax - lmin) * i / (points - 1));
        const lens::ConvergingSphericalWave state_p{tm, lens::circular_polarization(+1)};
        const lens::ConvergingSphericalWave state_m{tm, lens::circular_polarization(-1)};
        const DensityMatrix3 rho_p = lens::lens_density(state_p, spec, &stats);
        const DensityMatrix3 rho_m = lens::lens_density(state_m, spec, &stats);
        const double pe = error_probability(rho_p, rho_m);
        const detector::PhotocurrentTriple cur = detector::photocurrents_spherical(
            state_p, detector::DetectorScenario::spherical(), spec, &stats);

        const std::array<double, 3> p{cur.p_x, cur.p_y, cur.p_z};
        double disc = 0.0;
        for (int j = 0; j < 3; ++j)
            disc = std::max(disc, std::abs(p[static_cast<size_t>(j)] - std::real(rho_p(j, j))));

        json row{{"theta_max", tm},
                 {"error_probability", pe},
                 {"p_z", cur.p_z},
                 {"rho_zz", std::real(rho_p(2, 2))},
                 {"discrepancy", disc}};
        if (tm < 0.5) {
            const double res = max_abs(rho_p.matrix() - lens::lens_series_density(tm, +1).matrix());
            row["series_residual"] = res;
            series_residuals.push_back(res);
        } else {
            row["series_residual"] = nullptr;
        }
        rows.push_back(std::move(row));

        thetas.push_back(tm);
        pes.push_back(pe);
        discrepancies.push_back(disc);
    }

    json scalars = json::object();
    if (const auto s = fit_log_slope(thetas, pes)) scalars["slope_error_probability"] = *s;
    if (const auto s = fit_log_slope(thetas, discrepancies)) scalars["slope_discrepancy"] = *s;
    if (series_residuals.size() == thetas.size()) {
        if (const auto s = fit_log_slope(thetas, series_residuals))
            scalars["slope_series_residual"] = *s;
    }

    json params{{"theta-min", theta_min},
                {"theta-max", theta_max},
                {"points", points},
                {"tol", common.tol},
                {"max-subdivisions", common.max_subdivisions},
                {"format", common.format}};

    json report = make_report("sweep", std::move(params), json::object(), std::move(scalars),
                              json::object(), json::object(),
                              quadrature_block(common, {{"rows", stats}}));
    report["results"]["rows"] = std::move(rows);
    return report;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"effective polarization of focused single-photon states"};
    app.require_subcommand(1);

    // ----- lens -----
    CommonOptions lens_common;
    double lens_theta = 0.0, lens_focal = 0.0, lens_aperture = 0.0;
    CLI::App* lens_cmd = app.add_subcommand(
        "lens", "density matrices and distinguishability of the focused circular pair");
    CLI::Option* lens_theta_opt =
        lens_cmd->add_option("--theta-max", lens_theta, "cone half-angle in radians");
    CLI::Option* lens_focal_opt =
        lens_cmd->add_option("--focal-length", lens_focal, "focal length in meters");
    CLI::Option* lens_aperture_opt =
        lens_cmd->add_option("--aperture-radius", lens_aperture, "aperture radius in meters");
    add_common_options(lens_cmd, lens_common);

    // ----- wavepacket -----
    CommonOptions wp_common;
    double wp_k0 = 0.0, wp_lambda = 0.0, wp_tau = 0.0, wp_delta_r = 0.0, wp_delta_z = 0.0;
    int wp_helicity = +1;
    CLI::App* wp_cmd = app.add_subcommand(
        "wavepacket", "effective density of a circular Gaussian packet");
    CLI::Option* wp_k0_opt = wp_cmd->add_option("--k0", wp_k0, "central wavenumber in 1/m");
    CLI::Option* wp_lambda_opt =
        wp_cmd->add_option("--lambda", wp_lambda, "wavelength in meters (k0 = 2 pi / lambda)");
    CLI::Option* wp_tau_opt =
        wp_cmd->add_option("--tau", wp_tau, "beam radius in meters (delta_r = 1/tau)");
    CLI::Option* wp_delta_r_opt =
        wp_cmd->add_option("--delta-r", wp_delta_r, "radial momentum spread in 1/m");
    CLI::Option* wp_delta_z_opt =
        wp_cmd->add_option("--delta-z", wp_delta_z, "longitudinal momentum spread in 1/m");
    wp_cmd->add_option("--helicity", wp_helicity, "+1 or -1");
    add_common_options(wp_cmd, wp_common);

    // ----- detector -----
    CommonOptions det_common;
    std::string det_wavefront = "spherical";
    double det_theta = 0.0, det_k0 = 0.0, det_lambda = 0.0, det_tau = 0.0, det_delta_r = 0.0,
           det_delta_z = 0.0;
    int det_helicity = +1;
    CLI::App* det_cmd = app.add_subcommand(
        "detector", "photocurrents and detection probabilities of a planar detector");
    det_cmd->add_option("--wavefront", det_wavefront, "wavefront reaching the detector")
        ->check(CLI::IsMember({"spherical", "planar"}));
    CLI::Option* det_theta_opt =
        det_cmd->add_option("--theta-max", det_theta, "cone half-angle in radians (spherical)");
    CLI::Option* det_k0_opt = det_cmd->add_option("--k0", det_k0, "central wavenumber in 1/m (planar)");
    CLI::Option* det_lambda_opt =
        det_cmd->add_option("--lambda", det_lambda, "wavelength in meters (planar)");
    CLI::Option* det_tau_opt = det_cmd->add_option("--tau", det_tau, "beam radius in meters (planar)");
    CLI::Option* det_delta_r_opt =
        det_cmd->add_option("--delta-r", det_delta_r, "radial momentum spread in 1/m (planar)");
    CLI::Option* det_delta_z_opt =
        det_cmd->add_option("--delta-z", det_delta_z, "longitudinal momentum spread in 1/m (planar)");
    det_cmd->add_option("--helicity", det_helicity, "+1 or -1");
    add_common_options(det_cmd, det_common);

    // ----- povm-check -----
    CommonOptions povm_common;
    int povm_samples = 100;
    std::uint64_t povm_seed = 0x706f6c666f637573ULL;
    CLI::App* povm_cmd = app.add_subcommand(
        "povm-check", "measurement completeness defects at random wave vectors");
    povm_cmd->add_option("--samples", povm_samples, "number of random wave vectors");
    povm_cmd->add_option("--seed", povm_seed, "random generator seed");
    add_common_options(povm_cmd, povm_common);

    // ----- sweep -----
    CommonOptions sweep_common;
    double sweep_min = 0.05, sweep_max = 0.4;
    int sweep_points = 8;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "log-spaced theta_max scan with fitted power laws");
    sweep_cmd->add_option("--theta-min", sweep_min, "smallest cone half-angle");
    sweep_cmd->add_option("--theta-max", sweep_max, "largest cone half-angle");
    sweep_cmd->add_option("--points", sweep_points, "number of log-spaced points");
    add_common_options(sweep_cmd, sweep_common);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config(std::move(args));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<const char*> ptrs;
        ptrs.reserve(args.size() + 1);
        ptrs.push_back(argc > 0 ? argv[0] : "polfocus");
        for (const auto& a : args) ptrs.push_back(a.c_str());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (lens_cmd->parsed()) {
            const bool has_geometry = lens_focal_opt->count() > 0 || lens_aperture_opt->count() > 0;
            if (lens_theta_opt->count() > 0 && has_geometry)
                throw std::invalid_argument(
                    "specify either theta-max or the focal-length / aperture-radius pair, not both");
            lens::LensSpec lspec;
            if (lens_theta_opt->count() > 0) {
                lspec = lens::LensSpec::from_theta_max(lens_theta);
            } else if (lens_focal_opt->count() > 0 && lens_aperture_opt->count() > 0) {
                lspec = lens::LensSpec::from_geometry(lens_focal, lens_aperture);
            } else {
                throw std::invalid_argument(
                    "missing required parameter: theta-max (or focal-length and aperture-radius)");
            }
            emit_report(run_lens(lspec, lens_common), lens_common);
        } else if (wp_cmd->parsed()) {
            if (wp_k0_opt->count() > 0 && wp_lambda_opt->count() > 0)
                throw std::invalid_argument("k0 and lambda are mutually exclusive");
            if (wp_k0_opt->count() == 0 && wp_lambda_opt->count() == 0)
                throw std::invalid_argument("missing required parameter: k0 (or lambda)");
            if (wp_tau_opt->count() > 0 && wp_delta_r_opt->count() > 0)
                throw std::invalid_argument("tau and delta-r are mutually exclusive");
            if (wp_tau_opt->count() == 0 && wp_delta_r_opt->count() == 0)
                throw std::invalid_argument("missing required parameter: delta-r (or tau)");
            if (wp_delta_z_opt->count() == 0)
                throw std::invalid_argument("missing required parameter: delta-z");

            if (wp_lambda_opt->count() > 0) {
                if (!(wp_lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
                wp_k0 = 2.0 * M_PI / wp_lambda;
            }
            const modes::GaussianPacket packet =
                wp_tau_opt->count() > 0
                    ? modes::GaussianPacket::from_beam_radius(wp_k0, wp_tau, wp_delta_z, wp_helicity)
                    : modes::GaussianPacket::from_spreads(wp_k0, wp_delta_r, wp_delta_z, wp_helicity);
            if (!packet.paraxial())
                throw std::invalid_argument("paraxial validity requires delta-r / k0 < 0.1");
            emit_report(run_wavepacket(packet, wp_common), wp_common);
        } else if (det_cmd->parsed()) {
            const bool packet_opts = det_k0_opt->count() || det_lambda_opt->count() ||
                                     det_tau_opt->count() || det_delta_r_opt->count() ||
                                     det_delta_z_opt->count();
            if (det_wavefront == "spherical") {
                if (packet_opts)
                    throw std::invalid_argument(
                        "packet options (k0/lambda, tau/delta-r, delta-z) apply only to --wavefront planar");
                if (det_theta_opt->count() == 0)
                    throw std::invalid_argument("missing required parameter: theta-max");
                emit_report(run_detector_spherical(det_theta, det_helicity, det_common),
                            det_common);
            } else {
                if (det_theta_opt->count() > 0)
                    throw std::invalid_argument("theta-max applies only to --wavefront spherical");
                if (det_k0_opt->count() > 0 && det_lambda_opt->count() > 0)
                    throw std::invalid_argument("k0 and lambda are mutually exclusive");
                if (det_k0_opt->count() == 0 && det_lambda_opt->count() == 0)
                    throw std::invalid_argument("missing required parameter: k0 (or lambda)");
                if (det_tau_opt->count() > 0 && det_delta_r_opt->count() > 0)
                    throw std::invalid_argument("tau and delta-r are mutually exclusive");
                if (det_tau_opt->count() == 0 && det_delta_r_opt->count() == 0)
                    throw std::invalid_argument("missing required parameter: delta-r (or tau)");
                if (det_delta_z_opt->count() == 0)
                    throw std::invalid_argument("missing required parameter: delta-z");
                if (det_lambda_opt->count() > 0) {
                    if (!(det_lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
                    det_k0 = 2.0 * M_PI / det_lambda;
                }
                const modes::GaussianPacket packet =
                    det_tau_opt->count() > 0
                        ? modes::GaussianPacket::from_beam_radius(det_k0, det_tau, det_delta_z,
                                                                  det_helicity)
                        : modes::GaussianPacket::from_spreads(det_k0, det_delta_r, det_delta_z,
                                                              det_helicity);
                if (!packet.paraxial())
                    throw std::invalid_argument("paraxial validity requires delta-r / k0 < 0.1");
                emit_report(run_detector_planar(packet, det_common), det_common);
            }
        } else if (povm_cmd->parsed()) {
            emit_report(run_povm_check(povm_samples, povm_seed, povm_common), povm_common);
        } else if (sweep_cmd->parsed()) {
            emit_report(run_sweep(sweep_min, sweep_max, sweep_points, sweep_common), sweep_common);
        }
        return 0;
    } catch (const quad::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace polfocus::cli
