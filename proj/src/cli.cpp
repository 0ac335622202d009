#include "nsbf/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "nsbf/error.hpp"
#include "nsbf/fd_oracle.hpp"

namespace nsbf::cli {

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigInvalid, "cli", "config: cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::ConfigInvalid, "cli", std::string("config: ") + e.what());
    }
}

OptionContract contract_of(const RunConfig& cfg) { return cfg.contract; }

SpectralSolution spectrum_of(const RunConfig& cfg, bool with_derivative) {
    return solve_spectrum(make_spec(cfg.model), cfg.contract.L, cfg.contract.U, cfg.numerics, with_derivative);
}

Json diagnostics_json(const Diagnostics& d) {
    Json j;
    j["identity_residual"] = d.identity_residual;
    j["identity_tol"] = d.identity_tol;
    j["identity_pass"] = d.identity_residual <= d.identity_tol;
    j["boundary_residual"] = d.boundary_residual;
    j["spps_terms"] = d.spps_terms;
    j["roots_found"] = d.roots_found;
    j["evaluation_point"] = d.evaluation_point;
    j["warnings"] = d.warnings;
    return j;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json result_json(const std::string& command, const RunConfig& cfg, const PricingResult& r, bool greeks) {
    Json j;
    j["command"] = command;
    const Json full = to_json(cfg);
    j["model"] = full["model"];
    j["contract"] = full["contract"];
    j["price"] = r.price;
    if (greeks) {
        j["delta"] = optional_number(r.delta);
        j["vega"] = optional_number(r.vega);
        j["theta"] = optional_number(r.theta);
    }
    j["N_used"] = r.N_used;
    j["M_used"] = r.M_used;
    j["diagnostics"] = diagnostics_json(r.diagnostics);
    return j;
}

std::string csv_cell(const std::optional<double>& v, int precision) {
    return v ? format_fixed(*v, precision) : std::string();
}

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

struct Band {
    std::size_t n1 = 0;
    /// 0 means "to the last retained term".
    std::size_t n2 = 0;
    double value = 0.0;
};

// Bands of `width` up to `limit` (or N), plus the remainder beyond `limit`.
std::vector<Band> bands_for(const std::vector<EigenPair>& pairs, std::size_t N, std::size_t width, std::size_t limit,
                            double y, double T) {
    std::vector<Band> out;
    const std::size_t last = limit > 0 ? limit : N;
    for (std::size_t n1 = 1; n1 <= last; n1 += width) {
        const std::size_t n2 = std::min(n1 + width - 1, last);
        const std::size_t hi = std::min(n2, N);
        out.push_back({n1, n2, n1 <= hi ? contribution(n1, hi, pairs, y, 0.0, T) : 0.0});
    }
    if (limit > 0) out.push_back({limit + 1, 0, limit < N ? contribution(limit + 1, N, pairs, y, 0.0, T) : 0.0});
    return out;
}

std::string band_label(const Band& b) {
    if (b.n2 == 0) return ">" + std::to_string(b.n1 - 1);
    return std::to_string(b.n1) + "-" + std::to_string(b.n2);
}

}  // namespace

std::string format_fixed(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

RunConfig load_config(const Overrides& o) {
    Json j = o.preset ? preset_json(*o.preset) : Json::object();
    if (o.config_path) j.merge_patch(read_json_file(*o.config_path));
    if (o.output) j["output"]["path"] = *o.output;
    if (o.format) j["output"]["format"] = *o.format;
    if (o.mesh) j["numerics"]["mesh"] = *o.mesh;
    if (o.omega_max) j["numerics"]["omega_max"] = *o.omega_max;
    if (o.omega_grid) j["numerics"]["omega_grid"] = *o.omega_grid;
    if (o.nsbf_order) j["numerics"]["nsbf_order"] = *o.nsbf_order;
    if (o.lambda_cutoff) j["numerics"]["lambda_cutoff"] = *o.lambda_cutoff;
    return parse_config(j);
}

std::string run_price(const RunConfig& cfg) {
    // Price only: no beta_n and no eigenfunction derivatives.
    const SpectralSolution s = spectrum_of(cfg, false);
    const PricingResult r = price_contract(s, contract_of(cfg), cfg.model.y0, cfg.numerics, false);
    if (cfg.output.format == "csv") {
        return "price,N_used,M_used,identity_residual\n" + full_precision(r.price) + "," + std::to_string(r.N_used) +
               "," + std::to_string(r.M_used) + "," + full_precision(r.diagnostics.identity_residual) + "\n";
    }
    return render(result_json("price", cfg, r, false));
}

std::string run_greeks(const RunConfig& cfg) {
    const SpectralSolution s = spectrum_of(cfg, true);
    const PricingResult r = price_contract(s, contract_of(cfg), cfg.model.y0, cfg.numerics, true);
    if (cfg.output.format == "csv") {
        return "price,delta,vega,theta,N_used,M_used\n" + full_precision(r.price) + "," + csv_cell(r.delta, 17) + "," +
               csv_cell(r.vega, 17) + "," + csv_cell(r.theta, 17) + "," + std::to_string(r.N_used) + "," +
               std::to_string(r.M_used) + "\n";
    }
    return render(result_json("greeks", cfg, r, true));
}

std::string run_surface(const RunConfig& cfg) {
    const SpectralSolution s = spectrum_of(cfg, false);
    const OptionContract k = contract_of(cfg);
    const std::vector<EigenPair> pairs = pairs_for(s, k);
    const std::size_t N = terms_used(pairs, k, cfg.numerics.lambda_cutoff);
    ValueSurface surf;
    if (k.rebate > 0.0) {
        const RebateExpansion e = rebate_expansion(k, payoff_on(k, s.c.mesh), pairs, s.c, s.sol);
        surf = value_surface_with_rebate(pairs, e, s.c, k.T, N, cfg.surface.t_count, cfg.surface.y_count);
    } else {
        surf = value_surface(pairs, s.c, k.T, N, cfg.surface.t_count, cfg.surface.y_count);
    }
    if (cfg.output.format == "csv") {
        std::ostringstream out;
        out << "t,y,v\n";
        for (std::size_t i = 0; i < surf.t.size(); ++i) {
            for (std::size_t j = 0; j < surf.y.size(); ++j) {
                out << full_precision(surf.t[i]) << ',' << full_precision(surf.y[j]) << ','
                    << full_precision(surf.values[i][j]) << '\n';
            }
        }
        return out.str();
    }
    Json j;
    j["command"] = "surface";
    j["N_used"] = N;
    j["t"] = surf.t;
    j["y"] = surf.y;
    j["values"] = surf.values;
    j["diagnostics"] = diagnostics_json(diagnose(s, cfg.numerics, cfg.model.y0));
    return render(j);
}

std::string run_spectrum(const RunConfig& cfg) {
    const SpectralSolution s = spectrum_of(cfg, false);
    if (cfg.output.format == "csv") {
        std::ostringstream out;
        out << "n,omega,lambda,norm_sq\n";
        for (const EigenPair& p : s.pairs) {
            out << p.n << ',' << full_precision(p.omega) << ',' << full_precision(p.lambda) << ','
                << full_precision(p.norm_sq) << '\n';
        }
        return out.str();
    }
    Json j;
    j["command"] = "spectrum";
    Json rows = Json::array();
    for (const EigenPair& p : s.pairs) {
        rows.push_back({{"n", p.n}, {"omega", p.omega}, {"lambda", p.lambda}, {"norm_sq", p.norm_sq}});
    }
    j["eigenpairs"] = rows;
    j["M_used"] = s.coeffs.order;
    j["diagnostics"] = diagnostics_json(diagnose(s, cfg.numerics, cfg.model.y0));
    return render(j);
}

std::string run_contrib(const RunConfig& cfg) {
    const SpectralSolution s = spectrum_of(cfg, false);
    const OptionContract k = contract_of(cfg);
    const std::vector<EigenPair> pairs = pairs_for(s, k);
    const std::size_t N = terms_used(pairs, k, cfg.numerics.lambda_cutoff);
    const double y = evaluation_point(cfg.model.y0, s.c, cfg.numerics.evaluation);
    const std::vector<Band> bands = bands_for(pairs, N, cfg.band_width, cfg.sweep.band_limit, y, k.T);
    const double price = value(y, 0.0, k.T, pairs, N);
    if (cfg.output.format == "csv") {
        std::ostringstream out;
        out << "band,value\n";
        for (const Band& b : bands) out << band_label(b) << ',' << full_precision(b.value) << '\n';
        out << "price," << full_precision(price) << '\n';
        return out.str();
    }
    Json j;
    j["command"] = "contrib";
    Json rows = Json::array();
    double total = 0.0;
    for (const Band& b : bands) {
        rows.push_back({{"band", band_label(b)}, {"value", b.value}});
        total += b.value;
    }
    j["bands"] = rows;
    j["band_total"] = total;
    j["price"] = price;
    j["N_used"] = N;
    j["diagnostics"] = diagnostics_json(diagnose(s, cfg.numerics, y));
    return render(j);
}

std::string run_check_coefficients(const RunConfig& cfg) {
    const SpectralSolution s = spectrum_of(cfg, true);
    const IdentityReport& r = s.coeffs.identities;
    if (cfg.output.format == "csv") {
        std::ostringstream out;
        out << "order,max_residual,alpha_residual\n";
        for (std::size_t m = 0; m < r.max_residual_by_order.size(); ++m) {
            out << m << ',' << full_precision(r.max_residual_by_order[m]) << ','
                << full_precision(r.alpha_residual_by_order[m]) << '\n';
        }
        return out.str();
    }
    Json j;
    j["command"] = "check-coefficients";
    j["accepted_order"] = s.coeffs.order;
    j["residual_at_accepted_order"] = r.residual_at(s.coeffs.order);
    j["identity_tol"] = cfg.numerics.identity_tol;
    j["pass"] = r.residual_at(s.coeffs.order) <= cfg.numerics.identity_tol;
    j["h_tilde"] = s.coeffs.h_tilde;
    j["spps_terms"] = s.sol.series_order;
    j["max_residual_by_order"] = r.max_residual_by_order;
    j["alpha_residual_by_order"] = r.alpha_residual_by_order;
    Json alpha_at_upper = Json::array();
    for (std::size_t m = 0; m <= s.coeffs.order && m < s.coeffs.alpha.size(); ++m) {
        alpha_at_upper.push_back(s.coeffs.alpha[m].back());
    }
    j["alpha_at_U"] = alpha_at_upper;
    return render(j);
}

std::string run_oracle_compare(const RunConfig& cfg) {
    const SpectralSolution s = spectrum_of(cfg, false);
    const OptionContract k = contract_of(cfg);
    const PricingResult r = price_contract(s, k, cfg.model.y0, cfg.numerics, false);
    const fd::FDSolution fd_sol = fd::solve_pde(make_spec(cfg.model), k, cfg.oracle);
    const double fd_price = fd_sol.at(r.diagnostics.evaluation_point);
    const double gap = std::abs(r.price - fd_price);
    if (cfg.output.format == "csv") {
        return "nsbf,fd,gap\n" + full_precision(r.price) + "," + full_precision(fd_price) + "," + full_precision(gap) +
               "\n";
    }
    Json j;
    j["command"] = "oracle-compare";
    j["nsbf"] = r.price;
    j["fd"] = fd_price;
    j["gap"] = gap;
    j["fd_grid"] = {{"y_count", cfg.oracle.y_count},
                    {"t_count", cfg.oracle.t_count},
                    {"damping_steps", cfg.oracle.damping_steps}};
    j["diagnostics"] = diagnostics_json(r.diagnostics);
    return render(j);
}

std::string run_table(const RunConfig& cfg) {
    const SweepConfig& sw = cfg.sweep;
    const std::vector<double> strikes = sw.K.empty() ? std::vector<double>{cfg.contract.K} : sw.K;
    const std::vector<double> betas = sw.beta.empty() ? std::vector<double>{cfg.model.beta} : sw.beta;
    const std::vector<double> gammas = sw.gamma.empty() ? std::vector<double>{cfg.model.gamma} : sw.gamma;

    std::map<std::pair<double, double>, SpectralSolution> spectra;
    auto spectrum_for = [&](double beta, double gamma) -> const SpectralSolution& {
        auto it = spectra.find({beta, gamma});
        if (it != spectra.end()) return it->second;
        RunConfig one = cfg;
        one.model.beta = beta;
        one.model.gamma = gamma;
        return spectra.emplace(std::make_pair(beta, gamma), spectrum_of(one, sw.greeks)).first->second;
    };

    std::ostringstream csv;
    csv << "K,beta,gamma";
    for (OptionStyle st : sw.styles) {
        const std::string p = to_string(st);
        csv << ',' << p << "_price";
        if (sw.greeks) csv << ',' << p << "_delta," << p << "_vega," << p << "_theta";
    }
    std::vector<std::string> band_names;
    csv << '\n';

    Json rows = Json::array();
    for (double K : strikes) {
        for (double beta : betas) {
            for (double gamma : gammas) {
                const SpectralSolution& s = spectrum_for(beta, gamma);
                csv << format_fixed(K, 0) << ',' << format_fixed(beta, 1) << ',' << format_fixed(gamma, 0);
                Json row;
                row["K"] = K;
                row["beta"] = beta;
                row["gamma"] = gamma;
                std::vector<Band> bands;
                for (OptionStyle st : sw.styles) {
                    OptionContract k = cfg.contract;
                    k.style = st;
                    k.K = K;
                    const PricingResult r = price_contract(s, k, cfg.model.y0, cfg.numerics, sw.greeks);
                    const std::string p = to_string(st);
                    csv << ',' << format_fixed(r.price, sw.precision);
                    row[p + "_price"] = r.price;
                    if (sw.greeks) {
                        csv << ',' << csv_cell(r.delta, sw.precision) << ',' << csv_cell(r.vega, sw.precision) << ','
                            << csv_cell(r.theta, sw.precision);
                        row[p + "_delta"] = optional_number(r.delta);
                        row[p + "_vega"] = optional_number(r.vega);
                        row[p + "_theta"] = optional_number(r.theta);
                    }
                    row[p + "_N_used"] = r.N_used;
                    row["M_used"] = r.M_used;
                    row["identity_residual"] = r.diagnostics.identity_residual;
                    if (sw.band_limit > 0 && st == sw.styles.front()) {
                        const std::vector<EigenPair> pairs = pairs_for(s, k);
                        bands = bands_for(pairs, r.N_used, cfg.band_width, sw.band_limit,
                                          r.diagnostics.evaluation_point, k.T);
                    }
                }
                if (!bands.empty()) {
                    Json jb = Json::object();
                    for (const Band& b : bands) {
                        csv << ',' << format_fixed(b.value, sw.precision);
                        jb[band_label(b)] = b.value;
                    }
                    row["bands"] = jb;
                    if (band_names.empty()) {
                        for (const Band& b : bands) band_names.push_back(band_label(b));
                    }
                }
                csv << '\n';
                rows.push_back(row);
            }
        }
    }

    if (cfg.output.format == "csv") {
        std::string text = csv.str();
        if (!band_names.empty()) {
            std::string extra;
            for (const auto& n : band_names) extra += ",band_" + n;
            text.insert(text.find('\n'), extra);
        }
        return text;
    }
    Json j;
    j["command"] = "table";
    j["rows"] = rows;
    return render(j);
}

std::string run_command(const std::string& name, const RunConfig& cfg) {
    if (name == "price") return run_price(cfg);
    if (name == "greeks") return run_greeks(cfg);
    if (name == "surface") return run_surface(cfg);
    if (name == "spectrum") return run_spectrum(cfg);
    if (name == "contrib") return run_contrib(cfg);
    if (name == "check-coefficients") return run_check_coefficients(cfg);
    if (name == "oracle-compare") return run_oracle_compare(cfg);
    if (name == "table") return run_table(cfg);
    throw Error(ErrorKind::ConfigInvalid, "cli", "command: unknown subcommand \"" + name + "\"");
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Double-barrier knock-out pricing by Neumann series of Bessel functions"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    std::string preset, config, output, format;
    std::size_t mesh = 0, omega_grid = 0, nsbf_order = 0;
    double omega_max = 0.0, lambda_cutoff = 0.0;
    auto* preset_opt = app.add_option("--preset", preset, "Named parameter set: table1-medium, table3-short");
    auto* config_opt = app.add_option("--config", config, "JSON config file merged over the preset");
    auto* output_opt = app.add_option("--output", output, "Write the result to this path");
    auto* format_opt = app.add_option("--format", format, "json or csv");
    auto* mesh_opt = app.add_option("--mesh", mesh, "Mesh point count (1 mod 5)");
    auto* omax_opt = app.add_option("--omega-max", omega_max, "Upper end of the root search grid");
    auto* ogrid_opt = app.add_option("--omega-grid", omega_grid, "Root search grid point count");
    auto* order_opt = app.add_option("--nsbf-order", nsbf_order, "Maximum NSBF order");
    auto* cut_opt = app.add_option("--lambda-cutoff", lambda_cutoff, "Drop terms with lambda*T above this");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"price", "Price at the spot"},
        {"greeks", "Price, Delta, Vega and Theta at the spot"},
        {"surface", "Value surface on a (t, y) grid"},
        {"spectrum", "Eigenvalues and eigenfunction norms"},
        {"contrib", "Contribution of bands of eigen-indices to the price"},
        {"check-coefficients", "Identity residuals of the NSBF coefficients"},
        {"oracle-compare", "NSBF price against the finite-difference oracle"},
        {"table", "Parameter sweep rendered as a table"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o_msg, e_msg;
        const int code = app.exit(e, o_msg, e_msg);
        out << o_msg.str();
        err << e_msg.str();
        return code;
    }

    if (*preset_opt) o.preset = preset;
    if (*config_opt) o.config_path = config;
    if (*output_opt) o.output = output;
    if (*format_opt) o.format = format;
    if (*mesh_opt) o.mesh = mesh;
    if (*omax_opt) o.omega_max = omega_max;
    if (*ogrid_opt) o.omega_grid = omega_grid;
    if (*order_opt) o.nsbf_order = nsbf_order;
    if (*cut_opt) o.lambda_cutoff = lambda_cutoff;

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = load_config(o);
        const std::string text = run_command(command, cfg);
        if (cfg.output.path) {
            std::ofstream file(*cfg.output.path, std::ios::binary);
            if (!file) throw Error(ErrorKind::ConfigInvalid, "cli", "output.path: cannot write " + *cfg.output.path);
            file << text;
        } else {
            out << text;
        }
        return 0;
    } catch (const Error& e) {
        Json j;
        j["error"] = to_string(e.kind());
        j["module"] = e.module();
        j["message"] = e.what();
        err << j.dump() << '\n';
        return 2;
    }
}

}  // namespace nsbf::cli
