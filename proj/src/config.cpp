#include "nsbf/config.hpp"

#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::ConfigInvalid, "cli", field + ": " + what);
}

const Json* member(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void read(const Json& obj, const char* key, const std::string& path, double& out) {
    if (const Json* v = member(obj, key)) {
        if (!v->is_number()) invalid(path + "." + key, "expected a number");
        out = v->get<double>();
    }
}

void read(const Json& obj, const char* key, const std::string& path, std::size_t& out) {
    if (const Json* v = member(obj, key)) {
        if (!v->is_number_integer() || v->get<long long>() < 0) {
            invalid(path + "." + key, "expected a non-negative integer");
        }
        out = v->get<std::size_t>();
    }
}

void read(const Json& obj, const char* key, const std::string& path, int& out) {
    if (const Json* v = member(obj, key)) {
        if (!v->is_number_integer()) invalid(path + "." + key, "expected an integer");
        out = v->get<int>();
    }
}

void read(const Json& obj, const char* key, const std::string& path, bool& out) {
    if (const Json* v = member(obj, key)) {
        if (!v->is_boolean()) invalid(path + "." + key, "expected true or false");
        out = v->get<bool>();
    }
}

void read(const Json& obj, const char* key, const std::string& path, std::string& out) {
    if (const Json* v = member(obj, key)) {
        if (!v->is_string()) invalid(path + "." + key, "expected a string");
        out = v->get<std::string>();
    }
}

void read(const Json& obj, const char* key, const std::string& path, std::vector<double>& out) {
    if (const Json* v = member(obj, key)) {
        if (!v->is_array()) invalid(path + "." + key, "expected an array of numbers");
        out.clear();
        for (const Json& x : *v) {
            if (!x.is_number()) invalid(path + "." + key, "expected an array of numbers");
            out.push_back(x.get<double>());
        }
    }
}

OptionStyle parse_style(const std::string& s, const std::string& field) {
    if (s == "call") return OptionStyle::Call;
    if (s == "put") return OptionStyle::Put;
    invalid(field, "style must be \"call\" or \"put\", got \"" + s + "\"");
}

const Json& block(const Json& j, const char* key) {
    static const Json empty = Json::object();
    const Json* v = member(j, key);
    if (!v) return empty;
    if (!v->is_object()) invalid(key, "expected an object");
    return *v;
}

std::string evaluation_name(Evaluation e) { return e == Evaluation::MeshNode ? "mesh-node" : "interpolate"; }

}  // namespace

std::vector<std::string> preset_names() { return {"table1-medium", "table3-short"}; }

Json preset_json(const std::string& name) {
    if (name == "table1-medium") {
        return Json::parse(R"({
  "model": {"kind": "ejdcev", "beta": -1.0, "gamma": 2.0, "sigma0": 0.25, "y0": 100.0,
            "rbar": 0.1, "qbar": 0.0, "b": 0.02, "c": 0.5},
  "contract": {"style": "call", "K": 100.0, "L": 90.0, "U": 120.0, "T": 0.5, "R": 0.0},
  "numerics": {"mesh": 10001, "nsbf_order": 60, "omega_max": 15.0, "omega_grid": 100},
  "sweep": {"K": [95.0, 100.0, 105.0], "beta": [0.5, 0.0, -1.0, -2.0], "gamma": [0.0, 1.0, 2.0],
            "styles": ["call", "put"], "greeks": true, "precision": 4}
})");
    }
    if (name == "table3-short") {
        return Json::parse(R"({
  "model": {"kind": "ejdcev", "beta": 1.0, "gamma": 3.0, "sigma0": 0.25, "y0": 100.0,
            "rbar": 0.1, "qbar": 0.0, "b": 0.02, "c": 0.5},
  "contract": {"style": "call", "K": 100.0, "L": 90.0, "U": 120.0, "T": 0.002777777777777778, "R": 0.0},
  "numerics": {"mesh": 10001, "nsbf_order": 60, "omega_max": 100.0, "omega_grid": 1000},
  "sweep": {"K": [100.0], "beta": [-2.0, 1.0], "gamma": [3.0, 2.0, 1.0, 0.0],
            "styles": ["call"], "greeks": false, "precision": 5, "band_limit": 45}
})");
    }
    invalid("preset", "unknown preset \"" + name + "\"");
}

RunConfig parse_config(const Json& j) {
    if (!j.is_object()) invalid("config", "expected a JSON object");
    RunConfig cfg;

    const Json& m = block(j, "model");
    read(m, "kind", "model", cfg.model.kind);
    read(m, "beta", "model", cfg.model.beta);
    read(m, "gamma", "model", cfg.model.gamma);
    read(m, "sigma0", "model", cfg.model.sigma0);
    read(m, "y0", "model", cfg.model.y0);
    read(m, "rbar", "model", cfg.model.rbar);
    read(m, "qbar", "model", cfg.model.qbar);
    read(m, "b", "model", cfg.model.b);
    read(m, "c", "model", cfg.model.c);

    const Json& k = block(j, "contract");
    std::string style = "call";
    read(k, "style", "contract", style);
    cfg.contract.style = parse_style(style, "contract.style");
    read(k, "K", "contract", cfg.contract.K);
    read(k, "L", "contract", cfg.contract.L);
    read(k, "U", "contract", cfg.contract.U);
    read(k, "T", "contract", cfg.contract.T);
    read(k, "R", "contract", cfg.contract.rebate);

    const Json& n = block(j, "numerics");
    Numerics& num = cfg.numerics;
    read(n, "mesh", "numerics", num.mesh_points);
    read(n, "nsbf_order", "numerics", num.nsbf_order);
    read(n, "auto_order", "numerics", num.auto_order);
    read(n, "eps_fraction", "numerics", num.eps_fraction);
    read(n, "spps_tol", "numerics", num.spps_tol);
    read(n, "omega_min", "numerics", num.roots.omega_lo);
    read(n, "omega_max", "numerics", num.roots.omega_hi);
    read(n, "omega_grid", "numerics", num.roots.count);
    read(n, "refine_tol", "numerics", num.roots.refine_tol);
    read(n, "lambda_cutoff", "numerics", num.lambda_cutoff);
    read(n, "identity_tol", "numerics", num.identity_tol);
    read(n, "band_width", "numerics", cfg.band_width);
    std::string evaluation = evaluation_name(num.evaluation);
    read(n, "evaluation", "numerics", evaluation);
    if (evaluation == "interpolate") {
        num.evaluation = Evaluation::Interpolate;
    } else if (evaluation == "mesh-node") {
        num.evaluation = Evaluation::MeshNode;
    } else {
        invalid("numerics.evaluation", "expected \"interpolate\" or \"mesh-node\"");
    }

    const Json& o = block(j, "output");
    read(o, "format", "output", cfg.output.format);
    if (const Json* p = member(o, "path")) {
        if (!p->is_string()) invalid("output.path", "expected a string");
        cfg.output.path = p->get<std::string>();
    }

    const Json& s = block(j, "sweep");
    read(s, "K", "sweep", cfg.sweep.K);
    read(s, "beta", "sweep", cfg.sweep.beta);
    read(s, "gamma", "sweep", cfg.sweep.gamma);
    if (const Json* st = member(s, "styles")) {
        if (!st->is_array() || st->empty()) invalid("sweep.styles", "expected a non-empty array of styles");
        cfg.sweep.styles.clear();
        for (const Json& x : *st) {
            if (!x.is_string()) invalid("sweep.styles", "expected strings");
            cfg.sweep.styles.push_back(parse_style(x.get<std::string>(), "sweep.styles"));
        }
    }
    read(s, "greeks", "sweep", cfg.sweep.greeks);
    read(s, "precision", "sweep", cfg.sweep.precision);
    read(s, "band_limit", "sweep", cfg.sweep.band_limit);

    const Json& sf = block(j, "surface");
    read(sf, "t_count", "surface", cfg.surface.t_count);
    read(sf, "y_count", "surface", cfg.surface.y_count);

    const Json& fd = block(j, "oracle");
    read(fd, "y_count", "oracle", cfg.oracle.y_count);
    read(fd, "t_count", "oracle", cfg.oracle.t_count);
    read(fd, "damping_steps", "oracle", cfg.oracle.damping_steps);

    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    const ModelConfig& m = cfg.model;
    if (m.kind != "ejdcev" && m.kind != "heat") invalid("model.kind", "expected \"ejdcev\" or \"heat\"");
    if (m.kind == "ejdcev" && !(m.sigma0 > 0.0)) invalid("model.sigma0", "must be positive");
    if (m.kind == "ejdcev" && !(m.b >= 0.0 && m.c >= 0.0)) invalid("model.b", "hazard terms must be non-negative");

    const OptionContract& k = cfg.contract;
    if (!(k.L > 0.0)) invalid("contract.L", "must be positive");
    if (!(k.U > k.L)) invalid("contract.U", "must exceed contract.L");
    if (!(k.K > k.L && k.K < k.U)) invalid("contract.K", "must lie strictly between L and U");
    if (!(k.T > 0.0)) invalid("contract.T", "must be positive");
    if (!(k.rebate >= 0.0)) invalid("contract.R", "must be non-negative");
    if (k.rebate > 0.0 && k.style != OptionStyle::Call) invalid("contract.R", "rebates need a call");
    if (!(m.y0 > k.L && m.y0 < k.U)) invalid("model.y0", "spot must lie strictly between L and U");

    const Numerics& n = cfg.numerics;
    if (n.mesh_points < 6 || n.mesh_points % 5 != 1) invalid("numerics.mesh", "must be >= 6 and 1 mod 5");
    if (n.nsbf_order < 2) invalid("numerics.nsbf_order", "must be at least 2");
    if (!(n.roots.omega_lo >= 0.0)) invalid("numerics.omega_min", "must be non-negative");
    if (!(n.roots.omega_hi > n.roots.omega_lo)) invalid("numerics.omega_max", "must exceed omega_min");
    if (n.roots.count < 2) invalid("numerics.omega_grid", "must be at least 2");
    if (!(n.roots.refine_tol > 0.0)) invalid("numerics.refine_tol", "must be positive");
    if (!(n.lambda_cutoff > 0.0)) invalid("numerics.lambda_cutoff", "must be positive");
    if (!(n.eps_fraction > 0.0 && n.eps_fraction < 1.0)) invalid("numerics.eps_fraction", "must lie in (0, 1)");
    if (cfg.band_width == 0) invalid("numerics.band_width", "must be positive");

    if (cfg.output.format != "json" && cfg.output.format != "csv") {
        invalid("output.format", "expected \"json\" or \"csv\"");
    }
    for (double K : cfg.sweep.K) {
        if (!(K > k.L && K < k.U)) invalid("sweep.K", "every strike must lie strictly between L and U");
    }
    if (cfg.sweep.precision < 0 || cfg.sweep.precision > 17) invalid("sweep.precision", "must be in 0..17");
    if (cfg.surface.t_count < 2 || cfg.surface.y_count < 2) invalid("surface", "counts must be at least 2");
}

Json to_json(const RunConfig& cfg) {
    Json j;
    j["model"] = {{"kind", cfg.model.kind},     {"beta", cfg.model.beta}, {"gamma", cfg.model.gamma},
                  {"sigma0", cfg.model.sigma0}, {"y0", cfg.model.y0},     {"rbar", cfg.model.rbar},
                  {"qbar", cfg.model.qbar},     {"b", cfg.model.b},       {"c", cfg.model.c}};
    j["contract"] = {{"style", to_string(cfg.contract.style)},
                     {"K", cfg.contract.K},
                     {"L", cfg.contract.L},
                     {"U", cfg.contract.U},
                     {"T", cfg.contract.T},
                     {"R", cfg.contract.rebate}};
    const Numerics& n = cfg.numerics;
    j["numerics"] = {{"mesh", n.mesh_points},
                     {"nsbf_order", n.nsbf_order},
                     {"auto_order", n.auto_order},
                     {"eps_fraction", n.eps_fraction},
                     {"spps_tol", n.spps_tol},
                     {"omega_min", n.roots.omega_lo},
                     {"omega_max", n.roots.omega_hi},
                     {"omega_grid", n.roots.count},
                     {"refine_tol", n.roots.refine_tol},
                     {"lambda_cutoff", n.lambda_cutoff},
                     {"identity_tol", n.identity_tol},
                     {"band_width", cfg.band_width},
                     {"evaluation", evaluation_name(n.evaluation)}};
    j["output"] = {{"format", cfg.output.format}};
    j["output"]["path"] = cfg.output.path ? Json(*cfg.output.path) : Json(nullptr);
    Json styles = Json::array();
    for (OptionStyle s : cfg.sweep.styles) styles.push_back(to_string(s));
    j["sweep"] = {{"K", cfg.sweep.K},
                  {"beta", cfg.sweep.beta},
                  {"gamma", cfg.sweep.gamma},
                  {"styles", styles},
                  {"greeks", cfg.sweep.greeks},
                  {"precision", cfg.sweep.precision},
                  {"band_limit", cfg.sweep.band_limit}};
    j["surface"] = {{"t_count", cfg.surface.t_count}, {"y_count", cfg.surface.y_count}};
    j["oracle"] = {{"y_count", cfg.oracle.y_count},
                   {"t_count", cfg.oracle.t_count},
                   {"damping_steps", cfg.oracle.damping_steps}};
    return j;
}

DiffusionSpec make_spec(const ModelConfig& m) {
    if (m.kind == "heat") return make_heat();
    return make_ejdcev(make_ejdcev_params(m.beta, m.gamma, m.sigma0, m.y0, m.rbar, m.qbar, m.b, m.c));
}

}  // namespace nsbf
