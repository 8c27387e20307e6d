#include "nlaffine/io.hpp"

#include "nlaffine/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

namespace nlaffine {

namespace {

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
        if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + "." + key + " must be finite");
    return d;
}

std::optional<double> opt_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    return number(j, key, where);
}

long integer(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return v.get<long>();
}

bool boolean(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
    return v.get<bool>();
}

std::string text(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(where + " must contain numbers only");
            out.push_back(e.get<double>());
        }
        return out;
    }
    require_object(v, where, {"from", "to", "step"});
    const double from = number(v, "from", where);
    const double to = number(v, "to", where);
    const double step = number(v, "step", where);
    if (!(step > 0.0) || to < from) throw ConfigError(where + " needs step > 0 and to >= from");
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
    if (n > 1'000'000) throw ConfigError(where + " has too many points");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        // Snap to 12 digits so 0.1 + 2 * 0.05 prints and compares as 0.2.
        out[static_cast<std::size_t>(i)] = std::stod(format_number(from + static_cast<double>(i) * step));
    }
    return out;
}

Direction parse_direction(const std::string& s) {
    if (s == "upper") return Direction::Upper;
    if (s == "lower") return Direction::Lower;
    throw ConfigError("direction must be 'upper' or 'lower', got '" + s + "'");
}

void parse_grid(const json& g, PricingOptions& p) {
    const std::string where = "grid";
    require_object(g, where, {"n_x", "n_t", "x_min", "x_max", "scheme"});
    if (g.contains("n_x")) p.n_x = static_cast<int>(integer(g, "n_x", where));
    if (g.contains("n_t")) p.n_t = static_cast<int>(integer(g, "n_t", where));
    p.x_min = opt_number(g, "x_min", where);
    p.x_max = opt_number(g, "x_max", where);
    if (p.x_min.has_value() != p.x_max.has_value()) throw ConfigError("grid.x_min and grid.x_max go together");
    if (g.contains("scheme")) p.scheme = parse_scheme(text(g, "scheme", where));
    if (p.n_x < 3 || p.n_t < 1) throw ConfigError("grid needs n_x >= 3 and n_t >= 1");
}

void parse_sim(const json& s, SimConfig& c) {
    const std::string where = "sim";
    require_object(s, where, {"n_paths", "n_steps", "antithetic", "scheme", "threads"});
    if (s.contains("n_paths")) c.n_paths = integer(s, "n_paths", where);
    if (s.contains("n_steps")) c.n_steps = static_cast<int>(integer(s, "n_steps", where));
    if (s.contains("antithetic")) c.antithetic = boolean(s, "antithetic", where);
    if (s.contains("scheme")) c.scheme = parse_sim_scheme(text(s, "scheme", where));
    if (s.contains("threads")) c.threads = static_cast<int>(integer(s, "threads", where));
    c.check();
}

void parse_output(const json& o, OutputSpec& out) {
    const std::string where = "output";
    require_object(o, where, {"path", "format", "surface_path"});
    if (o.contains("path")) out.path = text(o, "path", where);
    if (o.contains("format")) out.format = text(o, "format", where);
    if (o.contains("surface_path")) out.surface_path = text(o, "surface_path", where);
    if (out.format != "csv" && out.format != "json") throw ConfigError("output.format must be csv or json");
}

void parse_riccati(const json& r, RiccatiRequest& req) {
    const std::string where = "riccati";
    require_object(r, where, {"u", "T", "mode", "direction", "n_steps"});
    if (auto u = opt_number(r, "u", where)) req.u = *u;
    if (auto t = opt_number(r, "T", where)) req.T = *t;
    if (r.contains("mode")) {
        const std::string m = text(r, "mode", where);
        if (m == "mgf")
            req.mode = RiccatiMode::Mgf;
        else if (m == "bond")
            req.mode = RiccatiMode::Bond;
        else
            throw ConfigError("riccati.mode must be mgf or bond");
    }
    if (r.contains("direction")) req.direction = parse_direction(text(r, "direction", where));
    if (r.contains("n_steps")) req.n_steps = static_cast<int>(integer(r, "n_steps", where));
    if (!(req.T >= 0.0)) throw ConfigError("riccati.T must be >= 0");
}

json diagnostics_json(const SolveDiagnostics& d) {
    return {{"scheme", to_string(d.scheme)},           {"dt_effective", d.dt_effective},
            {"cfl_ratio", d.cfl_ratio},                {"policy_iterations", d.policy_iterations},
            {"substeps", d.substeps},                  {"growth_ratio", d.growth_ratio}};
}

json mc_json(const McEstimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_paths", e.n_paths}, {"discounted", e.discounted}};
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    if (table.header.empty()) throw ConfigError("CSV header is mandatory");
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw ConfigError("CSV row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    auto split = [](std::string s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    if (!std::getline(is, line)) throw ConfigError("CSV is empty");
    t.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        for (const auto& cell : split(line)) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw ConfigError("CSV cell '" + cell + "' is not a number");
            row.push_back(v);
        }
        if (row.size() != t.header.size()) throw ConfigError("CSV row width does not match the header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_surface_csv(std::ostream& os, const ValueSurface& surface) {
    const Grid& g = surface.grid();
    os << "t,x,value\n";
    for (int k = 0; k <= g.n_t; ++k)
        for (int j = 0; j < g.n_x; ++j)
            os << format_number(g.t(k)) << ',' << format_number(g.x(j)) << ',' << format_number(surface.at(k, j))
               << '\n';
}

ParameterBox parse_box(const json& m, bool sort_endpoints, std::vector<std::string>& warnings) {
    const std::string where = "model";
    ParameterBox b;
    b.b0_lo = number(m, "b0_lo", where);
    b.b0_hi = number(m, "b0_hi", where);
    b.b1_lo = number(m, "b1_lo", where);
    b.b1_hi = number(m, "b1_hi", where);
    b.a0_lo = number(m, "a0_lo", where);
    b.a0_hi = number(m, "a0_hi", where);
    b.a1_lo = number(m, "a1_lo", where);
    b.a1_hi = number(m, "a1_hi", where);
    if (sort_endpoints) b = b.sorted(warnings);
    b.check();
    return b;
}

PayoffSpec parse_payoff(const json& p) {
    const std::string where = "payoff";
    if (!p.is_object() || !p.contains("kind")) throw ConfigError("payoff needs a 'kind'");
    const std::string kind = text(p, "kind", where);
    std::optional<PayoffSpec> out;
    if (kind == "call") {
        require_object(p, where, {"kind", "strike", "scale", "shift"});
        out = PayoffSpec::call(number(p, "strike", where));
    } else if (kind == "butterfly") {
        require_object(p, where, {"kind", "k1", "k2", "k3", "scale", "shift"});
        out = PayoffSpec::butterfly(number(p, "k1", where), number(p, "k2", where), number(p, "k3", where));
    } else if (kind == "exponential") {
        require_object(p, where, {"kind", "u", "scale", "shift"});
        out = PayoffSpec::exponential(number(p, "u", where));
    } else if (kind == "constant") {
        require_object(p, where, {"kind", "c", "scale", "shift"});
        out = PayoffSpec::constant(number(p, "c", where));
    } else if (kind == "identity") {
        require_object(p, where, {"kind", "scale", "shift"});
        out = PayoffSpec::identity();
    } else if (kind == "custom") {
        require_object(p, where, {"kind", "x", "y", "scale", "shift"});
        if (!p.contains("x") || !p.contains("y")) throw ConfigError("custom payoff needs 'x' and 'y' arrays");
        if (!p.at("x").is_array() || !p.at("y").is_array())
            throw ConfigError("custom payoff 'x' and 'y' must be arrays");
        out = PayoffSpec::custom(number_list(p.at("x"), "payoff.x"), number_list(p.at("y"), "payoff.y"));
    } else {
        throw ConfigError("unknown payoff kind '" + kind + "'");
    }
    const double scale = opt_number(p, "scale", where).value_or(1.0);
    const double shift = opt_number(p, "shift", where).value_or(0.0);
    if (scale != 1.0 || shift != 0.0) out = out->affine_image(scale, shift);
    return *out;
}

RunConfig parse_run_config(const json& doc, bool sort_endpoints) {
    require_object(doc, "config",
                   {"model", "payoff", "x0", "x0_grid", "T", "maturities", "method", "grid", "sim", "output", "seed",
                    "riccati"});
    RunConfig c;
    if (!doc.contains("model")) throw ConfigError("config needs a 'model' object");
    const json& m = doc.at("model");
    require_object(m, "model",
                   {"b0_lo", "b0_hi", "b1_lo", "b1_hi", "a0_lo", "a0_hi", "a1_lo", "a1_hi", "domain", "force",
                    "sort_endpoints"});
    if (m.contains("sort_endpoints")) c.sort_endpoints = boolean(m, "sort_endpoints", "model");
    c.sort_endpoints = c.sort_endpoints || sort_endpoints;
    c.box = parse_box(m, c.sort_endpoints, c.warnings);
    if (m.contains("domain")) c.domain = parse_domain(text(m, "domain", "model"));
    if (m.contains("force")) c.force = boolean(m, "force", "model");

    if (doc.contains("payoff")) c.payoff = parse_payoff(doc.at("payoff"));
    if (doc.contains("x0") && doc.contains("x0_grid")) throw ConfigError("give either x0 or x0_grid, not both");
    if (doc.contains("x0")) c.x0s = {number(doc, "x0", "config")};
    if (doc.contains("x0_grid")) c.x0s = number_list(doc.at("x0_grid"), "x0_grid");
    if (auto t = opt_number(doc, "T", "config")) c.T = *t;
    if (!(c.T >= 0.0)) throw ConfigError("T must be >= 0");
    if (doc.contains("maturities")) c.maturities = number_list(doc.at("maturities"), "maturities");
    if (doc.contains("method")) c.method = parse_method(text(doc, "method", "config"));
    if (doc.contains("grid")) parse_grid(doc.at("grid"), c.pricing);
    if (doc.contains("sim")) parse_sim(doc.at("sim"), c.pricing.sim);
    if (doc.contains("output")) parse_output(doc.at("output"), c.output);
    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError("seed must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
        c.pricing.sim.seed = *c.seed;
    }
    if (doc.contains("riccati")) parse_riccati(doc.at("riccati"), c.riccati);
    return c;
}

RunConfig load_run_config(const std::string& path, bool sort_endpoints) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_run_config(doc, sort_endpoints);
}

json to_json(const ParameterBox& b) {
    return {{"b0_lo", b.b0_lo}, {"b0_hi", b.b0_hi}, {"b1_lo", b.b1_lo}, {"b1_hi", b.b1_hi},
            {"a0_lo", b.a0_lo}, {"a0_hi", b.a0_hi}, {"a1_lo", b.a1_lo}, {"a1_hi", b.a1_hi}};
}

json to_json(const CornerParams& c) {
    return {{"b0", c.b0}, {"b1", c.b1}, {"a0", c.a0}, {"a1", c.a1}, {"regime_x0", c.regime_x0}};
}

json to_json(const AdmissibilityReport& r) {
    return {{"proper", r.proper},
            {"feller_ok", r.feller_ok},
            {"uniqueness_regime", std::string(to_string(r.regime))},
            {"accepted", r.accepted()},
            {"reasons", r.reasons}};
}

json to_json(const Grid& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_x", g.n_x}, {"T", g.T}, {"n_t", g.n_t}};
}

json to_json(const PricingResult& r) {
    const auto& d = r.diagnostics;
    json diag = {{"warnings", d.warnings}, {"label_upper", d.label_upper}, {"label_lower", d.label_lower}};
    if (d.grid) diag["grid"] = to_json(*d.grid);
    if (d.pde_upper) diag["pde_upper"] = diagnostics_json(*d.pde_upper);
    if (d.pde_lower) diag["pde_lower"] = diagnostics_json(*d.pde_lower);
    if (d.mc_upper) diag["mc_upper"] = mc_json(*d.mc_upper);
    if (d.mc_lower) diag["mc_lower"] = mc_json(*d.mc_lower);
    if (d.corner_upper) diag["corner_upper"] = to_json(*d.corner_upper);
    if (d.corner_lower) diag["corner_lower"] = to_json(*d.corner_lower);
    return {{"x0", r.x0},
            {"T", r.T},
            {"upper", r.upper},
            {"lower", r.lower},
            {"model_risk", r.model_risk},
            {"method_upper", to_string(r.method_upper)},
            {"method_lower", to_string(r.method_lower)},
            {"diagnostics", diag}};
}

json to_json(const BondQuote& q) {
    return {{"maturity", q.maturity}, {"p_upper", q.upper}, {"p_lower", q.lower}, {"method", to_string(q.method)}};
}

PricingResult pricing_result_from_json(const json& j) {
    try {
        PricingResult r;
        r.x0 = j.at("x0").get<double>();
        r.T = j.at("T").get<double>();
        r.upper = j.at("upper").get<double>();
        r.lower = j.at("lower").get<double>();
        r.model_risk = j.at("model_risk").get<double>();
        r.method_upper = parse_method(j.at("method_upper").get<std::string>());
        r.method_lower = parse_method(j.at("method_lower").get<std::string>());
        const json& d = j.at("diagnostics");
        r.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
        r.diagnostics.label_upper = d.at("label_upper").get<std::string>();
        r.diagnostics.label_lower = d.at("label_lower").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed pricing result: ") + e.what());
    }
}

}  // namespace nlaffine
