#include "nlaffine/cli.hpp"

#include "nlaffine/errors.hpp"
#include "nlaffine/figures.hpp"
#include "nlaffine/io.hpp"
#include "nlaffine/pricing.hpp"
#include "nlaffine/riccati.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace nlaffine {

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string format;
    std::string name;
    std::string surface;
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool sort_endpoints = false;
};

/// Destination for the data: the --out file, or the console stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& console) : console_(console) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot write '" + path + "'");
        }
    }
    std::ostream& data() { return file_.is_open() ? static_cast<std::ostream&>(file_) : console_; }
    [[nodiscard]] bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
    std::ostream& console_;
};

RunConfig load(const Args& a, std::ostream& err) {
    if (a.config.empty()) throw ConfigError("--config is required");
    RunConfig c = load_run_config(a.config, a.sort_endpoints);
    if (a.force) c.force = true;
    if (a.seed) {
        c.seed = a.seed;
        c.pricing.sim.seed = *a.seed;
    }
    if (!a.out.empty()) c.output.path = a.out;
    if (!a.format.empty()) c.output.format = a.format;
    if (!a.surface.empty()) c.output.surface_path = a.surface;
    if (c.output.format != "csv" && c.output.format != "json") throw ConfigError("--format must be csv or json");
    for (const auto& w : c.warnings) err << "warning: " << w << '\n';
    return c;
}

std::ostream& summary_stream(const Sink& sink, std::ostream& out, std::ostream& err) {
    return sink.to_file() ? out : err;
}

std::string summary(double upper, double lower) {
    return "upper=" + format_number(upper) + " lower=" + format_number(lower) + " mu=" + format_number(upper - lower);
}

const PayoffSpec& need_payoff(const RunConfig& c) {
    if (!c.payoff) throw ConfigError("config needs a 'payoff' object for this command");
    return *c.payoff;
}

const std::vector<double>& need_x0(const RunConfig& c) {
    if (c.x0s.empty()) throw ConfigError("config needs 'x0' or 'x0_grid' for this command");
    return c.x0s;
}

int cmd_validate(const Args& a, std::ostream& out, std::ostream& err) {
    const RunConfig c = load(a, err);
    const AdmissibilityReport r = validate(c.box, c.domain);
    Sink sink(c.output.path, out);
    json j = to_json(r);
    j["domain"] = std::string(to_string(c.domain));
    j["forced"] = c.force;
    j["warnings"] = c.warnings;
    sink.data() << j.dump(2) << '\n';
    if (r.accepted()) return 0;
    for (const auto& reason : r.reasons) err << (c.force ? "warning: " : "rejected: ") << reason << '\n';
    return c.force ? 0 : static_cast<int>(ErrorKind::Validation);
}

void write_surface(const RunConfig& c, const ModelSpec& m, const PricingResult& r) {
    if (c.output.surface_path.empty() || !r.diagnostics.grid) return;
    SolveConfig sc;
    sc.scheme = c.pricing.scheme;
    const ValueSurface s = solve(m, *c.payoff, *r.diagnostics.grid, sc);
    std::ofstream f(c.output.surface_path);
    if (!f) throw ConfigError("cannot write '" + c.output.surface_path + "'");
    write_surface_csv(f, s);
}

int cmd_price(const Args& a, std::ostream& out, std::ostream& err, bool risk_only) {
    const RunConfig c = load(a, err);
    const ModelSpec m = make_model(c.box, c.domain, c.force);
    const PayoffSpec& f = need_payoff(c);
    const auto results = price_curve(m, f, need_x0(c), c.T, c.method, c.pricing);

    Sink sink(c.output.path, out);
    if (c.output.format == "json") {
        if (results.size() == 1) {
            sink.data() << to_json(results.front()).dump(2) << '\n';
        } else {
            json arr = json::array();
            for (const auto& r : results) arr.push_back(to_json(r));
            sink.data() << arr.dump(2) << '\n';
        }
    } else {
        CsvTable t{{"x0", "upper", "lower", "model_risk"}, {}};
        for (const auto& r : results) t.rows.push_back({r.x0, r.upper, r.lower, r.model_risk});
        write_csv(sink.data(), t);
    }
    write_surface(c, m, results.front());

    for (const auto& w : results.front().diagnostics.warnings) err << "warning: " << w << '\n';
    std::ostream& s = summary_stream(sink, out, err);
    if (results.size() == 1) {
        s << summary(results.front().upper, results.front().lower) << '\n';
    } else {
        const auto worst = std::max_element(results.begin(), results.end(), [](const auto& x, const auto& y) {
            return x.model_risk < y.model_risk;
        });
        s << (risk_only ? "max " : "") << "x0=" << format_number(worst->x0) << ' '
          << summary(worst->upper, worst->lower) << '\n';
    }
    return 0;
}

int cmd_bond_curve(const Args& a, std::ostream& out, std::ostream& err) {
    const RunConfig c = load(a, err);
    const ModelSpec m = make_model(c.box, c.domain, c.force);
    const auto& xs = need_x0(c);
    if (xs.size() != 1) throw ConfigError("bond-curve needs a single x0");
    if (c.maturities.empty()) throw ConfigError("bond-curve needs 'maturities'");
    const auto quotes = bond_curve(m, xs.front(), c.maturities, c.method, c.pricing);

    Sink sink(c.output.path, out);
    if (c.output.format == "json") {
        json arr = json::array();
        for (const auto& q : quotes) arr.push_back(to_json(q));
        sink.data() << arr.dump(2) << '\n';
    } else {
        CsvTable t{{"maturity", "p_upper", "p_lower"}, {}};
        for (const auto& q : quotes) t.rows.push_back({q.maturity, q.upper, q.lower});
        write_csv(sink.data(), t);
    }
    const BondQuote& last = quotes.back();
    summary_stream(sink, out, err) << "maturity=" << format_number(last.maturity) << ' '
                                   << summary(last.upper, last.lower) << '\n';
    return 0;
}

int cmd_figure(const Args& a, std::ostream& out, std::ostream& err) {
    if (a.name.empty()) throw ConfigError("figure needs --name (fig1, fig2, fig3-call, fig3-butterfly)");
    const FigureDataset d = make_figure(a.name);
    Sink sink(a.out, out);
    if (a.format == "json") {
        sink.data() << json{{"columns", d.table.header}, {"rows", d.table.rows}, {"metadata", d.metadata}}.dump(2)
                    << '\n';
    } else {
        write_csv(sink.data(), d.table);
        if (sink.to_file()) {
            std::ofstream meta(a.out + ".meta.json");
            if (!meta) throw ConfigError("cannot write '" + a.out + ".meta.json'");
            meta << d.metadata.dump(2) << '\n';
        }
    }
    for (const auto& w : d.metadata.at("warnings")) err << "warning: " << w.get<std::string>() << '\n';
    summary_stream(sink, out, err) << a.name << ": " << d.table.rows.size() << " rows\n";
    return 0;
}

int cmd_riccati(const Args& a, std::ostream& out, std::ostream& err) {
    const RunConfig c = load(a, err);
    const ModelSpec m = make_model(c.box, c.domain, c.force);
    const auto& xs = need_x0(c);
    if (xs.size() != 1) throw ConfigError("riccati needs a single x0");
    const double x0 = xs.front();
    const RiccatiRequest& r = c.riccati;
    const CornerParams corner = r.mode == RiccatiMode::Mgf ? mgf_corner(m, x0, r.u, r.direction)
                                                           : bond_corner(m, x0, r.direction);
    const double u = r.mode == RiccatiMode::Mgf ? r.u : 0.0;
    const RiccatiSolution sol =
        solve_riccati(corner, u, r.T, r.n_steps.value_or(default_riccati_steps(r.T)), r.mode);

    Sink sink(c.output.path, out);
    if (c.output.format == "json") {
        sink.data() << json{{"corner", to_json(corner)}, {"t", sol.t}, {"phi", sol.phi}, {"psi", sol.psi}}.dump(2)
                    << '\n';
    } else {
        CsvTable t{{"t", "phi", "psi"}, {}};
        for (std::size_t i = 0; i < sol.t.size(); ++i) t.rows.push_back({sol.t[i], sol.phi[i], sol.psi[i]});
        write_csv(sink.data(), t);
    }
    summary_stream(sink, out, err) << "phi=" << format_number(sol.phi_at_end())
                                   << " psi=" << format_number(sol.psi_at_end()) << " value="
                                   << format_number(std::exp(sol.phi_at_end() + sol.psi_at_end() * x0)) << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Upper/lower pricing and model risk for affine diffusions with parameter uncertainty", "nlaffine"};
    app.require_subcommand(1);
    Args a;

    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", a.config, "JSON run configuration");
        if (needs_config) opt->required();
        sub->add_option("--out", a.out, "output path (default stdout)");
        sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", a.seed, "Monte Carlo seed");
        sub->add_flag("--force", a.force, "run outside proven uniqueness regimes");
        sub->add_flag("--sort-endpoints", a.sort_endpoints, "swap reversed intervals with a warning");
    };

    auto* v = app.add_subcommand("validate", "check admissibility of a parameter box");
    common(v, true);
    auto* p = app.add_subcommand("price", "upper and lower prices");
    common(p, true);
    p->add_option("--surface", a.surface, "also write the upper value surface as CSV");
    auto* b = app.add_subcommand("bond-curve", "upper and lower zero-coupon bond prices");
    common(b, true);
    auto* r = app.add_subcommand("model-risk", "upper minus lower price across start points");
    common(r, true);
    r->add_option("--surface", a.surface, "also write the upper value surface as CSV");
    auto* f = app.add_subcommand("figure", "regenerate a figure dataset");
    common(f, false);
    f->add_option("--name", a.name, "fig1, fig2, fig3-call or fig3-butterfly")->required();
    auto* q = app.add_subcommand("riccati", "solve the worst-case Riccati system");
    common(q, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::Config);
    }

    try {
        if (v->parsed()) return cmd_validate(a, out, err);
        if (p->parsed()) return cmd_price(a, out, err, false);
        if (b->parsed()) return cmd_bond_curve(a, out, err);
        if (r->parsed()) return cmd_price(a, out, err, true);
        if (f->parsed()) return cmd_figure(a, out, err);
        if (q->parsed()) return cmd_riccati(a, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::Numerical);
    }
    return static_cast<int>(ErrorKind::Config);
}

}  // namespace nlaffine
