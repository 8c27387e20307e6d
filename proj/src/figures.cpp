#include "nlaffine/figures.hpp"

#include "nlaffine/errors.hpp"
#include "nlaffine/riccati.hpp"

#include <cmath>

namespace nlaffine {

namespace {

std::vector<double> x_axis(double from, double to, double step) {
    std::vector<double> xs;
    const auto n = static_cast<int>(std::lround((to - from) / step)) + 1;
    for (int i = 0; i < n; ++i) xs.push_back(std::stod(format_number(from + i * step)));
    return xs;
}

PricingOptions shared_grid(const ModelSpec& widest, const std::vector<double>& xs, const FigureOptions& o) {
    const Grid g = default_grid(widest, xs.front(), xs.back(), kFigureHorizon, o.n_x, o.n_t);
    PricingOptions p;
    p.n_x = o.n_x;
    p.n_t = o.n_t;
    p.x_min = g.x_min;
    p.x_max = g.x_max;
    return p;
}

std::vector<PricingResult> pde_curve(const ModelSpec& m, const PayoffSpec& f, const std::vector<double>& xs,
                                     const PricingOptions& p) {
    return price_curve(m, f, xs, kFigureHorizon, Method::PDE, p);
}

json box_meta(const ParameterBox& b) { return to_json(b); }

FigureDataset figure1(const FigureOptions& o) {
    const ParameterBox box = fig1_box();
    const ModelSpec model = make_model(box, StateDomain::RealLine);
    const PayoffSpec f = PayoffSpec::exponential(1.0);
    const auto xs = x_axis(-1.0, 1.0, 0.05);
    PricingOptions p;
    p.n_x = o.n_x;
    p.n_t = o.n_t;
    const auto curve = pde_curve(model, f, xs, p);

    auto vasicek = [&](double b1, double x) {
        const CornerParams c{box.b0_hi, b1, box.a0_hi, 0.0, x};
        const PhiPsi r = vasicek_closed_form(c, 1.0, kFigureHorizon, RiccatiMode::Mgf);
        return std::exp(r.phi + r.psi * x);
    };

    FigureDataset d{"fig1", {{"x0", "upper", "lower", "reference_model", "vasicek_b1_lo", "vasicek_b1_hi"}, {}}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double lo = vasicek(box.b1_lo, x);
        const double hi = vasicek(box.b1_hi, x);
        d.table.rows.push_back({x, curve[i].upper, curve[i].lower, x < 0.0 ? lo : hi, lo, hi});
    }
    d.metadata = {
        {"figure", "fig1"},
        {"T", kFigureHorizon},
        {"payoff", f.name()},
        {"domain", "R"},
        {"box", box_meta(box)},
        {"grid", curve.empty() || !curve.front().diagnostics.grid ? json() : to_json(*curve.front().diagnostics.grid)},
        {"notes",
         {"table gives only b0_hi, b1_lo, b1_hi and a0_hi; b0_lo = b0_hi, a0_lo = a0_hi and a1 = 0 are assumed",
          "reference_model is the Vasicek mgf with slope b1_lo on x0 < 0 and b1_hi on x0 >= 0",
          "maturity is not stated; T = 1 is used"}},
        {"warnings", curve.empty() ? json::array() : json(curve.front().diagnostics.warnings)},
    };
    return d;
}

FigureDataset figure2(const FigureOptions& o) {
    const ParameterBox full = fig2_box();
    ParameterBox vas = full;
    vas.a1_lo = vas.a1_hi = 0.0;
    ParameterBox cir = full;
    cir.a0_lo = cir.a0_hi = 0.0;
    const ParameterBox mid = ParameterBox::point(0.5 * (full.b0_lo + full.b0_hi), 0.5 * (full.b1_lo + full.b1_hi),
                                                 0.5 * (full.a0_lo + full.a0_hi), 0.5 * (full.a1_lo + full.a1_hi));

    const ModelSpec m_full = make_model(full, StateDomain::RealLine, true);
    const ModelSpec m_vas = make_model(vas, StateDomain::RealLine, true);
    const ModelSpec m_cir = make_model(cir, StateDomain::RealLine, true);
    const ModelSpec m_mid = make_model(mid, StateDomain::RealLine, true);

    const PayoffSpec f = PayoffSpec::call(0.5);
    const auto xs = x_axis(-0.5, 1.5, 0.05);
    const PricingOptions p = shared_grid(m_full, xs, o);
    const auto c_full = pde_curve(m_full, f, xs, p);
    const auto c_vas = pde_curve(m_vas, f, xs, p);
    const auto c_cir = pde_curve(m_cir, f, xs, p);
    const auto c_mid = pde_curve(m_mid, f, xs, p);

    FigureDataset d{"fig2", {{"x0", "upper", "lower", "reference_model", "vasicek_upper", "cir_upper"}, {}}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i)
        d.table.rows.push_back(
            {xs[i], c_full[i].upper, c_full[i].lower, c_mid[i].upper, c_vas[i].upper, c_cir[i].upper});
    d.metadata = {
        {"figure", "fig2"},
        {"T", kFigureHorizon},
        {"payoff", f.name()},
        {"domain", "R"},
        {"forced", true},
        {"box", box_meta(full)},
        {"vasicek_box", box_meta(vas)},
        {"cir_box", box_meta(cir)},
        {"reference_box", box_meta(mid)},
        {"grid", to_json(*c_full.front().diagnostics.grid)},
        {"notes",
         {"a0_lo = 0 on R is outside the Lipschitz uniqueness regime; all solves run forced",
          "sub-models zero a1 (Vasicek) or a0 (CIR) of the full box",
          "reference_model is the single model at the box midpoint",
          "all four curves share one grid",
          "maturity is not stated; T = 1 is used"}},
        {"warnings", c_full.front().diagnostics.warnings},
    };
    return d;
}

FigureDataset figure3(const FigureOptions& o, bool butterfly) {
    std::vector<std::string> warnings;
    const ParameterBox box = fig3_box_as_printed().sorted(warnings);
    const ModelSpec model = make_model(box, StateDomain::RealLine);
    const ModelSpec ref = make_model(fig3_reference_point(), StateDomain::RealLine);
    const PayoffSpec f = butterfly ? PayoffSpec::butterfly(-0.2, 0.3, 0.8) : PayoffSpec::call(0.1);
    const auto xs = x_axis(-0.5, 1.5, 0.05);
    const PricingOptions p = shared_grid(model, xs, o);
    const auto c = pde_curve(model, f, xs, p);
    const auto r = pde_curve(ref, f, xs, p);

    const std::string name = butterfly ? "fig3-butterfly" : "fig3-call";
    FigureDataset d{name, {{"x0", "upper", "lower", "reference_model", "model_risk"}, {}}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i)
        d.table.rows.push_back({xs[i], c[i].upper, c[i].lower, r[i].upper, c[i].model_risk});
    auto all_warnings = warnings;
    for (const auto& w : c.front().diagnostics.warnings) all_warnings.push_back(w);
    d.metadata = {
        {"figure", name},
        {"T", kFigureHorizon},
        {"payoff", f.name()},
        {"domain", "R"},
        {"box_as_printed", box_meta(fig3_box_as_printed())},
        {"box", box_meta(box)},
        {"reference_box", box_meta(fig3_reference_point())},
        {"grid", to_json(*c.front().diagnostics.grid)},
        {"notes",
         {"the a0 endpoints are printed in reverse order and were sorted on ingestion",
          "the columns printed as a1 carry the signs of mean-reversion slopes and are read as b1; a1 = 0",
          "reference_model uses the middle column (a0, b1, b0)",
          "maturity is not stated; T = 1 is used"}},
        {"warnings", all_warnings},
    };
    return d;
}

}  // namespace

ParameterBox fig1_box() {
    ParameterBox b;
    b.b0_lo = b.b0_hi = 0.15;
    b.b1_lo = -3.0;
    b.b1_hi = -0.5;
    b.a0_lo = b.a0_hi = 0.02;
    return b;
}

ParameterBox fig2_box() {
    ParameterBox b;
    b.a0_lo = 0.0;
    b.a0_hi = 0.08;
    b.a1_lo = 0.0;
    b.a1_hi = 0.2;
    b.b0_lo = 0.05;
    b.b0_hi = 0.15;
    b.b1_lo = -1.0;
    b.b1_hi = -0.5;
    return b;
}

ParameterBox fig3_box_as_printed() {
    ParameterBox b;
    b.a0_hi = 0.0003;
    b.a0_lo = 0.017;
    b.b1_hi = 0.0;
    b.b1_lo = -0.11;
    b.b0_hi = 0.026;
    b.b0_lo = 0.019;
    return b;
}

ParameterBox fig3_reference_point() { return ParameterBox::point(0.023, -0.06, 0.003, 0.0); }

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3-call", "fig3-butterfly"}; }

FigureDataset make_figure(const std::string& name, const FigureOptions& opts) {
    if (name == "fig1") return figure1(opts);
    if (name == "fig2") return figure2(opts);
    if (name == "fig3-call") return figure3(opts, false);
    if (name == "fig3-butterfly") return figure3(opts, true);
    throw ConfigError("unknown figure '" + name + "' (expected fig1, fig2, fig3-call or fig3-butterfly)");
}

}  // namespace nlaffine
