#include "nlaffine/errors.hpp"
#include "nlaffine/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace nlaffine;

namespace {

json base_doc() {
    return json::parse(R"({
        "model": {"b0_lo": 0.15, "b0_hi": 0.2, "b1_lo": -1.0, "b1_hi": -0.5,
                  "a0_lo": 0.0, "a0_hi": 0.0, "a1_lo": 0.1, "a1_hi": 0.2, "domain": "R+"},
        "payoff": {"kind": "call", "strike": 0.3},
        "x0": 1.0,
        "T": 2.0
    })");
}

}  // namespace

TEST(FormatNumber, TwelveSignificantDigits) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1234567.0), "1234567");
    EXPECT_EQ(format_number(2.5e-9), "2.5e-09");
}

TEST(Csv, RoundTrip) {
    CsvTable t{{"x0", "upper", "lower"}, {{-0.5, 1.0 / 3.0, 0.0}, {1.5, 2.0, -1e-7}}};
    std::stringstream ss;
    write_csv(ss, t);
    EXPECT_EQ(ss.str().substr(0, 15), "x0,upper,lower\n");
    const CsvTable back = read_csv(ss);
    EXPECT_EQ(back.header, t.header);
    ASSERT_EQ(back.rows.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(back.rows[i][j], t.rows[i][j], 1e-12 * (1 + std::abs(t.rows[i][j])));
    EXPECT_EQ(back.column("lower"), 2u);
    EXPECT_THROW((void)back.column("mu"), ConfigError);
}

TEST(Csv, RejectsMalformedInput) {
    std::stringstream ragged("a,b\n1,2\n3\n");
    EXPECT_THROW((void)read_csv(ragged), ConfigError);
    std::stringstream text("a,b\n1,x\n");
    EXPECT_THROW((void)read_csv(text), ConfigError);
    std::stringstream empty("");
    EXPECT_THROW((void)read_csv(empty), ConfigError);
}

TEST(Csv, SurfaceExport) {
    const auto m = make_model(ParameterBox::point(0.1, -0.5, 0.02, 0.0), StateDomain::RealLine);
    const Grid g{-1, 1, 11, 1.0, 4};
    const auto s = solve(m, PayoffSpec::call(0.0), g, SolveConfig{});
    std::stringstream ss;
    write_surface_csv(ss, s);
    const CsvTable t = read_csv(ss);
    EXPECT_EQ(t.header, (std::vector<std::string>{"t", "x", "value"}));
    ASSERT_EQ(t.rows.size(), 55u);
    EXPECT_EQ(t.rows[0][0], 0.0);
    EXPECT_NEAR(t.rows[12][1], g.x(1), 1e-12);
    EXPECT_NEAR(t.rows[12][2], s.at(1, 1), 1e-12 * (1 + std::abs(s.at(1, 1))));
}

TEST(RunConfig, ParsesMinimalDocument) {
    const RunConfig c = parse_run_config(base_doc());
    EXPECT_EQ(c.domain, StateDomain::PositiveHalfLine);
    EXPECT_EQ(c.box.a1_hi, 0.2);
    ASSERT_TRUE(c.payoff.has_value());
    EXPECT_EQ(c.payoff->name().find("call"), 0u);
    EXPECT_EQ(c.x0s, std::vector<double>{1.0});
    EXPECT_EQ(c.T, 2.0);
    EXPECT_EQ(c.method, Method::Auto);
    EXPECT_FALSE(c.force);
}

TEST(RunConfig, RejectsUnknownKeysAtEveryLevel) {
    auto top = base_doc();
    top["colour"] = 1;
    EXPECT_THROW((void)parse_run_config(top), ConfigError);
    auto model = base_doc();
    model["model"]["kappa"] = 1;
    EXPECT_THROW((void)parse_run_config(model), ConfigError);
    auto payoff = base_doc();
    payoff["payoff"]["k1"] = 0.1;
    EXPECT_THROW((void)parse_run_config(payoff), ConfigError);
    auto grid = base_doc();
    grid["grid"] = {{"nx", 10}};
    EXPECT_THROW((void)parse_run_config(grid), ConfigError);
    auto sim = base_doc();
    sim["sim"] = {{"paths", 10}};
    EXPECT_THROW((void)parse_run_config(sim), ConfigError);
}

TEST(RunConfig, TypeAndValueErrors) {
    auto d = base_doc();
    d["T"] = "one";
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
    d = base_doc();
    d["model"].erase("b1_lo");
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
    d = base_doc();
    d["seed"] = -3;
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
    d = base_doc();
    d["x0_grid"] = {0.0, 1.0};
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
    d = base_doc();
    d["method"] = "tree";
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
    d = base_doc();
    d["payoff"] = {{"kind", "butterfly"}, {"k1", 0.5}, {"k2", 0.3}, {"k3", 0.8}};
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
}

TEST(RunConfig, ReversedIntervalNeedsSorting) {
    auto d = base_doc();
    d["model"]["a1_lo"] = 0.2;
    d["model"]["a1_hi"] = 0.1;
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
    const RunConfig flagged = parse_run_config(d, true);
    EXPECT_EQ(flagged.box.a1_lo, 0.1);
    EXPECT_EQ(flagged.box.a1_hi, 0.2);
    ASSERT_EQ(flagged.warnings.size(), 1u);
    EXPECT_NE(flagged.warnings[0].find("a1"), std::string::npos);
    d["model"]["sort_endpoints"] = true;
    EXPECT_EQ(parse_run_config(d).box.a1_lo, 0.1);
}

TEST(RunConfig, RangesAndOverrides) {
    auto d = base_doc();
    d.erase("x0");
    d["x0_grid"] = {{"from", -0.5}, {"to", 1.5}, {"step", 0.05}};
    d["maturities"] = {{"from", 1}, {"to", 10}, {"step", 1}};
    d["grid"] = {{"n_x", 201}, {"n_t", 50}, {"x_min", 0.001}, {"x_max", 4.0}, {"scheme", "implicit"}};
    d["sim"] = {{"n_paths", 1000}, {"n_steps", 20}, {"antithetic", false}, {"scheme", "full_truncation"}};
    d["seed"] = 7;
    d["method"] = "pde";
    d["output"] = {{"path", "out.csv"}, {"format", "json"}};
    d["payoff"] = {{"kind", "exponential"}, {"u", 1.0}, {"scale", 2.0}, {"shift", -1.0}};
    const RunConfig c = parse_run_config(d);
    ASSERT_EQ(c.x0s.size(), 41u);
    EXPECT_EQ(c.x0s.front(), -0.5);
    EXPECT_EQ(c.x0s[10], 0.0);
    EXPECT_EQ(c.x0s[16], 0.3);
    EXPECT_EQ(c.x0s.back(), 1.5);
    EXPECT_EQ(c.maturities.size(), 10u);
    EXPECT_EQ(c.pricing.n_x, 201);
    EXPECT_EQ(c.pricing.x_max, 4.0);
    EXPECT_EQ(c.pricing.scheme, Scheme::ImplicitPolicyIteration);
    EXPECT_EQ(c.pricing.sim.n_paths, 1000);
    EXPECT_FALSE(c.pricing.sim.antithetic);
    EXPECT_EQ(c.pricing.sim.scheme, SimScheme::FullTruncation);
    EXPECT_EQ(c.pricing.sim.seed, 7u);
    EXPECT_EQ(c.method, Method::PDE);
    EXPECT_EQ(c.output.format, "json");
    EXPECT_DOUBLE_EQ((*c.payoff)(0.0), 1.0);
}

TEST(RunConfig, CustomPayoffAndRiccatiBlock) {
    auto d = base_doc();
    d["payoff"] = {{"kind", "custom"}, {"x", {0.0, 1.0}}, {"y", {0.0, 2.0}}};
    d["riccati"] = {{"u", 0.0}, {"T", 3.0}, {"mode", "bond"}, {"direction", "lower"}, {"n_steps", 600}};
    const RunConfig c = parse_run_config(d);
    EXPECT_DOUBLE_EQ((*c.payoff)(0.5), 1.0);
    EXPECT_EQ(c.riccati.mode, RiccatiMode::Bond);
    EXPECT_EQ(c.riccati.direction, Direction::Lower);
    EXPECT_EQ(c.riccati.T, 3.0);
    EXPECT_EQ(c.riccati.n_steps, 600);
    d["riccati"]["mode"] = "fourier";
    EXPECT_THROW((void)parse_run_config(d), ConfigError);
}

TEST(Json, PricingResultRoundTrip) {
    PricingResult r;
    r.x0 = 0.3;
    r.T = 1.0;
    r.upper = 0.25;
    r.lower = 0.125;
    r.model_risk = 0.125;
    r.method_upper = Method::Riccati;
    r.method_lower = Method::MC;
    r.diagnostics.warnings = {"w"};
    const json j = to_json(r);
    const PricingResult back = pricing_result_from_json(json::parse(j.dump()));
    EXPECT_EQ(back.x0, r.x0);
    EXPECT_EQ(back.upper, r.upper);
    EXPECT_EQ(back.lower, r.lower);
    EXPECT_EQ(back.model_risk, r.model_risk);
    EXPECT_EQ(back.method_upper, Method::Riccati);
    EXPECT_EQ(back.method_lower, Method::MC);
    EXPECT_EQ(back.diagnostics.warnings, r.diagnostics.warnings);
}

TEST(Json, BoxRoundTripsThroughParser) {
    ParameterBox b;
    b.b0_lo = 0.019;
    b.b0_hi = 0.026;
    b.b1_lo = -0.11;
    b.a0_lo = 0.0003;
    b.a0_hi = 0.017;
    std::vector<std::string> w;
    EXPECT_EQ(parse_box(to_json(b), false, w), b);
    EXPECT_TRUE(w.empty());
}
