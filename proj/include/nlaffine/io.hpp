#pragma once

#include "nlaffine/params.hpp"
#include "nlaffine/payoff.hpp"
#include "nlaffine/pricing.hpp"
#include "nlaffine/riccati.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nlaffine {

using json = nlohmann::json;

/// Numeric table with a mandatory header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws ConfigError.
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

/// 12 significant digits, '.' decimal point.
[[nodiscard]] std::string format_number(double v);

void write_csv(std::ostream& os, const CsvTable& table);
[[nodiscard]] CsvTable read_csv(std::istream& is);

/// Header t,x,value; time-outer order.
void write_surface_csv(std::ostream& os, const ValueSurface& surface);

struct RiccatiRequest {
    double u = 1.0;
    double T = 1.0;
    RiccatiMode mode = RiccatiMode::Mgf;
    Direction direction = Direction::Upper;
    std::optional<int> n_steps;
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";
    std::string surface_path;
};

/// One JSON document drives every subcommand.
struct RunConfig {
    ParameterBox box;
    StateDomain domain = StateDomain::RealLine;
    bool force = false;
    bool sort_endpoints = false;
    std::optional<PayoffSpec> payoff;
    std::vector<double> x0s;
    double T = 1.0;
    std::vector<double> maturities;
    Method method = Method::Auto;
    PricingOptions pricing;
    OutputSpec output;
    std::optional<std::uint64_t> seed;
    RiccatiRequest riccati;
    /// Ingestion warnings, e.g. swapped interval endpoints.
    std::vector<std::string> warnings;
};

/// Throws ConfigError on unknown keys, wrong types or reversed intervals
/// (unless sort_endpoints is set, or forced by the caller).
[[nodiscard]] RunConfig parse_run_config(const json& doc, bool sort_endpoints = false);
[[nodiscard]] RunConfig load_run_config(const std::string& path, bool sort_endpoints = false);

[[nodiscard]] ParameterBox parse_box(const json& obj, bool sort_endpoints, std::vector<std::string>& warnings);
[[nodiscard]] PayoffSpec parse_payoff(const json& obj);

[[nodiscard]] json to_json(const ParameterBox& box);
[[nodiscard]] json to_json(const CornerParams& c);
[[nodiscard]] json to_json(const AdmissibilityReport& r);
[[nodiscard]] json to_json(const Grid& g);
[[nodiscard]] json to_json(const PricingResult& r);
[[nodiscard]] json to_json(const BondQuote& q);

/// Inverse of to_json(PricingResult) for the headline numbers.
[[nodiscard]] PricingResult pricing_result_from_json(const json& j);

}  // namespace nlaffine
