#pragma once

#include "nlaffine/io.hpp"

#include <string>
#include <vector>

namespace nlaffine {

struct FigureOptions {
    int n_x = 801;
    int n_t = 400;
};

/// Curve data for one figure plus a metadata sidecar describing the
/// embedded parameters and every adjustment made to them.
struct FigureDataset {
    std::string name;
    CsvTable table;
    json metadata;
};

[[nodiscard]] std::vector<std::string> figure_names();

/// fig1, fig2, fig3-call or fig3-butterfly; ConfigError for anything else.
[[nodiscard]] FigureDataset make_figure(const std::string& name, const FigureOptions& opts = {});

// Embedded parameter tables.
[[nodiscard]] ParameterBox fig1_box();
[[nodiscard]] ParameterBox fig2_box();
/// Entered as printed (a0 endpoints reversed); sort before use.
[[nodiscard]] ParameterBox fig3_box_as_printed();
[[nodiscard]] ParameterBox fig3_reference_point();

inline constexpr double kFigureHorizon = 1.0;

}  // namespace nlaffine
