#pragma once

#include <filesystem>
#include <string>

namespace hipmlab {

struct PlotStyle {
    bool loglog = false;
    int width = 640;
    int height = 440;
    std::string title;
};

// Renders an experiment CSV (fig1 schema "n,estimator,mean,stderr" or fig2
// schema "x,approximation,d_lip_estimate,upper_bound") as a static SVG.
// fig1 series get +-1 standard deviation bands; fig2 bounds are drawn dashed.
// Throws ParseError for malformed or empty input; nothing is written then.
void emit_svg_plot(const std::filesystem::path& csv_path, const PlotStyle& style,
                   const std::filesystem::path& out_path);

}  // namespace hipmlab
