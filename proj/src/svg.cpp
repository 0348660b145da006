#include "hipmlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "hipmlab/errors.hpp"
#include "hipmlab/io.hpp"

namespace hipmlab {

namespace {

struct Series {
    std::string name;
    std::vector<double> x, y, band;  // band: half-width, 0 = none
    bool dashed = false;
};

struct PlotData {
    std::string x_label;
    std::vector<Series> series;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double to_double(const std::string& s, const std::filesystem::path& path, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + s +
                         "'");
    }
}

PlotData load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");

    bool fig1;
    if (line == "n,estimator,mean,stderr") fig1 = true;
    else if (line == "x,approximation,d_lip_estimate,upper_bound") fig1 = false;
    else throw ParseError(path.string() + ":1: unrecognized header '" + line + "'");

    PlotData data;
    data.x_label = fig1 ? "n" : "x";
    std::map<std::string, std::size_t> index;
    auto series_slot = [&](const std::string& name, bool dashed) -> Series& {
        auto it = index.find(name);
        if (it == index.end()) {
            index.emplace(name, data.series.size());
            data.series.push_back(Series{name, {}, {}, {}, dashed});
            return data.series.back();
        }
        return data.series[it->second];
    };

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split(line);
        if (f.size() != 4)
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 4 fields");
        double x = to_double(f[0], path, lineno);
        if (fig1) {
            Series& s = series_slot(f[1], f[1] == "reference");
            s.x.push_back(x);
            s.y.push_back(to_double(f[2], path, lineno));
            s.band.push_back(to_double(f[3], path, lineno));
        } else {
            Series& est = series_slot(f[1], false);
            est.x.push_back(x);
            est.y.push_back(to_double(f[2], path, lineno));
            est.band.push_back(0.0);
            Series& bound = series_slot(f[1] + "_bound", true);
            bound.x.push_back(x);
            bound.y.push_back(to_double(f[3], path, lineno));
            bound.band.push_back(0.0);
        }
    }
    if (data.series.empty()) throw ParseError(path.string() + ": no data rows");
    return data;
}

const char* kPalette[] = {"#1f6fb4", "#d0442c", "#2c8a43", "#8a56b0",
                          "#b08a2c", "#2ca8a0", "#777777"};

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double px0 = 0.0, px1 = 1.0;

    double to_px(double v) const {
        double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                       : (v - lo) / (hi - lo);
        return px0 + t * (px1 - px0);
    }
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void emit_svg_plot(const std::filesystem::path& csv_path, const PlotStyle& style,
                   const std::filesystem::path& out_path) {
    PlotData data = load_csv(csv_path);

    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    bool first = true;
    for (const auto& s : data.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (style.loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            double lo = s.y[i] - s.band[i], hi = s.y[i] + s.band[i];
            if (style.loglog) lo = s.y[i];  // bands can cross zero; skip them in log mode
            if (first) {
                xlo = xhi = s.x[i];
                ylo = lo;
                yhi = hi;
                first = false;
            } else {
                xlo = std::min(xlo, s.x[i]);
                xhi = std::max(xhi, s.x[i]);
                ylo = std::min(ylo, lo);
                yhi = std::max(yhi, hi);
            }
        }
    }
    if (first) throw ParseError(csv_path.string() + ": no plottable points");
    if (xlo == xhi) {
        if (style.loglog) { xlo *= 0.5; xhi *= 2.0; }
        else { xlo -= 0.5; xhi += 0.5; }
    }
    if (ylo == yhi) {
        if (style.loglog) { ylo *= 0.5; yhi *= 2.0; }
        else { ylo -= 0.5; yhi += 0.5; }
    }
    if (!style.loglog) {
        double pad = 0.05 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
        if (ylo > 0.0 && ylo < 0.25 * yhi) ylo = 0.0;
    }

    const double ml = 60, mr = 150, mt = 36, mb = 44;
    Axis xa{xlo, xhi, style.loglog, ml, style.width - mr};
    Axis ya{ylo, yhi, style.loglog, style.height - mb, mt};  // flipped: SVG y grows down

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
        << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        svg << "<text x=\"" << (ml + (style.width - ml - mr) / 2) << "\" y=\"20\" "
            << "text-anchor=\"middle\" font-size=\"14\">" << style.title << "</text>\n";

    // frame and ticks
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (style.width - ml - mr)
        << "\" height=\"" << (style.height - mt - mb)
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        double fx = static_cast<double>(t) / ticks;
        double xv = style.loglog ? std::pow(10.0, std::log10(xlo) + fx * (std::log10(xhi) -
                                                                          std::log10(xlo)))
                                 : xlo + fx * (xhi - xlo);
        double yv = style.loglog ? std::pow(10.0, std::log10(ylo) + fx * (std::log10(yhi) -
                                                                          std::log10(ylo)))
                                 : ylo + fx * (yhi - ylo);
        double px = xa.to_px(xv), py = ya.to_px(yv);
        svg << "<line x1=\"" << px << "\" y1=\"" << (style.height - mb) << "\" x2=\"" << px
            << "\" y2=\"" << (style.height - mb + 5) << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << (style.height - mb + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_tick(xv) << "</text>\n";
        svg << "<line x1=\"" << (ml - 5) << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\""
            << py << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << (ml - 8) << "\" y=\"" << (py + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_tick(yv) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + (style.width - ml - mr) / 2) << "\" y=\""
        << (style.height - 8) << "\" text-anchor=\"middle\" font-size=\"12\">" << data.x_label
        << "</text>\n";

    int color = 0;
    double legend_y = mt + 14;
    for (const auto& s : data.series) {
        std::vector<std::size_t> pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (style.loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            pts.push_back(i);
        }
        if (pts.empty()) continue;
        const char* c = kPalette[color % 7];
        ++color;

        if (!style.loglog && pts.size() > 1) {
            bool has_band = false;
            for (std::size_t i : pts) has_band = has_band || s.band[i] > 0.0;
            if (has_band) {
                svg << "<polygon class=\"band-" << s.name << "\" fill=\"" << c
                    << "\" fill-opacity=\"0.12\" stroke=\"none\" points=\"";
                for (std::size_t i : pts)
                    svg << xa.to_px(s.x[i]) << ',' << ya.to_px(s.y[i] + s.band[i]) << ' ';
                for (auto it = pts.rbegin(); it != pts.rend(); ++it)
                    svg << xa.to_px(s.x[*it]) << ',' << ya.to_px(s.y[*it] - s.band[*it]) << ' ';
                svg << "\"/>\n";
            }
        }

        if (pts.size() > 1) {
            svg << "<polyline class=\"series-" << s.name << "\" fill=\"none\" stroke=\"" << c
                << "\" stroke-width=\"1.5\"";
            if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
            svg << " points=\"";
            for (std::size_t i : pts) svg << xa.to_px(s.x[i]) << ',' << ya.to_px(s.y[i]) << ' ';
            svg << "\"/>\n";
        }
        for (std::size_t i : pts)
            svg << "<circle class=\"series-" << s.name << "\" cx=\"" << xa.to_px(s.x[i])
                << "\" cy=\"" << ya.to_px(s.y[i]) << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";

        svg << "<line x1=\"" << (style.width - mr + 10) << "\" y1=\"" << legend_y << "\" x2=\""
            << (style.width - mr + 30) << "\" y2=\"" << legend_y << "\" stroke=\"" << c
            << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
            << "/>\n";
        svg << "<text x=\"" << (style.width - mr + 36) << "\" y=\"" << (legend_y + 4)
            << "\" font-size=\"11\">" << s.name << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";

    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot open " + out_path.string() + " for writing");
    out << svg.str();
}

}  // namespace hipmlab
