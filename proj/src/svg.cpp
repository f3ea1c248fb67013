#include "otfs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace otfs {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

}  // namespace

std::string LinePlot::render() const {
    const double ml = 64, mr = 16, mt = 32, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;

    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.pad();
    yr.pad();

    auto px = [&](double v) { return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double v) { return mt + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    // Axes and ticks.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx)
            << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(fx) << "</text>\n";
        out << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml
            << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 3
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(fy) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    // Series.
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
        }
        out << "\"/>\n";
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        // Legend entry.
        const double ly = mt + 14 + 16 * static_cast<double>(si);
        out << "<line x1=\"" << ml + pw - 120 << "\" y1=\"" << ly << "\" x2=\""
            << ml + pw - 100 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw - 94 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void LinePlot::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("LinePlot: cannot open '" + path + "'");
    out << render();
}

}  // namespace otfs
