#pragma once

#include <string>
#include <vector>

namespace otfs {

// Minimal self-contained SVG line plot; a convenience view of the CSV data,
// never the source of truth.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 640;
    int height = 480;

    std::string render() const;
    void write(const std::string& path) const;
};

}  // namespace otfs
