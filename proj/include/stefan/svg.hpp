#pragma once

#include <string>
#include <vector>

namespace stefan {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 640;
    int height = 420;
};

/// Self-contained SVG line chart. Nonpositive values are dropped on log axes.
std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace stefan
