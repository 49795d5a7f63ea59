#include "stefan/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "stefan/error.hpp"

namespace stefan {

namespace {

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool log = false;

    double map(double v) const { return log ? std::log10(v) : v; }
    void include(double v) {
        if (log && !(v > 0.0)) return;
        lo = std::min(lo, map(v));
        hi = std::max(hi, map(v));
    }
    void finish() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-300) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

}  // namespace

std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options) {
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double plot_w = options.width - left - right;
    const double plot_h = options.height - top - bottom;

    Axis ax{.log = options.log_x};
    Axis ay{.log = options.log_y};
    for (const auto& s : series) {
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            ax.include(s.x[k]);
            ay.include(s.y[k]);
        }
    }
    ax.finish();
    ay.finish();
    auto px = [&](double v) { return left + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * plot_w; };
    auto py = [&](double v) { return top + (ay.hi - ay.map(v)) / (ay.hi - ay.lo) * plot_h; };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
       << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << options.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(options.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
       << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
        const double vx = ax.log ? std::pow(10.0, fx) : fx;
        const double vy = ay.log ? std::pow(10.0, fy) : fy;
        const double gx = left + plot_w * k / 4.0;
        const double gy = top + plot_h - plot_h * k / 4.0;
        os << "<text x=\"" << gx << "\" y=\"" << top + plot_h + 16
           << "\" text-anchor=\"middle\">" << vx << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << vy
           << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << options.height - 12
       << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << top + plot_h / 2 << ")\">" << escape(options.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        const char* color = kColors[s % kColors.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < std::min(ser.x.size(), ser.y.size()); ++k) {
            if (!std::isfinite(ser.x[k]) || !std::isfinite(ser.y[k])) continue;
            if ((ax.log && !(ser.x[k] > 0.0)) || (ay.log && !(ser.y[k] > 0.0))) continue;
            os << px(ser.x[k]) << ',' << py(ser.y[k]) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << left + plot_w - 8 << "\" y=\"" << top + 16 + 16 * s
           << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(ser.label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

}  // namespace stefan
