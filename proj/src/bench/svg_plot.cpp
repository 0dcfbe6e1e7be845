// Copyright 2026 The qfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qfusion/bench/summary.hpp"

namespace qfusion::bench {

namespace {

std::string xml_escape(const std::string &text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const AccuracyChart &chart) {
    constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 90, kPlotHeight = 300;
    constexpr double kBarWidth = 28, kBarGap = 6, kGroupGap = 40;
    const std::vector<std::string> palette{"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                           "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

    std::vector<std::string> series;
    for (const auto &g : chart.groups) {
        for (const auto &b : g.bars) {
            const std::string key = b.label.rfind("best fusion", 0) == 0 ? "best fusion" : b.label;
            if (std::find(series.begin(), series.end(), key) == series.end()) {
                series.push_back(key);
            }
        }
    }
    auto colour = [&](const std::string &label) {
        const std::string key = label.rfind("best fusion", 0) == 0 ? "best fusion" : label;
        const auto pos = static_cast<std::size_t>(
            std::find(series.begin(), series.end(), key) - series.begin());
        return palette[pos % palette.size()];
    };

    double plot_width = 0;
    for (const auto &g : chart.groups) {
        plot_width += static_cast<double>(g.bars.size()) * (kBarWidth + kBarGap) + kGroupGap;
    }
    plot_width = std::max(plot_width, 200.0);
    const double width = kLeft + plot_width + kRight;
    const double height = kTop + kPlotHeight + kBottom + 18.0 * static_cast<double>(series.size() + chart.groups.size());
    const double span = chart.y_max - chart.y_min;
    auto y_of = [&](double v) {
        const double c = std::clamp(v, chart.y_min, chart.y_max);
        return kTop + kPlotHeight * (1.0 - (c - chart.y_min) / span);
    };

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << "Test accuracy (%), mean over folds</text>\n";
    os << "<g id=\"y-axis\" data-min=\"" << chart.y_min << "\" data-max=\"" << chart.y_max << "\">\n";
    for (double tick = chart.y_min; tick <= chart.y_max + 1e-9; tick += 5.0) {
        const double y = y_of(tick);
        os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_width << "\" y1=\"" << y
           << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
           << static_cast<int>(std::lround(tick)) << "</text>\n";
    }
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft << "\" y1=\"" << kTop << "\" y2=\""
       << kTop + kPlotHeight << "\" stroke=\"black\"/>\n";
    os << "</g>\n";

    double x = kLeft + kGroupGap / 2;
    for (const auto &g : chart.groups) {
        const double group_start = x;
        for (const auto &b : g.bars) {
            const double top = y_of(b.mean);
            const double bottom = y_of(chart.y_min);
            os << "<rect class=\"bar\" x=\"" << x << "\" y=\"" << top << "\" width=\"" << kBarWidth
               << "\" height=\"" << bottom - top << "\" fill=\"" << colour(b.label)
               << "\"><title>" << xml_escape(g.dataset + " / " + b.label) << ": "
               << std::setprecision(1) << b.mean << " ± " << b.std << std::setprecision(2)
               << "</title></rect>\n";
            if (b.count > 1 && b.std > 0.0) {
                const double cx = x + kBarWidth / 2;
                const double hi = y_of(b.mean + b.std);
                const double lo = y_of(b.mean - b.std);
                os << "<path class=\"error-bar\" d=\"M" << cx - 5 << ' ' << hi << " H" << cx + 5
                   << " M" << cx << ' ' << hi << " V" << lo << " M" << cx - 5 << ' ' << lo
                   << " H" << cx + 5 << "\" stroke=\"black\" fill=\"none\"/>\n";
            }
            x += kBarWidth + kBarGap;
        }
        os << "<text x=\"" << (group_start + x - kBarGap) / 2 << "\" y=\""
           << kTop + kPlotHeight + 18 << "\" text-anchor=\"middle\">" << xml_escape(g.dataset)
           << "</text>\n";
        x += kGroupGap;
    }

    double ly = kTop + kPlotHeight + 40;
    for (const auto &g : chart.groups) {
        for (const auto &b : g.bars) {
            if (b.label.rfind("best fusion", 0) == 0) {
                os << "<text x=\"" << kLeft << "\" y=\"" << ly << "\" font-size=\"10\">"
                   << xml_escape(g.dataset + ": " + b.label) << "</text>\n";
                ly += 14;
            }
        }
    }
    for (const auto &s : series) {
        os << "<rect x=\"" << kLeft + plot_width - 150 << "\" y=\"" << ly - 10
           << "\" width=\"10\" height=\"10\" fill=\"" << colour(s) << "\"/>\n";
        os << "<text x=\"" << kLeft + plot_width - 135 << "\" y=\"" << ly << "\">"
           << xml_escape(s) << "</text>\n";
        ly += 16;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace qfusion::bench
