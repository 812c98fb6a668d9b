#include "circacp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace circacp {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void hline(std::ostringstream& os, double x0, double x1, double y, const char* colour, const char* dash,
           const std::string& label) {
    os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y)
       << "\" stroke=\"" << colour << "\" stroke-width=\"1\"";
    if (*dash) os << " stroke-dasharray=\"" << dash << "\"";
    os << "/>\n<text x=\"" << num(x1 + 4) << "\" y=\"" << num(y + 4) << "\" font-size=\"11\">" << label << "</text>\n";
}

}  // namespace

std::string svg_overlay(const EpochSeries& s, const DetectionResult& result) {
    constexpr double width = 1200, height = 320, left = 50, top = 20, plot_h = 240, strip_h = 12;
    const std::size_t n = s.size();
    const auto columns = static_cast<std::size_t>(width - left - 10);
    std::vector<double> peak(columns, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = std::min(columns - 1, i * columns / n);
        peak[c] = std::max(peak[c], s.counts[i]);
    }
    const double ymax = std::max(1.0, *std::max_element(peak.begin(), peak.end()));
    auto x_of = [&](double index) { return left + index * static_cast<double>(columns) / static_cast<double>(n); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto refined = states_from_events(result.events, n);
    auto shade_runs = [&](const std::vector<int>& states, double y, double h, const char* colour) {
        std::size_t i = 0;
        while (i < states.size()) {
            if (states[i] != 0) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < states.size() && states[j] == 0) ++j;
            os << "<rect x=\"" << num(x_of(static_cast<double>(i))) << "\" y=\"" << num(y) << "\" width=\""
               << num(x_of(static_cast<double>(j)) - x_of(static_cast<double>(i))) << "\" height=\"" << num(h)
               << "\" fill=\"" << colour << "\"/>\n";
            i = j;
        }
    };
    shade_runs(refined, top, plot_h, "#d6e4f5");
    shade_runs(result.rough.binary, top + plot_h + 8, strip_h, "#9aa9bd");

    os << "<polyline fill=\"none\" stroke=\"#333\" stroke-width=\"0.6\" points=\"";
    for (std::size_t c = 0; c < columns; ++c)
        os << num(left + static_cast<double>(c)) << ',' << num(top + plot_h - plot_h * peak[c] / ymax) << ' ';
    os << "\"/>\n";
    for (const auto& e : result.events) {
        const double x = x_of(static_cast<double>(e.index));
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(top + plot_h) << "\" stroke=\"" << (e.label == Transition::sleep_onset ? "#1f4e9c" : "#c05a00")
           << "\" stroke-width=\"1\"/>\n";
    }
    os << "<text x=\"" << num(left) << "\" y=\"" << num(height - 6) << "\" font-size=\"11\">"
       << format_timestamp(s.start_time) << "  counts (max per column), detected sleep shaded, cosinor night strip"
       << "</text>\n</svg>\n";
    return os.str();
}

std::string svg_bland_altman(std::span<const ValidationPair> pairs, const AgreementReport& report) {
    constexpr double width = 720, height = 480, left = 60, right = 110, top = 20, bottom = 50;
    double xmin = 1e300, xmax = -1e300, ymin = report.overall.loa_low, ymax = report.overall.loa_high;
    for (const auto& p : pairs) {
        const double mean = 0.5 * (p.estimated_min + p.marker_min);
        xmin = std::min(xmin, mean);
        xmax = std::max(xmax, mean);
        ymin = std::min(ymin, p.diff);
        ymax = std::max(ymax, p.diff);
    }
    if (pairs.empty()) xmin = 0, xmax = 1;
    if (xmax <= xmin) xmax = xmin + 1;
    const double pad = std::max(5.0, 0.1 * (ymax - ymin));
    ymin -= pad;
    ymax += pad;
    const double pw = width - left - right, ph = height - top - bottom;
    auto x_of = [&](double v) { return left + pw * (v - xmin) / (xmax - xmin); };
    auto y_of = [&](double v) { return top + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (const auto& p : pairs) {
        os << "<circle cx=\"" << num(x_of(0.5 * (p.estimated_min + p.marker_min))) << "\" cy=\"" << num(y_of(p.diff))
           << "\" r=\"2.5\" fill=\"" << (p.label == Transition::sleep_onset ? "#1f4e9c" : "#c05a00")
           << "\" fill-opacity=\"0.6\"/>\n";
    }
    const auto& o = report.overall;
    hline(os, left, left + pw, y_of(o.bias), "#000", "", "bias " + num(o.bias));
    hline(os, left, left + pw, y_of(o.loa_high), "#b00", "5,3", "+LOA " + num(o.loa_high));
    hline(os, left, left + pw, y_of(o.loa_low), "#b00", "5,3", "-LOA " + num(o.loa_low));
    os << "<text x=\"" << left << "\" y=\"" << num(height - 18)
       << "\" font-size=\"12\">mean of estimated and marker time (min since midnight); SOT blue, WOT orange</text>\n";
    os << "<text x=\"12\" y=\"" << num(top + ph / 2) << "\" font-size=\"12\" transform=\"rotate(-90 12 "
       << num(top + ph / 2) << ")\">estimated - marker (min)</text>\n</svg>\n";
    return os.str();
}

}  // namespace circacp
