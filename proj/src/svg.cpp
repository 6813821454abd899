#include "alleesim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "alleesim/csv.hpp"

namespace alleesim {

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::set_y_log(bool log_scale, double floor) {
    y_log_ = log_scale;
    y_floor_ = floor;
}

void SvgPlot::add_polyline(const std::vector<std::pair<double, double>>& pts,
                           const std::string& color, const std::string& label) {
    series_.push_back({pts, color, label, false, 0.0, 1.0});
}

void SvgPlot::add_scatter(const std::vector<std::pair<double, double>>& pts,
                          const std::string& color, double radius, double opacity) {
    series_.push_back({pts, color, "", true, radius, opacity});
}

void SvgPlot::save(const std::filesystem::path& file) const {
    constexpr double W = 760, H = 520, ML = 70, MR = 20, MT = 40, MB = 55;
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    bool have = false;
    auto y_val = [&](double y) { return y_log_ ? std::log10(std::max(y, y_floor_)) : y; };
    for (const auto& s : series_)
        for (const auto& [x, y] : s.pts) {
            const double yy = y_val(y);
            if (!std::isfinite(x) || !std::isfinite(yy)) continue;
            if (!have) {
                x_lo = x_hi = x;
                y_lo = y_hi = yy;
                have = true;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, yy);
                y_hi = std::max(y_hi, yy);
            }
        }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) y_hi = y_lo + 1;
    const double x_pad = 0.03 * (x_hi - x_lo), y_pad = 0.05 * (y_hi - y_lo);
    x_lo -= x_pad;
    x_hi += x_pad;
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double x) { return ML + (x - x_lo) / (x_hi - x_lo) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y_val(y) - y_lo) / (y_hi - y_lo) * (H - MT - MB); };

    std::ofstream out(file);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << title_ << "</text>\n";

    // axes
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tx = x_lo + (x_hi - x_lo) * i / 5.0;
        const double ty = y_lo + (y_hi - y_lo) * i / 5.0;
        out << "<text x=\"" << px(tx) << "\" y=\"" << H - MB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(std::round(tx * 1e4) / 1e4)
            << "</text>\n";
        const std::string ylab =
            y_log_ ? "1e" + format_double(std::round(ty * 100) / 100)
                   : format_double(std::round(ty * 1e4) / 1e4);
        out << "<text x=\"" << ML - 8 << "\" y=\"" << H - MB - (H - MT - MB) * i / 5.0 + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << ylab << "</text>\n";
    }
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n";
    out << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (MT + H - MB) / 2 << ")\">" << y_label_ << "</text>\n";

    double legend_y = MT + 6;
    for (const auto& s : series_) {
        if (s.scatter) {
            out << "<g fill=\"" << s.color << "\" fill-opacity=\"" << s.opacity << "\">\n";
            for (const auto& [x, y] : s.pts)
                out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << s.radius
                    << "\"/>\n";
            out << "</g>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
            for (const auto& [x, y] : s.pts) out << px(x) << "," << py(y) << " ";
            out << "\"/>\n";
            if (!s.label.empty()) {
                out << "<line x1=\"" << W - MR - 130 << "\" y1=\"" << legend_y << "\" x2=\""
                    << W - MR - 110 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
                    << "\" stroke-width=\"2\"/>\n";
                out << "<text x=\"" << W - MR - 104 << "\" y=\"" << legend_y + 4
                    << "\" font-size=\"12\">" << s.label << "</text>\n";
                legend_y += 16;
            }
        }
    }
    out << "</svg>\n";
}

}  // namespace alleesim
