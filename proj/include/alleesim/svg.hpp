#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace alleesim {

// Bare-bones SVG chart: polylines and scatter points in data coordinates.
// The CSVs are the contract; these plots exist for quick visual checks.
class SvgPlot {
  public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void set_y_log(bool log_scale, double floor = 1e-12);
    void add_polyline(const std::vector<std::pair<double, double>>& pts,
                      const std::string& color, const std::string& label = "");
    void add_scatter(const std::vector<std::pair<double, double>>& pts,
                     const std::string& color, double radius = 1.2, double opacity = 0.35);

    void save(const std::filesystem::path& file) const;

  private:
    struct Series {
        std::vector<std::pair<double, double>> pts;
        std::string color;
        std::string label;
        bool scatter;
        double radius;
        double opacity;
    };

    std::string title_, x_label_, y_label_;
    bool y_log_ = false;
    double y_floor_ = 1e-12;
    std::vector<Series> series_;
};

}  // namespace alleesim
