#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "alleesim/trajectory.hpp"

namespace alleesim {

// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);
double parse_double(std::string_view s);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(std::string_view name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& file);
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Trajectory CSV: columns t,x.
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj);
std::vector<double> read_trajectory_csv(const std::filesystem::path& file);

// Ensemble CSV: columns replicate,fate,t_hit,final_x.
void write_ensemble_csv(const std::filesystem::path& file, const EnsembleResult& res);
std::vector<ReplicateSummary> read_ensemble_csv(const std::filesystem::path& file);

// Measure CSV: columns bin_lo,bin_hi,mass, with -inf/inf bounds marking the
// below/above footer rows.
void write_measure_csv(const std::filesystem::path& file, const EmpiricalMeasure& m);
struct MeasureCsv {
    std::vector<double> bin_lo, bin_hi, mass;
    double below_mass = 0.0, above_mass = 0.0;
};
MeasureCsv read_measure_csv(const std::filesystem::path& file);

}  // namespace alleesim
