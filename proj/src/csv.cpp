#include "alleesim/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace alleesim {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

double parse_double(std::string_view s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::nan("");
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ValidationError("bad numeric field '" + std::string(s) + "'");
    return v;
}

int CsvTable::column(std::string_view name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        const size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open '" + file.string() + "'");
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            t.header = split_line(line);
            first = false;
        } else {
            t.rows.push_back(split_line(line));
        }
    }
    return t;
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write '" + file.string() + "'");
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw DomainError("write failed for '" + file.string() + "'");
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj) {
    if (traj.path.empty() && traj.tail.empty())
        throw DomainError("trajectory has no recorded states to write");
    const std::vector<double>& xs = traj.path.empty() ? traj.tail : traj.path;
    const long t0 = traj.path.empty() ? traj.steps - static_cast<long>(xs.size()) + 1 : 0;
    std::vector<std::vector<std::string>> rows;
    rows.reserve(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        rows.push_back({std::to_string(t0 + static_cast<long>(i)), format_double(xs[i])});
    write_csv(file, {"t", "x"}, rows);
}

std::vector<double> read_trajectory_csv(const std::filesystem::path& file) {
    const CsvTable t = read_csv(file);
    const int cx = t.column("x");
    if (cx < 0) throw ValidationError("trajectory CSV missing 'x' column");
    std::vector<double> xs;
    xs.reserve(t.rows.size());
    for (const auto& row : t.rows) xs.push_back(parse_double(row[cx]));
    return xs;
}

void write_ensemble_csv(const std::filesystem::path& file, const EnsembleResult& res) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(res.replicates.size());
    for (const auto& r : res.replicates)
        rows.push_back({std::to_string(r.replicate), fate_name(r.fate), std::to_string(r.t_hit),
                        format_double(r.final_x)});
    write_csv(file, {"replicate", "fate", "t_hit", "final_x"}, rows);
}

std::vector<ReplicateSummary> read_ensemble_csv(const std::filesystem::path& file) {
    const CsvTable t = read_csv(file);
    const int cr = t.column("replicate"), cf = t.column("fate"), ch = t.column("t_hit"),
              cx = t.column("final_x");
    if (cr < 0 || cf < 0 || ch < 0 || cx < 0)
        throw ValidationError("ensemble CSV missing required columns");
    std::vector<ReplicateSummary> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        ReplicateSummary r;
        r.replicate = static_cast<std::uint64_t>(std::stoull(row[cr]));
        r.fate = fate_from_name(row[cf]);
        r.t_hit = std::stol(row[ch]);
        r.final_x = parse_double(row[cx]);
        out.push_back(r);
    }
    return out;
}

void write_measure_csv(const std::filesystem::path& file, const EmpiricalMeasure& m) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(m.n_bins() + 2);
    for (int i = 0; i < m.n_bins(); ++i)
        rows.push_back({format_double(m.bin_lo(i)), format_double(m.bin_hi(i)),
                        format_double(m.mass(i))});
    rows.push_back({"-inf", format_double(m.lo()), format_double(m.below_mass())});
    rows.push_back({format_double(m.hi()), "inf", format_double(m.above_mass())});
    write_csv(file, {"bin_lo", "bin_hi", "mass"}, rows);
}

MeasureCsv read_measure_csv(const std::filesystem::path& file) {
    const CsvTable t = read_csv(file);
    const int cl = t.column("bin_lo"), ch = t.column("bin_hi"), cm = t.column("mass");
    if (cl < 0 || ch < 0 || cm < 0) throw ValidationError("measure CSV missing required columns");
    MeasureCsv out;
    for (const auto& row : t.rows) {
        const double lo = parse_double(row[cl]);
        const double hi = parse_double(row[ch]);
        const double mass = parse_double(row[cm]);
        if (std::isinf(lo)) {
            out.below_mass = mass;
        } else if (std::isinf(hi)) {
            out.above_mass = mass;
        } else {
            out.bin_lo.push_back(lo);
            out.bin_hi.push_back(hi);
            out.mass.push_back(mass);
        }
    }
    return out;
}

}  // namespace alleesim
