#ifndef MEMOHEAT_OUTPUT_HPP
#define MEMOHEAT_OUTPUT_HPP

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "memoheat/laplace.hpp"
#include "memoheat/modes.hpp"
#include "memoheat/spaces.hpp"
#include "memoheat/spectrum.hpp"
#include "memoheat/verify.hpp"

namespace memoheat {

inline constexpr const char* tool_version = "0.1.0";

// "<comment> memoheat 0.1.0 digest=<digest>", the first line of every file.
std::string header_line(const std::string& digest, const char* comment = "#");

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& os, const ModeTrajectory& traj, const std::string& digest);
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumResult>& spectra,
                        const std::string& digest);
void write_line_scan_csv(std::ostream& os, const std::vector<LineSample>& samples,
                         const std::string& digest);

struct AsymptoticRow {
    complex z;
    int order = 1;
    double residual = 0.0;  // |K(z) - truncated expansion|
    double scaled = 0.0;    // |z|^order times the residual
};
void write_asymptotics_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows,
                           const std::string& digest);

struct NormEntry {
    std::string name;
    double s = 0.0;
    double eps = 0.0;
    NormValue value;
};

nlohmann::json to_json(const Report& report);
nlohmann::json to_json(const NormEntry& entry);

// A comment header line, then a JSON array.
void write_reports_json(std::ostream& os, const std::vector<Report>& reports, const std::string& digest);
void write_norms_json(std::ostream& os, const std::vector<NormEntry>& entries, const std::string& digest);

// Reads a file written by the two functions above (comment lines allowed).
nlohmann::json read_commented_json(std::istream& is);

} // namespace memoheat

#endif
