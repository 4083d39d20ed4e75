#include "memoheat/output.hpp"

#include <charconv>
#include <cmath>
#include <iterator>

namespace memoheat {

using json = nlohmann::json;

std::string header_line(const std::string& digest, const char* comment)
{
    return std::string(comment) + " memoheat " + tool_version + " digest=" + digest;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

void row(std::ostream& os, std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values) {
        if (!first)
            os << ',';
        os << format_double(v);
        first = false;
    }
    os << '\n';
}

// Finite numbers as-is, non-finite ones as strings so the JSON stays valid
// and the value is not silently lost.
json number(double v)
{
    return std::isfinite(v) ? json(v) : json(format_double(v));
}

json entries(const std::vector<ReportEntry>& list)
{
    json out = json::array();
    for (const auto& e : list)
        out.push_back(json::array({number(e.n), number(e.measured), number(e.bound)}));
    return out;
}

} // namespace

void write_trajectory_csv(std::ostream& os, const ModeTrajectory& traj, const std::string& digest)
{
    os << header_line(digest) << " n=" << traj.n << "\n";
    os << "t,theta,theta_dot\n";
    for (std::size_t j = 0; j < traj.theta.size(); ++j)
        row(os, {traj.grid.time(j), traj.theta[j], traj.theta_dot[j]});
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumResult>& spectra,
                        const std::string& digest)
{
    os << header_line(digest) << "\n";
    os << "n,re_root,im_root,residual\n";
    for (const auto& s : spectra)
        for (std::size_t i = 0; i < s.roots.size(); ++i)
            os << s.n << ',' << format_double(s.roots[i].real()) << ','
               << format_double(s.roots[i].imag()) << ',' << format_double(s.residuals[i]) << '\n';
}

void write_line_scan_csv(std::ostream& os, const std::vector<LineSample>& samples,
                         const std::string& digest)
{
    os << header_line(digest) << "\n";
    os << "y,re_symbol,im_symbol,abs2\n";
    for (const auto& s : samples)
        row(os, {s.y, s.value.real(), s.value.imag(), std::norm(s.value)});
}

void write_asymptotics_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows,
                           const std::string& digest)
{
    os << header_line(digest) << "\n";
    os << "re_z,im_z,order,residual,scaled_residual\n";
    for (const auto& r : rows)
        os << format_double(r.z.real()) << ',' << format_double(r.z.imag()) << ',' << r.order << ','
           << format_double(r.residual) << ',' << format_double(r.scaled) << '\n';
}

json to_json(const Report& report)
{
    json j;
    j["check_name"] = report.check_name;
    j["inputs_digest"] = report.inputs_digest;
    j["per_n"] = entries(report.per_n);
    j["statistic"] = number(report.statistic);
    j["verdict"] = to_string(report.verdict);
    j["tolerance"] = number(report.tolerance);
    json details = json::object();
    for (const auto& [k, v] : report.details)
        details[k] = number(v);
    j["details"] = details;
    json series = json::object();
    for (const auto& [k, v] : report.series)
        series[k] = entries(v);
    j["series"] = series;
    j["notes"] = report.notes;
    return j;
}

json to_json(const NormEntry& entry)
{
    return {{"name", entry.name},
            {"s", number(entry.s)},
            {"eps", number(entry.eps)},
            {"grid_part", number(entry.value.grid_part)},
            {"tail_estimate", number(entry.value.tail_estimate)},
            {"total", number(entry.value.total)}};
}

void write_reports_json(std::ostream& os, const std::vector<Report>& reports, const std::string& digest)
{
    json arr = json::array();
    for (const auto& r : reports)
        arr.push_back(to_json(r));
    os << header_line(digest, "//") << "\n" << arr.dump(2) << "\n";
}

void write_norms_json(std::ostream& os, const std::vector<NormEntry>& norms, const std::string& digest)
{
    json arr = json::array();
    for (const auto& e : norms)
        arr.push_back(to_json(e));
    os << header_line(digest, "//") << "\n" << arr.dump(2) << "\n";
}

json read_commented_json(std::istream& is)
{
    const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    return json::parse(text, nullptr, true, true);
}

} // namespace memoheat
