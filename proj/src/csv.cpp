#include "sit/csv.hpp"

#include "sit/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace sit {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    const bool full = traj.model == ModelKind::full;
    os << (full ? "t,F,Ms,E,M,u,V\r\n" : "t,F,Ms,u,V\r\n");
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << format_double(traj.t[i]) << ',' << format_double(traj.F[i]) << ','
           << format_double(traj.Ms[i]) << ',';
        if (full) os << format_double(traj.E[i]) << ',' << format_double(traj.M[i]) << ',';
        os << format_double(traj.u[i]) << ',' << format_double(traj.V[i]) << "\r\n";
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_trajectory_csv(traj, out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty trajectory CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Trajectory tr;
    std::vector<std::vector<double>*> cols;
    if (line == "t,F,Ms,u,V") {
        tr.model = ModelKind::reduced;
        cols = {&tr.t, &tr.F, &tr.Ms, &tr.u, &tr.V};
    } else if (line == "t,F,Ms,E,M,u,V") {
        tr.model = ModelKind::full;
        cols = {&tr.t, &tr.F, &tr.Ms, &tr.E, &tr.M, &tr.u, &tr.V};
    } else {
        throw std::runtime_error("unrecognized trajectory header: " + line);
    }
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t c = 0; c < cols.size(); ++c) {
            double v = 0.0;
            auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc{}) {
                throw std::runtime_error("bad number in trajectory CSV row " + std::to_string(row));
            }
            cols[c]->push_back(v);
            p = res.ptr;
            if (c + 1 < cols.size()) {
                if (p == end || *p != ',') {
                    throw std::runtime_error("missing column in trajectory CSV row " +
                                             std::to_string(row));
                }
                ++p;
            }
        }
        if (p != end) {
            throw std::runtime_error("extra data in trajectory CSV row " + std::to_string(row));
        }
    }
    return tr;
}

void write_audit_csv(std::span<const AuditReport> reports, std::ostream& os) {
    os << "check,grid,pass,worst_value,witness_F,witness_Ms\r\n";
    for (const auto& r : reports) {
        os << csv_field(r.check) << ',' << csv_field(r.grid) << ',' << (r.pass ? "true" : "false")
           << ',' << format_double(r.worst_value) << ',' << format_double(r.witness_F) << ','
           << format_double(r.witness_Ms) << "\r\n";
    }
}

}  // namespace sit
