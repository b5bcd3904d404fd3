#include "tclock/scan_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tclock {

void write_scan_csv(const TransmissionScan& scan, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ParseError("write_scan_csv: cannot open " + path);
    // full precision so a round trip reproduces the fit bit for bit
    std::fprintf(f, "# scan_var_unit = %s\n", scan.scan_var_unit.c_str());
    std::fprintf(f, "# incident_v = %.17g\n", scan.incident_v);
    std::fprintf(f, "scan_var,transmission,shots\n");
    for (const auto& row : scan.rows)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", row.scan_var, row.transmission, row.shots);
    std::fclose(f);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& token, int line_no) {
    const std::string t = trim(token);
    try {
        size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError("scan CSV: bad number '" + t + "' at line " + std::to_string(line_no));
    }
}

} // namespace

TransmissionScan read_scan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("read_scan_csv: cannot open " + path);

    TransmissionScan scan;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto eq = t.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = trim(t.substr(1, eq - 1));
            const std::string value = trim(t.substr(eq + 1));
            if (key == "scan_var_unit") scan.scan_var_unit = value;
            else if (key == "incident_v") scan.incident_v = parse_number(value, line_no);
            continue;
        }
        if (!header_seen) {
            if (t != "scan_var,transmission,shots")
                throw ParseError("scan CSV: missing or malformed header at line " +
                                 std::to_string(line_no) +
                                 " (expected 'scan_var,transmission,shots')");
            header_seen = true;
            continue;
        }
        std::stringstream ss(t);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ParseError("scan CSV: expected 3 columns at line " + std::to_string(line_no));
        ScanRow row;
        row.scan_var = parse_number(a, line_no);
        row.transmission = parse_number(b, line_no);
        row.shots = parse_number(c, line_no);
        scan.rows.push_back(row);
    }
    if (!header_seen) throw ParseError("scan CSV: no header row found in " + path);
    if (scan.rows.empty()) throw ParseError("scan CSV: no data rows in " + path);
    return scan;
}

} // namespace tclock
