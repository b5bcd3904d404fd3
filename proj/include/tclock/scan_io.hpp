#ifndef TCLOCK_SCAN_IO_HPP
#define TCLOCK_SCAN_IO_HPP

#include <string>

#include "tclock/knife_edge.hpp"

namespace tclock {

// Scan CSV format: a leading metadata block of "# key = value" lines
// (scan_var_unit and incident_v), then the header row
// "scan_var,transmission,shots", then one data row per scan point.

void write_scan_csv(const TransmissionScan& scan, const std::string& path);

TransmissionScan read_scan_csv(const std::string& path);

} // namespace tclock

#endif
