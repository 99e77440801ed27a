#pragma once

#include <string>
#include <vector>

namespace coughdx {

// Minimal CSV support: comma separator, optional double-quoting with ""
// escapes, LF or CRLF line ends, UTF-8 passthrough.
std::vector<std::string> split_csv_line(const std::string& line);

std::string csv_escape(const std::string& field);

// All non-empty lines of a file split into fields. Raises io error if the
// file cannot be opened.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

// Round-trip-exact formatting for doubles (17 significant digits).
std::string format_double(double x);

}  // namespace coughdx
