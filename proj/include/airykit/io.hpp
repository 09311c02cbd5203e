#pragma once

#include <string>
#include <vector>

namespace airykit {

/// Write content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// Format a double with 17 significant digits ('.' decimal point).
std::string format_g17(double v);

/// Assemble a CSV document: '#' comment lines for defaults, a header row,
/// then rows of 17-significant-digit values; LF line endings.
std::string make_csv(const std::vector<std::string>& comments,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Same table as a JSON document {config, columns, rows}.
std::string make_json_table(const std::vector<std::string>& comments,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows);

/// Dispatch on format ("csv" or "json").
std::string make_table(const std::string& format, const std::vector<std::string>& comments,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

} // namespace airykit
