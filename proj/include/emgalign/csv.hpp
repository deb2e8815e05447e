#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace emgalign::csv {

/// Format a double with 17 significant digits (bit-exact strtod round-trip).
std::string format(double value);

/// Join values into one CSV line (no trailing newline).
std::string join(const std::vector<std::string>& fields);

/// Split one line on commas; no quoting support (none of our formats need it).
std::vector<std::string> split(const std::string& line);

/// Parse a double; throws IngestError naming `context` when malformed or
/// non-finite values are not allowed.
double parse_double(const std::string& field, const std::string& context,
                    bool allow_nonfinite = false);

long parse_long(const std::string& field, const std::string& context);

/// Read all lines of a text file (throws IoError when unreadable).
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Write text to a file, creating parent directories (throws IoError).
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace emgalign::csv
