#ifndef GRAPHCLUST_CSV_HPP
#define GRAPHCLUST_CSV_HPP

#include <string>

#include "types.hpp"

namespace graphclust {

/// Reads a data matrix from CSV, rows = observations. A header row is
/// auto-detected (first line skipped when any field fails numeric parsing).
/// Parse failures report 1-based line numbers.
DataMatrix read_data_csv(const std::string& path);

/// Writes text to `path` atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace graphclust

#endif
