#ifndef PMMH_CSV_HPP
#define PMMH_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace pmmh {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Plain comma-separated text with a header row; no quoting. Throws on ragged
// rows or an empty file.
CsvTable read_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// Shortest round-trip representation of a double ("%.17g").
std::string format_double(double v);

}  // namespace pmmh

#endif
