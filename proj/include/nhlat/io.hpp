#pragma once

#include "nhlat/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nhlat {

// 17 significant digits, '.' decimal separator, locale independent.
std::string format_double(double x);
std::string format_complex(cdouble z); // a+bi / a-bi literal

// Parses "a+bi", "a-bi", "a", "bi", "i", "-i"; throws std::invalid_argument.
cdouble parse_complex(const std::string& s);

// key = value file with '#' comments, or a JSON object (manifest round-trip);
// either way the result is a flat string map.
std::map<std::string, std::string> read_config(const std::string& path);

struct CsvTable {
    std::vector<std::string> comments; // emitted as leading '# ...' lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// LF line endings, no trailing whitespace, deterministic byte-for-byte.
void write_csv(const std::string& path, const CsvTable& table);
// Same table as a JSON array of row objects.
void write_json_table(const std::string& path, const CsvTable& table);

void write_text(const std::string& path, const std::string& content);

std::string param_comment(const LatticeParams& p);

} // namespace nhlat
