#pragma once

// CSV and flat-JSON serialisation. Numbers are written with 17 significant
// digits so that binary64 values round-trip exactly.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "khess/errors.hpp"
#include "khess/radial_profiles.hpp"

namespace khess::io {

/// Malformed input; the message starts with "line N:" when a line is known.
class FormatError : public DomainError {
 public:
  using DomainError::DomainError;
};

std::string format_number(double x);
double parse_number(std::string_view text);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with a header line; every row must have the header's
/// column count.
CsvTable read_csv(std::istream& is);

/// Columns s,u,u_s.
void write_profile_csv(std::ostream& os, const RadialProfile& profile);
/// Reads and validates (strictly increasing grid ending at 1, u(1) = 0).
RadialProfile read_profile_csv(std::istream& is);

/// Ordered flat record; values are already formatted strings.
using Record = std::vector<std::pair<std::string, std::string>>;

void put(Record& r, std::string key, double value);
void put(Record& r, std::string key, std::string value);
void put(Record& r, std::string key, const char* value);
void put(Record& r, std::string key, bool value);
void put(Record& r, std::string key, int value);
void put(Record& r, std::string key, std::size_t value);

/// JSON object with string values, keys in insertion order.
std::string to_json(const Record& record);
/// Profile grid as arrays of number strings plus the record's fields.
std::string profile_json(const RadialProfile& profile, const Record& extra);

}  // namespace khess::io
