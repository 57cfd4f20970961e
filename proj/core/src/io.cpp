#include "khess/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace khess::io {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw FormatError("not a number: '" + std::string(text) + "'");
  if (!std::isfinite(v)) throw FormatError("non-finite value: '" + std::string(text) + "'");
  return v;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_number(row[j]);
    os << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw FormatError("line " + std::to_string(lineno) + ": expected " +
                        std::to_string(t.header.size()) + " fields, found " +
                        std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(parse_number(c));
      } catch (const FormatError& e) {
        throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("empty CSV input");
  return t;
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile) {
  std::vector<std::vector<double>> rows;
  rows.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
    rows.push_back({profile.s[i], profile.u[i], profile.us[i]});
  write_csv(os, {"s", "u", "u_s"}, rows);
}

RadialProfile read_profile_csv(std::istream& is) {
  const auto t = read_csv(is);
  if (t.header != std::vector<std::string>{"s", "u", "u_s"})
    throw FormatError("line 1: expected header s,u,u_s");
  RadialProfile p;
  for (const auto& r : t.rows) {
    p.s.push_back(r[0]);
    p.u.push_back(r[1]);
    p.us.push_back(r[2]);
  }
  p.validate();
  return p;
}

void put(Record& r, std::string key, double value) {
  r.emplace_back(std::move(key), format_number(value));
}
void put(Record& r, std::string key, std::string value) {
  r.emplace_back(std::move(key), std::move(value));
}
void put(Record& r, std::string key, const char* value) {
  r.emplace_back(std::move(key), value);
}
void put(Record& r, std::string key, int value) {
  r.emplace_back(std::move(key), std::to_string(value));
}
void put(Record& r, std::string key, std::size_t value) {
  r.emplace_back(std::move(key), std::to_string(value));
}
void put(Record& r, std::string key, bool value) {
  r.emplace_back(std::move(key), value ? "true" : "false");
}

std::string to_json(const Record& record) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : record) j[k] = v;
  return j.dump(2) + "\n";
}

std::string profile_json(const RadialProfile& profile, const Record& extra) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : extra) j[k] = v;
  if (profile.a) j["a"] = format_number(*profile.a);
  if (profile.lambda) j["lambda"] = format_number(*profile.lambda);
  auto column = [](const std::vector<double>& xs) {
    auto arr = nlohmann::ordered_json::array();
    for (double x : xs) arr.push_back(format_number(x));
    return arr;
  };
  j["s"] = column(profile.s);
  j["u"] = column(profile.u);
  j["u_s"] = column(profile.us);
  return j.dump(2) + "\n";
}

}  // namespace khess::io
