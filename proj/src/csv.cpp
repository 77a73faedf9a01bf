#include "framelab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "framelab/errors.hpp"

namespace framelab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, const std::string& name, std::size_t line_no) {
  const std::string s = trim(raw);
  if (s.empty())
    throw ValidationError(name + ":" + std::to_string(line_no) + ": empty field");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(name + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  if (used != s.size())
    throw ValidationError(name + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
  if (!std::isfinite(v))
    throw ValidationError(name + ":" + std::to_string(line_no) + ": non-finite value");
  return v;
}

}  // namespace

FiniteFrame read_frame_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(name + ":1: missing header row");
  const std::vector<std::string> header = split_csv_line(line);
  const std::size_t d = header.size();
  for (std::size_t i = 0; i < d; ++i) {
    const std::string expect = "x" + std::to_string(i + 1);
    if (trim(header[i]) != expect)
      throw ValidationError(name + ":1: expected header column '" + expect + "', got '" +
                            trim(header[i]) + "'");
  }

  std::vector<Vector> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != d)
      throw ValidationError(name + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(d) + " columns, got " +
                            std::to_string(fields.size()));
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = parse_double(fields[i], name, line_no);
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw ValidationError(name + ": no data rows");
  return FiniteFrame(std::move(rows));
}

FiniteFrame read_frame_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_frame_csv(in, path);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_frame_csv(std::ostream& out, const FiniteFrame& frame) {
  for (std::size_t i = 0; i < frame.dim(); ++i) {
    if (i) out << ',';
    out << 'x' << (i + 1);
  }
  out << '\n';
  for (const Vector& v : frame.vectors()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ',';
      out << format_double(v[i]);
    }
    out << '\n';
  }
}

void write_frame_csv_file(const std::string& path, const FiniteFrame& frame) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_frame_csv(out, frame);
}

}  // namespace framelab
