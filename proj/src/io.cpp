#include "kscars/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "kscars/error.hpp"

namespace kscars {

std::string_view generated_by() noexcept { return "kscars 0.1.0"; }

void CsvTable::add_column(std::string name, std::vector<double> values) {
  require(!name.empty() && name.find_first_of(",\n\"") == std::string::npos,
          ErrorKind::Configuration, "invalid column name '" + name + "'");
  require(!has(name), ErrorKind::Configuration, "duplicate column '" + name + "'");
  require(columns_.empty() || values.size() == rows(), ErrorKind::Configuration,
          "column '" + name + "' has " + std::to_string(values.size()) + " rows, expected " +
              std::to_string(rows()));
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

bool CsvTable::has(std::string_view name) const noexcept {
  for (const auto& n : names_)
    if (n == name) return true;
  return false;
}

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return columns_[k];
  fail(ErrorKind::Configuration, "missing column '" + std::string(name) + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return std::signbit(v) ? "-0" : "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (k) out += ',';
    out += names_[k];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      if (k) out += ',';
      out += format_double(columns_[k][r]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  require(!s.empty() && end == s.c_str() + s.size() && errno != ERANGE, ErrorKind::Io,
          "malformed CSV number '" + s + "'");
  return v;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  require(!lines.empty(), ErrorKind::Io, "CSV has no header row");
  const auto header = split(lines.front());
  std::vector<std::vector<double>> cols(header.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    require(cells.size() == header.size(), ErrorKind::Io,
            "CSV row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                " fields, expected " + std::to_string(header.size()));
    for (std::size_t k = 0; k < cells.size(); ++k) cols[k].push_back(parse_number(cells[k]));
  }
  CsvTable t;
  for (std::size_t k = 0; k < header.size(); ++k) t.add_column(header[k], std::move(cols[k]));
  return t;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    require(!ec, ErrorKind::Io, "cannot create directory " + path.parent_path().string() + ": " +
                                    ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp, ec);
      fail(ErrorKind::Io, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    fail(ErrorKind::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace kscars
