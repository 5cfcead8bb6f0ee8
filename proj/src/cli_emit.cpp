#include <cstdio>
#include <filesystem>
#include <fstream>

#include "capdens/cli.hpp"
#include "capdens/errors.hpp"

namespace capdens {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "write-failed", "cannot open " + path);
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i > 0) out << ',';
    out << report.columns[i];
  }
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::io, "write-failed", "error while writing " + path);
}

}  // namespace

std::vector<std::string> emit_report(const Report& report, const OutputOptions& opts) {
  std::error_code ec;
  std::filesystem::create_directories(opts.dir, ec);
  if (ec) fail(ErrorKind::io, "write-failed", "cannot create output dir " + opts.dir);

  std::vector<std::string> written;
  if (opts.format == "json" || opts.format == "both") {
    const std::string path = opts.dir + "/" + opts.prefix + ".json";
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "write-failed", "cannot open " + path);
    out << report.to_json().dump(2) << '\n';
    if (!out) fail(ErrorKind::io, "write-failed", "error while writing " + path);
    written.push_back(path);
  }
  if (opts.format == "csv" || opts.format == "both") {
    const std::string path = opts.dir + "/" + opts.prefix + ".csv";
    write_csv(report, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace capdens
