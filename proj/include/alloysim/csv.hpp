#pragma once

#include <cstdio>
#include <string>

namespace alloysim {

/// CSV accumulator with byte-stable formatting: UTF-8, LF endings, doubles
/// printed with %.12g so a re-run under the same config reproduces the file
/// exactly. Leading '#' lines carry the embedded config.
class CsvWriter {
 public:
  void comment(const std::string& text) { out_ += "# " + text + "\n"; }

  CsvWriter& field(const std::string& v) {
    sep();
    out_ += v;
    return *this;
  }
  CsvWriter& field(const char* v) { return field(std::string(v)); }
  CsvWriter& field(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return field(std::string(buf));
  }
  CsvWriter& field(std::size_t v) { return field(std::to_string(v)); }
  CsvWriter& field(long long v) { return field(std::to_string(v)); }
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(bool v) { return field(std::string(v ? "1" : "0")); }

  void end_row() {
    out_ += '\n';
    row_open_ = false;
  }

  const std::string& text() const { return out_; }

  /// Writes the buffer to path (binary mode). Throws on I/O failure.
  void write_file(const std::string& path) const;

 private:
  void sep() {
    if (row_open_) out_ += ',';
    row_open_ = true;
  }

  std::string out_;
  bool row_open_ = false;
};

}  // namespace alloysim
