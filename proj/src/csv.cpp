#include "alloysim/csv.hpp"

#include <fstream>
#include <stdexcept>

namespace alloysim {

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(out_.data(), static_cast<std::streamsize>(out_.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace alloysim
