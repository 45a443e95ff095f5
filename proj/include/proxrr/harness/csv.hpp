#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "proxrr/trace.hpp"
#include "proxrr/vector.hpp"

namespace proxrr::harness {

/// Shortest decimal text that reads back to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string format_double(double v);

/// Comma-separated writer with '\n' line ends. Fields are written verbatim,
/// so callers must not pass commas or newlines.
class CsvWriter {
 public:
  /// Throws std::runtime_error when the file cannot be opened.
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v);
  CsvWriter& field(std::uint64_t v);
  void end_row();
  /// Flushes and throws std::runtime_error on a write failure.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

/// Column order of per-cell trace files.
inline const std::vector<std::string> kTraceColumns = {"epoch",      "stepsize",  "dist_sq_to_opt",
                                                        "objective",  "grad_calls", "prox_calls"};

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace);
void write_vector_csv(const std::filesystem::path& path, ConstVecRef x);
/// Reads a file written by write_vector_csv.
Vec read_vector_csv(const std::filesystem::path& path);

}  // namespace proxrr::harness
