#include "proxrr/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "proxrr/errors.hpp"

namespace proxrr::harness {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& h : header) field(h);
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view s) {
  if (!first_) out_ << ',';
  out_ << s;
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
  out_.close();
}

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace) {
  CsvWriter w(path, kTraceColumns);
  for (const auto& r : trace.records) {
    w.field(std::uint64_t{r.epoch}).field(r.stepsize).field(r.dist_sq).field(r.objective);
    w.field(r.grad_calls).field(r.prox_calls);
    w.end_row();
  }
  w.close();
}

void write_vector_csv(const std::filesystem::path& path, ConstVecRef x) {
  CsvWriter w(path, {"index", "value"});
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    w.field(static_cast<std::uint64_t>(i)).field(x[i]);
    w.end_row();
  }
  w.close();
}

Vec read_vector_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "index,value") throw ParseError(path.string(), 1, "bad header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    double v = 0.0;
    const char* begin = comma == std::string::npos ? nullptr : line.data() + comma + 1;
    if (!begin) throw ParseError(path.string(), line_no, "expected index,value");
    const auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) throw ParseError(path.string(), line_no, "bad value");
    values.push_back(v);
  }
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace proxrr::harness
