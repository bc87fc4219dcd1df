#include "levylab/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace levylab {

std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_or_throw(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + file.string() + " for writing");
  }
  return out;
}

}  // namespace

void write_summary_csv(const std::filesystem::path& file,
                       const std::vector<double>& times,
                       const TimeSummary& summary, std::size_t n_paths) {
  if (times.size() != summary.medians.size() ||
      times.size() != summary.lower_quartiles.size() ||
      times.size() != summary.upper_quartiles.size() ||
      times.size() != summary.maxima.size()) {
    throw std::invalid_argument("write_summary_csv: ragged summary");
  }
  std::ofstream out = open_or_throw(file);
  out << "time,median,q25,q75,max,n_paths\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_double(times[k]) << ',' << format_double(summary.medians[k])
        << ',' << format_double(summary.lower_quartiles[k]) << ','
        << format_double(summary.upper_quartiles[k]) << ','
        << format_double(summary.maxima[k]) << ',' << n_paths << '\n';
  }
}

void write_paths_csv(const std::filesystem::path& file,
                     const PathSource& source, const std::string& kind) {
  std::ofstream out = open_or_throw(file);
  out << "path_id,time,component_index,value,is_pre_jump";
  if (!kind.empty()) out << ",kind";
  out << '\n';

  const auto row = [&](std::size_t id, double t, int c, double v, int pre) {
    out << id << ',' << format_double(t) << ',' << c << ',' << format_double(v)
        << ',' << pre;
    if (!kind.empty()) out << ',' << kind;
    out << '\n';
  };

  for (std::size_t i = 0; i < source.count(); ++i) {
    const PathSkeleton path = source(i);
    std::size_t next_jump = 0;
    for (std::size_t j = 0; j < path.times.size(); ++j) {
      if (next_jump < path.jumps.size() &&
          path.jumps[next_jump].time_index == j) {
        const JumpRecord& jump = path.jumps[next_jump];
        for (int c = 0; c < path.dim(); ++c) {
          row(i, path.times[j], c, jump.pre_value(c), 1);
        }
        ++next_jump;
      }
      for (int c = 0; c < path.dim(); ++c) {
        row(i, path.times[j], c, path.values(c, long(j)), 0);
      }
    }
  }
}

void write_verdicts_csv(const std::filesystem::path& file,
                        const std::vector<VerdictRow>& rows) {
  std::ofstream out = open_or_throw(file);
  out << "verifier,verdict,agrees_with_oracle,pass\n";
  for (const VerdictRow& r : rows) {
    out << r.verifier << ',' << r.verdict << ',' << (r.agrees ? 1 : 0) << ','
        << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace levylab
