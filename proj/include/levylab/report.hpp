#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "levylab/ensemble.hpp"
#include "levylab/stats.hpp"

namespace levylab {

/// Shortest decimal string that parses back to exactly the same double.
/// Locale-independent, '.' decimal separator.
std::string format_double(double v);

/// Flat per-time statistics table for plotting.
/// Header: `time,median,q25,q75,max,n_paths`.
void write_summary_csv(const std::filesystem::path& file,
                       const std::vector<double>& times,
                       const TimeSummary& summary, std::size_t n_paths);

/// Dumps every path of a source: the state at every stored time, plus the
/// left limits from the jump ledger (flagged is_pre_jump=1, written just
/// before the post-jump row of the same time).
/// Header: `path_id,time,component_index,value,is_pre_jump`, with a
/// trailing `kind` column when `kind` is nonempty.
void write_paths_csv(const std::filesystem::path& file,
                     const PathSource& source, const std::string& kind = {});

struct VerdictRow {
  std::string verifier;
  std::string verdict;
  bool agrees = false;
  bool pass = false;
};

/// Machine-readable verdict summary.
/// Header: `verifier,verdict,agrees_with_oracle,pass`.
void write_verdicts_csv(const std::filesystem::path& file,
                        const std::vector<VerdictRow>& rows);

}  // namespace levylab
