#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "irsuav/schemes.hpp"

namespace irsuav {

// One trace file per run, named {scheme}_{seed}.csv. Rows are
// episode,scheme,seed,mean_reward,noise_scale followed by a single summary
// row whose episode column is the literal word `summary` and whose
// mean_reward column holds the final-100-episode mean.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
RunTrace read_trace_csv(std::istream& in);

struct SummaryEntry {
  std::string scheme;
  std::string seed;  // seed number, or `all` for the per-scheme aggregate
  int irs_elements = 0;
  double final_mean_reward = 0.0;
};

// summary.csv: scheme,seed,irs_elements,final_mean_reward.
void write_summary_csv(std::ostream& out, const std::vector<SummaryEntry>& entries);

// Trailing moving average over full windows: entry i of the result covers
// input entries [i, i+window). A trace no longer than the window collapses
// to its single overall mean.
std::vector<double> moving_average(const std::vector<double>& series, int window);

// plot_{scheme}.csv: episode,ee_smoothed where the series is the seed-mean
// trace smoothed with a window-25 moving average; the episode column is the
// last episode of each window.
void write_plotdata_csv(std::ostream& out, const std::vector<RunTrace>& seeds_of_one_scheme,
                        int window = 25);

}  // namespace irsuav
