#include "irsuav/csvio.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace irsuav {

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out.precision(17);
  out << "episode,scheme,seed,mean_reward,noise_scale\n";
  const std::string tag = scheme_tag(trace.scheme);
  for (std::size_t i = 0; i < trace.episodes.size(); ++i)
    out << i << ',' << tag << ',' << trace.seed << ',' << trace.episodes[i].mean_reward << ','
        << trace.episodes[i].exploration_scale << '\n';
  const double final_scale =
      trace.episodes.empty() ? 0.0 : trace.episodes.back().exploration_scale;
  out << "summary," << tag << ',' << trace.seed << ',' << trace.final_mean() << ','
      << final_scale << '\n';
}

RunTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "episode,scheme,seed,mean_reward,noise_scale")
    throw std::runtime_error("trace csv: bad header");
  RunTrace trace;
  bool have_scheme = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string episode, tag, seed, reward, scale;
    if (!std::getline(row, episode, ',') || !std::getline(row, tag, ',') ||
        !std::getline(row, seed, ',') || !std::getline(row, reward, ',') ||
        !std::getline(row, scale, ','))
      throw std::runtime_error("trace csv: short row");
    if (!have_scheme) {
      trace.scheme = scheme_from_tag(tag);
      trace.seed = std::stoull(seed);
      have_scheme = true;
    }
    if (episode == "summary") continue;
    trace.episodes.push_back({std::stod(reward), std::stod(scale)});
  }
  return trace;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryEntry>& entries) {
  out.precision(17);
  out << "scheme,seed,irs_elements,final_mean_reward\n";
  for (const SummaryEntry& e : entries)
    out << e.scheme << ',' << e.seed << ',' << e.irs_elements << ',' << e.final_mean_reward
        << '\n';
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  if (series.empty()) return {};
  if (series.size() <= static_cast<std::size_t>(window)) {
    double sum = 0.0;
    for (double v : series) sum += v;
    return {sum / static_cast<double>(series.size())};
  }
  std::vector<double> out;
  out.reserve(series.size() - static_cast<std::size_t>(window) + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    sum += series[i];
    if (i + 1 >= static_cast<std::size_t>(window)) {
      out.push_back(sum / static_cast<double>(window));
      sum -= series[i + 1 - static_cast<std::size_t>(window)];
    }
  }
  return out;
}

void write_plotdata_csv(std::ostream& out, const std::vector<RunTrace>& seeds_of_one_scheme,
                        int window) {
  if (seeds_of_one_scheme.empty())
    throw std::invalid_argument("write_plotdata_csv: no traces given");
  const std::size_t episodes = seeds_of_one_scheme.front().episodes.size();
  for (const RunTrace& t : seeds_of_one_scheme)
    if (t.episodes.size() != episodes)
      throw std::invalid_argument("write_plotdata_csv: traces must align on episode index");

  std::vector<double> mean_trace(episodes, 0.0);
  for (const RunTrace& t : seeds_of_one_scheme)
    for (std::size_t i = 0; i < episodes; ++i) mean_trace[i] += t.episodes[i].mean_reward;
  for (double& v : mean_trace) v /= static_cast<double>(seeds_of_one_scheme.size());

  const std::vector<double> smoothed = moving_average(mean_trace, window);
  out.precision(17);
  out << "episode,ee_smoothed\n";
  const std::size_t offset = episodes <= static_cast<std::size_t>(window)
                                 ? episodes - 1
                                 : static_cast<std::size_t>(window) - 1;
  for (std::size_t i = 0; i < smoothed.size(); ++i)
    out << offset + i << ',' << smoothed[i] << '\n';
}

}  // namespace irsuav
