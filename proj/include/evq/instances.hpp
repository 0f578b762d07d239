#pragma once

// Charging-load records and randomized generation of the two scheduling
// problem families: weighted completion time (SC1) and group interval
// selection (SC2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "evq/error.hpp"
#include "evq/rng.hpp"

namespace evq {

struct LoadRecord {
  std::int64_t id = 0;
  std::int64_t start = 0;     // seconds
  std::int64_t end = 0;       // seconds
  std::int64_t duration = 0;  // whole minutes, rounded up, at least 1

  friend bool operator==(const LoadRecord&, const LoadRecord&) = default;
};

struct Job {
  std::int64_t duration = 1;  // t_j, minutes
  std::int64_t weight = 1;    // w_j, priority

  friend bool operator==(const Job&, const Job&) = default;
};

struct SC1Instance {
  std::vector<Job> jobs;
  int k = 1;  // identical machines
  std::uint64_t seed = 0;

  friend bool operator==(const SC1Instance&, const SC1Instance&) = default;
};

struct Interval {
  std::int64_t start = 0;
  std::int64_t end = 0;
  int group = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SC2Instance {
  std::vector<Interval> intervals;
  int n_groups = 0;
  int group_size = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SC2Instance&, const SC2Instance&) = default;
};

inline std::int64_t duration_minutes(std::int64_t start, std::int64_t end) {
  return std::max<std::int64_t>(1, (end - start + 59) / 60);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::int64_t parse_int(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("malformed integer '" + s + "'", line);
  }
  if (pos != s.size()) throw ParseError("malformed integer '" + s + "'", line);
  return v;
}

}  // namespace detail

/// Parses `id,start,end` rows. Line numbers in errors count the header as line 1.
inline std::vector<LoadRecord> parse_records(std::istream& in) {
  std::vector<LoadRecord> records;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing header 'id,start,end'", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,start,end") throw ParseError("expected header 'id,start,end'", line_no);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != 3) throw ParseError("expected 3 fields", line_no);
    LoadRecord r;
    r.id = detail::parse_int(cells[0], line_no);
    r.start = detail::parse_int(cells[1], line_no);
    r.end = detail::parse_int(cells[2], line_no);
    if (r.end <= r.start) throw ParseError("end <= start", line_no);
    r.duration = duration_minutes(r.start, r.end);
    records.push_back(r);
  }
  return records;
}

inline std::vector<LoadRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open record file '" + path.string() + "'");
  return parse_records(in);
}

inline void write_records(std::ostream& out, std::span<const LoadRecord> records) {
  out << "id,start,end\n";
  for (const auto& r : records) out << r.id << ',' << r.start << ',' << r.end << '\n';
}

struct SyntheticRecordOptions {
  std::int64_t window_start = 1493589600;  // 2017-05-01T00:00:00+02:00
  std::int64_t window_days = 31;
  double median_minutes = 120.0;
  double log_sigma = 0.75;
  std::int64_t min_minutes = 15;
  std::int64_t max_minutes = 480;
};

namespace detail {

inline double standard_normal(Rng& rng) {
  // Box-Muller; one draw per call keeps the stream position simple.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Knuth's multiplication method; fine for the small rates used here.
inline int poisson(Rng& rng, double lambda) {
  const double limit = std::exp(-lambda);
  int k = 0;
  double p = uniform01(rng);
  while (p > limit) {
    ++k;
    p *= uniform01(rng);
  }
  return k;
}

}  // namespace detail

/// Chronologically sorted stand-in for a month of charging sessions: uniform
/// start times over the window and log-normal durations truncated to
/// [min_minutes, max_minutes].
inline std::vector<LoadRecord> synthetic_records(std::size_t count, std::uint64_t seed,
                                                 const SyntheticRecordOptions& opt = {}) {
  Rng rng = make_rng(seed, {0x5ec0});
  const std::int64_t window = opt.window_days * 86400;
  std::vector<std::int64_t> starts(count);
  for (auto& s : starts) s = opt.window_start + static_cast<std::int64_t>(uniform_index(rng, window));
  std::sort(starts.begin(), starts.end());

  std::vector<LoadRecord> out;
  out.reserve(count);
  const double mu = std::log(opt.median_minutes);
  for (std::size_t i = 0; i < count; ++i) {
    double minutes;
    do {
      minutes = std::exp(mu + opt.log_sigma * detail::standard_normal(rng));
    } while (minutes < static_cast<double>(opt.min_minutes) || minutes > static_cast<double>(opt.max_minutes));
    LoadRecord r;
    r.id = static_cast<std::int64_t>(i + 1);
    r.start = starts[i];
    r.end = r.start + static_cast<std::int64_t>(std::llround(minutes)) * 60;
    r.duration = duration_minutes(r.start, r.end);
    out.push_back(r);
  }
  return out;
}

namespace detail {

// n consecutive records starting at a uniformly drawn index, wrapping around.
inline std::vector<LoadRecord> consecutive_window(std::span<const LoadRecord> records, std::size_t n, Rng& rng) {
  if (records.empty()) throw SizeError("record set is empty");
  if (n > records.size())
    throw SizeError("requested " + std::to_string(n) + " loads but only " + std::to_string(records.size()) +
                    " records are available");
  const std::size_t first = uniform_index(rng, records.size());
  std::vector<LoadRecord> window;
  window.reserve(n);
  for (std::size_t i = 0; i < n; ++i) window.push_back(records[(first + i) % records.size()]);
  return window;
}

}  // namespace detail

/// Priorities are 1 + X with X ~ Poisson(priority_lambda) conditioned on
/// X <= max_extra_priority (rejection sampling), so weights lie in
/// {1, ..., 1 + max_extra_priority}.
inline SC1Instance gen_sc1(std::span<const LoadRecord> records, std::size_t n, int k, std::uint64_t seed,
                           double priority_lambda = 2.0, int max_extra_priority = 4) {
  if (k < 1) throw DomainError("machine count k must be at least 1");
  if (!(priority_lambda > 0.0)) throw DomainError("priority_lambda must be positive");
  Rng rng = make_rng(seed, {0x5c1});
  auto window = detail::consecutive_window(records, n, rng);
  SC1Instance inst;
  inst.k = k;
  inst.seed = seed;
  inst.jobs.reserve(n);
  for (const auto& r : window) {
    int x;
    do {
      x = detail::poisson(rng, priority_lambda);
    } while (x > max_extra_priority);
    inst.jobs.push_back(Job{r.duration, 1 + x});
  }
  return inst;
}

/// Group labels are a uniformly shuffled multiset with exactly group_size
/// copies of each label in [0, n_groups).
inline SC2Instance gen_sc2(std::span<const LoadRecord> records, int n_groups, int group_size, std::uint64_t seed) {
  if (n_groups < 1 || group_size < 1) throw DomainError("n_groups and group_size must be positive");
  Rng rng = make_rng(seed, {0x5c2});
  const auto n = static_cast<std::size_t>(n_groups) * static_cast<std::size_t>(group_size);
  auto window = detail::consecutive_window(records, n, rng);

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / static_cast<std::size_t>(group_size));
  for (std::size_t i = n; i > 1; --i) std::swap(labels[i - 1], labels[uniform_index(rng, i)]);

  SC2Instance inst;
  inst.n_groups = n_groups;
  inst.group_size = group_size;
  inst.seed = seed;
  inst.intervals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) inst.intervals.push_back(Interval{window[i].start, window[i].end, labels[i]});
  return inst;
}

}  // namespace evq
