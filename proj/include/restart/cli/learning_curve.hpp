#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "restart/train/trainer.hpp"

namespace restart::cli {

class MismatchedGrids : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an aggregate file is offered as input.
class AlreadyAggregated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedCsv : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kRunCsvHeader = "seed,env_steps,metric,aug_fraction,memory_size";
inline constexpr const char* kAggregateMarker = "# restart-rl aggregate";

struct SeedSeries {
  std::uint64_t seed = 0;
  std::vector<train::EvalRow> rows;
};

struct CurvePoint {
  std::int64_t env_steps = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(n); 0 for a single seed
  std::size_t seeds = 0;
};

struct LearningCurve {
  std::string column;  // metric, aug_fraction or memory_size
  std::vector<CurvePoint> points;
};

void write_run_csv(const std::string& path, std::uint64_t seed, const std::vector<train::EvalRow>& rows);
SeedSeries read_run_csv(const std::string& path);

// One curve per value column. Throws MismatchedGrids if the env_steps columns differ.
std::vector<LearningCurve> aggregate(const std::vector<SeedSeries>& runs);

void write_curve_csv(const std::string& path, const LearningCurve& curve);
void write_curve_svg(const std::string& path, const LearningCurve& curve, const std::string& title);

// Trapezoidal area under the curve over env_steps.
double area_under_curve(const std::vector<train::EvalRow>& rows);

// Reads every run_seed*.csv under dir and writes aggregate_<column>.csv/.svg
// into out_dir. Returns the curves written.
std::vector<LearningCurve> aggregate_directory(const std::string& dir, const std::string& out_dir);

}  // namespace restart::cli
