#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace copsurv {

// Right-censored records (x, t_obs, delta) with row-major covariates.
class SurvivalDataset {
 public:
  SurvivalDataset() = default;
  explicit SurvivalDataset(std::size_t dim) : dim_(dim) {}
  // Throws ValidationError on t <= 0, non-finite values or delta not in {0, 1}.
  SurvivalDataset(std::size_t dim, std::vector<double> x, std::vector<double> time,
                  std::vector<int> event);

  void add(std::span<const double> x, double time, int event);

  std::size_t size() const { return time_.size(); }
  bool empty() const { return time_.empty(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> x(std::size_t i) const { return {x_.data() + i * dim_, dim_}; }
  double time(std::size_t i) const { return time_[i]; }
  int event(std::size_t i) const { return event_[i]; }

  std::span<const double> times() const { return time_; }
  std::span<const int> events() const { return event_; }
  std::span<const double> covariates() const { return x_; }

  std::size_t num_events() const;
  double event_fraction() const;

  SurvivalDataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const SurvivalDataset&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> x_;
  std::vector<double> time_;
  std::vector<int> event_;
};

struct LatentPair {
  double t_event;
  double t_censor;
  bool operator==(const LatentPair&) const = default;
};

// Regression records (x, y) as ingested for artificial censoring.
struct RegressionDataset {
  std::size_t dim = 0;
  std::vector<double> x;  // row-major
  std::vector<double> y;
  std::vector<std::string> feature_names;

  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }
};

// Per-column z-score parameters.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;
};

// Standardizes columns in place; constant columns keep scale 1.
Standardization standardize(RegressionDataset& data);

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

// Dataset CSV: header x0,...,x{d-1},time,event.
void write_survival_csv(const SurvivalDataset& data, const std::filesystem::path& path);
SurvivalDataset read_survival_csv(const std::filesystem::path& path);
std::string survival_csv_string(const SurvivalDataset& data);

void write_latent_csv(std::span<const LatentPair> pairs, const std::filesystem::path& path);
std::vector<LatentPair> read_latent_csv(const std::filesystem::path& path);

// Numeric CSV with a header row. `target` names the label column; empty
// selects the last column.
RegressionDataset read_regression_csv(const std::filesystem::path& path,
                                      std::string_view target = {});
void write_regression_csv(const RegressionDataset& data, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace copsurv
