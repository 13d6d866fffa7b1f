#include "copsurv/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "copsurv/error.hpp"
#include "copsurv/stats.hpp"

namespace copsurv {

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& field : out) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '"')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '"' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

void check_record(double time, int event) {
  if (!std::isfinite(time) || !(time > 0.0)) {
    throw ValidationError("observed time must be finite and > 0, got " + format_double(time));
  }
  if (event != 0 && event != 1) {
    throw ValidationError("event indicator must be 0 or 1, got " + std::to_string(event));
  }
}

}  // namespace

SurvivalDataset::SurvivalDataset(std::size_t dim, std::vector<double> x, std::vector<double> time,
                                 std::vector<int> event)
    : dim_(dim), x_(std::move(x)), time_(std::move(time)), event_(std::move(event)) {
  if (time_.size() != event_.size() || x_.size() != time_.size() * dim_) {
    throw ShapeError("dataset column lengths disagree");
  }
  for (std::size_t i = 0; i < time_.size(); ++i) {
    try {
      check_record(time_[i], event_[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("record " + std::to_string(i) + ": " + e.what());
    }
  }
  for (double v : x_) {
    if (!std::isfinite(v)) throw ValidationError("covariates must be finite");
  }
}

void SurvivalDataset::add(std::span<const double> x, double time, int event) {
  if (x.size() != dim_) throw ShapeError("record covariate dimension mismatch");
  check_record(time, event);
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError("covariates must be finite");
  }
  x_.insert(x_.end(), x.begin(), x.end());
  time_.push_back(time);
  event_.push_back(event);
}

std::size_t SurvivalDataset::num_events() const {
  std::size_t n = 0;
  for (int e : event_) n += static_cast<std::size_t>(e);
  return n;
}

double SurvivalDataset::event_fraction() const {
  return empty() ? 0.0 : static_cast<double>(num_events()) / static_cast<double>(size());
}

SurvivalDataset SurvivalDataset::subset(std::span<const std::size_t> indices) const {
  SurvivalDataset out(dim_);
  out.x_.reserve(indices.size() * dim_);
  out.time_.reserve(indices.size());
  out.event_.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw ShapeError("subset index out of range");
    const auto row = x(i);
    out.x_.insert(out.x_.end(), row.begin(), row.end());
    out.time_.push_back(time_[i]);
    out.event_.push_back(event_[i]);
  }
  return out;
}

Standardization standardize(RegressionDataset& data) {
  Standardization s;
  s.mean.resize(data.dim);
  s.scale.resize(data.dim);
  std::vector<double> column(data.size());
  for (std::size_t k = 0; k < data.dim; ++k) {
    for (std::size_t i = 0; i < data.size(); ++i) column[i] = data.x[i * data.dim + k];
    s.mean[k] = stats::mean(column);
    const double sd = stats::stddev(column);
    s.scale[k] = sd > 0.0 ? sd : 1.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      data.x[i * data.dim + k] = (column[i] - s.mean[k]) / s.scale[k];
    }
  }
  return s;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename into '" + path.string() + "': " + ec.message());
}

std::string survival_csv_string(const SurvivalDataset& data) {
  std::string out;
  for (std::size_t k = 0; k < data.dim(); ++k) out += "x" + std::to_string(k) + ",";
  out += "time,event\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.x(i)) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(data.time(i));
    out += data.event(i) ? ",1\n" : ",0\n";
  }
  return out;
}

void write_survival_csv(const SurvivalDataset& data, const std::filesystem::path& path) {
  write_text_file(path, survival_csv_string(data));
}

SurvivalDataset read_survival_csv(const std::filesystem::path& path) {
  const auto lines = lines_of(read_text_file(path));
  if (lines.empty()) throw ValidationError("'" + path.string() + "' has no header");
  const auto header = split_line(lines[0]);
  if (header.size() < 2 || header[header.size() - 2] != "time" || header.back() != "event") {
    throw ValidationError("'" + path.string() + "': header must end with time,event");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t k = 0; k < d; ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw ValidationError("'" + path.string() + "': expected column x" + std::to_string(k));
    }
  }
  SurvivalDataset data(d);
  std::vector<double> row(d);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    const std::string where = path.string() + ":" + std::to_string(r + 1);
    if (fields.size() != d + 2) throw ValidationError(where + ": wrong number of fields");
    try {
      for (std::size_t k = 0; k < d; ++k) row[k] = parse_double(fields[k]);
      const double t = parse_double(fields[d]);
      const double e = parse_double(fields[d + 1]);
      if (e != 0.0 && e != 1.0) throw ValidationError("event indicator must be 0 or 1");
      data.add(row, t, static_cast<int>(e));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return data;
}

void write_latent_csv(std::span<const LatentPair> pairs, const std::filesystem::path& path) {
  std::string out = "t_event,t_censor\n";
  for (const auto& p : pairs) {
    out += format_double(p.t_event) + "," + format_double(p.t_censor) + "\n";
  }
  write_text_file(path, out);
}

std::vector<LatentPair> read_latent_csv(const std::filesystem::path& path) {
  const auto lines = lines_of(read_text_file(path));
  if (lines.empty() || lines[0] != "t_event,t_censor") {
    throw ValidationError("'" + path.string() + "': header must be t_event,t_censor");
  }
  std::vector<LatentPair> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    if (fields.size() != 2) throw ValidationError(path.string() + ": wrong number of fields");
    out.push_back({parse_double(fields[0]), parse_double(fields[1])});
  }
  return out;
}

RegressionDataset read_regression_csv(const std::filesystem::path& path, std::string_view target) {
  const auto lines = lines_of(read_text_file(path));
  if (lines.empty()) throw ValidationError("'" + path.string() + "' has no header");
  const auto header = split_line(lines[0]);
  if (header.size() < 2) throw ValidationError("regression CSV needs a feature and a target");
  std::size_t target_col = header.size() - 1;
  if (!target.empty()) {
    target_col = header.size();
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == target) target_col = k;
    }
    if (target_col == header.size()) {
      throw ValidationError("target column '" + std::string(target) + "' not found");
    }
  }
  RegressionDataset data;
  data.dim = header.size() - 1;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k != target_col) data.feature_names.emplace_back(header[k]);
  }
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    const std::string where = path.string() + ":" + std::to_string(r + 1);
    if (fields.size() != header.size()) throw ValidationError(where + ": wrong number of fields");
    for (std::size_t k = 0; k < fields.size(); ++k) {
      double v = 0.0;
      try {
        v = parse_double(fields[k]);
      } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
      }
      if (!std::isfinite(v)) throw ValidationError(where + ": non-finite value");
      if (k == target_col) {
        data.y.push_back(v);
      } else {
        data.x.push_back(v);
      }
    }
  }
  if (data.y.empty()) throw ValidationError("'" + path.string() + "' has no records");
  return data;
}

void write_regression_csv(const RegressionDataset& data, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t k = 0; k < data.dim; ++k) {
    out += k < data.feature_names.size() ? data.feature_names[k] : "x" + std::to_string(k);
    out += ',';
  }
  out += "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out += format_double(v) + ",";
    out += format_double(data.y[i]) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace copsurv
