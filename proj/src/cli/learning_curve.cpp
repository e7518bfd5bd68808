#include "restart/cli/learning_curve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace restart::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

template <class T>
T parse_cell(const std::string& cell, const std::string& path, int line) {
  T v{};
  const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || p != cell.data() + cell.size()) {
    throw MalformedCsv(path + ":" + std::to_string(line) + ": bad value '" + cell + "'");
  }
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

bool is_run_csv(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.rfind("run_seed", 0) == 0 && p.extension() == ".csv";
}

}  // namespace

void write_run_csv(const std::string& path, std::uint64_t seed, const std::vector<train::EvalRow>& rows) {
  auto out = open_out(path);
  out << kRunCsvHeader << "\n";
  for (const auto& r : rows) {
    out << seed << "," << r.env_steps << "," << num(r.metric) << "," << num(r.aug_fraction) << "," << r.memory_size
        << "\n";
  }
}

SeedSeries read_run_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw MalformedCsv(path + ": empty file");
  if (line == kAggregateMarker) throw AlreadyAggregated(path + " is an aggregate, not a run");
  if (line != kRunCsvHeader) throw MalformedCsv(path + ": unexpected header '" + line + "'");

  SeedSeries s;
  int line_no = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 5) throw MalformedCsv(path + ":" + std::to_string(line_no) + ": expected 5 columns");
    const auto seed = parse_cell<std::uint64_t>(cells[0], path, line_no);
    if (first) s.seed = seed;
    if (seed != s.seed) throw MalformedCsv(path + ":" + std::to_string(line_no) + ": mixed seeds");
    first = false;
    s.rows.push_back({parse_cell<std::int64_t>(cells[1], path, line_no), parse_cell<double>(cells[2], path, line_no),
                      parse_cell<double>(cells[3], path, line_no), parse_cell<std::uint64_t>(cells[4], path, line_no)});
  }
  return s;
}

std::vector<LearningCurve> aggregate(const std::vector<SeedSeries>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate needs at least one run");
  const auto& grid = runs.front().rows;
  for (const auto& r : runs) {
    bool same = r.rows.size() == grid.size();
    for (std::size_t i = 0; same && i < grid.size(); ++i) same = r.rows[i].env_steps == grid[i].env_steps;
    if (!same) {
      throw MismatchedGrids("evaluation steps of seed " + std::to_string(r.seed) + " differ from seed " +
                            std::to_string(runs.front().seed));
    }
  }

  using Getter = double (*)(const train::EvalRow&);
  const std::pair<const char*, Getter> columns[] = {
      {"metric", [](const train::EvalRow& r) { return r.metric; }},
      {"aug_fraction", [](const train::EvalRow& r) { return r.aug_fraction; }},
      {"memory_size", [](const train::EvalRow& r) { return static_cast<double>(r.memory_size); }},
  };
  std::vector<LearningCurve> curves;
  const double n = static_cast<double>(runs.size());
  for (const auto& [name, get] : columns) {
    LearningCurve c{name, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double sum = 0.0;
      for (const auto& r : runs) sum += get(r.rows[i]);
      const double mean = sum / n;
      double se = 0.0;
      if (runs.size() > 1) {
        double ss = 0.0;
        for (const auto& r : runs) ss += (get(r.rows[i]) - mean) * (get(r.rows[i]) - mean);
        se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      }
      c.points.push_back({grid[i].env_steps, mean, se, runs.size()});
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_curve_csv(const std::string& path, const LearningCurve& curve) {
  auto out = open_out(path);
  out << kAggregateMarker << "\n";
  out << "env_steps,mean,stderr,seeds\n";
  for (const auto& p : curve.points) {
    out << p.env_steps << "," << num(p.mean) << "," << num(p.stderr_) << "," << p.seeds << "\n";
  }
}

void write_curve_svg(const std::string& path, const LearningCurve& curve, const std::string& title) {
  constexpr double W = 640, H = 400, left = 70, right = 20, top = 40, bottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!curve.points.empty()) {
    x0 = static_cast<double>(curve.points.front().env_steps);
    x1 = static_cast<double>(curve.points.back().env_steps);
    y0 = y1 = curve.points.front().mean;
    for (const auto& p : curve.points) {
      y0 = std::min(y0, p.mean - p.stderr_);
      y1 = std::max(y1, p.mean + p.stderr_);
    }
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto sy = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  std::ostringstream band, line;
  for (const auto& p : curve.points) band << num(sx(p.env_steps)) << "," << num(sy(p.mean + p.stderr_)) << " ";
  for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
    band << num(sx(it->env_steps)) << "," << num(sy(it->mean - it->stderr_)) << " ";
  }
  for (const auto& p : curve.points) line << num(sx(p.env_steps)) << "," << num(sy(p.mean)) << " ";

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n"
      << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << left << "\" y=\"" << H - bottom + 18 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << num(x0) << "</text>\n"
      << "<text x=\"" << W - right << "\" y=\"" << H - bottom + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(x1) << "</text>\n"
      << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">environment steps</text>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << H - bottom
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(y0) << "</text>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << top + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(y1) << "</text>\n"
      << "<polygon points=\"" << band.str() << "\" fill=\"steelblue\" fill-opacity=\"0.3\" stroke=\"none\"/>\n"
      << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n"
      << "</svg>\n";
}

double area_under_curve(const std::vector<train::EvalRow>& rows) {
  double area = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    area += 0.5 * (rows[i].metric + rows[i - 1].metric) * static_cast<double>(rows[i].env_steps - rows[i - 1].env_steps);
  }
  return area;
}

std::vector<LearningCurve> aggregate_directory(const std::string& dir, const std::string& out_dir) {
  if (fs::is_regular_file(dir)) read_run_csv(dir);  // rejects aggregates with a precise error
  if (!fs::is_directory(dir)) throw std::runtime_error(dir + " is not a directory");

  std::vector<fs::path> files;
  bool saw_aggregate = false;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    if (is_run_csv(e.path())) {
      files.push_back(e.path());
    } else if (e.path().filename().string().rfind("aggregate_", 0) == 0) {
      saw_aggregate = true;
    }
  }
  if (files.empty()) {
    if (saw_aggregate) throw AlreadyAggregated(dir + " holds only aggregate files");
    throw std::runtime_error(dir + " contains no run_seed*.csv files");
  }
  std::sort(files.begin(), files.end());

  std::vector<SeedSeries> runs;
  for (const auto& f : files) runs.push_back(read_run_csv(f.string()));
  auto curves = aggregate(runs);

  fs::create_directories(out_dir);
  for (const auto& c : curves) {
    const std::string stem = (fs::path(out_dir) / ("aggregate_" + c.column)).string();
    write_curve_csv(stem + ".csv", c);
    write_curve_svg(stem + ".svg", c, c.column + " (" + std::to_string(runs.size()) + " seeds, mean and standard error)");
  }
  return curves;
}

}  // namespace restart::cli
