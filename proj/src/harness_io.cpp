// Copyright 2026 The labeldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "labeldp/harness.hpp"

namespace labeldp::harness {

namespace {

constexpr std::string_view kCsvHeader =
    "method,K,sigma,epsilon,k,trial,seed,accuracy,excess_risk,wall_time_ms";

// Shortest representation that parses back to the same double; keeps the
// CSV byte-stable and lossless.
std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("cannot parse number '" + field + "'");
  }
  return value;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void write_csv(const ExperimentResult& result, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const ResultRow& row : result.rows) {
    if (!row.error.empty()) continue;
    os << method_name(row.method) << ',' << row.num_classes << ','
       << format_double(row.sigma) << ',' << format_double(row.epsilon) << ','
       << row.k_neighbors << ',' << row.trial << ',' << row.seed << ','
       << format_double(row.accuracy) << ',' << format_double(row.excess_risk)
       << ',' << format_double(row.wall_time_ms) << '\n';
  }
}

void write_csv_file(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  write_csv(result, out);
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

ExperimentResult read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::invalid_argument("missing or malformed CSV header");
  }
  ExperimentResult result;
  int line_number = 1;
  while (std::getline(is, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != 10) {
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": expected 10 fields, got " +
                                  std::to_string(fields.size()));
    }
    ResultRow row;
    const std::optional<Method> method = parse_method(fields[0]);
    if (!method) {
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": unknown method '" + fields[0] + "'");
    }
    row.method = *method;
    row.num_classes = static_cast<int>(parse_double(fields[1]));
    row.sigma = parse_double(fields[2]);
    row.epsilon = parse_double(fields[3]);
    row.k_neighbors = static_cast<int>(parse_double(fields[4]));
    row.trial = static_cast<int>(parse_double(fields[5]));
    row.seed = std::stoull(fields[6]);
    row.accuracy = parse_double(fields[7]);
    row.excess_risk = parse_double(fields[8]);
    row.wall_time_ms = parse_double(fields[9]);
    result.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  return read_csv(in);
}

namespace {

struct Series {
  Method method;
  std::vector<Scalar> x;  // K values
  std::vector<Scalar> y;  // mean accuracy
};

std::string_view method_color(Method method) {
  switch (method) {
    case Method::kBayes:
      return "#9467bd";
    case Method::kRandomizedResponse:
      return "#1f77b4";
    case Method::kLpTwoStage:
      return "#2ca02c";
    case Method::kAlibi:
      return "#ff7f0e";
    case Method::kVectorApprox:
      return "#d62728";
  }
  return "#000000";
}

}  // namespace

std::string render_plot(const ExperimentResult& result) {
  // Mean accuracy per (method, K) over trials, methods in enum order.
  std::map<std::pair<int, int>, std::pair<Scalar, int>> cells;
  for (const ResultRow& row : result.rows) {
    if (!row.error.empty()) continue;
    auto& cell = cells[{static_cast<int>(row.method), row.num_classes}];
    cell.first += row.accuracy;
    cell.second += 1;
  }
  if (cells.empty()) {
    throw std::invalid_argument("no successful rows to plot");
  }
  std::vector<Series> series;
  for (const auto& [key, acc] : cells) {
    const Method method = static_cast<Method>(key.first);
    if (series.empty() || series.back().method != method) {
      series.push_back(Series{method, {}, {}});
    }
    series.back().x.push_back(static_cast<Scalar>(key.second));
    series.back().y.push_back(acc.first / static_cast<Scalar>(acc.second));
  }

  Scalar log_min = std::numeric_limits<Scalar>::infinity();
  Scalar log_max = -std::numeric_limits<Scalar>::infinity();
  std::vector<int> ticks;
  for (const Series& s : series) {
    for (const Scalar k : s.x) {
      log_min = std::min(log_min, std::log10(k));
      log_max = std::max(log_max, std::log10(k));
      const int ki = static_cast<int>(k);
      if (std::find(ticks.begin(), ticks.end(), ki) == ticks.end()) {
        ticks.push_back(ki);
      }
    }
  }
  std::sort(ticks.begin(), ticks.end());
  if (log_max - log_min < Scalar(1e-12)) {
    log_min -= Scalar(0.5);
    log_max += Scalar(0.5);
  }

  const double width = 720, height = 480;
  const double left = 70, right = width - 160, top = 48, bottom = height - 56;
  const auto sx = [&](Scalar k) {
    return left + (std::log10(k) - log_min) / (log_max - log_min) *
                      (right - left);
  };
  const auto sy = [&](Scalar acc) { return bottom - acc * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (left + (right - left) / 2) << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << "mean test accuracy vs number of classes</text>\n";

  // Horizontal gridlines and y labels at 0, 0.2, ..., 1.
  for (int i = 0; i <= 5; ++i) {
    const Scalar acc = Scalar(i) / Scalar(5);
    const double y = sy(acc);
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << (left - 8) << "\" y=\"" << (y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << format_double(acc) << "</text>\n";
  }
  // X ticks at the K values present.
  for (const int k : ticks) {
    const double x = sx(static_cast<Scalar>(k));
    svg << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x
        << "\" y2=\"" << (bottom + 5) << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << (bottom + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << k << "</text>\n";
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"#333333\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << bottom << "\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << (left + (right - left) / 2) << "\" y=\""
      << (bottom + 40) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\">number of classes K "
      << "(log scale)</text>\n";
  svg << "<text x=\"20\" y=\"" << (top + (bottom - top) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 20 "
      << (top + (bottom - top) / 2) << ")\">accuracy</text>\n";

  double legend_y = top + 10;
  for (const Series& s : series) {
    const std::string_view color = method_color(s.method);
    const bool dashed = s.method == Method::kBayes;
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"";
    if (dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << ' ';
      svg << format_double(sx(s.x[i])) << ',' << format_double(sy(s.y[i]));
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << "<circle cx=\"" << format_double(sx(s.x[i])) << "\" cy=\""
          << format_double(sy(s.y[i])) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    svg << "<line x1=\"" << (right + 14) << "\" y1=\"" << legend_y
        << "\" x2=\"" << (right + 44) << "\" y2=\"" << legend_y
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << "/>\n";
    svg << "<text x=\"" << (right + 50) << "\" y=\"" << (legend_y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << method_name(s.method) << "</text>\n";
    legend_y += 20;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_plot_file(const ExperimentResult& result, const std::string& path) {
  const std::string svg = render_plot(result);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << svg;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace labeldp::harness
