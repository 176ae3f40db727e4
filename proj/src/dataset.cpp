#include "stumpcover/dataset.hpp"

#include "stumpcover/random.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stumpcover {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "na" || cell == "?";
}

bool parse_double(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string format_real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset load_delimited(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) fail("cannot open dataset file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) fail(path.string() + ": empty file, header row required");
  const auto header = split_line(line, options.delimiter);

  // resolve the label column: name match first, then numeric index
  Index label_col = -1;
  if (!options.label_column.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == options.label_column) label_col = static_cast<Index>(i);
    if (label_col < 0) {
      Index idx;
      if (std::from_chars(options.label_column.data(),
                          options.label_column.data() + options.label_column.size(), idx)
                  .ec == std::errc() &&
          idx >= 0 && idx < static_cast<Index>(header.size())) {
        label_col = idx;
      } else {
        fail(path.string() + ": label column '" + options.label_column + "' not found");
      }
    }
  }

  std::vector<std::string> attr_names;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (static_cast<Index>(i) != label_col) attr_names.push_back(trim(header[i]));
  const Index n = static_cast<Index>(attr_names.size());
  if (n < 1) fail(path.string() + ": no attribute columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::map<std::string, Index> label_values;  // value -> first line seen
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line, options.delimiter);
    if (fields.size() != header.size())
      fail(path.string() + ": line " + std::to_string(line_no) + ": expected " +
           std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(n);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string cell = trim(fields[c]);
      if (static_cast<Index>(c) == label_col) {
        raw_labels.push_back(cell);
        if (!label_values.count(cell)) {
          label_values[cell] = line_no;
          if (label_values.size() > 2)
            fail(path.string() + ": line " + std::to_string(line_no) + ", column '" +
                 trim(header[c]) + "': more than 2 label values (third value '" + cell + "')");
        }
        continue;
      }
      double v;
      if (is_missing(cell)) {
        v = options.missing_fill;
      } else if (!parse_double(cell, v)) {
        fail(path.string() + ": line " + std::to_string(line_no) + ", column '" +
             trim(header[c]) + "': not numeric: '" + cell + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }

  if (rows.size() < 2) fail(path.string() + ": fewer than 2 examples");

  Dataset ds;
  ds.attribute_names = std::move(attr_names);
  ds.X.resize(static_cast<Index>(rows.size()), n);
  for (Index i = 0; i < ds.X.rows(); ++i)
    for (Index j = 0; j < n; ++j) ds.X(i, j) = rows[i][j];

  if (label_col >= 0) {
    if (label_values.size() != 2)
      fail(path.string() + ": label column must contain exactly 2 distinct values, found " +
           std::to_string(label_values.size()));
    // map is ordered, so iteration gives ascending lexicographic order
    std::string zero = label_values.begin()->first;
    std::string one = std::next(label_values.begin())->first;
    if (options.positive_label) {
      if (*options.positive_label == zero) std::swap(zero, one);
      else if (*options.positive_label != one)
        fail(path.string() + ": positive label '" + *options.positive_label +
             "' does not occur in the label column");
    }
    ds.label_names = {zero, one};
    ds.y.resize(static_cast<Index>(raw_labels.size()));
    for (Index i = 0; i < ds.y.size(); ++i) ds.y[i] = raw_labels[i] == one ? 1 : 0;
  }
  return ds;
}

void write_delimited(const std::filesystem::path& path, const Dataset& ds, char delimiter,
                     const std::string& label_column_name) {
  std::ofstream out(path);
  if (!out) fail("cannot write dataset file: " + path.string());
  for (Index j = 0; j < ds.n(); ++j) {
    if (j) out << delimiter;
    out << (j < static_cast<Index>(ds.attribute_names.size()) ? ds.attribute_names[j]
                                                              : "a" + std::to_string(j));
  }
  if (ds.labeled()) out << delimiter << label_column_name;
  out << '\n';
  for (Index i = 0; i < ds.m(); ++i) {
    for (Index j = 0; j < ds.n(); ++j) {
      if (j) out << delimiter;
      out << format_real17(ds.X(i, j));
    }
    if (ds.labeled()) {
      const std::string& name = ds.label_names.size() == 2 ? ds.label_names[ds.y[i]]
                                                           : std::to_string(ds.y[i]);
      out << delimiter << name;
    }
    out << '\n';
  }
}

Ranges load_ranges_file(const std::filesystem::path& path, const Dataset& ds) {
  std::ifstream in(path);
  if (!in) fail("cannot open range file: " + path.string());
  Ranges ranges = infer_ranges(ds.X);
  std::map<std::string, Index> by_name;
  for (std::size_t i = 0; i < ds.attribute_names.size(); ++i)
    by_name[ds.attribute_names[i]] = static_cast<Index>(i);
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string name;
    double lo, hi;
    if (!(ls >> name >> lo >> hi))
      fail(path.string() + ": line " + std::to_string(line_no) +
           ": expected `attribute_name lower upper`");
    auto it = by_name.find(name);
    if (it == by_name.end())
      fail(path.string() + ": line " + std::to_string(line_no) + ": unknown attribute '" + name +
           "'");
    const Index j = it->second;
    if (lo > ranges.lower[j] || hi < ranges.upper[j])
      fail(path.string() + ": line " + std::to_string(line_no) + ": range [" +
           format_real17(lo) + ", " + format_real17(hi) + "] for '" + name +
           "' does not bracket the data values [" + format_real17(ranges.lower[j]) + ", " +
           format_real17(ranges.upper[j]) + "]");
    ranges.lower[j] = lo;
    ranges.upper[j] = hi;
  }
  return ranges;
}

void write_ranges_file(const std::filesystem::path& path, const Dataset& ds,
                       const Ranges& ranges) {
  std::ofstream out(path);
  if (!out) fail("cannot write range file: " + path.string());
  for (Index j = 0; j < ds.n(); ++j) {
    const std::string name = j < static_cast<Index>(ds.attribute_names.size())
                                 ? ds.attribute_names[j]
                                 : "a" + std::to_string(j);
    out << name << ' ' << format_real17(ranges.lower[j]) << ' ' << format_real17(ranges.upper[j])
        << '\n';
  }
}

SynthResult synth_generate(const SynthSpec& spec) {
  if (spec.r > spec.n) fail("synth_generate: r > n");
  if (spec.n < 1) fail("synth_generate: n < 1");
  if (spec.m < 4) fail("synth_generate: m >= 4 required so both classes can be nonempty");
  if (!(spec.noise >= 0.0 && spec.noise < 0.5)) fail("synth_generate: noise outside [0, 0.5)");

  Rng rng(spec.seed);

  // planted attributes: r distinct indices, ascending
  std::vector<Index> all(spec.n);
  for (Index i = 0; i < spec.n; ++i) all[i] = i;
  rng.shuffle(all);
  std::vector<Index> planted_attrs(all.begin(), all.begin() + spec.r);
  std::sort(planted_attrs.begin(), planted_attrs.end());

  // per-stump pass probability 0.5^(1/r) makes the planted conjunction output
  // 1 with probability 1/2 under the uniform attribute distribution
  StumpConjunction planted;
  const double pass = spec.r > 0 ? std::pow(0.5, 1.0 / static_cast<double>(spec.r)) : 1.0;
  for (Index k : planted_attrs) {
    const int d = rng.uniform() < 0.5 ? +1 : -1;
    const double t = d > 0 ? 1.0 - pass : pass;
    planted.stumps.push_back({k, d, t});
  }

  Matrix X(spec.m, spec.n);
  Labels y(spec.m);
  const int max_attempts = 1000;
  for (int attempt = 0;; ++attempt) {
    if (attempt == max_attempts)
      fail("synth_generate: could not reach class balance in [0.3, 0.7]");
    for (Index i = 0; i < spec.m; ++i)
      for (Index j = 0; j < spec.n; ++j) X(i, j) = rng.uniform();
    Index positives = 0;
    for (Index i = 0; i < spec.m; ++i) {
      int label = planted.predict_row(X.row(i));
      if (spec.noise > 0.0 && rng.uniform() < spec.noise) label = 1 - label;
      y[i] = label;
      positives += label;
    }
    const double frac = static_cast<double>(positives) / static_cast<double>(spec.m);
    if (frac >= 0.3 && frac <= 0.7) break;
  }

  SynthResult result;
  result.dataset.X = std::move(X);
  result.dataset.y = std::move(y);
  result.dataset.attribute_names.reserve(spec.n);
  for (Index j = 0; j < spec.n; ++j) result.dataset.attribute_names.push_back("a" + std::to_string(j));
  result.dataset.label_names = {"0", "1"};
  result.planted = std::move(planted);
  result.spec = spec;
  return result;
}

std::string synth_manifest(const SynthResult& result) {
  std::ostringstream out;
  out << "synth-manifest\n";
  out << "seed=" << result.spec.seed << '\n';
  out << "n=" << result.spec.n << '\n';
  out << "m=" << result.spec.m << '\n';
  out << "r=" << result.spec.r << '\n';
  out << "noise=" << format_real17(result.spec.noise) << '\n';
  out << "planted-stumps=" << result.planted.stumps.size() << '\n';
  for (const auto& s : result.planted.stumps)
    out << s.attribute << ' ' << (s.direction > 0 ? "+1" : "-1") << ' '
        << format_real17(s.threshold) << '\n';
  return out.str();
}

}  // namespace stumpcover
