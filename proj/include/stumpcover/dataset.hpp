#pragma once

#include "stumpcover/stumps.hpp"
#include "stumpcover/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stumpcover {

/// Immutable after construction; safe to share across readers.
struct Dataset {
  Matrix X;                                  // m x n
  Labels y;                                  // empty when loaded without labels
  std::vector<std::string> attribute_names;  // size n
  std::vector<std::string> label_names;      // text forms mapped to {0, 1}

  Index m() const { return X.rows(); }
  Index n() const { return X.cols(); }
  bool labeled() const { return y.size() == X.rows() && y.size() > 0; }

  Index count_label(int value) const {
    Index c = 0;
    for (Index i = 0; i < y.size(); ++i)
      if (y[i] == value) ++c;
    return c;
  }
};

struct LoadOptions {
  std::string label_column;  // name or 0-based index; empty = unlabeled data
  char delimiter = ',';
  // By default the two label values map to {0,1} in ascending lexicographic
  // order of their text forms; setting positive_label pins that value to 1.
  std::optional<std::string> positive_label;
  double missing_fill = 0.0;  // substituted for empty / NA cells
};

/// Parse a delimited text file with one header row. Diagnostics name the
/// offending line and column.
Dataset load_delimited(const std::filesystem::path& path, const LoadOptions& options = {});

void write_delimited(const std::filesystem::path& path, const Dataset& ds, char delimiter = ',',
                     const std::string& label_column_name = "label");

/// Sidecar range file: lines of `attribute_name lower upper`. Listed
/// attributes override inferred ranges; every data value must fall inside.
Ranges load_ranges_file(const std::filesystem::path& path, const Dataset& ds);

void write_ranges_file(const std::filesystem::path& path, const Dataset& ds, const Ranges& ranges);

struct SynthSpec {
  Index n = 0;          // attribute count
  Index m = 0;          // example count (>= 4)
  Index r = 0;          // planted informative attributes, r <= n
  double noise = 0.0;   // label flip probability in [0, 0.5)
  std::uint64_t seed = 0;
};

struct SynthResult {
  Dataset dataset;
  StumpConjunction planted;  // labels the data exactly before noise
  SynthSpec spec;
};

/// Deterministic generator: attribute values uniform on [0,1], labels from a
/// planted conjunction of r stumps, then independent label flips. Resamples
/// until the positive-class fraction lies in [0.3, 0.7].
SynthResult synth_generate(const SynthSpec& spec);

/// Plain-text manifest naming the seed and the planted stumps.
std::string synth_manifest(const SynthResult& result);

/// round-trip-exact decimal rendering (17 significant digits)
std::string format_real17(double v);

}  // namespace stumpcover
