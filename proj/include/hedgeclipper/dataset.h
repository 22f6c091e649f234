// Copyright 2026 The HedgeClipper Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sparse binary-classification datasets: svmlight/CSV parsing, svmlight
// serialization and the labeled/unlabeled split protocol.

#ifndef HEDGECLIPPER_DATASET_H_
#define HEDGECLIPPER_DATASET_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hedgeclipper {

struct Feature {
  int32_t index;  // 1-based
  double value;

  bool operator==(const Feature&) const = default;
};

// A sparse feature vector with an optional label in {-1, +1}. Feature
// indices are strictly increasing; absent features read as 0.
struct Example {
  std::vector<Feature> features;
  std::optional<int> label;

  double Get(int32_t index) const;
  bool operator==(const Example&) const = default;
};

// Maps label tokens from the input file to {-1, +1}.
class LabelMap {
 public:
  // "+1" and "1" map to +1; "-1", "0" and "2" map to -1.
  static LabelMap Default();

  // Parses "tok:+1,tok:-1,..." as given on the command line.
  static LabelMap Parse(std::string_view spec);

  void Set(std::string token, int label);
  std::optional<int> Lookup(std::string_view token) const;

 private:
  std::map<std::string, int, std::less<>> labels_;
};

// One example per line: "<label> <idx>:<val> ...". A line whose first token
// already contains ':' is read as unlabeled. Blank lines and '#' comments
// are skipped.
std::vector<Example> ParseSvmlight(std::istream& in,
                                   const LabelMap& labels = LabelMap::Default());
std::vector<Example> ParseSvmlight(std::string_view text,
                                   const LabelMap& labels = LabelMap::Default());

// Dense CSV, last column is the label token; zero entries are not stored.
// Column k (0-based) becomes feature index k + 1.
std::vector<Example> ParseCsv(std::istream& in, bool has_header,
                              const LabelMap& labels = LabelMap::Default());

enum class FileFormat { kSvmlight, kCsv };

std::vector<Example> ReadDataset(const std::string& path, FileFormat format,
                                 const LabelMap& labels = LabelMap::Default(),
                                 bool csv_header = false);

// Writes examples so that ParseSvmlight reads them back exactly. Unlabeled
// examples are written without a label token; an unlabeled example with no
// features would be a blank line and is rejected with InvalidArgument.
void WriteSvmlight(std::ostream& out, std::span<const Example> examples);
std::string FormatDouble(double value);

// Largest feature index present (0 for an all-empty set).
int32_t FeatureDimension(std::span<const Example> examples);

struct DatasetSplit {
  std::vector<Example> labeled;
  // Labels are retained for evaluation only.
  std::vector<Example> unlabeled;
  uint64_t seed = 0;
  // Positions of the split members in the input, both ascending.
  std::vector<size_t> labeled_positions;
  std::vector<size_t> unlabeled_positions;
};

// Draws a uniformly random, seeded labeled subset of size m; everything else
// becomes unlabeled. Both halves keep input order.
DatasetSplit MakeSplit(std::span<const Example> examples, int64_t m,
                       uint64_t seed);

}  // namespace hedgeclipper

#endif  // HEDGECLIPPER_DATASET_H_
