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

#include "hedgeclipper/dataset.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hedgeclipper/error.h"
#include "hedgeclipper/random.h"

namespace hedgeclipper {
namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void ParseFailure(ErrorCode code, size_t line_no,
                               const std::string& what) {
  throw Error(code, "line " + std::to_string(line_no) + ": " + what);
}

bool ParseDouble(std::string_view token, double* out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), *out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool ParseIndex(std::string_view token, int32_t* out) {
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), *out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

int MapLabel(const LabelMap& labels, std::string_view token, size_t line_no) {
  std::optional<int> label = labels.Lookup(token);
  if (!label) {
    ParseFailure(ErrorCode::kUnmappedLabel, line_no,
                 "label '" + std::string(token) + "' has no mapping");
  }
  return *label;
}

}  // namespace

double Example::Get(int32_t index) const {
  auto it = std::lower_bound(
      features.begin(), features.end(), index,
      [](const Feature& f, int32_t i) { return f.index < i; });
  return (it != features.end() && it->index == index) ? it->value : 0.0;
}

LabelMap LabelMap::Default() {
  LabelMap map;
  map.Set("+1", +1);
  map.Set("1", +1);
  map.Set("-1", -1);
  map.Set("0", -1);
  map.Set("2", -1);
  return map;
}

LabelMap LabelMap::Parse(std::string_view spec) {
  LabelMap map;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = Trim(spec.substr(start, end - start));
    if (!item.empty()) {
      size_t colon = item.rfind(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorCode::kInvalidArgument,
                    "label map entry '" + std::string(item) +
                        "' must look like token:+1 or token:-1");
      }
      std::string_view target = Trim(item.substr(colon + 1));
      int label;
      if (target == "+1" || target == "1") {
        label = +1;
      } else if (target == "-1") {
        label = -1;
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "label map target must be +1 or -1, got '" +
                        std::string(target) + "'");
      }
      map.Set(std::string(Trim(item.substr(0, colon))), label);
    }
    start = end + 1;
  }
  return map;
}

void LabelMap::Set(std::string token, int label) {
  labels_[std::move(token)] = label;
}

std::optional<int> LabelMap::Lookup(std::string_view token) const {
  auto it = labels_.find(token);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::vector<Example> ParseSvmlight(std::istream& in, const LabelMap& labels) {
  std::vector<Example> examples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (size_t hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    std::vector<std::string_view> tokens = SplitWhitespace(view);
    if (tokens.empty()) continue;

    Example example;
    size_t first_feature = 0;
    if (tokens[0].find(':') == std::string_view::npos) {
      example.label = MapLabel(labels, tokens[0], line_no);
      first_feature = 1;
    }
    example.features.reserve(tokens.size() - first_feature);
    for (size_t t = first_feature; t < tokens.size(); ++t) {
      std::string_view token = tokens[t];
      size_t colon = token.find(':');
      Feature feature;
      if (colon == std::string_view::npos ||
          !ParseIndex(token.substr(0, colon), &feature.index) ||
          !ParseDouble(token.substr(colon + 1), &feature.value)) {
        ParseFailure(ErrorCode::kParse, line_no,
                     "malformed feature '" + std::string(token) + "'");
      }
      if (feature.index < 1) {
        ParseFailure(ErrorCode::kParse, line_no,
                     "feature indices are 1-based, got " +
                         std::to_string(feature.index));
      }
      if (!std::isfinite(feature.value)) {
        ParseFailure(ErrorCode::kParse, line_no, "non-finite feature value");
      }
      if (!example.features.empty() &&
          feature.index <= example.features.back().index) {
        ParseFailure(ErrorCode::kNonIncreasingIndex, line_no,
                     "feature index " + std::to_string(feature.index) +
                         " does not increase");
      }
      example.features.push_back(feature);
    }
    examples.push_back(std::move(example));
  }
  return examples;
}

std::vector<Example> ParseSvmlight(std::string_view text,
                                   const LabelMap& labels) {
  std::istringstream in{std::string(text)};
  return ParseSvmlight(in, labels);
}

std::vector<Example> ParseCsv(std::istream& in, bool has_header,
                              const LabelMap& labels) {
  std::vector<Example> examples;
  std::string line;
  size_t line_no = 0;
  size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view view(line);
    size_t start = 0;
    while (true) {
      size_t comma = view.find(',', start);
      cells.push_back(Trim(view.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (has_header && columns == 0) {
      columns = cells.size();
      continue;
    }
    if (columns == 0) columns = cells.size();
    if (cells.size() != columns) {
      ParseFailure(ErrorCode::kParse, line_no,
                   "expected " + std::to_string(columns) + " columns, got " +
                       std::to_string(cells.size()));
    }
    Example example;
    example.label = MapLabel(labels, cells.back(), line_no);
    for (size_t c = 0; c + 1 < cells.size(); ++c) {
      double value;
      if (!ParseDouble(cells[c], &value) || !std::isfinite(value)) {
        ParseFailure(ErrorCode::kParse, line_no,
                     "bad numeric cell '" + std::string(cells[c]) + "'");
      }
      if (value != 0.0) {
        example.features.push_back({static_cast<int32_t>(c + 1), value});
      }
    }
    examples.push_back(std::move(example));
  }
  return examples;
}

std::vector<Example> ReadDataset(const std::string& path, FileFormat format,
                                 const LabelMap& labels, bool csv_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return format == FileFormat::kCsv ? ParseCsv(in, csv_header, labels)
                                      : ParseSvmlight(in, labels);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string FormatDouble(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void WriteSvmlight(std::ostream& out, std::span<const Example> examples) {
  for (const Example& example : examples) {
    if (!example.label && example.features.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "an unlabeled example without features has no svmlight line");
    }
    bool first = true;
    if (example.label) {
      out << (*example.label > 0 ? "+1" : "-1");
      first = false;
    }
    for (const Feature& f : example.features) {
      if (!first) out << ' ';
      out << f.index << ':' << FormatDouble(f.value);
      first = false;
    }
    out << '\n';
  }
}

int32_t FeatureDimension(std::span<const Example> examples) {
  int32_t d = 0;
  for (const Example& e : examples) {
    if (!e.features.empty()) d = std::max(d, e.features.back().index);
  }
  return d;
}

DatasetSplit MakeSplit(std::span<const Example> examples, int64_t m,
                       uint64_t seed) {
  const int64_t total = static_cast<int64_t>(examples.size());
  if (m <= 0 || m > total) {
    throw Error(ErrorCode::kInvalidArgument,
                "labeled budget " + std::to_string(m) + " outside [1, " +
                    std::to_string(total) + "]");
  }
  if (m == total) {
    throw Error(ErrorCode::kEmptyUnlabeled,
                "labeled budget consumes every example");
  }
  for (const Example& e : examples) {
    if (!e.label) {
      throw Error(ErrorCode::kInvalidArgument,
                  "split input must be fully labeled");
    }
  }

  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  for (int64_t i = 0; i < m; ++i) {
    size_t j = i + UniformIndex(rng, total - i);
    std::swap(order[i], order[j]);
  }
  std::vector<char> chosen(examples.size(), 0);
  for (int64_t i = 0; i < m; ++i) chosen[order[i]] = 1;

  DatasetSplit split;
  split.seed = seed;
  split.labeled.reserve(m);
  split.unlabeled.reserve(total - m);
  for (size_t i = 0; i < examples.size(); ++i) {
    if (chosen[i]) {
      split.labeled.push_back(examples[i]);
      split.labeled_positions.push_back(i);
    } else {
      split.unlabeled.push_back(examples[i]);
      split.unlabeled_positions.push_back(i);
    }
  }
  return split;
}

}  // namespace hedgeclipper
