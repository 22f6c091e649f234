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

#include "hedgeclipper/model.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hedgeclipper/error.h"
#include "hedgeclipper/game.h"

namespace hedgeclipper {
namespace {

constexpr char kMagic[4] = {'H', 'G', 'C', 'L'};

template <typename T>
void PutLittleEndian(std::string& out, T value) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const char* what) {
    Need(sizeof(T), what);
    T value = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i]))
               << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string_view Take(uint64_t count, const char* what) {
    Need(count, what);
    std::string_view out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  size_t pos() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(uint64_t count, const char* what) {
    if (count > bytes_.size() - pos_) {
      throw Error(ErrorCode::kTruncated,
                  std::string("model file ends inside the ") + what);
    }
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

void Inconsistent(const std::string& message) {
  throw Error(ErrorCode::kInconsistent, message);
}

}  // namespace

double Model::Awake(const Example& example) const {
  std::vector<NodeId> routes(forest.size());
  for (size_t t = 0; t < forest.size(); ++t) {
    routes[t] = forest.tree(t).Route(example);
  }
  // Same accumulation order as AwakePrediction: rows ascending, zero
  // weights skipped.
  double sum = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const double w = sigma[i];
    if (w == 0.0) continue;
    const RowKey& key = rows[i];
    const NodeId leaf = routes[key.tree];
    const double value = forest.tree(key.tree).node(leaf).value;
    if (key.kind == RowKind::kTree) {
      sum += w * (row_scale[i] * value);
    } else if (leaf == key.leaf) {
      sum += w * (row_scale[i] * LeafSign(value));
    }
  }
  return sum;
}

double Model::Predict(const Example& example) const {
  const double awake[] = {Awake(example)};
  return ClipPredictions(awake)[0];
}

double Model::BaseScore(const Example& example) const {
  return MajorityVoteScore(forest, example);
}

void ValidateModel(const Model& model) {
  const size_t r = model.rows.size();
  if (model.sigma.size() != r || model.b.size() != r ||
      model.row_scale.size() != r) {
    Inconsistent("row registry has " + std::to_string(r) +
                 " rows but sigma/b/row_scale have " +
                 std::to_string(model.sigma.size()) + "/" +
                 std::to_string(model.b.size()) + "/" +
                 std::to_string(model.row_scale.size()));
  }
  if (model.forest.size() == 0) Inconsistent("model has no trees");
  for (const RowKey& key : model.rows) {
    if (key.tree < 0 || static_cast<size_t>(key.tree) >= model.forest.size()) {
      Inconsistent("row refers to a missing tree");
    }
    if (key.kind == RowKind::kLeaf) {
      const auto& nodes = model.forest.tree(key.tree).nodes();
      if (key.leaf < 0 || static_cast<size_t>(key.leaf) >= nodes.size() ||
          !nodes[key.leaf].is_leaf()) {
        Inconsistent("leaf row refers to a non-leaf node");
      }
    }
  }
  for (const DecisionTree& tree : model.forest.trees()) {
    const auto& nodes = tree.nodes();
    for (size_t i = 0; i < nodes.size(); ++i) {
      const TreeNode& node = nodes[i];
      if (node.is_leaf()) {
        if (node.right != kNoNode) Inconsistent("half-split node");
        continue;
      }
      // Children are created after their parent.
      if (node.left <= static_cast<NodeId>(i) ||
          node.right <= static_cast<NodeId>(i) ||
          static_cast<size_t>(node.left) >= nodes.size() ||
          static_cast<size_t>(node.right) >= nodes.size()) {
        Inconsistent("tree child index out of range");
      }
    }
  }
}

nlohmann::json ModelHeader(const Model& model) {
  nlohmann::json header;
  header["format"] = "hedgeclipper-model";
  header["config"] = ToJson(model.config);
  header["alpha"] = model.alpha;
  header["b"] = model.b;
  header["sigma"] = model.sigma;
  header["num_rows"] = model.rows.size();
  header["num_unlabeled"] = model.num_unlabeled;
  header["num_features"] = model.forest.num_features();
  nlohmann::json rows = nlohmann::json::array();
  for (const RowKey& key : model.rows) {
    rows.push_back({key.kind == RowKind::kTree ? "tree" : "leaf", key.tree,
                    key.leaf});
  }
  header["rows"] = std::move(rows);
  nlohmann::json trees = nlohmann::json::array();
  size_t total_nodes = 0;
  for (const DecisionTree& tree : model.forest.trees()) {
    nlohmann::json t;
    std::vector<int32_t> feature, left, right, count;
    for (const TreeNode& node : tree.nodes()) {
      feature.push_back(node.feature);
      left.push_back(node.left);
      right.push_back(node.right);
      count.push_back(node.train_count);
    }
    t["feature"] = feature;
    t["left"] = left;
    t["right"] = right;
    t["train_count"] = count;
    trees.push_back(std::move(t));
    total_nodes += tree.nodes().size();
  }
  header["trees"] = std::move(trees);
  header["payload"] = {{"thresholds", total_nodes},
                       {"values", total_nodes},
                       {"row_scale", model.rows.size()}};
  return header;
}

std::vector<double> ModelPayload(const Model& model) {
  std::vector<double> payload;
  for (const DecisionTree& tree : model.forest.trees()) {
    for (const TreeNode& node : tree.nodes()) payload.push_back(node.threshold);
  }
  for (const DecisionTree& tree : model.forest.trees()) {
    for (const TreeNode& node : tree.nodes()) payload.push_back(node.value);
  }
  payload.insert(payload.end(), model.row_scale.begin(), model.row_scale.end());
  return payload;
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string EncodeContainer(const nlohmann::json& header,
                            std::span<const double> payload, uint32_t version) {
  std::string out(kMagic, sizeof(kMagic));
  PutLittleEndian<uint32_t>(out, version);
  const std::string text = header.dump();
  PutLittleEndian<uint64_t>(out, text.size());
  out += text;
  PutLittleEndian<uint64_t>(out, payload.size() * sizeof(double));
  for (double v : payload) PutLittleEndian<uint64_t>(out, std::bit_cast<uint64_t>(v));
  PutLittleEndian<uint64_t>(out, Fnv1a64(out));
  return out;
}

std::string SerializeModel(const Model& model) {
  ValidateModel(model);
  return EncodeContainer(ModelHeader(model), ModelPayload(model));
}

Model DeserializeModel(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kBadFormat, "missing HGCL magic");
  }
  Reader reader(bytes);
  reader.Take(sizeof(kMagic), "magic");
  const uint32_t version = reader.Get<uint32_t>("version");
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "model format version " + std::to_string(version) +
                    ", expected " + std::to_string(kModelFormatVersion));
  }
  const std::string_view header_text =
      reader.Take(reader.Get<uint64_t>("header length"), "header");
  const uint64_t payload_bytes = reader.Get<uint64_t>("payload length");
  if (payload_bytes % sizeof(double) != 0) {
    throw Error(ErrorCode::kBadFormat, "payload is not a whole number of f64");
  }
  const std::string_view payload_raw = reader.Take(payload_bytes, "payload");
  const size_t checked = reader.pos();
  const uint64_t checksum = reader.Get<uint64_t>("checksum");
  if (reader.remaining() != 0) {
    throw Error(ErrorCode::kBadFormat, "trailing bytes after checksum");
  }
  if (checksum != Fnv1a64(bytes.substr(0, checked))) {
    throw Error(ErrorCode::kChecksum, "model checksum mismatch");
  }

  std::vector<double> payload(payload_bytes / sizeof(double));
  {
    Reader p(payload_raw);
    for (double& v : payload) v = std::bit_cast<double>(p.Get<uint64_t>("payload"));
  }

  Model model;
  try {
    const nlohmann::json header = nlohmann::json::parse(header_text);
    if (header.at("format") != "hedgeclipper-model") {
      throw Error(ErrorCode::kBadFormat, "header is not a model header");
    }
    model.config = ConfigFromJson(header.at("config"));
    model.alpha = header.at("alpha").get<double>();
    model.b = header.at("b").get<std::vector<double>>();
    model.sigma = header.at("sigma").get<std::vector<double>>();
    model.num_unlabeled = header.at("num_unlabeled").get<int32_t>();
    const size_t num_rows = header.at("num_rows").get<size_t>();
    for (const auto& row : header.at("rows")) {
      const std::string kind = row.at(0).get<std::string>();
      if (kind != "tree" && kind != "leaf") {
        throw Error(ErrorCode::kBadFormat, "unknown row kind '" + kind + "'");
      }
      model.rows.push_back({kind == "tree" ? RowKind::kTree : RowKind::kLeaf,
                            row.at(1).get<int32_t>(), row.at(2).get<NodeId>()});
    }
    if (num_rows != model.rows.size() || num_rows != model.sigma.size() ||
        num_rows != model.b.size()) {
      Inconsistent("declared " + std::to_string(num_rows) + " rows, found " +
                   std::to_string(model.rows.size()) + " rows, " +
                   std::to_string(model.sigma.size()) + " sigma and " +
                   std::to_string(model.b.size()) + " b entries");
    }

    const auto& trees = header.at("trees");
    size_t total_nodes = 0;
    for (const auto& t : trees) total_nodes += t.at("feature").size();
    if (payload.size() != 2 * total_nodes + num_rows) {
      Inconsistent("payload holds " + std::to_string(payload.size()) +
                   " values, header implies " +
                   std::to_string(2 * total_nodes + num_rows));
    }
    std::vector<DecisionTree> forest_trees;
    size_t offset = 0;
    for (const auto& t : trees) {
      const auto feature = t.at("feature").get<std::vector<int32_t>>();
      const auto left = t.at("left").get<std::vector<int32_t>>();
      const auto right = t.at("right").get<std::vector<int32_t>>();
      const auto count = t.at("train_count").get<std::vector<int32_t>>();
      if (left.size() != feature.size() || right.size() != feature.size() ||
          count.size() != feature.size() || feature.empty()) {
        Inconsistent("tree arrays disagree in length");
      }
      std::vector<TreeNode> nodes(feature.size());
      for (size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].feature = feature[i];
        nodes[i].left = left[i];
        nodes[i].right = right[i];
        nodes[i].train_count = count[i];
        nodes[i].threshold = payload[offset + i];
        nodes[i].value = payload[total_nodes + offset + i];
      }
      offset += nodes.size();
      forest_trees.emplace_back(std::move(nodes));
    }
    model.row_scale.assign(payload.begin() + 2 * total_nodes, payload.end());
    model.forest = Forest(std::move(forest_trees), model.config.forest,
                          header.at("num_features").get<int32_t>());
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kBadFormat, std::string("model header: ") + ex.what());
  }
  ValidateModel(model);
  return model;
}

void SaveModel(const Model& model, const std::string& path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path + "'");
}

Model LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return DeserializeModel(bytes);
}

}  // namespace hedgeclipper
