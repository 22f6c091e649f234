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

#include "cli.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "hedgeclipper/config.h"
#include "hedgeclipper/dataset.h"
#include "hedgeclipper/error.h"
#include "hedgeclipper/model.h"
#include "hedgeclipper/pipeline.h"

namespace hedgeclipper {
namespace {

struct Options {
  std::string labeled;
  std::string unlabeled;
  std::string out;
  std::string model;
  std::string input;
  std::string data;
  std::string test;
  std::string report;
  std::string dump_s;
  std::string format = "svmlight";
  bool csv_header = false;
  std::string label_map;

  int64_t labels = 100;
  int repeats = 10;
  uint64_t seed = 0;
  int trees = 100;
  int min_leaf = 0;
  std::string alpha = "1.0";
  int epochs = 30;
  int batch = 128;
  double step0 = 0.0;
  std::string solver = "sgd";
  std::string b_method = "bootstrap";
  double delta = 0.05;
  int boot_resamples = 100;
  double boot_quantile = 0.10;
  double train_frac = 0.5;
};

std::string AlphaCheck(const std::string& text) {
  if (text == "auto") return {};
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) return "expected a number or 'auto'";
    if (!(v > 0)) return "alpha must be positive";
  } catch (const std::exception&) {
    return "expected a number or 'auto'";
  }
  return {};
}

void AddDataOptions(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "Input format")
      ->check(CLI::IsMember({"svmlight", "csv"}))
      ->capture_default_str();
  app->add_flag("--csv-header", o.csv_header, "CSV input has a header line");
  app->add_option("--label-map", o.label_map,
                  "Label tokens, e.g. 'yes:+1,no:-1'");
}

void AddPipelineOptions(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app->add_option("--trees", o.trees, "Number of trees")->capture_default_str();
  app->add_option("--min-leaf", o.min_leaf,
                  "Minimum examples per leaf (0: 10 if m >= 1000, else 4)")
      ->capture_default_str();
  app->add_option("--alpha", o.alpha, "Hinge weight, or 'auto'")
      ->check(CLI::Validator(AlphaCheck, "ALPHA"))
      ->capture_default_str();
  app->add_option("--epochs", o.epochs, "SGD epochs")->capture_default_str();
  app->add_option("--batch", o.batch, "SGD minibatch size")
      ->capture_default_str();
  app->add_option("--step0", o.step0,
                  "Initial SGD step (0: 1 / largest row norm)")
      ->capture_default_str();
  app->add_option("--solver", o.solver, "Game solver")
      ->check(CLI::IsMember({"sgd", "exact"}))
      ->capture_default_str();
  app->add_option("--b-method", o.b_method, "Correlation bound estimator")
      ->check(CLI::IsMember({"bootstrap", "hoeffding"}))
      ->capture_default_str();
  app->add_option("--delta", o.delta, "Hoeffding confidence")
      ->capture_default_str();
  app->add_option("--boot-resamples", o.boot_resamples, "Bootstrap resamples")
      ->capture_default_str();
  app->add_option("--boot-quantile", o.boot_quantile,
                  "Bootstrap lower quantile")
      ->capture_default_str();
  app->add_option("--train-frac", o.train_frac,
                  "Fraction of labels used to grow the forest (1: all, "
                  "shared with estimation)")
      ->capture_default_str();
}

void AddProtocolOptions(CLI::App* app, Options& o) {
  app->add_option("--data", o.data, "Labeled pool")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--test", o.test, "Extra unlabeled examples")
      ->check(CLI::ExistingFile);
  app->add_option("--labels", o.labels, "Labeled examples per split")
      ->capture_default_str();
  app->add_option("--repeats", o.repeats, "Seeded splits")
      ->capture_default_str();
}

PipelineConfig MakeConfig(const Options& o) {
  PipelineConfig c;
  c.forest.num_trees = o.trees;
  c.forest.min_leaf = o.min_leaf;
  if (o.alpha == "auto") {
    c.alpha_auto = true;
  } else {
    c.alpha = std::stod(o.alpha);
  }
  c.sgd.epochs = o.epochs;
  c.sgd.batch_size = o.batch;
  c.sgd.step0 = o.step0;
  c.solver = o.solver == "exact" ? Solver::kExact : Solver::kSgd;
  c.estimation.method = o.b_method == "hoeffding" ? BoundMethod::kHoeffding
                                                  : BoundMethod::kBootstrap;
  c.estimation.delta = o.delta;
  c.estimation.resamples = o.boot_resamples;
  c.estimation.quantile = o.boot_quantile;
  c.train_frac = o.train_frac;
  c.seed = o.seed;
  return c;
}

std::vector<Example> Load(const Options& o, const std::string& path) {
  const LabelMap map =
      o.label_map.empty() ? LabelMap::Default() : LabelMap::Parse(o.label_map);
  return ReadDataset(path, o.format == "csv" ? FileFormat::kCsv
                                             : FileFormat::kSvmlight,
                     map, o.csv_header);
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : "NA";
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void WithOutput(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  fn(file);
  if (!file) throw Error(ErrorCode::kIo, "short write to '" + path + "'");
}

int Train(const Options& o, std::ostream& out) {
  const PipelineConfig config = MakeConfig(o);
  const auto labeled = Load(o, o.labeled);
  const auto unlabeled = Load(o, o.unlabeled);
  const RunResult run = RunHedgeClipper(labeled, unlabeled, config);
  SaveModel(run.model, o.out);
  if (!o.dump_s.empty()) {
    WithOutput(o.dump_s, out, [&](std::ostream& s) { run.s.DumpCoordinate(s); });
  }
  const std::string report = run.report.ToJson().dump(2) + "\n";
  if (!o.report.empty()) {
    WithOutput(o.report, out, [&](std::ostream& s) { s << report; });
  }
  out << report;
  return kExitOk;
}

int Predict(const Options& o, std::ostream& out) {
  const Model model = LoadModel(o.model);
  const auto examples = Load(o, o.input);
  WithOutput(o.out, out, [&](std::ostream& s) {
    s << "id,awake,g\n";
    for (size_t j = 0; j < examples.size(); ++j) {
      const double awake = model.Awake(examples[j]);
      const double a[] = {awake};
      s << j << ',' << FormatDouble(awake) << ','
        << FormatDouble(ClipPredictions(a)[0]) << '\n';
    }
  });
  return kExitOk;
}

int Margins(const Options& o, std::ostream& out) {
  const Model model = LoadModel(o.model);
  const auto examples = Load(o, o.input);
  if (o.out.empty()) {
    ExportMargins(model, examples, out);
  } else {
    ExportMargins(model, examples, o.out);
  }
  return kExitOk;
}

ProtocolResult Protocol(const Options& o) {
  const auto pool = Load(o, o.data);
  std::vector<Example> extra;
  if (!o.test.empty()) extra = Load(o, o.test);
  return RunProtocol(pool, extra, o.labels, o.repeats, MakeConfig(o), o.seed);
}

int Eval(const Options& o, std::ostream& out) {
  const ProtocolResult result = Protocol(o);
  WithOutput(o.out, out, [&](std::ostream& s) {
    s << "seed\tauc\terror\n";
    for (const SeedResult& r : result.runs) {
      s << r.seed << '\t' << Optional(r.hc_auc) << '\t' << Optional(r.error)
        << '\n';
    }
    s << "mean\t" << FormatDouble(result.hc_auc.mean) << '\t'
      << FormatDouble(result.error.mean) << '\n';
    s << "std\t" << FormatDouble(result.hc_auc.stddev) << '\t'
      << FormatDouble(result.error.stddev) << '\n';
  });
  return kExitOk;
}

int Bench(const Options& o, std::ostream& out, std::ostream& err) {
  const ProtocolResult result = Protocol(o);
  WithOutput(o.out, out, [&](std::ostream& s) {
    s << "seed\thc_auc\tbaserf_auc\n";
    for (const SeedResult& r : result.runs) {
      s << r.seed << '\t' << Optional(r.hc_auc) << '\t'
        << Optional(r.baserf_auc) << '\n';
    }
  });
  err << "mean hc_auc " << FormatDouble(result.hc_auc.mean) << " (sd "
      << FormatDouble(result.hc_auc.stddev) << "), baserf_auc "
      << FormatDouble(result.baserf_auc.mean) << " (sd "
      << FormatDouble(result.baserf_auc.stddev) << ")\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Minimax aggregation of random-forest trees and leaves"};
  app.name("hedgeclipper");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;

  CLI::App* train = app.add_subcommand("train", "Fit and save a model");
  train->add_option("--labeled", o.labeled, "Labeled examples")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--unlabeled", o.unlabeled, "Unlabeled examples")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--out", o.out, "Model file")->required();
  train->add_option("--report", o.report, "Also write the JSON report here");
  train->add_option("--dump-s", o.dump_s,
                    "Write S as 'row col value' lines");
  AddDataOptions(train, o);
  AddPipelineOptions(train, o);

  CLI::App* predict = app.add_subcommand("predict", "Score a file");
  predict->add_option("--model", o.model, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--input", o.input, "Examples to score")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--out", o.out, "CSV output (default stdout)");
  AddDataOptions(predict, o);

  CLI::App* margins =
      app.add_subcommand("margins", "Export awake predictions as CSV");
  margins->add_option("--model", o.model, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  margins->add_option("--input", o.input, "Unlabeled examples")
      ->required()
      ->check(CLI::ExistingFile);
  margins->add_option("--out", o.out, "CSV output (default stdout)");
  AddDataOptions(margins, o);

  CLI::App* eval =
      app.add_subcommand("eval", "AUC and error over seeded splits");
  AddProtocolOptions(eval, o);
  eval->add_option("--out", o.out, "TSV output (default stdout)");
  AddDataOptions(eval, o);
  AddPipelineOptions(eval, o);

  CLI::App* bench =
      app.add_subcommand("bench", "Paired comparison with the forest vote");
  AddProtocolOptions(bench, o);
  bench->add_option("--out", o.out, "TSV output (default stdout)");
  AddDataOptions(bench, o);
  AddPipelineOptions(bench, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    Validate(MakeConfig(o));
    if (o.labels < 1 || o.repeats < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--labels and --repeats must be positive");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*train) return Train(o, out);
    if (*predict) return Predict(o, out);
    if (*margins) return Margins(o, out);
    if (*eval) return Eval(o, out);
    if (*bench) return Bench(o, out, err);
  } catch (const Error& e) {
    err << "hedgeclipper: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "hedgeclipper: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace hedgeclipper
