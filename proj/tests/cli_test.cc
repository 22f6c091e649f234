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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hedgeclipper/model.h"
#include "test_util.h"

namespace hedgeclipper {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string WriteExamples(const std::string& name, std::span<const Example> ex) {
  const std::string path = testing::TempPath(name);
  std::ofstream file(path);
  WriteSvmlight(file, ex);
  return path;
}

struct Files {
  std::string labeled, unlabeled, pool, model;
};

const Files& Inputs() {
  static const Files files = [] {
    Rng rng(60);
    Files f;
    f.labeled = WriteExamples("cli_labeled.svm", testing::SyntheticExamples(rng, 60));
    f.unlabeled = WriteExamples("cli_unlabeled.svm", testing::SyntheticExamples(rng, 120));
    f.pool = WriteExamples("cli_pool.svm", testing::SyntheticExamples(rng, 250));
    f.model = testing::TempPath("cli_model.bin");
    return f;
  }();
  return files;
}

size_t Lines(const std::string& text) {
  return static_cast<size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST_CASE("train writes a model") {
  const Files& f = Inputs();
  const Outcome r = Run({"train", "--labeled", f.labeled, "--unlabeled", f.unlabeled,
                         "--out", f.model, "--trees", "10", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(f.model));
  CHECK(r.out.find("\"game_value\"") != std::string::npos);
  const Model model = LoadModel(f.model);
  CHECK(model.forest.size() == 10);
}

TEST_CASE("usage errors exit with 2") {
  const Files& f = Inputs();
  Outcome r = Run({"train", "--labeled", f.labeled, "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(Run({}).code == 2);
  CHECK(Run({"fly"}).code == 2);
  CHECK(Run({"train", "--labeled", f.labeled}).code == 2);
  CHECK(Run({"train", "--labeled", f.labeled, "--unlabeled", f.unlabeled, "--out",
             f.model, "--alpha", "zero"}).code == 2);
  CHECK(Run({"train", "--labeled", f.labeled, "--unlabeled", f.unlabeled, "--out",
             f.model, "--alpha", "0"}).code == 2);
  CHECK(Run({"train", "--labeled", f.labeled, "--unlabeled", f.unlabeled, "--out",
             f.model, "--solver", "newton"}).code == 2);
  CHECK(Run({"eval", "--data", f.pool, "--repeats", "0"}).code == 2);
  CHECK(Run({"--help"}).code == 0);
}

TEST_CASE("runtime errors exit with 1") {
  const std::string bad = testing::TempPath("cli_bad.svm");
  std::ofstream(bad) << "+1 2:1 1:1\n";
  const Files& f = Inputs();
  const Outcome r = Run({"train", "--labeled", bad, "--unlabeled", f.unlabeled,
                         "--out", testing::TempPath("cli_unused.bin")});
  CHECK(r.code == 1);
  CHECK(r.err.find("NonIncreasingIndex") != std::string::npos);
  const std::string junk = testing::TempPath("cli_junk.bin");
  std::ofstream(junk) << "not a model";
  CHECK(Run({"predict", "--model", junk, "--input", f.unlabeled}).code == 1);
}

TEST_CASE("predict and margins") {
  const Files& f = Inputs();
  REQUIRE(Run({"train", "--labeled", f.labeled, "--unlabeled", f.unlabeled, "--out",
               f.model, "--trees", "10"}).code == 0);
  const Outcome p = Run({"predict", "--model", f.model, "--input", f.unlabeled});
  CHECK(p.code == 0);
  CHECK(Lines(p.out) == 121);
  CHECK(p.out.rfind("id,awake,g\n", 0) == 0);

  const std::string csv = testing::TempPath("cli_margins.csv");
  CHECK(Run({"margins", "--model", f.model, "--input", f.unlabeled, "--out", csv}).code == 0);
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(Lines(text.str()) == 121);
  CHECK(text.str().rfind("id,awake,label\n", 0) == 0);
}

TEST_CASE("eval and bench") {
  const Files& f = Inputs();
  const Outcome e = Run({"eval", "--data", f.pool, "--labels", "40", "--repeats", "3",
                         "--trees", "10"});
  CHECK(e.code == 0);
  CHECK(Lines(e.out) == 6);  // header, three seeds, mean, std
  CHECK(e.out.find("\nmean\t") != std::string::npos);

  const Outcome b = Run({"bench", "--data", f.pool, "--labels", "40", "--repeats", "2",
                         "--trees", "10", "--b-method", "hoeffding"});
  CHECK(b.code == 0);
  CHECK(b.out.rfind("seed\thc_auc\tbaserf_auc\n", 0) == 0);
  CHECK(Lines(b.out) == 3);
}

TEST_CASE("csv input with a label map") {
  const std::string csv = testing::TempPath("cli_data.csv");
  const std::string test_csv = testing::TempPath("cli_test.csv");
  {
    std::ofstream a(csv), t(test_csv);
    a << "f1,f2,y\n";
    t << "f1,f2,y\n";
    Rng rng(61);
    for (int i = 0; i < 80; ++i) {
      const bool pos = UniformIndex(rng, 2);
      (i < 50 ? a : t) << UniformUnit(rng) + pos << ',' << UniformUnit(rng) << ','
                       << (pos ? "yes" : "no") << '\n';
    }
  }
  const Outcome r = Run({"train", "--labeled", csv, "--unlabeled", test_csv, "--out",
                         testing::TempPath("cli_csv.bin"), "--format", "csv",
                         "--csv-header", "--label-map", "yes:+1,no:-1", "--trees", "5"});
  CHECK(r.code == 0);
}

}  // namespace
}  // namespace hedgeclipper
