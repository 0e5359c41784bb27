/*
   Copyright 2026 The layoutsearch Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "layoutsearch/corpus.hpp"
#include "test_util.hpp"

using namespace layoutsearch;
using namespace layoutsearch::testing;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with `args`; stdout is captured, stderr discarded.
RunResult run(const std::string& args) {
  const std::string command = std::string(LAYOUTSEARCH_CLI) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return r;
  char buffer[4096];
  std::size_t n;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// Corpus of 6x10 layouts, untrained 16x16 weights and their index.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    const auto& d = *dir_;
    ASSERT_EQ(run("gen-corpus --per-category 10 --out " + q(d / "data")).exit_code, 0);
    ASSERT_EQ(run("train " + q(d / "data") + " --resolution 16 --epochs 0 --weights-out " + q(d / "w.bin")).exit_code, 0);
    ASSERT_EQ(run("index " + q(d / "data") + " --weights " + q(d / "w.bin") + " --out " + q(d / "idx.bin")).exit_code, 0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string artifacts() { return " --index " + q(*dir_ / "idx.bin") + " --weights " + q(*dir_ / "w.bin"); }

  static TempDir* dir_;
};

TempDir* CliTest::dir_ = nullptr;

}  // namespace

TEST_F(CliTest, GenCorpusIsDeterministic) {
  TempDir other("cli_gen");
  ASSERT_EQ(run("gen-corpus --per-category 10 --out " + q(other.path())).exit_code, 0);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_ / "data")) {
    ++files;
    EXPECT_EQ(read_file(entry.path()), read_file(other.path() / entry.path().filename()));
  }
  EXPECT_EQ(files, 61u);
  ASSERT_EQ(run("gen-corpus --per-category 50 --out " + q(other / "full")).exit_code, 0);
  EXPECT_EQ(load_corpus(other / "full").layouts.size(), 300u);
}

TEST_F(CliTest, GenCorpusReportsUnwritableDirectory) {
  TempDir other("cli_gen_bad");
  write_file(other / "file", "x");
  EXPECT_EQ(run("gen-corpus --per-category 1 --out " + q(other / "file" / "sub")).exit_code, 2);
}

TEST_F(CliTest, TrainWritesLog) {
  const json log = json::parse(read_file(*dir_ / "w.bin.log.json"));
  EXPECT_TRUE(log.contains("config"));
}

TEST_F(CliTest, IndexIsDeterministic) {
  TempDir other("cli_index");
  ASSERT_EQ(run("index " + q(*dir_ / "data") + " --weights " + q(*dir_ / "w.bin") + " --out " + q(other / "i.bin")).exit_code, 0);
  EXPECT_EQ(read_file(other / "i.bin"), read_file(*dir_ / "idx.bin"));
}

TEST_F(CliTest, CorruptWeightsAreADataError) {
  TempDir other("cli_corrupt");
  std::string bytes = read_file(*dir_ / "w.bin");
  bytes.resize(bytes.size() / 2);
  write_file(other / "w.bin", bytes);
  EXPECT_EQ(run("index " + q(*dir_ / "data") + " --weights " + q(other / "w.bin") + " --out " + q(other / "i.bin")).exit_code, 2);
}

TEST_F(CliTest, QueryRanksSelfFirst) {
  const RunResult r = run("query " + q(*dir_ / "data" / "grid_0003.xml") + artifacts());
  ASSERT_EQ(r.exit_code, 0);
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 10u);
  EXPECT_EQ(out[0], "grid_0003\t0.000000");

  const RunResult k3 = run("query " + q(*dir_ / "data" / "grid_0003.xml") + artifacts() + " --k 3 --exclude grid_0003");
  ASSERT_EQ(k3.exit_code, 0);
  const auto out3 = lines(k3.out);
  ASSERT_EQ(out3.size(), 3u);
  for (const auto& line : out3) EXPECT_EQ(line.rfind("grid_0003\t", 0), std::string::npos);
}

TEST_F(CliTest, QueryAcceptsPartialJsonLayout) {
  TempDir other("cli_query");
  write_file(other / "q.json", R"({"width":360,"height":640,"detections":[
    {"class":"InputField","box":[40,250,320,290]},{"class":"TextButton","box":[60,450,300,500]}]})");
  const RunResult r = run("query " + q(other / "q.json") + artifacts() + " --k 4 --json");
  ASSERT_EQ(r.exit_code, 0);
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["results"].size(), 4u);
  EXPECT_TRUE(doc["results"][0].contains("distance"));

  write_file(other / "bad.json", R"({"width":10,"height":10,"detections":[{"class":"Carousel","box":[0,0,1,1]}]})");
  EXPECT_EQ(run("query " + q(other / "bad.json") + artifacts()).exit_code, 2);
}

TEST_F(CliTest, EvalRetrievalCsv) {
  const RunResult r = run("eval-retrieval " + q(*dir_ / "data") + artifacts() + " --all --format csv");
  ASSERT_EQ(r.exit_code, 0);
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 7u);
  EXPECT_EQ(out[0], "K,precision");
  EXPECT_EQ(out[1].rfind("1,", 0), 0u);
  EXPECT_EQ(out[6].rfind("10,", 0), 0u);

  TempDir other("cli_eval");
  std::string csv = "id,category\n";
  for (const auto& l : load_corpus(*dir_ / "data").layouts) csv += l.id + ",same\n";
  write_file(other / "cats.csv", csv);
  const RunResult same = run("eval-retrieval " + q(*dir_ / "data") + artifacts() + " --all --format csv --categories " +
                             q(other / "cats.csv") + " --csv " + q(other / "out.csv"));
  ASSERT_EQ(same.exit_code, 0);
  for (std::size_t i = 1; i < lines(same.out).size(); ++i) {
    EXPECT_NE(lines(same.out)[i].find(",1.000000"), std::string::npos);
  }
  EXPECT_EQ(read_file(other / "out.csv"), same.out);
}

TEST_F(CliTest, EvalDetectionOfGroundTruthIsPerfect) {
  TempDir other("cli_det");
  json preds = json::array();
  for (const auto& l : load_corpus(*dir_ / "data").layouts) {
    json d = json::array();
    for (const auto& e : l.elements) {
      d.push_back({{"class", std::string(class_name(e.cls))},
                   {"box", {e.box.x_min, e.box.y_min, e.box.x_max, e.box.y_max}},
                   {"confidence", 0.9}});
    }
    preds.push_back({{"id", l.id}, {"width", l.width}, {"height", l.height}, {"detections", d}});
  }
  write_file(other / "preds.json", preds.dump());
  const RunResult r = run("eval-detection " + q(*dir_ / "data") + " " + q(other / "preds.json") + " --format csv");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(lines(r.out).front(), "class,AP,AUC");
  EXPECT_EQ(lines(r.out).back(), "mAP,1.000000,1.000000");

  // Above the confidence threshold nothing survives.
  const RunResult none = run("eval-detection " + q(*dir_ / "data") + " " + q(other / "preds.json") +
                             " --threshold 0.95 --format csv");
  ASSERT_EQ(none.exit_code, 0);
  EXPECT_EQ(lines(none.out).back(), "mAP,0.000000,0.000000");
}

TEST_F(CliTest, RenderWritesPng) {
  TempDir other("cli_render");
  ASSERT_EQ(run("render " + q(*dir_ / "data" / "login_0000.xml") + " --resolution 64 --out " + q(other / "a.png")).exit_code, 0);
  EXPECT_EQ(read_file(other / "a.png").substr(1, 3), "PNG");
}

TEST(Cli, Gradcheck) {
  const RunResult ok = run("gradcheck");
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_NE(ok.out.find("autoencoder_m4"), std::string::npos);
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
  const RunResult bad = run("gradcheck --corrupt");
  EXPECT_EQ(bad.exit_code, 3);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("no-such-command").exit_code, 1);
  EXPECT_EQ(run("query").exit_code, 1);
  EXPECT_EQ(run("train /nonexistent --weights-out x").exit_code, 1);
  EXPECT_EQ(run("--help").exit_code, 0);
}
