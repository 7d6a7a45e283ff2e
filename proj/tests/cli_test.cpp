#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "masspcf/masspcf.hpp"
#include "pcf_io.hpp"

namespace mpcf {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args, const std::atomic<bool>* interrupt = nullptr) {
  args.insert(args.begin(), "mpcf");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err, interrupt);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mpcf_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string guide_json() {
    return write("guide.json", R"({"dtype": "f64", "pcfs": [
      [[0, 5], [2, 3], [5, 0]],
      [[0, 2], [4, 7], [8, 1], [9, 0]],
      [[0, 4], [2, 3], [3, 1], [5, 0]],
      [[0, 2], [6, 1], [7, 0]]
    ]})");
  }

  fs::path dir_;
};

TEST_F(CliTest, PdistGuideMatrix) {
  const auto r = run_cli({"pdist", guide_json(), "-q"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0,34,6,12\n34,0,34,24\n6,34,0,10\n12,24,10,0\n");
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, KernelGuideMatrixJson) {
  const auto r = run_cli({"kernel", guide_json(), "--format", "json", "-q"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "[[77,53,55,38],\n[53,213,31,51],\n[55,31,43,26],\n[38,51,26,25]]\n");
}

TEST_F(CliTest, PdistMatchesLibraryBitwise) {
  const std::string in = guide_json();
  const auto r = run_cli({"pdist", in, "--p", "3.5", "-q", "-o", path("d.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto m = io::parse_matrix_csv<double>(slurp(path("d.csv")));
  const auto X = std::get<std::vector<Pcf64>>(make_collection(io::load(in).pcfs));
  EXPECT_EQ(m, pdist(X, 3.5));

  const auto bounded = run_cli({"pdist", in, "--bounds", "1", "6", "-q"});
  ASSERT_EQ(bounded.code, 0) << bounded.err;
  const auto mb = io::parse_matrix_csv<double>(bounded.out);
  EXPECT_EQ(mb(2, 3), lp_distance(X[2], X[3], 1.0, 1.0, 6.0));
  EXPECT_EQ(run_cli({"pdist", in, "--bounds", "0", "inf", "-q"}).out,
            run_cli({"pdist", in, "-q"}).out);
}

TEST_F(CliTest, ThreadFlagDoesNotChangeBytes) {
  const std::string in = write("syn.json", [] {
    std::ostringstream ss;
    io::write_json(ss, synthetic_benchmark<double>(30, RngSpec{4}));
    return ss.str();
  }());
  const auto one = run_cli({"pdist", in, "--threads", "1", "-q"});
  const auto four = run_cli({"pdist", in, "--threads", "4", "-q"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

TEST_F(CliTest, TrivialInputs) {
  EXPECT_EQ(run_cli({"pdist", write("one.json", R"({"pcfs": [[[0, 1], [3, 0]]]})"), "-q"}).out, "0\n");
  EXPECT_EQ(run_cli({"kernel", write("zz.json", R"({"pcfs": [[[0, 0]], [[0, 0]]]})"), "-q"}).out, "0,0\n0,0\n");
}

TEST_F(CliTest, ValidationErrorNamesFileAndRow) {
  const std::string bad = write("bad.json", R"({"pcfs": [[[0, 1], [1, 2]], [[0, 1], [2, 2], [1, 0]]]})");
  const auto r = run_cli({"pdist", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("pcf 1 row 2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("NonIncreasingTimes"), std::string::npos) << r.err;
}

TEST_F(CliTest, CsvDirectoryAndLineDiagnostics) {
  write("set/b.csv", "t,v\n0,2\n6,1\n7,0\n");
  write("set/a.csv", "t,v\n0,4\n2,3\n3,1\n5,0\n");
  const auto r = run_cli({"pdist", path("set"), "-q"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0,10\n10,0\n");

  write("broken/a.csv", "t,v\n0,1\n\n2,1\n2,0\n");
  const auto e = run_cli({"pdist", path("broken")});
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.err.find("a.csv:5 (row 2)"), std::string::npos) << e.err;

  write("noheader/a.csv", "0,1\n");
  EXPECT_EQ(run_cli({"pdist", path("noheader")}).code, 2);
  write("cols/a.csv", "t,v\n0,1,2\n");
  EXPECT_EQ(run_cli({"pdist", path("cols")}).code, 2);
}

TEST_F(CliTest, MixedPrecisionExitsTwo) {
  const auto f32 = write("a.json", R"({"dtype": "f32", "pcfs": [[[0, 1]]]})");
  const auto f64 = write("b.json", R"({"dtype": "f64", "pcfs": [[[0, 1]]]})");
  const auto r = run_cli({"kernel", f32, f64, "-q"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("MixedPrecision"), std::string::npos) << r.err;
}

TEST_F(CliTest, DivergentExitsThreeNamingPair) {
  const auto in = write("div.json", R"({"pcfs": [[[0, 0]], [[0, 1], [1, 0]], [[0, 2]]]})");
  const auto r = run_cli({"pdist", in, "-q"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("pair (0, 2)"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadArguments) {
  const std::string in = guide_json();
  EXPECT_EQ(run_cli({"pdist", in, "--p", "0.5"}).code, 2);
  EXPECT_EQ(run_cli({"pdist", in, "--bounds", "3", "1"}).code, 2);
  EXPECT_EQ(run_cli({"pdist", in, "--bounds", "x", "1"}).code, 2);
  EXPECT_EQ(run_cli({"pdist", in, "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"pdist", path("missing.json")}).code, 2);
  EXPECT_EQ(run_cli({"pdist", write("junk.json", "{\"pcfs\": [[[0, 1]]")}).code, 2);
  EXPECT_EQ(run_cli({"pdist", write("key.json", R"({"pcfz": []})")}).code, 2);
  EXPECT_EQ(run_cli({"pdist", write("dt.json", R"({"dtype": "f16", "pcfs": [[[0, 1]]]})")}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, MeanKeepsInputFormat) {
  const auto j = run_cli({"mean", write("m.json", R"({"pcfs": [[[0, 4], [2, 3], [3, 1], [5, 0]], [[0, 2], [6, 1], [7, 0]]]})")});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(j.out, "{\"dtype\":\"f64\",\"pcfs\":[\n[[0,3],[2,2.5],[3,1.5],[5,1],[6,0.5],[7,0]]\n]}\n");

  write("set/a.csv", "t,v\n0,1\n1,1\n2,0\n");
  const auto c = run_cli({"mean", path("set")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out, "t,v\n0,1\n2,0\n");

  EXPECT_EQ(run_cli({"mean", write("empty.json", R"({"pcfs": []})")}).code, 2);
}

TEST_F(CliTest, GenerateIsByteIdenticalAndReloads) {
  const auto a = run_cli({"generate", "--kind", "synthetic", "--count", "3", "--seed", "7"});
  const auto b = run_cli({"generate", "--kind", "synthetic", "--count", "3", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run_cli({"generate", "--count", "3", "--seed", "8"}).out);
  const auto in = write("gen.json", a.out);
  EXPECT_EQ(run_cli({"pdist", in, "-q"}).code, 0);
}

TEST_F(CliTest, GenerateSinNoiseless) {
  const auto r = run_cli({"generate", "--kind", "sin", "--count", "2", "--n-points", "20", "--sigma", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pcfs = io::parse_json(r.out, "gen");
  ASSERT_EQ(pcfs.size(), 2u);
  for (const auto& any : pcfs) {
    const auto& f = std::get<Pcf64>(any);
    EXPECT_EQ(f.size(), 21u);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_EQ(f.value(i), std::sin(2.0 * std::numbers::pi * f.time(i)));
    }
  }
}

TEST_F(CliTest, JsonRoundTripIsBitwise) {
  for (const char* dtype : {"f32", "f64"}) {
    const auto r = run_cli({"generate", "--count", "20", "--seed", "3", "--dtype", dtype});
    ASSERT_EQ(r.code, 0);
    const auto first = make_collection(io::parse_json(r.out, "a"));
    std::ostringstream again;
    io::write_json(again, first);
    EXPECT_EQ(again.str(), r.out);
    const auto second = make_collection(io::parse_json(again.str(), "b"));
    EXPECT_EQ(first, second);
  }
  const auto f32 = synthetic_benchmark<float>(20, RngSpec{12});
  std::ostringstream ss;
  io::write_json(ss, f32);
  EXPECT_EQ(std::get<std::vector<Pcf32>>(make_collection(io::parse_json(ss.str(), "c"))), f32);
}

TEST_F(CliTest, CsvRoundTripIsBitwise) {
  const auto fs = synthetic_benchmark<double>(5, RngSpec{21});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::ostringstream ss;
    io::write_csv(ss, fs[i]);
    EXPECT_EQ(io::parse_csv(ss.str(), "x.csv"), fs[i]);
  }
}

TEST_F(CliTest, ProgressLinesAndQuiet) {
  const std::string in = write("syn.json", [] {
    std::ostringstream ss;
    io::write_json(ss, synthetic_benchmark<double>(40, RngSpec{4}));
    return ss.str();
  }());
  const auto loud = run_cli({"pdist", in, "--threads", "2"});
  ASSERT_EQ(loud.code, 0);
  std::istringstream lines(loud.err);
  std::string line;
  int last = -1;
  while (std::getline(lines, line)) {
    ASSERT_EQ(line.rfind("progress: ", 0), 0u) << line;
    const int pct = std::stoi(line.substr(10));
    EXPECT_GT(pct, last);
    last = pct;
  }
  EXPECT_EQ(last, 100);
  EXPECT_TRUE(run_cli({"pdist", in, "--quiet"}).err.empty());
}

TEST_F(CliTest, InterruptDiscardsOutput) {
  const std::string in = write("syn.json", [] {
    std::ostringstream ss;
    io::write_json(ss, synthetic_benchmark<double>(200, RngSpec{4}));
    return ss.str();
  }());
  const std::atomic<bool> interrupted{true};
  const auto r = run_cli({"pdist", in, "-q", "-o", path("out.csv")}, &interrupted);
  EXPECT_EQ(r.code, 130);
  EXPECT_FALSE(fs::exists(path("out.csv")));
}

TEST(Io, FormatNumberIsShortestRoundTrip) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(0.1f), "0.1");
  EXPECT_EQ(io::format_number(34.0), "34");
  EXPECT_EQ(io::format_number(2.497745854619703), "2.497745854619703");
}

} // namespace
} // namespace mpcf
