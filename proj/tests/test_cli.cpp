#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& Dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("qsteg_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string P(const char* name) { return (Dir() / name).string(); }

int Run(const std::string& args) {
  const std::string cmd = std::string(QSTEG_CLI) + " " + args + " >" + P("stdout.txt") +
                          " 2>" + P("stderr.txt");
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

struct Cleanup {
  ~Cleanup() { fs::remove_all(Dir()); }
} cleanup;

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(Run("") == 1);
  CHECK(Run("frobnicate") == 1);
  CHECK(Run("capture --key-out " + P("k.pgm")) == 1);
  CHECK(Run("capture --key-out a --cover-out b --bogus-flag 1") == 1);
  CHECK(Run("capture --key-out a --cover-out b --pattern stripes") == 1);
  CHECK(Run("--help") == 0);
}

TEST_CASE("capture, embed and extract round trip") {
  REQUIRE(Run("capture --width 512 --height 512 --seed 7 --key-out " + P("k.pgm") +
              " --cover-out " + P("c.pgm")) == 0);
  const std::string message = "The quick brown fox jumps over the lazy dog.\n\x01\x02\xff";
  WriteText(P("msg.bin"), message);
  REQUIRE(Run("embed --key " + P("k.pgm") + " --cover " + P("c.pgm") + " --message " +
              P("msg.bin") + " --out " + P("s.pgm")) == 0);
  REQUIRE(Run("extract --stego " + P("s.pgm") + " --key " + P("k.pgm") + " --out " +
              P("out.bin")) == 0);
  CHECK(Slurp(P("out.bin")) == message);

  SUBCASE("fixed seeds reproduce every artifact") {
    REQUIRE(Run("capture --width 512 --height 512 --seed 7 --key-out " + P("k2.pgm") +
                " --cover-out " + P("c2.pgm")) == 0);
    CHECK(Slurp(P("k2.pgm")) == Slurp(P("k.pgm")));
    CHECK(Slurp(P("c2.pgm")) == Slurp(P("c.pgm")));
    REQUIRE(Run("embed --key " + P("k.pgm") + " --cover " + P("c.pgm") + " --message " +
                P("msg.bin") + " --out " + P("s2.pgm")) == 0);
    CHECK(Slurp(P("s2.pgm")) == Slurp(P("s.pgm")));
  }
  SUBCASE("a freshly captured wrong key fails to decode") {
    REQUIRE(Run("capture --width 512 --height 512 --seed 8 --key-out " + P("w.pgm") +
                " --cover-out " + P("w2.pgm")) == 0);
    CHECK(Run("extract --stego " + P("s.pgm") + " --key " + P("w.pgm") + " --out " +
              P("bad.bin")) == 3);
    CHECK_FALSE(fs::exists(P("bad.bin")));
  }
  SUBCASE("mismatched plan flags fail to decode") {
    CHECK(Run("extract --stego " + P("s.pgm") + " --key " + P("k.pgm") +
              " --mixing-seed 5 --out " + P("bad.bin")) == 3);
  }
  SUBCASE("oversized messages leave no output") {
    WriteText(P("big.bin"), std::string(40000, 'x'));
    CHECK(Run("embed --key " + P("k.pgm") + " --cover " + P("c.pgm") + " --message " +
              P("big.bin") + " --out " + P("none.pgm")) == 1);
    CHECK_FALSE(fs::exists(P("none.pgm")));
  }
  SUBCASE("I/O and format errors exit 2") {
    CHECK(Run("embed --key " + P("missing.pgm") + " --cover " + P("c.pgm") + " --message " +
              P("msg.bin") + " --out " + P("x.pgm")) == 2);
    WriteText(P("eight.pgm"), "P5\n1 1\n255\n\x01");
    CHECK(Run("extract --stego " + P("eight.pgm") + " --key " + P("k.pgm") + " --out " +
              P("x.bin")) == 2);
    CHECK_FALSE(fs::exists(P("x.bin")));
  }
}

TEST_CASE("analysis flags LSB replacement but not key/cover stego") {
  // Low photon counts: LSB replacement is invisible to these detectors at
  // 1e4 counts per pixel on an image this size.
  const std::string scene = "--width 256 --height 256 --mean-level 100";
  REQUIRE(Run("calibrate " + scene + " --trials 100 --out " + P("cal.txt")) == 0);
  REQUIRE(Run("capture " + scene + " --seed 1234 --key-out " + P("ak.pgm") + " --cover-out " +
              P("ac.pgm")) == 0);

  REQUIRE(Run("demo-lsb --image " + P("ac.pgm") + " --seed 3 --out " + P("lsb.pgm") +
              " --hist-original " + P("h0.csv") + " --hist-embedded " + P("h1.csv")) == 0);
  CHECK(Slurp(P("h0.csv")).rfind("bin_low,bin_high,count\n", 0) == 0);
  CHECK(Run("analyze --image " + P("lsb.pgm") + " --calibration " + P("cal.txt") +
            " --out " + P("r1.txt") + " --fail-on-suspicious") == 4);
  CHECK(Slurp(P("r1.txt")).find("verdict = suspicious") != std::string::npos);
  CHECK(Run("analyze --image " + P("lsb.pgm") + " --calibration " + P("cal.txt") +
            " --out " + P("r1b.txt")) == 0);

  WriteText(P("m.bin"), std::string(500, 'q'));
  REQUIRE(Run("embed --key " + P("ak.pgm") + " --cover " + P("ac.pgm") + " --message " +
              P("m.bin") + " --out " + P("as.pgm")) == 0);
  CHECK(Run("analyze --image " + P("as.pgm") + " --calibration " + P("cal.txt") + " --out " +
            P("r2.txt") + " --fail-on-suspicious") == 0);
  const std::string report = Slurp(P("r2.txt"));
  CHECK(report.find("verdict = clean") != std::string::npos);
  CHECK(report.find("autocorr = na") != std::string::npos);

  CHECK(Run("analyze --image " + P("ac.pgm") + " --reference " + P("ak.pgm") +
            " --calibration " + P("cal.txt") + " --out " + P("r3.txt")) == 0);
  CHECK(Slurp(P("r3.txt")).find("sample_size.norm_dev = 65536") != std::string::npos);

  CHECK(Run("analyze --image " + P("ac.pgm") + " --calibration " + P("missing.txt") +
            " --out " + P("r4.txt")) == 2);
  REQUIRE(Run("calibrate " + scene + " --trials 10 --out " + P("thin.txt")) == 0);
  CHECK(Run("analyze --image " + P("ac.pgm") + " --calibration " + P("thin.txt") +
            " --out " + P("r5.txt")) == 2);
  CHECK_FALSE(fs::exists(P("r5.txt")));
}
