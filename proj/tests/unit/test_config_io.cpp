#include <gtest/gtest.h>

#include <filesystem>

#include "sg2d/config.hpp"
#include "sg2d/io.hpp"

using namespace sg2d;

TEST(Config, MinimalDefaults) {
  const auto c = parse_config_text("N = 8\nbeta_sq = 3.14159\n");
  EXPECT_EQ(c.M, 32);
  EXPECT_EQ(c.coupling, 1.0);
  EXPECT_EQ(c.s, 0.2);
  EXPECT_EQ(c.N_drift, 2);
  EXPECT_EQ(c.grid().points_per_axis, 32);
}

TEST(Config, NyquistViolation) {
  try {
    parse_config_text("N = 8\nM = 8\nbeta_sq = 1\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Nyquist"), std::string::npos);
  }
}

TEST(Config, UnknownKeySuggests) {
  try {
    parse_config_text("N = 8\nbetasq = 1\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("beta_sq"), std::string::npos);
  }
}

TEST(Config, MissingRequired) {
  EXPECT_THROW(parse_config_text("N = 8\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("beta_sq = 1\n"), std::invalid_argument);
}

TEST(Config, BadValues) {
  EXPECT_THROW(parse_config_text("N = 8\nbeta_sq = 1\ns = 1.5\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("N = 8.5\nbeta_sq = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("N = 8\nbeta_sq = abc\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("N = 8\nN = 4\nbeta_sq = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("N = 8\nbeta_sq = 1\nbridge = \"sharp\"\n"), std::invalid_argument);
}

TEST(Config, RoundTrip) {
  const auto c = parse_config_text(
      "# comment\nN = 16   # trailing\nbeta_sq = 3.141592653589793\ncoupling = 0.3\n"
      "bridge = \"quintic_polynomial\"\nmodel = \"parabolic\"\nNs = [16, 32, 64]\n"
      "alphas = [0.1, 0.5]\nhs = [0.03125, 0.015625]\nseed = 18446744073709551615\nout_dir = \"runs/a\"\n");
  const auto again = parse_config_text(serialize_config(c));
  EXPECT_TRUE(again == c);
  EXPECT_EQ(again.seed, 18446744073709551615ULL);
  EXPECT_EQ(again.Ns, (std::vector<int>{16, 32, 64}));
}

TEST(Io, GitBlobHash) {
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Io, SnapshotRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "sg2d_snapshot_test.bin";
  const std::vector<double> data{1.0, -0.0, 1e-300, 3.141592653589793};
  write_snapshot(path, {{"name", "x"}}, data);
  const auto snap = read_snapshot(path);
  EXPECT_EQ(snap.header.at("name"), "x");
  EXPECT_EQ(snap.data, data);
  EXPECT_EQ(std::filesystem::file_size(path), snap.header.dump().size() + 1 + 8 * data.size());
  std::filesystem::remove(path);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 6.02e23, -2.5e-300}) EXPECT_EQ(std::stod(format_double(x)), x);
}
