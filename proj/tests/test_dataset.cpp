#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "rashomon/dataset.hpp"
#include "rashomon/errors.hpp"
#include "test_support.hpp"

namespace rashomon {
namespace {

TEST(LoadCsv, Monk1HasElevenFeatures) {
  const auto d = load_csv(testing::data_path("monk1.csv"));
  EXPECT_EQ(d.n_features(), 11U);
  EXPECT_EQ(d.n_rows(), 124U);
  EXPECT_EQ(d.n_classes(), 2U);
}

TEST(LoadCsv, SingleRowInfersTwoClasses) {
  const auto d = parse_csv("f1,label\n1,0\n");
  EXPECT_EQ(d.n_rows(), 1U);
  EXPECT_EQ(d.n_features(), 1U);
  EXPECT_EQ(d.n_classes(), 2U);
  EXPECT_EQ(d.feature(0, 0), 1);
  EXPECT_EQ(d.label(0), 0);
}

TEST(LoadCsv, MinClassesWidensC) {
  EXPECT_EQ(parse_csv("f1,label\n1,0\n0,1\n", 4).n_classes(), 4U);
}

TEST(LoadCsv, NonBinaryCellNamesCoordinates) {
  try {
    parse_csv("a,b,label\n0,1,0\n1,2,1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'2'"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, RejectsNonContiguousLabels) {
  EXPECT_THROW(parse_csv("a,label\n0,0\n1,2\n"), ValidationError);
}

TEST(LoadCsv, RejectsEmptyInput) {
  EXPECT_THROW(parse_csv(""), ValidationError);
  EXPECT_THROW(parse_csv("a,label\n"), ValidationError);
}

TEST(LoadCsv, RejectsRaggedRows) {
  EXPECT_THROW(parse_csv("a,b,label\n0,1\n"), ParseError);
}

TEST(LoadCsv, AcceptsCrlfAndTrailingBlankLines) {
  const auto d = parse_csv("a,b,label\r\n0,1,1\r\n1,1,0\r\n\r\n");
  EXPECT_EQ(d.n_rows(), 2U);
  EXPECT_EQ(d.label(0), 1);
}

TEST(LoadCsv, MissingFileIsParseError) {
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), ParseError);
}

TEST(Csv, RoundTripIsIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = testing::random_dataset(1 + seed * 7, 1 + seed % 9, 2 + seed % 3, 0.2, seed);
    const auto back = parse_csv(to_csv(d), d.n_classes());
    ASSERT_EQ(back.n_rows(), d.n_rows());
    ASSERT_EQ(back.n_features(), d.n_features());
    EXPECT_EQ(back.labels(), d.labels());
    EXPECT_EQ(back.feature_names(), d.feature_names());
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      EXPECT_TRUE(std::ranges::equal(back.row(r), d.row(r)));
    }
  }
}

TEST(Csv, WriteThenLoadFromDisk) {
  const auto d = testing::random_dataset(30, 5, 2, 0.1, 3);
  const auto path = std::filesystem::temp_directory_path() / "rashomon_roundtrip.csv";
  write_csv(d, path);
  EXPECT_EQ(load_csv(path).labels(), d.labels());
  std::filesystem::remove(path);
}

TEST(BinaryDatasetTest, ColumnMasksMatchCells) {
  const auto d = testing::random_dataset(70, 6, 3, 0.0, 11);
  for (std::size_t f = 0; f < d.n_features(); ++f) {
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      EXPECT_EQ(d.column(f).test(r), d.feature(r, f) == 1);
    }
  }
  std::size_t total = 0;
  for (std::size_t c = 0; c < d.n_classes(); ++c) total += d.class_rows(c).count();
  EXPECT_EQ(total, d.n_rows());
}

TEST(BinaryDatasetTest, RejectsOutOfRangeLabel) {
  EXPECT_THROW(testing::make_dataset({{0}, {1}}, {0, 2}, 2), ValidationError);
}

TEST(Split, ProtocolSizes) {
  struct Case {
    std::size_t n;
    std::size_t test, train, candidate;
  };
  // Iris, MONK-1, MONK-3, COMPAS/Bar7 at 200 rows.
  for (const auto& c : {Case{150, 30, 24, 96}, Case{124, 25, 19, 80}, Case{122, 25, 19, 78},
                        Case{200, 40, 32, 128}}) {
    const auto d = testing::random_dataset(c.n, 4, 2, 0.0, c.n);
    const auto s = split(d, 0.2, 0.2, 42);
    EXPECT_EQ(s.test.size(), c.test) << c.n;
    EXPECT_EQ(s.train.size(), c.train) << c.n;
    EXPECT_EQ(s.candidate.size(), c.candidate) << c.n;
  }
}

TEST(Split, DeterministicUnderSeed) {
  const auto d = testing::random_dataset(150, 4, 3, 0.0, 1);
  const auto a = split(d, 0.2, 0.2, 7);
  const auto b = split(d, 0.2, 0.2, 7);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.candidate, b.candidate);
  EXPECT_EQ(a.test, b.test);
  const auto c = split(d, 0.2, 0.2, 8);
  EXPECT_NE(a.test, c.test);
}

TEST(Split, PartitionsAllRowsProperty) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 40 + uniform_below(rng, 300);
    const double tf = 0.05 + 0.5 * uniform_unit(rng);
    const double itf = 0.1 + 0.5 * uniform_unit(rng);
    const auto d = testing::random_dataset(n, 2, 2, 0.0, seed);
    const auto s = split(d, tf, itf, seed);
    std::set<RowIndex> all;
    for (const auto* part : {&s.train, &s.candidate, &s.test}) {
      for (const auto r : *part) EXPECT_TRUE(all.insert(r).second) << "row in two partitions";
    }
    EXPECT_EQ(all.size(), n);
    EXPECT_EQ(*all.rbegin(), n - 1);
    EXPECT_EQ(s.test.size(), static_cast<std::size_t>(std::ceil(tf * n - 1e-9)));
  }
}

TEST(Split, EmptyPartitionIsConfigError) {
  const auto d = testing::random_dataset(4, 2, 2, 0.0, 0);
  EXPECT_THROW(split(d, 0.2, 0.2, 0), ConfigError);
  EXPECT_THROW(split(d, 0.0, 0.2, 0), ConfigError);
  EXPECT_THROW(split(d, 0.5, 1.0, 0), ConfigError);
}

TEST(LabelNoise, ZeroProbabilityIsIdentity) {
  const auto d = testing::random_dataset(500, 3, 3, 0.0, 5);
  EXPECT_EQ(inject_label_noise(d, 0.0, 99).labels(), d.labels());
}

TEST(LabelNoise, CertainFlipComplementsBinaryLabels) {
  const auto d = testing::random_dataset(300, 3, 2, 0.0, 5);
  const auto noisy = inject_label_noise(d, 1.0, 1);
  for (std::size_t r = 0; r < d.n_rows(); ++r) EXPECT_EQ(noisy.label(r), 1 - d.label(r));
}

TEST(LabelNoise, FlipCountWithinThreeSigma) {
  const auto d = testing::random_dataset(1000, 3, 2, 0.0, 5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto noisy = inject_label_noise(d, 0.3, seed);
    std::size_t flipped = 0;
    for (std::size_t r = 0; r < d.n_rows(); ++r) flipped += noisy.label(r) != d.label(r);
    const double sigma = std::sqrt(1000 * 0.3 * 0.7);
    EXPECT_LE(std::abs(static_cast<double>(flipped) - 300.0), 3.0 * sigma) << flipped;
  }
}

TEST(LabelNoise, MulticlassFlipsToADifferentClass) {
  const auto d = testing::random_dataset(400, 3, 4, 0.0, 2);
  const auto noisy = inject_label_noise(d, 1.0, 3);
  std::set<ClassId> targets;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    EXPECT_NE(noisy.label(r), d.label(r));
    targets.insert(noisy.label(r));
  }
  EXPECT_GT(targets.size(), 2U);
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    EXPECT_TRUE(std::ranges::equal(noisy.row(r), d.row(r)));
  }
}

TEST(LabelNoise, RejectsBadProbability) {
  const auto d = testing::xor_dataset();
  EXPECT_THROW(inject_label_noise(d, 1.5, 0), ConfigError);
  EXPECT_THROW(inject_label_noise(d, -0.1, 0), ConfigError);
}

TEST(Subsample, KeepsRequestedRows) {
  const auto d = load_csv(testing::data_path("compas200.csv"));
  EXPECT_EQ(subsample_rows(d, 50, 1).n_rows(), 50U);
  EXPECT_THROW(subsample_rows(d, 0, 1), ConfigError);
}

}  // namespace
}  // namespace rashomon
