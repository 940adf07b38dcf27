#include "curvemark/bench.hpp"
#include "curvemark/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace curvemark;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path make_corpus(const std::string& tag)
{
    const fs::path dir = fs::temp_directory_path() / ("curvemark_corpus_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::copy_file(fs::path(CURVEMARK_TEST_DATA) / "lena.png", dir / "lena.png");
    fs::copy_file(fs::path(CURVEMARK_TEST_DATA) / "camera.png", dir / "camera.png");
    std::ofstream(dir / "notes.txt") << "not an image";
    return dir;
}

} // namespace

TEST(BenchConfig, ParseAndEcho)
{
    const std::string text = R"({
        "version": 1,
        "corpus_dir": "imgs",
        "keyset": {"key1": "0x2a", "key2": 7, "gain": 100},
        "watermark": {"hex": "0123456789abcdef"},
        "attacks": [{"kind": "jpeg", "params": [10, 20]}, {"kind": "histogram_eq"}],
        "attack_seed": 5,
        "output_dir": "out",
        "workers": 2
    })";
    const BenchConfig c = parse_bench_config(text, "/base");
    EXPECT_EQ(c.corpus_dir, fs::path("/base/imgs"));
    EXPECT_EQ(c.output_dir, fs::path("/base/out"));
    EXPECT_EQ(c.keys.key1, 42u);
    EXPECT_EQ(c.keys.key2, 7);
    EXPECT_EQ(c.keys.gain, 100.0);
    ASSERT_EQ(c.attacks.size(), 2u);
    EXPECT_EQ(c.attacks[1].params, std::vector<double>{0.0});
    EXPECT_EQ(c.workers, 2);

    const BenchConfig again = parse_bench_config(bench_config_to_json(c));
    EXPECT_EQ(again.keys, c.keys);
    EXPECT_EQ(again.watermark_hex, c.watermark_hex);
    EXPECT_EQ(again.attacks.size(), 2u);
    EXPECT_EQ(again.corpus_dir, c.corpus_dir);
}

TEST(BenchConfig, Rejections)
{
    EXPECT_THROW(parse_bench_config("{"), ArgumentError);
    EXPECT_THROW(parse_bench_config(R"({"version": 2, "corpus_dir": "a", "output_dir": "b"})"), ArgumentError);
    EXPECT_THROW(parse_bench_config(R"({"version": 1, "corpus_dir": "a", "output_dir": "b", "extra": 1})"),
                 ArgumentError);
    EXPECT_THROW(parse_bench_config(
                     R"({"version": 1, "corpus_dir": "a", "output_dir": "b", "attacks": [{"kind": "jpeg", "params": [0]}]})"),
                 ArgumentError);
    EXPECT_THROW(parse_bench_config(
                     R"({"version": 1, "corpus_dir": "a", "output_dir": "b", "watermark": {"hex": "12", "random_seed": 1}})"),
                 ArgumentError);
}

TEST(Bench, RowSeedsAreStableAndDistinct)
{
    const AttackSpec a{AttackKind::jpeg, 10};
    const AttackSpec b{AttackKind::jpeg, 20};
    EXPECT_EQ(bench_row_seed(1, "lena.png", a), bench_row_seed(1, "lena.png", a));
    EXPECT_NE(bench_row_seed(1, "lena.png", a), bench_row_seed(1, "lena.png", b));
    EXPECT_NE(bench_row_seed(1, "lena.png", a), bench_row_seed(2, "lena.png", a));
    EXPECT_NE(bench_row_seed(1, "lena.png", a), bench_row_seed(1, "camera.png", a));
}

TEST(Bench, EmptyGridWritesHeaderOnly)
{
    BenchConfig c;
    c.corpus_dir = make_corpus("empty");
    c.output_dir = fs::temp_directory_path() / "curvemark_bench_empty";
    const BenchResult r = run_bench(c);
    EXPECT_TRUE(r.records.empty());
    EXPECT_EQ(slurp(r.csv_path), std::string(kBenchCsvHeader) + "\n");
    EXPECT_TRUE(fs::exists(r.config_path));
}

TEST(Bench, RowsAreOrderedAndDeterministic)
{
    BenchConfig c;
    c.corpus_dir = make_corpus("order");
    c.attacks = {{AttackKind::salt_pepper, {0.1, 0.0}}, {AttackKind::crop, {0.25}}};
    c.workers = 4;
    c.output_dir = fs::temp_directory_path() / "curvemark_bench_a";
    const BenchResult a = run_bench(c);
    c.workers = 1;
    c.output_dir = fs::temp_directory_path() / "curvemark_bench_b";
    const BenchResult b = run_bench(c);
    EXPECT_EQ(slurp(a.csv_path), slurp(b.csv_path));

    ASSERT_EQ(a.records.size(), 6u);
    EXPECT_EQ(a.records[0].image_id, "camera.png");
    EXPECT_EQ(a.records[3].image_id, "lena.png");
    EXPECT_EQ(a.records[1].attack, (AttackSpec{AttackKind::salt_pepper, 0.0}));
    for (const BenchRecord& r : a.records) {
        EXPECT_EQ(r.status, "ok");
        EXPECT_EQ(r.keyset_hash, keyset_hash(c.keys));
    }
    EXPECT_EQ(a.records[1].nc, 1.0);
    EXPECT_EQ(a.records[1].ber, 0.0);
    EXPECT_NE(bench_summary(a.records).find("salt_pepper"), std::string::npos);
}

TEST(Bench, MissingCodecIsRecordedAsSkipped)
{
    const char* old = std::getenv("CURVEMARK_JP2_CODEC");
    const std::string saved = old ? old : "";
    ::setenv("CURVEMARK_JP2_CODEC", "/nonexistent/codec", 1);
    BenchConfig c;
    c.corpus_dir = make_corpus("skip");
    c.attacks = {{AttackKind::jpeg2000, {10}}};
    c.output_dir = fs::temp_directory_path() / "curvemark_bench_skip";
    const BenchResult r = run_bench(c);
    if (old)
        ::setenv("CURVEMARK_JP2_CODEC", saved.c_str(), 1);
    else
        ::unsetenv("CURVEMARK_JP2_CODEC");
    ASSERT_EQ(r.records.size(), 2u);
    for (const BenchRecord& rec : r.records)
        EXPECT_EQ(rec.status, "skipped");
    EXPECT_NE(slurp(r.csv_path).find(",skipped,"), std::string::npos);
}

TEST(Bench, MissingCorpusThrows)
{
    BenchConfig c;
    c.corpus_dir = "/nonexistent/corpus";
    c.output_dir = fs::temp_directory_path() / "curvemark_bench_none";
    EXPECT_THROW(run_bench(c), IoError);
}
