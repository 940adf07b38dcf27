#pragma once

#include "curvemark/attacks.hpp"
#include "curvemark/codec.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace curvemark {

inline constexpr int kBenchConfigVersion = 1;

struct AttackSweep
{
    AttackKind kind = AttackKind::jpeg;
    std::vector<double> params;
};

/// Benchmark description, stored as JSON (see README for the schema).
struct BenchConfig
{
    std::filesystem::path corpus_dir;
    KeySet keys;
    std::optional<std::string> watermark_hex; // same watermark for every image
    std::uint64_t watermark_seed = 1;         // used when watermark_hex is empty
    std::vector<AttackSweep> attacks;
    std::uint64_t attack_seed = 1;
    std::filesystem::path output_dir;
    int workers = 0; // 0 = hardware concurrency
};

/// Relative paths in the document are resolved against base_dir.
BenchConfig parse_bench_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
BenchConfig load_bench_config(const std::filesystem::path& path);
std::string bench_config_to_json(const BenchConfig& config);

struct BenchRecord
{
    std::string image_id;
    AttackSpec attack;
    double psnr_db = 0.0; // host vs watermarked
    double nc = 0.0;
    double ber = 0.0;
    std::string status; // ok, skipped or error
    std::string message;
    std::uint64_t seed = 0;
    std::string keyset_hash;
};

inline constexpr const char* kBenchCsvHeader = "image_id,attack,param,psnr_db,nc,ber,status,seed,keyset_hash";

/// Seed used for one (image, attack, param) row.
std::uint64_t bench_row_seed(std::uint64_t attack_seed, const std::string& image_id, const AttackSpec& spec);

struct BenchResult
{
    std::vector<BenchRecord> records; // image, then attack sweep, then param order
    std::filesystem::path csv_path;
    std::filesystem::path config_path;
};

/// Embeds, attacks and extracts every (image, attack, param) triple and
/// writes results.csv plus an echo of the config into config.output_dir.
/// Per-row failures are recorded in the status column.
BenchResult run_bench(const BenchConfig& config);

std::string bench_csv(const std::vector<BenchRecord>& records);

/// Mean NC per attack and parameter over rows with status ok.
std::string bench_summary(const std::vector<BenchRecord>& records);

} // namespace curvemark
