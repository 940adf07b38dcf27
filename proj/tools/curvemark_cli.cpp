#include "curvemark/arnold.hpp"
#include "curvemark/attacks.hpp"
#include "curvemark/bench.hpp"
#include "curvemark/codec.hpp"
#include "curvemark/error.hpp"
#include "curvemark/metrics.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

using namespace curvemark;

namespace {

struct KeyFlags
{
    std::string keys_file;
    std::string key1;
    std::optional<std::int64_t> key2;
    std::optional<std::int64_t> a;
    std::optional<std::int64_t> b;
    std::optional<double> gain;
    std::optional<int> hf_threshold;

    void add_to(CLI::App* app)
    {
        app->add_option("--keys", keys_file, "Keyset file (flags below override its fields)");
        app->add_option("--key1", key1, "PN seed, decimal or 0x hex (default 1)");
        app->add_option("--key2", key2, "Arnold iterations (default 20)");
        app->add_option("--a", a, "Arnold parameter a (default 1)");
        app->add_option("--b", b, "Arnold parameter b (default 1)");
        app->add_option("--gain", gain, "PN amplification (default 125)");
        app->add_option("--hf-threshold", hf_threshold, "HF region u+v >= T (default 30)");
    }

    KeySet resolve() const
    {
        KeySet k = keys_file.empty() ? KeySet{} : load_keyset(keys_file);
        if (!key1.empty())
            k.key1 = parse_seed(key1);
        if (key2)
            k.key2 = *key2;
        if (a)
            k.a = *a;
        if (b)
            k.b = *b;
        if (gain)
            k.gain = *gain;
        if (hf_threshold)
            k.hf_threshold = *hf_threshold;
        return k;
    }
};

std::string format_db(double v)
{
    if (std::isinf(v))
        return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Blind curvelet-domain image watermarking"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "curvemark 0.1.0");

    KeyFlags keys;

    auto* embed_cmd = app.add_subcommand("embed", "Embed a watermark and print the PSNR");
    std::string embed_in, embed_out, embed_wm, embed_seed, save_keys;
    embed_cmd->add_option("input", embed_in, "Host image (PGM/PPM/PNG)")->required();
    embed_cmd->add_option("output", embed_out, "Watermarked image (.png or PGM)")->required();
    auto* wm_opt = embed_cmd->add_option("--wm", embed_wm, "Watermark: 16 hex digits or a 0/1 string");
    embed_cmd->add_option("--seed", embed_seed, "Generate a random watermark from this seed")->excludes(wm_opt);
    embed_cmd->add_option("--save-keys", save_keys, "Write the keyset used to this file");
    keys.add_to(embed_cmd);

    auto* extract_cmd = app.add_subcommand("extract", "Blindly extract a watermark");
    std::string extract_in, expect;
    extract_cmd->add_option("input", extract_in, "Watermarked image")->required();
    extract_cmd->add_option("--expect", expect, "Reference watermark; prints NC and BER");
    keys.add_to(extract_cmd);

    auto* attack_cmd = app.add_subcommand("attack", "Apply a single attack");
    std::string attack_in, attack_out, attack_kind, attack_seed = "0";
    double attack_param = 0.0;
    attack_cmd->add_option("input", attack_in, "Input image")->required();
    attack_cmd->add_option("output", attack_out, "Attacked image")->required();
    attack_cmd->add_option("--kind", attack_kind, "jpeg, jpeg2000, gaussian_noise, salt_pepper, speckle, "
                                                  "average_filter, median_filter, gaussian_filter, histogram_eq, "
                                                  "crop, scale")
        ->required();
    attack_cmd->add_option("--param", attack_param, "Attack parameter");
    attack_cmd->add_option("--seed", attack_seed, "Noise seed (default 0)");

    auto* bench_cmd = app.add_subcommand("bench", "Run an embed/attack/extract sweep over a corpus");
    std::string bench_config, bench_out;
    bench_cmd->add_option("--config", bench_config, "Bench config (JSON)")->required();
    bench_cmd->add_option("--out", bench_out, "Run directory (overrides output_dir)");

    auto* period_cmd = app.add_subcommand("period", "Print the Arnold cat map period");
    int period_n = 512;
    std::int64_t period_a = 1, period_b = 1;
    period_cmd->add_option("--n", period_n, "Image side (default 512)");
    period_cmd->add_option("--a", period_a, "Arnold parameter a (default 1)");
    period_cmd->add_option("--b", period_b, "Arnold parameter b (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (embed_cmd->parsed()) {
            if (embed_wm.empty() && embed_seed.empty())
                throw ArgumentError("embed needs --wm or --seed");
            const KeySet k = keys.resolve();
            const GrayImage host = load_image(embed_in);
            const Watermark wm = embed_wm.empty()
                                     ? Watermark::random(watermark_capacity(host.side()), parse_seed(embed_seed))
                                     : Watermark::parse(embed_wm);
            const GrayImage marked = embed(host, wm, k);
            save_image(marked, embed_out);
            if (!save_keys.empty())
                save_keyset(k, save_keys);
            std::cout << "watermark " << wm.to_hex() << "\n";
            std::cout << "psnr_db " << format_db(psnr(host, marked)) << "\n";
        } else if (extract_cmd->parsed()) {
            const KeySet k = keys.resolve();
            std::optional<Watermark> reference;
            if (!expect.empty())
                reference = Watermark::parse(expect);
            const Watermark got = extract(load_image(extract_in), k);
            std::cout << got.to_hex() << "\n";
            if (reference) {
                std::printf("nc %.6f\nber %.6f\n", nc(*reference, got), ber(*reference, got));
            }
        } else if (attack_cmd->parsed()) {
            const AttackSpec spec{parse_attack_kind(attack_kind), attack_param};
            const GrayImage out = apply_attack(load_image(attack_in), spec, parse_seed(attack_seed));
            save_image(out, attack_out);
        } else if (bench_cmd->parsed()) {
            BenchConfig config = load_bench_config(bench_config);
            if (!bench_out.empty())
                config.output_dir = bench_out;
            const BenchResult result = run_bench(config);
            for (const BenchRecord& r : result.records)
                if (r.status != "ok")
                    std::cerr << r.image_id << " " << attack_name(r.attack.kind) << " " << r.attack.param << ": "
                              << r.status << ": " << r.message << "\n";
            std::cout << bench_summary(result.records);
            std::cout << "wrote " << result.csv_path.string() << "\n";
        } else if (period_cmd->parsed()) {
            std::cout << arnold_period(period_n, period_a, period_b) << "\n";
        }
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
