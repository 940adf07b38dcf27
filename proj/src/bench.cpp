#include "curvemark/bench.hpp"

#include "curvemark/error.hpp"
#include "curvemark/metrics.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace curvemark {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string format_number(double v, const char* fmt)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string format_param(double v)
{
    return format_number(v, "%.10g");
}

[[noreturn]] void config_error(const std::string& what)
{
    throw ArgumentError("bench config: " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            config_error("unknown field '" + key + "' in " + where);
}

std::uint64_t seed_from_json(const json& v, const std::string& field)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_string())
        return parse_seed(v.get<std::string>());
    config_error(field + " must be a non-negative integer or a decimal/0x string");
}

fs::path resolve(const fs::path& p, const fs::path& base)
{
    if (p.empty() || p.is_absolute() || base.empty())
        return p;
    return base / p;
}

KeySet keyset_from_json(const json& j)
{
    if (!j.is_object())
        config_error("keyset must be an object");
    check_keys(j, {"key1", "key2", "a", "b", "gain", "hf_threshold"}, "keyset");
    KeySet k;
    if (j.contains("key1"))
        k.key1 = seed_from_json(j["key1"], "keyset.key1");
    if (j.contains("key2"))
        k.key2 = j["key2"].get<std::int64_t>();
    if (j.contains("a"))
        k.a = j["a"].get<std::int64_t>();
    if (j.contains("b"))
        k.b = j["b"].get<std::int64_t>();
    if (j.contains("gain"))
        k.gain = j["gain"].get<double>();
    if (j.contains("hf_threshold"))
        k.hf_threshold = j["hf_threshold"].get<int>();
    return k;
}

bool is_image_file(const fs::path& p)
{
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

struct CorpusEntry
{
    std::string id;
    fs::path path;
};

std::vector<CorpusEntry> list_corpus(const fs::path& dir)
{
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw IoError("corpus directory not found: " + dir.string());
    std::vector<CorpusEntry> entries;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && is_image_file(e.path()))
            entries.push_back({e.path().filename().string(), e.path()});
    std::sort(entries.begin(), entries.end(), [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
    return entries;
}

struct EmbeddedImage
{
    GrayImage marked;
    Watermark wm;
    double psnr_db = 0.0;
    std::string error;
};

template <typename F>
void parallel_for(std::size_t count, int workers, F&& f)
{
    const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                f(i);
        });
}

} // namespace

BenchConfig parse_bench_config(const std::string& json_text, const fs::path& base_dir)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        config_error("top level must be an object");
    check_keys(j,
               {"version", "corpus_dir", "keyset", "keyset_file", "watermark", "attacks", "attack_seed", "output_dir",
                "workers"},
               "config");
    try {
        if (!j.contains("version") || j["version"].get<int>() != kBenchConfigVersion)
            config_error("version must be " + std::to_string(kBenchConfigVersion));
        BenchConfig c;
        if (!j.contains("corpus_dir"))
            config_error("corpus_dir is required");
        c.corpus_dir = resolve(j["corpus_dir"].get<std::string>(), base_dir);
        if (!j.contains("output_dir"))
            config_error("output_dir is required");
        c.output_dir = resolve(j["output_dir"].get<std::string>(), base_dir);

        if (j.contains("keyset") && j.contains("keyset_file"))
            config_error("give either keyset or keyset_file, not both");
        if (j.contains("keyset"))
            c.keys = keyset_from_json(j["keyset"]);
        else if (j.contains("keyset_file"))
            c.keys = load_keyset(resolve(j["keyset_file"].get<std::string>(), base_dir));

        if (j.contains("watermark")) {
            const json& w = j["watermark"];
            if (!w.is_object())
                config_error("watermark must be an object");
            check_keys(w, {"hex", "random_seed"}, "watermark");
            if (w.contains("hex") == w.contains("random_seed"))
                config_error("watermark needs exactly one of hex or random_seed");
            if (w.contains("hex")) {
                c.watermark_hex = w["hex"].get<std::string>();
                Watermark::parse(*c.watermark_hex);
            } else {
                c.watermark_seed = seed_from_json(w["random_seed"], "watermark.random_seed");
            }
        }

        if (j.contains("attacks")) {
            if (!j["attacks"].is_array())
                config_error("attacks must be an array");
            for (const json& a : j["attacks"]) {
                if (!a.is_object())
                    config_error("each attack must be an object");
                check_keys(a, {"kind", "params"}, "attack");
                AttackSweep sweep;
                sweep.kind = parse_attack_kind(a.at("kind").get<std::string>());
                if (a.contains("params"))
                    sweep.params = a["params"].get<std::vector<double>>();
                else if (sweep.kind == AttackKind::histogram_eq)
                    sweep.params = {0.0};
                if (sweep.params.empty())
                    config_error(std::string(attack_name(sweep.kind)) + " needs a non-empty params list");
                for (double p : sweep.params)
                    validate_attack({sweep.kind, p});
                c.attacks.push_back(std::move(sweep));
            }
        }
        if (j.contains("attack_seed"))
            c.attack_seed = seed_from_json(j["attack_seed"], "attack_seed");
        if (j.contains("workers")) {
            c.workers = j["workers"].get<int>();
            if (c.workers < 0)
                config_error("workers must be >= 0");
        }
        return c;
    } catch (const json::exception& e) {
        config_error(e.what());
    }
}

BenchConfig load_bench_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open bench config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_config(ss.str(), path.parent_path());
}

std::string bench_config_to_json(const BenchConfig& c)
{
    char key1[32];
    std::snprintf(key1, sizeof(key1), "0x%016" PRIx64, c.keys.key1);
    json j;
    j["version"] = kBenchConfigVersion;
    j["corpus_dir"] = c.corpus_dir.string();
    j["keyset"] = {{"key1", key1},       {"key2", c.keys.key2}, {"a", c.keys.a},
                   {"b", c.keys.b},      {"gain", c.keys.gain}, {"hf_threshold", c.keys.hf_threshold}};
    if (c.watermark_hex)
        j["watermark"] = {{"hex", *c.watermark_hex}};
    else
        j["watermark"] = {{"random_seed", c.watermark_seed}};
    j["attacks"] = json::array();
    for (const AttackSweep& s : c.attacks)
        j["attacks"].push_back({{"kind", std::string(attack_name(s.kind))}, {"params", s.params}});
    j["attack_seed"] = c.attack_seed;
    j["output_dir"] = c.output_dir.string();
    j["workers"] = c.workers;
    return j.dump(2) + "\n";
}

std::uint64_t bench_row_seed(std::uint64_t attack_seed, const std::string& image_id, const AttackSpec& spec)
{
    std::uint64_t h = fnv1a(image_id);
    h = fnv1a("|", h);
    h = fnv1a(attack_name(spec.kind), h);
    h = fnv1a("|" + format_param(spec.param), h);
    return splitmix64(attack_seed ^ h);
}

BenchResult run_bench(const BenchConfig& config)
{
    if (config.output_dir.empty())
        throw ArgumentError("bench output directory is not set");
    const std::vector<CorpusEntry> corpus = list_corpus(config.corpus_dir);
    const std::string hash = keyset_hash(config.keys);
    const int workers =
        config.workers > 0 ? config.workers : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

    std::vector<EmbeddedImage> embedded(corpus.size());
    bool any_attack = false;
    for (const AttackSweep& s : config.attacks)
        any_attack = any_attack || !s.params.empty();
    if (any_attack) {
        parallel_for(corpus.size(), workers, [&](std::size_t i) {
            EmbeddedImage& e = embedded[i];
            try {
                const GrayImage host = load_image(corpus[i].path);
                if (host.side() % kBlockSide != 0)
                    throw ArgumentError("side " + std::to_string(host.side()) + " is not a multiple of " +
                                        std::to_string(kBlockSide));
                e.wm = config.watermark_hex
                           ? Watermark::parse(*config.watermark_hex)
                           : Watermark::random(watermark_capacity(host.side()),
                                               splitmix64(config.watermark_seed ^ fnv1a(corpus[i].id)));
                e.marked = embed(host, e.wm, config.keys);
                e.psnr_db = psnr(host, e.marked);
            } catch (const Error& err) {
                e.error = err.what();
            }
        });
    }

    std::vector<BenchRecord> records;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (const AttackSweep& s : config.attacks) {
            for (double p : s.params) {
                BenchRecord r;
                r.image_id = corpus[i].id;
                r.attack = {s.kind, p};
                r.seed = bench_row_seed(config.attack_seed, r.image_id, r.attack);
                r.keyset_hash = hash;
                records.push_back(std::move(r));
            }
        }
    }
    const std::size_t per_image = records.size() / std::max<std::size_t>(1, corpus.size());

    parallel_for(records.size(), workers, [&](std::size_t idx) {
        BenchRecord& r = records[idx];
        const EmbeddedImage& e = embedded[idx / per_image];
        if (!e.error.empty()) {
            r.status = "error";
            r.message = e.error;
            return;
        }
        r.psnr_db = e.psnr_db;
        try {
            const GrayImage attacked = apply_attack(e.marked, r.attack, r.seed);
            const Watermark got = extract(attacked, config.keys);
            r.nc = nc(e.wm, got);
            r.ber = ber(e.wm, got);
            r.status = "ok";
        } catch (const UnavailableError& err) {
            r.status = "skipped";
            r.message = err.what();
        } catch (const Error& err) {
            r.status = "error";
            r.message = err.what();
        }
    });

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + config.output_dir.string() + ": " + ec.message());
    BenchResult result;
    result.csv_path = config.output_dir / "results.csv";
    result.config_path = config.output_dir / "config.json";
    {
        std::ofstream out(result.config_path, std::ios::binary);
        out << bench_config_to_json(config);
        if (!out)
            throw IoError("cannot write " + result.config_path.string());
    }
    {
        std::ofstream out(result.csv_path, std::ios::binary);
        out << bench_csv(records);
        if (!out)
            throw IoError("cannot write " + result.csv_path.string());
    }
    result.records = std::move(records);
    return result;
}

std::string bench_csv(const std::vector<BenchRecord>& records)
{
    std::string out = std::string(kBenchCsvHeader) + "\n";
    for (const BenchRecord& r : records) {
        const bool ok = r.status == "ok";
        const bool have_psnr = r.status != "error" || r.psnr_db != 0.0;
        char seed[32];
        std::snprintf(seed, sizeof(seed), "%" PRIu64, r.seed);
        out += r.image_id + "," + std::string(attack_name(r.attack.kind)) + "," + format_param(r.attack.param) + "," +
               (have_psnr ? format_number(r.psnr_db, "%.4f") : "") + "," + (ok ? format_number(r.nc, "%.6f") : "") +
               "," + (ok ? format_number(r.ber, "%.6f") : "") + "," + r.status + "," + seed + "," + r.keyset_hash +
               "\n";
    }
    return out;
}

std::string bench_summary(const std::vector<BenchRecord>& records)
{
    struct Acc
    {
        double sum = 0.0;
        int ok = 0;
        int other = 0;
    };
    std::vector<std::pair<AttackSpec, Acc>> rows;
    for (const BenchRecord& r : records) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& p) { return p.first == r.attack; });
        if (it == rows.end()) {
            rows.push_back({r.attack, {}});
            it = rows.end() - 1;
        }
        if (r.status == "ok") {
            it->second.sum += r.nc;
            ++it->second.ok;
        } else {
            ++it->second.other;
        }
    }
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %10s %9s %7s\n", "attack", "param", "mean_nc", "images");
    os << line;
    for (const auto& [spec, acc] : rows) {
        const std::string mean = acc.ok ? format_number(acc.sum / acc.ok, "%.4f") : "-";
        std::snprintf(line, sizeof(line), "%-16s %10s %9s %7d", std::string(attack_name(spec.kind)).c_str(),
                      format_param(spec.param).c_str(), mean.c_str(), acc.ok);
        os << line;
        if (acc.other)
            os << "  (" << acc.other << " skipped/error)";
        os << "\n";
    }
    return os.str();
}

} // namespace curvemark
