#include "curvemark/arnold.hpp"
#include "curvemark/attacks.hpp"
#include "curvemark/bench.hpp"
#include "curvemark/codec.hpp"
#include "curvemark/dct.hpp"
#include "curvemark/error.hpp"
#include "curvemark/fdcut.hpp"
#include "curvemark/metrics.hpp"
#include "curvemark/pn.hpp"

#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace curvemark;

namespace {

GrayImage to_image(const Plane& p)
{
    return GrayImage(p);
}

Watermark to_watermark(const py::object& obj)
{
    if (py::isinstance<Watermark>(obj))
        return obj.cast<Watermark>();
    if (py::isinstance<py::str>(obj))
        return Watermark::parse(obj.cast<std::string>());
    std::vector<std::uint8_t> bits;
    for (const py::handle& b : obj)
        bits.push_back(static_cast<std::uint8_t>(b.cast<int>()));
    return Watermark(std::move(bits));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Blind curvelet-domain image watermarking";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<UnavailableError>(m, "UnavailableError", base.ptr());

    py::class_<KeySet>(m, "KeySet")
        .def(py::init([](std::uint64_t key1, std::int64_t key2, std::int64_t a, std::int64_t b, double gain,
                         int hf_threshold) { return KeySet{key1, key2, a, b, gain, hf_threshold}; }),
             py::arg("key1") = 1, py::arg("key2") = 20, py::arg("a") = 1, py::arg("b") = 1, py::arg("gain") = 125.0,
             py::arg("hf_threshold") = 30)
        .def_readwrite("key1", &KeySet::key1)
        .def_readwrite("key2", &KeySet::key2)
        .def_readwrite("a", &KeySet::a)
        .def_readwrite("b", &KeySet::b)
        .def_readwrite("gain", &KeySet::gain)
        .def_readwrite("hf_threshold", &KeySet::hf_threshold)
        .def("validate", &KeySet::validate, py::arg("side"))
        .def("to_text", [](const KeySet& k) { return keyset_to_text(k); })
        .def_static("from_text", [](const std::string& s) { return keyset_from_text(s); })
        .def("hash", [](const KeySet& k) { return keyset_hash(k); })
        .def(py::self == py::self)
        .def("__repr__", [](const KeySet& k) {
            return "KeySet(key1=" + std::to_string(k.key1) + ", key2=" + std::to_string(k.key2) +
                   ", a=" + std::to_string(k.a) + ", b=" + std::to_string(k.b) + ", gain=" + py::repr(py::float_(k.gain)).cast<std::string>() +
                   ", hf_threshold=" + std::to_string(k.hf_threshold) + ")";
        });

    py::class_<Watermark>(m, "Watermark")
        .def(py::init([](const py::object& o) { return to_watermark(o); }), py::arg("bits"))
        .def_static("parse", &Watermark::parse)
        .def_static("random", &Watermark::random, py::arg("bits") = 64, py::arg("seed") = 0)
        .def_property_readonly("bits", &Watermark::bits)
        .def("hex", &Watermark::to_hex)
        .def("binary", &Watermark::to_binary)
        .def("__len__", &Watermark::size)
        .def("__getitem__", [](const Watermark& w, int i) {
            if (i < 0)
                i += w.size();
            if (i < 0 || i >= w.size())
                throw py::index_error();
            return w[i];
        })
        .def(py::self == py::self)
        .def("__repr__", [](const Watermark& w) {
            return "Watermark('" + (w.size() % 4 == 0 ? w.to_hex() : "0b" + w.to_binary()) + "')";
        });
    py::implicitly_convertible<py::str, Watermark>();

    py::class_<BlockDecision>(m, "BlockDecision")
        .def_readonly("corr_zero", &BlockDecision::corr_zero)
        .def_readonly("corr_one", &BlockDecision::corr_one)
        .def_readonly("bit", &BlockDecision::bit);

    m.def("load_image", [](const std::filesystem::path& p) { return load_image(p).pixels(); }, py::arg("path"),
          "Read PGM/PPM/PNG as a float64 array.");
    m.def("save_image", [](const Plane& img, const std::filesystem::path& p) { save_image(to_image(img), p); },
          py::arg("image"), py::arg("path"));

    m.def("watermark_capacity", &watermark_capacity, py::arg("side"));
    m.def("embed",
          [](const Plane& img, const py::object& wm, const KeySet& keys) {
              const Watermark w = to_watermark(wm);
              py::gil_scoped_release release;
              return embed(to_image(img), w, keys).pixels();
          },
          py::arg("image"), py::arg("watermark"), py::arg("keys") = KeySet{});
    m.def("extract",
          [](const Plane& img, const KeySet& keys) {
              py::gil_scoped_release release;
              return extract(to_image(img), keys);
          },
          py::arg("image"), py::arg("keys") = KeySet{});
    m.def("extract_detailed", [](const Plane& img, const KeySet& keys) { return extract_detailed(to_image(img), keys); },
          py::arg("image"), py::arg("keys") = KeySet{});

    m.def("attack_kinds", [] {
        std::vector<std::string> names;
        for (AttackKind k : all_attack_kinds())
            names.emplace_back(attack_name(k));
        return names;
    });
    m.def("apply_attack",
          [](const Plane& img, const std::string& kind, double param, std::uint64_t seed) {
              const AttackSpec spec{parse_attack_kind(kind), param};
              py::gil_scoped_release release;
              return apply_attack(to_image(img), spec, seed).pixels();
          },
          py::arg("image"), py::arg("kind"), py::arg("param") = 0.0, py::arg("seed") = 0);

    m.def("psnr", [](const Plane& f, const Plane& fw) { return psnr(to_image(f), to_image(fw)); }, py::arg("reference"),
          py::arg("distorted"));
    m.def("nc", [](const py::object& a, const py::object& b) { return nc(to_watermark(a), to_watermark(b)); });
    m.def("ber", [](const py::object& a, const py::object& b) { return ber(to_watermark(a), to_watermark(b)); });

    m.def("arnold_period", &arnold_period, py::arg("n"), py::arg("a") = 1, py::arg("b") = 1);
    m.def("arnold_map",
          [](const Plane& img, std::int64_t iterations, std::int64_t a, std::int64_t b) {
              return arnold_map(to_image(img), {a, b, static_cast<int>(img.rows()), iterations}).pixels();
          },
          py::arg("image"), py::arg("iterations"), py::arg("a") = 1, py::arg("b") = 1);
    m.def("arnold_unmap",
          [](const Plane& img, std::int64_t iterations, std::int64_t a, std::int64_t b) {
              return arnold_unmap(to_image(img), {a, b, static_cast<int>(img.rows()), iterations}).pixels();
          },
          py::arg("image"), py::arg("iterations"), py::arg("a") = 1, py::arg("b") = 1);

    m.def("dct2", &dct2);
    m.def("idct2", &idct2);

    py::class_<PnPair>(m, "PnPair")
        .def_readonly("seq_one", &PnPair::seq_one)
        .def_readonly("seq_zero", &PnPair::seq_zero)
        .def_readonly("seed", &PnPair::seed)
        .def_readonly("length", &PnPair::length);
    m.def("gen_pn_pair", &gen_pn_pair, py::arg("seed"), py::arg("length"));
    m.def("corr2", [](const std::vector<double>& a, const std::vector<double>& b) { return corr2(a, b); });

    py::class_<CurveletPyramid>(m, "CurveletPyramid")
        .def_readwrite("coarse", &CurveletPyramid::coarse)
        .def_readwrite("bands", &CurveletPyramid::bands)
        .def_readwrite("fine", &CurveletPyramid::fine)
        .def_readonly("source_side", &CurveletPyramid::source_side)
        .def("energy", &CurveletPyramid::energy);
    m.def("fdcut_forward",
          [](const Plane& block, int scales, int angles, bool real_input) {
              return fdcut_forward(block, CurveletParams{scales, angles, real_input});
          },
          py::arg("block"), py::arg("scales") = 3, py::arg("angles") = 16, py::arg("real_input") = true);
    m.def("fdcut_inverse", &fdcut_inverse, py::arg("pyramid"));

    m.def("run_bench",
          [](const std::filesystem::path& config, const std::optional<std::filesystem::path>& out) {
              BenchConfig c = load_bench_config(config);
              if (out)
                  c.output_dir = *out;
              py::gil_scoped_release release;
              return run_bench(c).csv_path;
          },
          py::arg("config"), py::arg("output_dir") = py::none(), "Run a bench config; returns the CSV path.");
}
