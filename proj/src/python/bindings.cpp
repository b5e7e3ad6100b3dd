#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "trailroute/cli.hpp"
#include "trailroute/error.hpp"
#include "trailroute/georef.hpp"
#include "trailroute/gpx.hpp"
#include "trailroute/harness.hpp"
#include "trailroute/projection.hpp"
#include "trailroute/raster.hpp"
#include "trailroute/refine.hpp"

namespace py = pybind11;
using namespace trailroute;

namespace {

using LatLon = std::pair<double, double>;
using Mask = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GeoPoint geo(const LatLon& p) { return {p.first, p.second}; }
LatLon latlon(GeoPoint g) { return {g.lat, g.lon}; }

BinaryRaster to_raster(const Mask& a) {
    if (a.ndim() != 2) throw py::value_error("mask must be a 2-D array");
    BinaryRaster r(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    const auto v = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) {
        for (py::ssize_t j = 0; j < a.shape(1); ++j) r.set(static_cast<int>(i), static_cast<int>(j), v(i, j) != 0);
    }
    return r;
}

Mask from_raster(const BinaryRaster& r) {
    Mask out({r.height(), r.width()});
    std::copy(r.bits().begin(), r.bits().end(), out.mutable_data());
    return out;
}

MapImage to_image(const Mask& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("image must be an H x W x 3 array");
    MapImage img(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), img.data().begin());
    return img;
}

Mask from_image(const MapImage& img) {
    Mask out({img.height(), img.width(), 3});
    std::copy(img.data().begin(), img.data().end(), out.mutable_data());
    return out;
}

std::vector<MetricPoint> metric(const std::vector<std::pair<double, double>>& pts) {
    std::vector<MetricPoint> out;
    for (const auto& [e, n] : pts) out.push_back({e, n});
    return out;
}

std::vector<GroundControlPoint> gcps_from(const std::vector<std::pair<std::pair<double, double>, LatLon>>& in) {
    std::vector<GroundControlPoint> out;
    for (const auto& [px, g] : in) out.push_back({{px.first, px.second}, geo(g)});
    return out;
}

py::dict row_dict(const EvalRow& r) {
    py::dict d;
    d["map_id"] = r.map_id;
    d["trail_id"] = r.trail_id;
    d["input"] = r.input;
    d["strategy"] = r.strategy;
    d["iou"] = r.iou ? py::cast(*r.iou) : py::none();
    d["chamfer_m"] = r.chamfer;
    d["gpx_to_trail_m"] = r.gpx_to_trail;
    d["trail_to_gpx_m"] = r.trail_to_gpx;
    d["iterations"] = r.iterations;
    d["requests"] = r.requests;
    d["monotone"] = r.monotone;
    d["error"] = r.error;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of trailroute";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), ("[" + e.stage() + "] " + e.what()).c_str());
        }
    });

    py::class_<AffineTransform>(m, "AffineTransform")
        .def_property_readonly("linear", &AffineTransform::linear)
        .def_property_readonly("translation", &AffineTransform::translation)
        .def("to_geo", [](const AffineTransform& t, double row, double col) { return latlon(t.to_geo({row, col})); },
             py::arg("row"), py::arg("col"))
        .def("to_image",
             [](const AffineTransform& t, double lat, double lon) {
                 const ImagePoint p = t.to_image({lat, lon});
                 return std::make_pair(p.row, p.col);
             },
             py::arg("lat"), py::arg("lon"))
        .def("inverse", &AffineTransform::inverse);

    m.def("fit_affine", [](const std::vector<std::pair<std::pair<double, double>, LatLon>>& gcps) {
        return fit_affine(gcps_from(gcps));
    }, py::arg("gcps"), "Least-squares affine fit from [((row, col), (lat, lon)), ...].");
    m.def("load_gcps", [](const std::filesystem::path& path) {
        std::vector<std::pair<std::pair<double, double>, LatLon>> out;
        for (const auto& g : load_gcps(path)) out.push_back({{g.pixel.row, g.pixel.col}, latlon(g.geo)});
        return out;
    });

    m.def("to_metric", [](double lat, double lon) {
        const MetricPoint p = to_metric({lat, lon});
        return std::make_pair(p.easting, p.northing);
    }, py::arg("lat"), py::arg("lon"));
    m.def("from_metric", [](double e, double n) { return latlon(from_metric({e, n})); }, py::arg("easting"),
          py::arg("northing"));
    m.def("geodesic_distance", [](const LatLon& a, const LatLon& b) { return geodesic_distance(geo(a), geo(b)); });

    m.def("load_image", [](const std::filesystem::path& p) { return from_image(load_image(p)); });
    m.def("save_image", [](const Mask& img, const std::filesystem::path& p) { save_image(to_image(img), p); });
    m.def("load_mask", [](const std::filesystem::path& p) { return from_raster(load_mask(p)); });
    m.def("save_mask", [](const Mask& mask, const std::filesystem::path& p) { save_mask(to_raster(mask), p); });
    m.def("segment_by_color",
          [](const Mask& img, std::array<std::uint8_t, 3> color, double threshold, int min_component) {
              SegmentOptions o;
              o.threshold = threshold;
              o.min_component = min_component;
              return from_raster(segment_by_color(to_image(img), color, o));
          },
          py::arg("image"), py::arg("color"), py::arg("threshold") = kDefaultColorThreshold,
          py::arg("min_component") = kMinComponentPixels);
    m.def("skeletonize", [](const Mask& mask) { return from_raster(skeletonize(to_raster(mask))); });
    m.def("iou", [](const Mask& a, const Mask& b) { return iou(to_raster(a), to_raster(b)); });

    m.def("chamfer", [](const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b) {
        return chamfer(metric(a), metric(b));
    }, py::arg("route"), py::arg("trail"), "Symmetric Chamfer distance between two planar point sets.");

    m.def("encode_gpx", [](const std::vector<LatLon>& pts, const std::string& name) {
        std::vector<GeoPoint> g;
        for (const auto& p : pts) g.push_back(geo(p));
        return encode_gpx(RoutePolyline(std::move(g)), name);
    }, py::arg("points"), py::arg("name") = "trailroute");
    m.def("decode_gpx", [](const std::string& text) {
        const RoutePolyline route = decode_gpx(text);
        std::vector<LatLon> out;
        for (const GeoPoint& g : route.points()) out.push_back(latlon(g));
        return out;
    });

    m.def("manifest_json", [](const std::filesystem::path& path, bool check_files) {
        const auto abs = std::filesystem::absolute(path);
        return manifest_to_json(load_manifest(abs, check_files), abs.parent_path());
    }, py::arg("path"), py::arg("check_files") = true, "Validated manifest re-serialized as JSON.");

    m.def("write_scene", [](std::uint64_t seed, const std::filesystem::path& dir, const std::string& map_id) {
        return write_scene(generate_scene(seed, default_scene_config(seed)), dir, map_id);
    }, py::arg("seed"), py::arg("dir"), py::arg("map_id") = "scene");
    m.def("generate_scene", [](std::uint64_t seed) {
        const SyntheticScene s = generate_scene(seed, default_scene_config(seed));
        py::dict d;
        d["image"] = from_image(s.image);
        d["noisy_image"] = from_image(s.noisy_image);
        d["mask"] = from_raster(s.mask);
        d["start"] = latlon(s.start);
        d["goal"] = latlon(s.goal);
        d["color"] = s.color;
        std::vector<std::pair<std::pair<double, double>, LatLon>> gcps;
        for (const auto& g : s.gcps) gcps.push_back({{g.pixel.row, g.pixel.col}, latlon(g.geo)});
        d["gcps"] = gcps;
        return d;
    }, py::arg("seed"));

    m.def("ablate_synthetic", [](int count, std::uint64_t first_seed, bool with_predicted) {
        std::vector<SyntheticScene> scenes;
        for (int i = 0; i < count; ++i) {
            const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
            scenes.push_back(generate_scene(seed, default_scene_config(seed)));
        }
        EvalReport report;
        {
            py::gil_scoped_release release;
            report = run_ablation(scene_trials(scenes, with_predicted), ablation_strategies());
        }
        py::list rows;
        for (const EvalRow& r : report.rows) rows.append(row_dict(r));
        return rows;
    }, py::arg("count"), py::arg("seed") = 1, py::arg("with_predicted") = false);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
