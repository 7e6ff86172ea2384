// Python bindings for the segmentation core: synthetic scenes, the full
// pipeline and its ablation variants, the RANSAC baseline, evaluation
// helpers and KITTI-format I/O.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "patchwork/config.hpp"
#include "patchwork/errors.hpp"
#include "patchwork/eval.hpp"
#include "patchwork/io.hpp"
#include "patchwork/pipeline.hpp"
#include "patchwork/synth.hpp"
#include "patchwork/types.hpp"

namespace py = pybind11;
using namespace patchwork;

namespace {

PointCloud cloud_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& points,
                            const std::optional<py::array_t<std::uint16_t,
                                                            py::array::c_style | py::array::forcecast>>& labels) {
  if (points.ndim() != 2 || (points.shape(1) != 3 && points.shape(1) != 4)) {
    throw ValidationError("points must be an (N, 3) or (N, 4) array");
  }
  const auto n = static_cast<std::size_t>(points.shape(0));
  const auto cols = static_cast<std::size_t>(points.shape(1));
  const float* data = points.data();

  PointCloud cloud;
  cloud.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cloud.points[i].x = data[i * cols + 0];
    cloud.points[i].y = data[i * cols + 1];
    cloud.points[i].z = data[i * cols + 2];
    cloud.points[i].intensity = cols == 4 ? data[i * cols + 3] : 0.0f;
  }
  if (labels) {
    if (labels->ndim() != 1 || static_cast<std::size_t>(labels->shape(0)) != n) {
      throw ValidationError("labels must be an (N,) array matching points");
    }
    cloud.labels = std::vector<std::uint16_t>(labels->data(), labels->data() + n);
  }
  return cloud;
}

py::array_t<float> points_to_array(const PointCloud& cloud) {
  py::array_t<float> out({static_cast<py::ssize_t>(cloud.size()), py::ssize_t{4}});
  float* data = out.mutable_data();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    data[i * 4 + 0] = cloud.points[i].x;
    data[i * 4 + 1] = cloud.points[i].y;
    data[i * 4 + 2] = cloud.points[i].z;
    data[i * 4 + 3] = cloud.points[i].intensity;
  }
  return out;
}

py::array_t<std::uint32_t> indices_to_array(const std::vector<std::uint32_t>& indices) {
  py::array_t<std::uint32_t> out(static_cast<py::ssize_t>(indices.size()));
  std::memcpy(out.mutable_data(), indices.data(), indices.size() * sizeof(std::uint32_t));
  return out;
}

py::array_t<bool> mask_to_array(const std::vector<std::uint8_t>& mask) {
  py::array_t<bool> out(static_cast<py::ssize_t>(mask.size()));
  bool* data = out.mutable_data();
  for (std::size_t i = 0; i < mask.size(); ++i) data[i] = mask[i] != 0;
  return out;
}

std::vector<std::uint8_t> mask_from_array(const py::array_t<bool, py::array::c_style | py::array::forcecast>& arr) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(arr.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = arr.data()[i] ? 1 : 0;
  return mask;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Real-time LiDAR ground segmentation (concentric-zone model, region-wise "
            "plane fitting, ground-likelihood filtering)";

  py::register_exception<IoError>(m, "IoError", PyExc_IOError);
  py::register_exception<MalformedInputError>(m, "MalformedInputError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<SceneSpec>(m, "SceneSpec")
      .def(py::init<>())
      .def_readwrite("sensor_height", &SceneSpec::sensor_height)
      .def_readwrite("ground_points", &SceneSpec::ground_points)
      .def_readwrite("ground_r_min", &SceneSpec::ground_r_min)
      .def_readwrite("ground_r_max", &SceneSpec::ground_r_max)
      .def_readwrite("sigma_z", &SceneSpec::sigma_z)
      .def_readwrite("ramp_points", &SceneSpec::ramp_points)
      .def_readwrite("ramp_grade", &SceneSpec::ramp_grade)
      .def_readwrite("ramp_x0", &SceneSpec::ramp_x0)
      .def_readwrite("ramp_x1", &SceneSpec::ramp_x1)
      .def_readwrite("ramp_y0", &SceneSpec::ramp_y0)
      .def_readwrite("ramp_y1", &SceneSpec::ramp_y1)
      .def_readwrite("wall_points", &SceneSpec::wall_points)
      .def_readwrite("wall_x", &SceneSpec::wall_x)
      .def_readwrite("wall_y0", &SceneSpec::wall_y0)
      .def_readwrite("wall_y1", &SceneSpec::wall_y1)
      .def_readwrite("wall_z0", &SceneSpec::wall_z0)
      .def_readwrite("wall_z1", &SceneSpec::wall_z1)
      .def_readwrite("wall_thickness", &SceneSpec::wall_thickness)
      .def_readwrite("roof_points", &SceneSpec::roof_points)
      .def_readwrite("roof_x0", &SceneSpec::roof_x0)
      .def_readwrite("roof_x1", &SceneSpec::roof_x1)
      .def_readwrite("roof_y0", &SceneSpec::roof_y0)
      .def_readwrite("roof_y1", &SceneSpec::roof_y1)
      .def_readwrite("roof_z", &SceneSpec::roof_z)
      .def_readwrite("roof_sigma_z", &SceneSpec::roof_sigma_z)
      .def_readwrite("outlier_points", &SceneSpec::outlier_points)
      .def_readwrite("outlier_x", &SceneSpec::outlier_x)
      .def_readwrite("outlier_y", &SceneSpec::outlier_y)
      .def_readwrite("outlier_radius", &SceneSpec::outlier_radius)
      .def_readwrite("outlier_z0", &SceneSpec::outlier_z0)
      .def_readwrite("outlier_z1", &SceneSpec::outlier_z1);

  py::class_<PatchworkParams>(m, "Params")
      .def(py::init<>())
      .def_static("from_toml",
                  [](const std::string& text) { return parse_config(text).params; },
                  py::arg("text"), "Parse the [czm]/[rgpf]/[gle]/[pipeline] config sections")
      .def("to_toml",
           [](const PatchworkParams& params) {
             RunConfig config;
             config.params = params;
             return dump_config(config);
           })
      .def_property(
          "num_threads", [](const PatchworkParams& p) { return p.num_threads; },
          [](PatchworkParams& p, int v) { p.num_threads = v; })
      .def_property(
          "near_field_passthrough",
          [](const PatchworkParams& p) { return p.near_field_passthrough; },
          [](PatchworkParams& p, bool v) { p.near_field_passthrough = v; })
      .def_property(
          "sensor_height", [](const PatchworkParams& p) { return p.rgpf.sensor_height; },
          [](PatchworkParams& p, double v) { p.rgpf.sensor_height = v; })
      .def("validate", &PatchworkParams::validate);

  py::class_<StageTiming>(m, "StageTiming")
      .def_readonly("binning_us", &StageTiming::binning_us)
      .def_readonly("fitting_us", &StageTiming::fitting_us)
      .def_readonly("gle_us", &StageTiming::gle_us)
      .def_readonly("total_us", &StageTiming::total_us);

  py::class_<SegmentationResult>(m, "SegmentationResult")
      .def_property_readonly("ground_indices",
                             [](const SegmentationResult& r) { return indices_to_array(r.ground_indices); })
      .def_property_readonly("nonground_indices",
                             [](const SegmentationResult& r) { return indices_to_array(r.nonground_indices); })
      .def_readonly("timing", &SegmentationResult::timing)
      .def_readonly("total_bins", &SegmentationResult::total_bins)
      .def("ground_mask",
           [](const SegmentationResult& r) {
             std::vector<std::uint8_t> mask(r.ground_indices.size() + r.nonground_indices.size(), 0);
             for (std::uint32_t idx : r.ground_indices) mask[idx] = 1;
             return mask_to_array(mask);
           },
           "Boolean per-point ground mask");

  m.def("default_config", [] { return dump_config(RunConfig{}); },
        "The full default configuration as TOML text");

  m.def("zone_boundaries",
        [](double l_min, double l_max) {
          ZoneConfig config;
          config.l_min = l_min;
          config.l_max = l_max;
          const auto edges = zone_boundaries(config);
          return std::vector<double>(edges.begin(), edges.end());
        },
        py::arg("l_min") = 2.7, py::arg("l_max") = 80.0);

  m.def("synth_scene",
        [](const SceneSpec& spec, std::uint64_t seed) {
          const PointCloud cloud = synth_scene(spec, seed);
          py::array_t<std::uint16_t> labels(static_cast<py::ssize_t>(cloud.size()));
          std::memcpy(labels.mutable_data(), cloud.labels->data(),
                      cloud.size() * sizeof(std::uint16_t));
          return py::make_tuple(points_to_array(cloud), labels);
        },
        py::arg("spec") = SceneSpec{}, py::arg("seed") = 0,
        "Generate a labeled synthetic scene; returns (points (N,4) float32, labels (N,) uint16)");

  m.def("segment",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& points,
           const PatchworkParams& params, const std::string& variant) {
          const PointCloud cloud = cloud_from_array(points, std::nullopt);
          return ablation_variant(cloud, params, parse_variant(variant));
        },
        py::arg("points"), py::arg("params") = PatchworkParams{},
        py::arg("variant") = "czm+U+E+F");

  m.def("segment_ransac",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& points,
           double dist_thresh, int max_iters, std::uint64_t seed) {
          return segment_ransac_baseline(cloud_from_array(points, std::nullopt), dist_thresh,
                                         max_iters, seed);
        },
        py::arg("points"), py::arg("dist_thresh") = 0.3, py::arg("max_iters") = 500,
        py::arg("seed") = 0);

  m.def("ground_truth_mask",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& points,
           const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& labels) {
          const PointCloud cloud = cloud_from_array(points, labels);
          return mask_to_array(ground_truth_mask(cloud).is_ground);
        },
        py::arg("points"), py::arg("labels"),
        "Ground truth from semantic labels (ground classes plus low vegetation)");

  m.def("evaluate",
        [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& predicted,
           const py::array_t<bool, py::array::c_style | py::array::forcecast>& truth) {
          if (predicted.size() != truth.size()) {
            throw ValidationError("predicted and truth masks must have the same length");
          }
          SegmentationResult result;
          const bool* pred = predicted.data();
          for (py::ssize_t i = 0; i < predicted.size(); ++i) {
            if (pred[i]) result.ground_indices.push_back(static_cast<std::uint32_t>(i));
            else result.nonground_indices.push_back(static_cast<std::uint32_t>(i));
          }
          const FrameMetrics m = metrics(confusion(result, GroundTruthMask{mask_from_array(truth)}));
          py::dict out;
          out["tp"] = m.counts.tp;
          out["fp"] = m.counts.fp;
          out["fn"] = m.counts.fn;
          out["tn"] = m.counts.tn;
          out["precision"] = m.precision;
          out["recall"] = m.recall;
          out["f1"] = m.f1;
          out["accuracy"] = m.accuracy;
          return out;
        },
        py::arg("predicted"), py::arg("truth"));

  m.def("read_kitti_bin",
        [](const std::filesystem::path& path) { return points_to_array(read_kitti_bin(path)); },
        py::arg("path"), "Read a KITTI velodyne scan as an (N, 4) float32 array");

  m.def("read_kitti_labels",
        [](const std::filesystem::path& path, std::size_t n_points) {
          const auto labels = read_kitti_labels(path, n_points);
          py::array_t<std::uint16_t> out(static_cast<py::ssize_t>(labels.size()));
          std::memcpy(out.mutable_data(), labels.data(), labels.size() * sizeof(std::uint16_t));
          return out;
        },
        py::arg("path"), py::arg("n_points"));

  m.def("write_kitti_bin",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& points,
           const std::filesystem::path& path) {
          write_kitti_bin(cloud_from_array(points, std::nullopt), path);
        },
        py::arg("points"), py::arg("path"));
}
