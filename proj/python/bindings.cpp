// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spherevis/errors.hpp"
#include "spherevis/interchange.hpp"
#include "spherevis/kitti.hpp"
#include "spherevis/metrics.hpp"
#include "spherevis/ray_oracle.hpp"
#include "spherevis/scene_gen.hpp"
#include "spherevis/spherical.hpp"
#include "spherevis/visibility.hpp"

namespace py = pybind11;
using namespace spherevis;

PYBIND11_MODULE(_spherevis, m) {
  m.doc() = "Visibility of 3D bounding boxes from the ego origin";

  py::register_exception<OriginInsideBox>(m, "OriginInsideBoxError");
  py::register_exception<DegeneratePolygon>(m, "DegeneratePolygonError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<InsufficientHits>(m, "InsufficientHitsError");

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"),
           py::arg("z"))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("norm", &Vec3::norm)
      .def("__repr__", [](const Vec3& v) {
        std::ostringstream s;
        s << "Vec3(" << v.x << ", " << v.y << ", " << v.z << ")";
        return s.str();
      });

  py::enum_<ClassLabel>(m, "ClassLabel")
      .value("Car", ClassLabel::Car)
      .value("Pedestrian", ClassLabel::Pedestrian)
      .value("Cyclist", ClassLabel::Cyclist)
      .value("Other", ClassLabel::Other);

  py::class_<ObjectBox>(m, "ObjectBox")
      .def(py::init([](std::int64_t id, ClassLabel class_label, const Vec3& center,
                       double length, double width, double height, double yaw) {
             ObjectBox box{id, class_label, center, length, width, height, yaw};
             if (!box.valid()) {
               throw py::value_error("box dimensions must be positive and yaw in [-pi, pi]");
             }
             return box;
           }),
           py::arg("id"), py::arg("class_label"), py::arg("center"),
           py::arg("length"), py::arg("width"), py::arg("height"), py::arg("yaw"))
      .def_readwrite("id", &ObjectBox::id)
      .def_readwrite("class_label", &ObjectBox::class_label)
      .def_readwrite("center", &ObjectBox::center)
      .def_readwrite("length", &ObjectBox::length)
      .def_readwrite("width", &ObjectBox::width)
      .def_readwrite("height", &ObjectBox::height)
      .def_readwrite("yaw", &ObjectBox::yaw)
      .def("origin_distance", &ObjectBox::origin_distance)
      .def("volume", &ObjectBox::volume)
      .def("__repr__", [](const ObjectBox& b) {
        std::ostringstream s;
        s << "ObjectBox(id=" << b.id << ", class=" << to_string(b.class_label)
          << ", center=(" << b.center.x << ", " << b.center.y << ", "
          << b.center.z << "))";
        return s.str();
      });

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def(py::init([](std::vector<ObjectBox> boxes, std::string frame_id) {
             return Scene{std::move(boxes), std::move(frame_id)};
           }),
           py::arg("boxes"), py::arg("frame_id") = "")
      .def_readwrite("boxes", &Scene::boxes)
      .def_readwrite("frame_id", &Scene::frame_id)
      .def("ids_unique", &Scene::ids_unique)
      .def("__len__", [](const Scene& s) { return s.boxes.size(); });

  py::class_<Backend> backend(m, "Backend");
  backend.def_static("naive", &Backend::naive)
      .def_static("pruned", &Backend::pruned)
      .def_static("monte_carlo", &Backend::monte_carlo, py::arg("samples"),
                  py::arg("seed"))
      .def("exact", &Backend::exact);

  py::class_<VisibilityRecord>(m, "VisibilityRecord")
      .def_readonly("box_id", &VisibilityRecord::box_id)
      .def_readonly("omega", &VisibilityRecord::omega)
      .def_readonly("occluded_omega", &VisibilityRecord::occluded_omega)
      .def_readonly("visibility", &VisibilityRecord::visibility)
      .def_readonly("occluder_ids", &VisibilityRecord::occluder_ids)
      .def_readonly("degenerate", &VisibilityRecord::degenerate)
      .def("__repr__", [](const VisibilityRecord& r) {
        std::ostringstream s;
        s << "VisibilityRecord(box_id=" << r.box_id << ", omega=" << r.omega
          << ", visibility=";
        if (r.visibility) {
          s << *r.visibility;
        } else {
          s << "None";
        }
        s << ")";
        return s.str();
      });

  py::class_<SphericalPolygon>(m, "SphericalPolygon")
      .def_readonly("vertices", &SphericalPolygon::vertices)
      .def("__len__", &SphericalPolygon::size);

  py::class_<OracleEstimate>(m, "OracleEstimate")
      .def_readonly("mean", &OracleEstimate::mean)
      .def_readonly("std_error", &OracleEstimate::std_error)
      .def_readonly("samples_hit", &OracleEstimate::samples_hit)
      .def_readonly("samples_total", &OracleEstimate::samples_total);

  m.def("silhouette", &silhouette, py::arg("box"),
        "Spherical projection outline of a box seen from the origin");
  m.def(
      "solid_angle", [](const SphericalPolygon& poly) { return solid_angle(poly); },
      py::arg("polygon"), "Area of a spherical polygon, steradians");
  m.def(
      "box_solid_angle",
      [](const ObjectBox& box) { return solid_angle(silhouette(box)); },
      py::arg("box"), "Projected solid angle of a box, steradians");
  m.def(
      "visibility_all",
      [](const Scene& scene, const Backend& backend, int jobs) {
        return visibility_all(scene, backend, jobs);
      },
      py::arg("scene"), py::arg("backend"), py::arg("jobs") = 1,
      "Visibility record for every box of the scene, in input order");
  m.def(
      "estimate_solid_angle",
      [](const ObjectBox& box, std::uint64_t samples, std::uint64_t seed, int jobs) {
        return estimate_solid_angle(box, OracleConfig{samples, seed}, jobs);
      },
      py::arg("box"), py::arg("samples") = 1'000'000, py::arg("seed") = 0,
      py::arg("jobs") = 1, "Monte-Carlo estimate of a box's solid angle");
  m.def(
      "estimate_visibility",
      [](const Scene& scene, std::size_t index, std::uint64_t samples,
         std::uint64_t seed, int jobs) {
        return estimate_visibility(scene, index, OracleConfig{samples, seed}, jobs);
      },
      py::arg("scene"), py::arg("index"), py::arg("samples") = 1'000'000,
      py::arg("seed") = 0, py::arg("jobs") = 1,
      "Monte-Carlo estimate of one box's visibility within a scene");
  m.def(
      "parse_kitti_labels",
      [](const std::string& text, bool camera_frame) {
        FrameConfig cfg;
        cfg.convention = camera_frame ? FrameConvention::KittiCamera
                                      : FrameConvention::EgoDirect;
        return parse_kitti_labels(text, cfg);
      },
      py::arg("text"), py::arg("camera_frame") = true,
      "Scene from KITTI label text");
  m.def(
      "generate_scene",
      [](std::size_t n_boxes, double area_half_extent, std::uint64_t seed) {
        SceneGenConfig cfg;
        cfg.n_boxes = n_boxes;
        cfg.area_half_extent = area_half_extent;
        cfg.seed = seed;
        return generate_scene(cfg);
      },
      py::arg("n_boxes"), py::arg("area_half_extent") = 40.0, py::arg("seed") = 0,
      "Seeded synthetic ground-plane scene");
  m.def("box_iou",
        [](const ObjectBox& a, const ObjectBox& b, bool bev) {
          return box_iou(a, b, bev ? IouKind::Bev : IouKind::Full3d);
        },
        py::arg("a"), py::arg("b"), py::arg("bev") = true,
        "IoU of two boxes (bird's-eye-view footprint or full 3D)");
}
