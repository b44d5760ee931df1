#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiereval/analysis.hpp"
#include "hiereval/metrics.hpp"
#include "hiereval/pipeline.hpp"

namespace py = pybind11;
using namespace hiereval;

namespace {

Region region_from_rings(const std::vector<std::vector<std::pair<double, double>>>& rings) {
  Region region;
  for (const auto& ring : rings) {
    Ring r;
    for (const auto& [x, y] : ring) r.vertices.push_back({x, y});
    region.rings.push_back(std::move(r));
  }
  return region;
}

}  // namespace

PYBIND11_MODULE(_hiereval, m) {
  m.doc() = "Hierarchical segmentation evaluation core";
  m.attr("__version__") = kArtifactVersion;

  py::class_<BitMask>(m, "BitMask")
      .def(py::init<int, int>(), py::arg("width"), py::arg("height"))
      .def_property_readonly("width", &BitMask::width)
      .def_property_readonly("height", &BitMask::height)
      .def_property_readonly("area", &BitMask::area)
      .def("get", &BitMask::get, py::arg("row"), py::arg("col"))
      .def("set", &BitMask::set, py::arg("row"), py::arg("col"), py::arg("value"))
      .def("__eq__", [](const BitMask& a, const BitMask& b) { return a == b; });

  py::class_<BoxplotSummary>(m, "BoxplotSummary")
      .def_readonly("median", &BoxplotSummary::median)
      .def_readonly("q25", &BoxplotSummary::q25)
      .def_readonly("q75", &BoxplotSummary::q75)
      .def_readonly("whisker_lo", &BoxplotSummary::whisker_lo)
      .def_readonly("whisker_hi", &BoxplotSummary::whisker_hi)
      .def_readonly("outliers", &BoxplotSummary::outliers)
      .def_readonly("n", &BoxplotSummary::n);

  py::class_<RegressionResult>(m, "RegressionResult")
      .def_readonly("beta0", &RegressionResult::beta0)
      .def_readonly("beta1", &RegressionResult::beta1)
      .def_readonly("r_squared", &RegressionResult::r_squared)
      .def_readonly("p_value", &RegressionResult::p_value)
      .def_readonly("n", &RegressionResult::n)
      .def_readonly("significant", &RegressionResult::significant);

  m.def(
      "rasterize",
      [](const std::vector<std::vector<std::pair<double, double>>>& rings, int width,
         int height) { return rasterize(region_from_rings(rings), width, height); },
      py::arg("rings"), py::arg("width"), py::arg("height"));
  m.def("iou", &iou, py::arg("a"), py::arg("b"));
  m.def("containment_ratio", &containment_ratio, py::arg("child"), py::arg("parent"));
  m.def("coverage", &coverage, py::arg("child"), py::arg("container"));
  m.def("image_coverage", &image_coverage, py::arg("mask"));
  m.def(
      "boundary_complexity",
      [](const std::vector<std::vector<std::pair<double, double>>>& rings) {
        return boundary_complexity(region_from_rings(rings));
      },
      py::arg("rings"));
  m.def(
      "extent",
      [](const std::vector<std::vector<std::pair<double, double>>>& rings) {
        return extent(region_from_rings(rings));
      },
      py::arg("rings"));
  m.def(
      "count_holes",
      [](const std::vector<std::vector<std::pair<double, double>>>& rings) {
        return count_holes(region_from_rings(rings));
      },
      py::arg("rings"));
  m.def(
      "polygon_count",
      [](const std::vector<std::vector<std::pair<double, double>>>& rings) {
        return polygon_count(region_from_rings(rings));
      },
      py::arg("rings"));
  m.def(
      "size_bucket",
      [](std::int64_t area) { return std::string(size_bucket_name(size_bucket(area))); },
      py::arg("area"));
  m.def("rle_encode", &rle_encode, py::arg("mask"));
  m.def("rle_decode", &rle_decode, py::arg("runs"), py::arg("width"), py::arg("height"));
  m.def("boxplot", &boxplot, py::arg("values"));
  m.def("fit_iou_size", &fit_iou_size, py::arg("points"));

  m.def(
      "entails",
      [](const std::string& taxonomy_path, const std::string& child,
         const std::string& parent) {
        const Taxonomy t = load_taxonomy_file(taxonomy_path);
        return t.entails(t.at(child), t.at(parent));
      },
      py::arg("taxonomy_path"), py::arg("child"), py::arg("parent"));
  m.def(
      "taxonomy_counts",
      [](const std::string& taxonomy_path) {
        const Taxonomy t = load_taxonomy_file(taxonomy_path);
        return std::make_tuple(t.count(Level::Object), t.count(Level::Part),
                               t.count(Level::Subpart));
      },
      py::arg("taxonomy_path"));
  m.def(
      "general_of",
      [](const std::string& taxonomy_path, const std::string& specific) {
        return load_taxonomy_file(taxonomy_path).general_of(specific);
      },
      py::arg("taxonomy_path"), py::arg("specific"));

  m.def(
      "evaluate_files",
      [](const std::string& dataset_path, const std::string& predictions_path,
         const std::string& averaging, int workers) {
        const Dataset ds = load_dataset(dataset_path);
        const PredictionSet preds = load_predictions(predictions_path, ds);
        const MetricReport report = evaluate(
            preds, ds,
            averaging == "per-category" ? Averaging::PerCategory : Averaging::PerQuery,
            workers);
        return report.to_json();
      },
      py::arg("dataset_path"), py::arg("predictions_path"),
      py::arg("averaging") = "per-query", py::arg("workers") = 1);
  m.def(
      "validate_dataset_file",
      [](const std::string& dataset_path,
         const std::map<std::string, std::string>& expectations) {
        const Dataset ds = load_dataset(dataset_path);
        return validate_dataset(ds, expectations).to_json();
      },
      py::arg("dataset_path"),
      py::arg("expectations") = std::map<std::string, std::string>{});
}
