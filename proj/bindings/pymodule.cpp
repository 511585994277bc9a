#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nilmevt/config_io.hpp"
#include "nilmevt/evaluate.hpp"
#include "nilmevt/motif.hpp"
#include "nilmevt/pipeline.hpp"
#include "nilmevt/postprocess.hpp"
#include "nilmevt/stage1.hpp"
#include "nilmevt/stage2.hpp"
#include "nilmevt/synth.hpp"
#include "nilmevt/trend.hpp"

namespace py = pybind11;
using namespace nilmevt;

PYBIND11_MODULE(_nilmevt, m) {
    m.doc() = "Multi-timescale load event detection";

    py::enum_<EventStage>(m, "EventStage")
        .value("step", EventStage::step)
        .value("long_transient", EventStage::long_transient);

    py::class_<PowerSeries>(m, "PowerSeries")
        .def(py::init<>())
        .def_readwrite("start_epoch", &PowerSeries::start_epoch)
        .def_readwrite("sample_period", &PowerSeries::sample_period)
        .def_readwrite("active", &PowerSeries::active)
        .def_readwrite("reactive", &PowerSeries::reactive)
        .def("__len__", &PowerSeries::size);

    py::class_<EventFeatures>(m, "EventFeatures")
        .def(py::init<>())
        .def_readwrite("delta_p", &EventFeatures::delta_p)
        .def_readwrite("delta_q", &EventFeatures::delta_q)
        .def_readwrite("range_p", &EventFeatures::range_p);

    py::class_<Event>(m, "Event")
        .def(py::init<>())
        .def_readwrite("start_idx", &Event::start_idx)
        .def_readwrite("end_idx", &Event::end_idx)
        .def_readwrite("window_len", &Event::window_len)
        .def_readwrite("stage", &Event::stage)
        .def("length", &Event::length);

    py::class_<DetectionConfig>(m, "DetectionConfig")
        .def(py::init<>())
        .def_readwrite("window_set", &DetectionConfig::window_set)
        .def_readwrite("k_th1", &DetectionConfig::k_th1)
        .def_readwrite("k_th2", &DetectionConfig::k_th2)
        .def_readwrite("dp_th1", &DetectionConfig::dp_th1)
        .def_readwrite("dp_th2", &DetectionConfig::dp_th2)
        .def_readwrite("dt_steady", &DetectionConfig::dt_steady)
        .def_readwrite("n_days", &DetectionConfig::n_days)
        .def_readwrite("n_th", &DetectionConfig::n_th)
        .def_readwrite("vad_window", &DetectionConfig::vad_window)
        .def_readwrite("lambda1", &DetectionConfig::lambda1)
        .def_readwrite("lambda2", &DetectionConfig::lambda2)
        .def_readwrite("w_post", &DetectionConfig::w_post)
        .def_readwrite("eta", &DetectionConfig::eta)
        .def_readwrite("t_test_alpha", &DetectionConfig::t_test_alpha)
        .def_readwrite("rho", &DetectionConfig::rho)
        .def_readwrite("penalty", &DetectionConfig::penalty)
        .def("validate", &DetectionConfig::validate);

    py::class_<LabelRecord>(m, "LabelRecord")
        .def(py::init<>())
        .def_readwrite("start_epoch", &LabelRecord::start_epoch)
        .def_readwrite("end_epoch", &LabelRecord::end_epoch)
        .def_readwrite("appliance", &LabelRecord::appliance)
        .def_readwrite("direction", &LabelRecord::direction);

    py::class_<EventRecord>(m, "EventRecord")
        .def(py::init<>())
        .def_readwrite("start_epoch", &EventRecord::start_epoch)
        .def_readwrite("end_epoch", &EventRecord::end_epoch)
        .def_readwrite("delta_p", &EventRecord::delta_p)
        .def_readwrite("delta_q", &EventRecord::delta_q)
        .def_readwrite("range_p", &EventRecord::range_p)
        .def_readwrite("window_len", &EventRecord::window_len)
        .def_readwrite("stage", &EventRecord::stage);

    py::class_<DetectedEvent>(m, "DetectedEvent")
        .def_readonly("event", &DetectedEvent::event)
        .def_readonly("motif_id", &DetectedEvent::motif_id)
        .def_readonly("day", &DetectedEvent::day);

    py::class_<DetectResult>(m, "DetectResult")
        .def_readonly("events", &DetectResult::events)
        .def("to_records", &DetectResult::to_records);

    py::class_<EvalScores>(m, "EvalScores")
        .def_readonly("tp", &EvalScores::tp)
        .def_readonly("precision", &EvalScores::precision)
        .def_readonly("recall", &EvalScores::recall)
        .def_readonly("f1_mod", &EvalScores::f1_mod);

    py::class_<ApplianceSpec>(m, "ApplianceSpec")
        .def(py::init<>())
        .def_readwrite("name", &ApplianceSpec::name)
        .def_readwrite("power", &ApplianceSpec::power)
        .def_readwrite("levels", &ApplianceSpec::levels)
        .def_readwrite("plateau_s", &ApplianceSpec::plateau_s)
        .def_readwrite("transient_s", &ApplianceSpec::transient_s)
        .def_readwrite("amplitude", &ApplianceSpec::amplitude)
        .def_readwrite("schedule", &ApplianceSpec::schedule)
        .def_readwrite("hold_s", &ApplianceSpec::hold_s)
        .def_property("kind",
                      [](const ApplianceSpec& a) { return static_cast<int>(a.kind); },
                      [](ApplianceSpec& a, const std::string& k) {
                          a.kind = appliance_kind_from_string(k);
                      });

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("duration_s", &SynthSpec::duration_s)
        .def_readwrite("seed", &SynthSpec::seed)
        .def_readwrite("start_epoch", &SynthSpec::start_epoch)
        .def_readwrite("base_load", &SynthSpec::base_load)
        .def_readwrite("noise_sigma", &SynthSpec::noise_sigma)
        .def_readwrite("appliances", &SynthSpec::appliances);

    m.def("event_features", &event_features, py::arg("event"), py::arg("series"));
    m.def("events_overlap", &events_overlap);
    m.def("adaptive_threshold",
          [](const PowerSeries& s, const DetectionConfig& cfg) {
              return adaptive_threshold(s, cfg).values;
          });
    m.def("detect_step_events", [](const PowerSeries& s, const DetectionConfig& cfg) {
        return detect_step_events(s, adaptive_threshold(s, cfg));
    });
    m.def("ttest_change_at", &ttest_change_at, py::arg("series"), py::arg("t"), py::arg("w"),
          py::arg("d_th"), py::arg("alpha"));
    m.def("overlap_coefficient", &overlap_coefficient);
    m.def("run_detect",
          [](const PowerSeries& s, const DetectionConfig& cfg, bool postprocess) {
              RunOptions opts;
              opts.postprocess = postprocess;
              return run_detect(s, cfg, opts);
          },
          py::arg("series"), py::arg("config") = DetectionConfig{}, py::arg("postprocess") = true);
    m.def("synth_generate", &synth_generate);
    m.def("evaluate_records",
          [](const std::vector<EventRecord>& dets, const std::vector<LabelRecord>& labels,
             const PowerSeries& s, const DetectionConfig& cfg) {
              return evaluate_records(dets, labels, s, cfg);
          },
          py::arg("detections"), py::arg("labels"), py::arg("series"),
          py::arg("config") = DetectionConfig{});
    m.def("load_power_csv", [](const std::string& path) {
        return load_power_csv(path, CsvSchema{});
    });
    m.def("load_labels", &load_labels);
}
