"""Multi-timescale load event detection for household power series.

Thin Python facade over the compiled `_nilmevt` extension: detection
configuration, the synthetic generator, the full detection pipeline, and
match-based evaluation.
"""

try:
    from . import _nilmevt as _ext  # installed wheel: extension lives in-package
except ImportError:  # build tree: extension is on PYTHONPATH as a top-level module
    import _nilmevt as _ext

# Re-export explicitly so both import layouts expose the same names.
ApplianceSpec = _ext.ApplianceSpec
DetectionConfig = _ext.DetectionConfig
DetectedEvent = _ext.DetectedEvent
DetectResult = _ext.DetectResult
EvalScores = _ext.EvalScores
Event = _ext.Event
EventFeatures = _ext.EventFeatures
EventRecord = _ext.EventRecord
EventStage = _ext.EventStage
LabelRecord = _ext.LabelRecord
PowerSeries = _ext.PowerSeries
SynthSpec = _ext.SynthSpec

adaptive_threshold = _ext.adaptive_threshold
detect_step_events = _ext.detect_step_events
evaluate_records = _ext.evaluate_records
event_features = _ext.event_features
events_overlap = _ext.events_overlap
load_labels = _ext.load_labels
load_power_csv = _ext.load_power_csv
overlap_coefficient = _ext.overlap_coefficient
run_detect = _ext.run_detect
synth_generate = _ext.synth_generate
ttest_change_at = _ext.ttest_change_at

__all__ = [
    "ApplianceSpec",
    "DetectionConfig",
    "DetectedEvent",
    "DetectResult",
    "EvalScores",
    "Event",
    "EventFeatures",
    "EventRecord",
    "EventStage",
    "LabelRecord",
    "PowerSeries",
    "SynthSpec",
    "adaptive_threshold",
    "detect_step_events",
    "evaluate_records",
    "event_features",
    "events_overlap",
    "load_labels",
    "load_power_csv",
    "overlap_coefficient",
    "run_detect",
    "synth_generate",
    "ttest_change_at",
]
