#pragma once

#include <string>
#include <vector>

#include "nilmevt/types.hpp"

namespace nilmevt {

struct LabelRecord {
    double start_epoch = 0.0;
    double end_epoch = 0.0;
    std::string appliance;
    std::string direction;  // on | off | transition
};

struct CsvSchema {
    std::string timestamp_col = "timestamp";
    std::string active_col = "active";
    std::string reactive_col;  // empty = absent
};

/// Parse a power CSV into one or more gapless 1 Hz series. Duplicate
/// timestamps collapse last-wins, sub-second rows are averaged per second,
/// gaps up to 5 s are linearly interpolated, and longer gaps split the file.
std::vector<PowerSeries> load_power_csv(const std::string& path, const CsvSchema& schema);

void write_power_csv(const std::string& path, const PowerSeries& s);

/// CSV with columns start,end,appliance,direction, sorted by start.
std::vector<LabelRecord> load_labels(const std::string& path);

void write_labels_csv(const std::string& path, const std::vector<LabelRecord>& labels);

/// Detected-event rows with computed features, one JSON object per line.
struct EventRecord {
    double start_epoch = 0.0;
    double end_epoch = 0.0;
    double delta_p = 0.0;
    double delta_q = 0.0;
    double range_p = 0.0;
    int window_len = 1;
    std::string stage;
};

void write_events_jsonl(const std::string& path, const std::vector<EventRecord>& events);
std::vector<EventRecord> load_events_jsonl(const std::string& path);

}  // namespace nilmevt
