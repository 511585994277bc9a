#include "nilmevt/ingestion.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace nilmevt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_timestamp(const std::string& raw, int line_no) {
    if (raw.empty()) throw std::runtime_error("line " + std::to_string(line_no) + ": empty timestamp");
    // Numeric epoch seconds first, ISO-8601 otherwise.
    char* endp = nullptr;
    double v = std::strtod(raw.c_str(), &endp);
    if (endp && *endp == '\0') return v;

    std::tm tm{};
    std::istringstream is(raw);
    is >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%S");
    if (is.fail())
        throw std::runtime_error("line " + std::to_string(line_no) + ": unparseable timestamp '" + raw + "'");
    return static_cast<double>(timegm(&tm));
}

double parse_number(const std::string& raw, int line_no, const char* what) {
    char* endp = nullptr;
    double v = std::strtod(raw.c_str(), &endp);
    if (raw.empty() || !endp || *endp != '\0')
        throw std::runtime_error("line " + std::to_string(line_no) + ": unparseable " + what + " '" + raw + "'");
    return v;
}

int find_column(const std::vector<std::string>& header, const std::string& name, bool required) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    if (required) throw std::runtime_error("missing column '" + name + "'");
    return -1;
}

}  // namespace

std::vector<PowerSeries> load_power_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
    auto header = split_csv_line(line);
    int c_ts = find_column(header, schema.timestamp_col, true);
    int c_p = find_column(header, schema.active_col, true);
    int c_q = schema.reactive_col.empty() ? -1 : find_column(header, schema.reactive_col, true);

    struct Row {
        double t, p, q;
    };
    std::vector<Row> rows;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        int needed = std::max({c_ts, c_p, c_q});
        if (static_cast<int>(cells.size()) <= needed)
            throw std::runtime_error("line " + std::to_string(line_no) + ": too few columns");
        Row r;
        r.t = parse_timestamp(cells[c_ts], line_no);
        r.p = parse_number(cells[c_p], line_no, "active power");
        r.q = c_q >= 0 ? parse_number(cells[c_q], line_no, "reactive power") : 0.0;
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");

    // Exact-duplicate timestamps: last wins.
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
    {
        std::vector<Row> dedup;
        for (const auto& r : rows) {
            if (!dedup.empty() && dedup.back().t == r.t) dedup.back() = r;
            else dedup.push_back(r);
        }
        rows.swap(dedup);
    }

    // Downsample to 1 Hz buckets by mean.
    struct Bucket {
        double p_sum = 0, q_sum = 0;
        int n = 0;
    };
    std::map<long long, Bucket> buckets;
    for (const auto& r : rows) {
        auto& b = buckets[static_cast<long long>(std::floor(r.t))];
        b.p_sum += r.p;
        b.q_sum += r.q;
        ++b.n;
    }

    const bool has_q = c_q >= 0;
    std::vector<PowerSeries> out;
    PowerSeries cur;
    long long prev_t = 0;
    double prev_p = 0, prev_q = 0;
    bool first = true;

    auto flush = [&]() {
        if (!cur.active.empty()) out.push_back(std::move(cur));
        cur = PowerSeries{};
    };

    for (const auto& [t, b] : buckets) {
        double p = b.p_sum / b.n;
        double q = b.q_sum / b.n;
        if (first) {
            cur.start_epoch = static_cast<double>(t);
        } else {
            long long gap = t - prev_t;
            if (gap > 5) {
                flush();
                cur.start_epoch = static_cast<double>(t);
            } else {
                for (long long k = 1; k < gap; ++k) {
                    double frac = static_cast<double>(k) / static_cast<double>(gap);
                    cur.active.push_back(prev_p + frac * (p - prev_p));
                    if (has_q) cur.reactive.push_back(prev_q + frac * (q - prev_q));
                }
            }
        }
        cur.active.push_back(p);
        if (has_q) cur.reactive.push_back(q);
        prev_t = t;
        prev_p = p;
        prev_q = q;
        first = false;
    }
    flush();
    return out;
}

void write_power_csv(const std::string& path, const PowerSeries& s) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "timestamp,active";
    if (s.has_reactive()) f << ",reactive";
    f << "\n";
    f << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        f << static_cast<long long>(s.epoch_at(i)) << "," << s.active[i];
        if (s.has_reactive()) f << "," << s.reactive[i];
        f << "\n";
    }
}

std::vector<LabelRecord> load_labels(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(f, line)) return {};
    auto header = split_csv_line(line);
    int c_s = find_column(header, "start", true);
    int c_e = find_column(header, "end", true);
    int c_a = find_column(header, "appliance", true);
    int c_d = find_column(header, "direction", true);

    std::vector<LabelRecord> out;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        LabelRecord r;
        r.start_epoch = parse_number(cells[c_s], line_no, "start");
        r.end_epoch = parse_number(cells[c_e], line_no, "end");
        r.appliance = cells[c_a];
        r.direction = cells[c_d];
        if (r.end_epoch < r.start_epoch)
            throw std::runtime_error("line " + std::to_string(line_no) + ": label end before start");
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [](const LabelRecord& a, const LabelRecord& b) { return a.start_epoch < b.start_epoch; });
    return out;
}

void write_labels_csv(const std::string& path, const std::vector<LabelRecord>& labels) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "start,end,appliance,direction\n";
    f << std::setprecision(17);
    for (const auto& r : labels)
        f << r.start_epoch << "," << r.end_epoch << "," << r.appliance << "," << r.direction << "\n";
}

void write_events_jsonl(const std::string& path, const std::vector<EventRecord>& events) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const auto& e : events) {
        nlohmann::json j{{"start_epoch", e.start_epoch}, {"end_epoch", e.end_epoch},
                         {"delta_p", e.delta_p},         {"delta_q", e.delta_q},
                         {"range_p", e.range_p},         {"window_len", e.window_len},
                         {"stage", e.stage}};
        f << j.dump() << "\n";
    }
}

std::vector<EventRecord> load_events_jsonl(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<EventRecord> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        EventRecord e;
        e.start_epoch = j.at("start_epoch").get<double>();
        e.end_epoch = j.at("end_epoch").get<double>();
        e.delta_p = j.value("delta_p", 0.0);
        e.delta_q = j.value("delta_q", 0.0);
        e.range_p = j.value("range_p", 0.0);
        e.window_len = j.value("window_len", 1);
        e.stage = j.value("stage", "step");
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace nilmevt
