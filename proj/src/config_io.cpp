#include "nilmevt/config_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nilmevt {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Cut a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        else if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

TomlValue parse_value(const std::string& raw, int line_no) {
    std::string t = strip(raw);
    if (t.empty()) throw std::runtime_error("toml line " + std::to_string(line_no) + ": empty value");

    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"')
            throw std::runtime_error("toml line " + std::to_string(line_no) + ": unterminated string");
        return {t.substr(1, t.size() - 2)};
    }
    if (t == "true") return {true};
    if (t == "false") return {false};
    if (t.front() == '[') {
        if (t.back() != ']')
            throw std::runtime_error("toml line " + std::to_string(line_no) + ": unterminated array");
        std::string inner = t.substr(1, t.size() - 2);
        std::vector<double> nums;
        std::vector<std::string> strs;
        std::string item;
        std::istringstream is(inner);
        while (std::getline(is, item, ',')) {
            item = strip(item);
            if (item.empty()) continue;
            if (item.front() == '"') strs.push_back(std::get<std::string>(parse_value(item, line_no).v));
            else nums.push_back(std::get<double>(parse_value(item, line_no).v));
        }
        if (!strs.empty()) return {strs};
        return {nums};
    }
    char* endp = nullptr;
    double v = std::strtod(t.c_str(), &endp);
    if (!endp || *endp != '\0')
        throw std::runtime_error("toml line " + std::to_string(line_no) + ": bad value '" + t + "'");
    return {v};
}

}  // namespace

double TomlTable::number(const std::string& k, double fallback) const {
    auto it = values.find(k);
    return it == values.end() ? fallback : it->second.number();
}

std::string TomlTable::str(const std::string& k, const std::string& fallback) const {
    auto it = values.find(k);
    return it == values.end() ? fallback : it->second.str();
}

TomlDocument parse_toml(const std::string& text) {
    TomlDocument doc;
    TomlTable* current = &doc.root;

    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        line = strip(strip_comment(line));
        if (line.empty()) continue;

        if (line.size() > 3 && line.substr(0, 2) == "[[" && line.substr(line.size() - 2) == "]]") {
            std::string name = strip(line.substr(2, line.size() - 4));
            doc.table_arrays[name].emplace_back();
            current = &doc.table_arrays[name].back();
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            std::string name = strip(line.substr(1, line.size() - 2));
            doc.table_arrays[name].emplace_back();
            current = &doc.table_arrays[name].back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("toml line " + std::to_string(line_no) + ": expected key = value");
        std::string key = strip(line.substr(0, eq));
        current->values[key] = parse_value(line.substr(eq + 1), line_no);
    }
    return doc;
}

TomlDocument parse_toml_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_toml(buf.str());
}

DetectionConfig detection_config_from_toml(const TomlDocument& doc) {
    DetectionConfig cfg;
    const TomlTable& t = doc.root;
    if (t.has("window_set")) {
        cfg.window_set.clear();
        for (double w : t.values.at("window_set").numbers())
            cfg.window_set.push_back(static_cast<int>(w));
    }
    cfg.k_th1 = t.number("k_th1", cfg.k_th1);
    cfg.k_th2 = t.number("k_th2", cfg.k_th2);
    cfg.dp_th1 = t.number("dp_th1", cfg.dp_th1);
    cfg.dp_th2 = t.number("dp_th2", cfg.dp_th2);
    cfg.dt_steady = t.number("dt_steady", cfg.dt_steady);
    cfg.n_days = static_cast<int>(t.number("n_days", cfg.n_days));
    cfg.n_th = static_cast<int>(t.number("n_th", cfg.n_th));
    cfg.bandwidth = t.number("bandwidth", cfg.bandwidth);
    cfg.vad_window = static_cast<int>(t.number("vad_window", cfg.vad_window));
    cfg.lambda1 = t.number("lambda1", cfg.lambda1);
    cfg.lambda2 = t.number("lambda2", cfg.lambda2);
    cfg.w_post = static_cast<int>(t.number("w_post", cfg.w_post));
    cfg.eta = t.number("eta", cfg.eta);
    cfg.t_test_alpha = t.number("t_test_alpha", cfg.t_test_alpha);
    cfg.rho = t.number("rho", cfg.rho);
    cfg.penalty = t.number("penalty", cfg.penalty);
    cfg.noise_window = static_cast<int>(t.number("noise_window", cfg.noise_window));
    cfg.mad_scale = t.number("mad_scale", cfg.mad_scale);
    cfg.d_min = t.number("d_min", cfg.d_min);
    cfg.plr_tolerance = t.number("plr_tolerance", cfg.plr_tolerance);
    cfg.validate();
    return cfg;
}

DetectionConfig load_detection_config(const std::string& path) {
    return detection_config_from_toml(parse_toml_file(path));
}

SynthSpec load_synth_spec(const std::string& path) {
    TomlDocument doc = parse_toml_file(path);
    SynthSpec spec;
    const TomlTable& t = doc.root;
    spec.duration_s = t.number("duration", spec.duration_s);
    spec.seed = static_cast<std::uint64_t>(t.number("seed", 0));
    spec.start_epoch = t.number("start_epoch", spec.start_epoch);
    spec.base_load = t.number("base_load", spec.base_load);
    spec.noise_sigma = t.number("noise_sigma", spec.noise_sigma);

    auto it = doc.table_arrays.find("appliance");
    if (it != doc.table_arrays.end()) {
        for (const auto& at : it->second) {
            ApplianceSpec app;
            app.kind = appliance_kind_from_string(at.str("kind", "step"));
            app.name = at.str("name", "appliance");
            app.power = at.number("power", 0.0);
            if (at.has("levels"))
                app.levels = at.values.at("levels").numbers();
            app.plateau_s = at.number("plateau", app.plateau_s);
            app.transient_s = at.number("transient", app.transient_s);
            app.amplitude = at.number("amplitude", app.amplitude);
            app.quiet_phase_s = at.number("quiet_phase", app.quiet_phase_s);
            app.loud_phase_s = at.number("loud_phase", app.loud_phase_s);
            if (at.has("schedule"))
                app.schedule = at.values.at("schedule").numbers();
            app.hold_s = at.number("hold", app.hold_s);
            spec.appliances.push_back(std::move(app));
        }
    }
    return spec;
}

}  // namespace nilmevt
