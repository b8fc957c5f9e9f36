#include "xdc/app/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xdc/error.hpp"

namespace xdc::app {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* want) {
    throw ConfigError("config key '" + std::string(key) + "': expected " + want + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        bad_value(key, v, "a number");
    }
    return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
    return out;
}

std::vector<std::string_view> split(std::string_view v, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = v.find(sep, start);
        out.push_back(trim(v.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& show) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += show(items[i]);
    }
    return out;
}

std::string absolute(const std::string& p) {
    return p.empty() ? p : std::filesystem::absolute(p).lexically_normal().string();
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    value = trim(value);
    auto& g = guidance;
    if (key == "reference") reference = value;
    else if (key == "object") object = value;
    else if (key == "mask") mask = value;
    else if (key == "output") output = value;
    else if (key == "position") {
        const auto parts = split(value, ',');
        if (parts.size() != 2) bad_value(key, value, "ROW,COL");
        position_row = to_int<int>(key, parts[0]);
        position_col = to_int<int>(key, parts[1]);
    } else if (key == "scale") scale = to_double(key, value);
    else if (key == "t_in") g.t_in = to_double(key, value);
    else if (key == "t_out") g.t_out = to_double(key, value);
    else if (key == "n_in") g.n_in = to_int<int>(key, value);
    else if (key == "n_out") g.n_out = to_int<int>(key, value);
    else if (key == "r") g.r = to_double(key, value);
    else if (key == "u") g.u = to_int<int>(key, value);
    else if (key == "p_blend") {
        if (value == "auto") g.p_blend.reset();
        else g.p_blend = to_int<int>(key, value);
    } else if (key == "blend_space") g.blend_space = parse_blend_space(std::string(value));
    else if (key == "sampler") g.sampler = parse_sampler_kind(std::string(value));
    else if (key == "steps") g.steps = to_int<int>(key, value);
    else if (key == "seed") g.seed = to_int<std::uint64_t>(key, value);
    else if (key == "guidance_scale") g.guidance_scale = to_double(key, value);
    else if (key == "backend") {
        if (value != "oracle" && value != "bridge") bad_value(key, value, "'oracle' or 'bridge'");
        backend = value;
    } else if (key == "bridge_addr") bridge_addr = value;
    else if (key == "prompt") prompt = value;
    else if (key == "oracle_mean") {
        oracle_means.clear();
        if (!value.empty()) {
            for (auto p : split(value, ',')) oracle_means.emplace_back(p);
        }
    } else if (key == "oracle_std") oracle_std = to_double(key, value);
    else if (key == "sweep.t_in") {
        sweep_t_in.clear();
        if (!value.empty()) for (auto p : split(value, ',')) sweep_t_in.push_back(to_double(key, p));
    } else if (key == "sweep.n_in") {
        sweep_n_in.clear();
        if (!value.empty()) for (auto p : split(value, ',')) sweep_n_in.push_back(to_int<int>(key, p));
    } else if (key == "sweep.r") {
        sweep_r.clear();
        if (!value.empty()) for (auto p : split(value, ',')) sweep_r.push_back(to_double(key, p));
    } else if (key == "workers") workers = to_int<int>(key, value);
    else if (key == "band") band = to_int<int>(key, value);
    else if (key == "count") count = to_int<int>(key, value);
    else if (key == "schedule.digest") recorded_schedule_digest = std::string(value);
    else if (key.substr(0, 9) == "schedule." || key.substr(0, 7) == "output." || key == "xdc.version") {
        // informational lines written into sidecars
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

void RunConfig::validate() const {
    guidance.validate();
    if (backend == "bridge" && bridge_addr.empty()) throw ConfigError("backend 'bridge' needs bridge_addr");
    if (!(scale > 0.0)) throw ConfigError("scale must be positive");
    if (!(oracle_std >= 0.0)) throw ConfigError("oracle_std must be >= 0");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (band < 1) throw ConfigError("band must be at least 1");
    if (count < 1) throw ConfigError("count must be at least 1");
    if (prompt.find('\n') != std::string::npos) throw ConfigError("prompt must be a single line");
}

RunConfig RunConfig::parse(std::string_view text) {
    RunConfig cfg;
    int line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string RunConfig::serialize() const {
    const auto& g = guidance;
    std::ostringstream os;
    os << "reference = " << absolute(reference) << "\n";
    os << "object = " << absolute(object) << "\n";
    os << "mask = " << absolute(mask) << "\n";
    os << "output = " << absolute(output) << "\n";
    os << "position = " << position_row << "," << position_col << "\n";
    os << "scale = " << fmt(scale) << "\n";
    os << "t_in = " << fmt(g.t_in) << "\n";
    os << "t_out = " << fmt(g.t_out) << "\n";
    os << "n_in = " << g.n_in << "\n";
    os << "n_out = " << g.n_out << "\n";
    os << "r = " << fmt(g.r) << "\n";
    os << "u = " << g.u << "\n";
    os << "p_blend = " << (g.p_blend ? std::to_string(*g.p_blend) : std::string("auto")) << "\n";
    os << "blend_space = " << to_string(g.blend_space) << "\n";
    os << "sampler = " << to_string(g.sampler) << "\n";
    os << "steps = " << g.steps << "\n";
    os << "seed = " << g.seed << "\n";
    os << "guidance_scale = " << fmt(g.guidance_scale) << "\n";
    os << "backend = " << backend << "\n";
    os << "bridge_addr = " << bridge_addr << "\n";
    os << "prompt = " << prompt << "\n";
    os << "oracle_mean = " << join(oracle_means, [](const std::string& p) { return absolute(p); }) << "\n";
    os << "oracle_std = " << fmt(oracle_std) << "\n";
    os << "sweep.t_in = " << join(sweep_t_in, fmt) << "\n";
    os << "sweep.n_in = " << join(sweep_n_in, [](int v) { return std::to_string(v); }) << "\n";
    os << "sweep.r = " << join(sweep_r, fmt) << "\n";
    os << "workers = " << workers << "\n";
    os << "band = " << band << "\n";
    os << "count = " << count << "\n";
    return os.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& output) {
    std::filesystem::path p = output;
    p.replace_extension(".cfg");
    return p;
}

}  // namespace xdc::app
