#include "xdc/app/trace.hpp"

#include <cstdlib>
#include <string>

namespace xdc::app {

LogLevel parse_log_level(std::string_view text) {
    if (text.empty() || text == "0" || text == "off") return LogLevel::off;
    if (text == "2" || text == "trace") return LogLevel::trace;
    return LogLevel::info;
}

LogLevel log_level_from_env() {
    const char* v = std::getenv("XDC_LOG");
    return parse_log_level(v ? std::string_view(v) : std::string_view());
}

void TraceLog::emit(LogLevel at, const nlohmann::json& record) {
    if (!enabled(at)) return;
    const std::string line = record.dump();
    std::lock_guard lock(mutex_);
    out_ << line << '\n';
    out_.flush();
}

}  // namespace xdc::app
