#pragma once

#include <mutex>
#include <ostream>
#include <string_view>

#include <json.hpp>

namespace xdc::app {

enum class LogLevel { off = 0, info = 1, trace = 2 };

/// XDC_LOG: unset, "0" or "off" -> off; "1" or "info" -> run events;
/// "2" or "trace" -> per-step records as well.
[[nodiscard]] LogLevel parse_log_level(std::string_view text);
[[nodiscard]] LogLevel log_level_from_env();

/// Line-delimited JSON records, safe to share between sweep workers.
class TraceLog {
public:
    TraceLog(LogLevel level, std::ostream& out) : level_(level), out_(out) {}

    [[nodiscard]] bool enabled(LogLevel at) const { return level_ != LogLevel::off && level_ >= at; }
    void emit(LogLevel at, const nlohmann::json& record);

private:
    LogLevel level_;
    std::ostream& out_;
    std::mutex mutex_;
};

}  // namespace xdc::app
