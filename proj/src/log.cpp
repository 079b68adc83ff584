#include "saccadelab/log.hpp"

#include <cstdio>
#include <cstdlib>

namespace saccadelab {

namespace {

LogLevel parse_env_level() {
    const char* env = std::getenv("SACCADE_LAB_LOG");
    if (!env) return LogLevel::warn;
    const std::string v(env);
    if (v == "error") return LogLevel::error;
    if (v == "warn") return LogLevel::warn;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
}

LogLevel& threshold_ref() {
    static LogLevel level = parse_env_level();
    return level;
}

const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "info";
}

} // namespace

LogLevel log_threshold() { return threshold_ref(); }

void set_log_threshold(LogLevel level) { threshold_ref() = level; }

void log_message(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(threshold_ref())) return;
    std::fprintf(stderr, "[%s] %s\n", level_name(level), message.c_str());
}

} // namespace saccadelab
