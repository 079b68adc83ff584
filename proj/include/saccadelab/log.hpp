#pragma once

#include <string>

namespace saccadelab {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Threshold comes from the SACCADE_LAB_LOG environment variable
/// (error|warn|info|debug); default warn.
LogLevel log_threshold();
void set_log_threshold(LogLevel level);

void log_message(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log_message(LogLevel::error, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::warn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::info, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::debug, m); }

} // namespace saccadelab
