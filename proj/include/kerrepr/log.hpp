#ifndef KERREPR_LOG_HPP
#define KERREPR_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <string>

namespace kerrepr {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

/// Threshold from the KERREPR_LOG environment variable (debug, info, warn,
/// error, off); defaults to warn.  Read once.
inline LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("KERREPR_LOG");
    if (!env) return LogLevel::kWarn;
    const std::string value = env;
    if (value == "debug") return LogLevel::kDebug;
    if (value == "info") return LogLevel::kInfo;
    if (value == "warn") return LogLevel::kWarn;
    if (value == "error") return LogLevel::kError;
    if (value == "off") return LogLevel::kOff;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void log_message(LogLevel level, const std::string& message) {
  if (level < log_threshold()) return;
  const char* name = level == LogLevel::kDebug  ? "debug"
                     : level == LogLevel::kInfo ? "info"
                     : level == LogLevel::kWarn ? "warn"
                                                : "error";
  std::fprintf(stderr, "[kerrepr] %s: %s\n", name, message.c_str());
}

inline void log_debug(const std::string& m) { log_message(LogLevel::kDebug, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::kInfo, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::kWarn, m); }
inline void log_error(const std::string& m) { log_message(LogLevel::kError, m); }

}  // namespace kerrepr

#endif
