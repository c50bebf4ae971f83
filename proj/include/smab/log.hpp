#pragma once

#include <string>

namespace smab::log {

// Verbosity is read once from the SMAB_LOG environment variable:
// "off", "warn" (default), "info" or "debug".
enum class Level { Off = 0, Warn = 1, Info = 2, Debug = 3 };

Level threshold();
void write(Level level, const std::string& message);

inline void warn(const std::string& m) { write(Level::Warn, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void debug(const std::string& m) { write(Level::Debug, m); }

}  // namespace smab::log
