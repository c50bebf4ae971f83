#include "smab/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace smab::log {

Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("SMAB_LOG");
    if (!env) return Level::Warn;
    if (std::strcmp(env, "off") == 0) return Level::Off;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

void write(Level level, const std::string& message) {
  if (level > threshold()) return;
  const char* tag = level == Level::Warn ? "warn" : level == Level::Info ? "info" : "debug";
  std::fprintf(stderr, "[smab %s] %s\n", tag, message.c_str());
}

}  // namespace smab::log
