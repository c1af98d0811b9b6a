#pragma once

#include <cstdio>
#include <string>

namespace meshloc::log {

enum class Level { Off = 0, Info = 1, Trace = 2 };

inline Level& level() {
    static Level lvl = Level::Off;
    return lvl;
}

inline Level parse_level(const char* s) {
    if (!s) return Level::Off;
    std::string v(s);
    if (v == "info") return Level::Info;
    if (v == "trace") return Level::Trace;
    return Level::Off;
}

inline void info(const std::string& msg) {
    if (level() >= Level::Info) std::fprintf(stderr, "[info] %s\n", msg.c_str());
}

inline void trace(const std::string& msg) {
    if (level() >= Level::Trace) std::fprintf(stderr, "[trace] %s\n", msg.c_str());
}

}  // namespace meshloc::log
