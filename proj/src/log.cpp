#include "erz/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

#include "erz/errors.hpp"

namespace erz::log {

namespace {

std::atomic<Level> current{Level::Warn};

void emit(Level l, const char* tag, const std::string& msg) {
    if (l < current.load()) return;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

}  // namespace

void set_level(Level l) { current.store(l); }

Level level() { return current.load(); }

Level level_from_string(const std::string& s) {
    if (s == "debug") return Level::Debug;
    if (s == "info") return Level::Info;
    if (s == "warn") return Level::Warn;
    if (s == "error") return Level::Error;
    if (s == "off") return Level::Off;
    throw InvalidArgument("unknown log level '" + s + "'");
}

void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }
void info(const std::string& msg) { emit(Level::Info, "info", msg); }
void warn(const std::string& msg) { emit(Level::Warn, "warn", msg); }
void error(const std::string& msg) { emit(Level::Error, "error", msg); }

}  // namespace erz::log
