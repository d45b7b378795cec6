#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "rancn/rng.hpp"

namespace rancn {

// Incremental FNV-1a digest over a canonical text rendering of state.
// Used for atomicity checks (pre/post dispatch) and perception-purity tests.
class Digest {
public:
    void feed(std::string_view text) { state_ = fnv1a64(text, state_); }

    void feed_double(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g|", v);
        feed(buf);
    }

    void feed_int(long long v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld|", v);
        feed(buf);
    }

    std::uint64_t value() const { return state_; }

    std::string hex() const {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace rancn
