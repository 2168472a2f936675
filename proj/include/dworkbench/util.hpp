#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dwb {

using std::int64_t;
using std::uint64_t;

// Thrown when an exhaustive computation would exceed the configured
// enumeration cap.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when two independent estimators disagree and the result cannot be
// reported as a single number.
struct Inconclusive : std::runtime_error {
    explicit Inconclusive(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input (bad JSON, invalid system file, out-of-range flag).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An identity that holds as a theorem failed to hold numerically; indicates
// an arithmetic bug, never a property of the input.
struct IdentityViolation : std::logic_error {
    explicit IdentityViolation(const std::string& what) : std::logic_error(what) {}
};

// ceil(a / b) for b > 0, correct for negative a.
inline int64_t ceil_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if (a % b != 0 && (a > 0) == (b > 0)) ++q;
    return q;
}

// p-adic valuation of a machine integer, capped; ord(0) = cap.
inline int ord_p(int64_t x, int64_t p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (v < cap && x % p == 0) { x /= p; ++v; }
    return v;
}

// x^e with overflow guard; throws CapExceeded if the result would not fit.
inline uint64_t checked_pow(uint64_t x, uint64_t e, uint64_t limit) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < e; ++i) {
        if (x != 0 && r > limit / x)
            throw CapExceeded("power " + std::to_string(x) + "^" + std::to_string(e) +
                              " exceeds cap " + std::to_string(limit));
        r *= x;
    }
    return r;
}

inline int64_t ipow(int64_t x, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= x;
    return r;
}

// Deterministic seeded RNG. std::uniform_int_distribution is
// implementation-defined, so bounded draws go through next() directly.
class SeededRng {
  public:
    explicit SeededRng(uint64_t seed) : engine_(seed) {}
    uint64_t raw() { return engine_(); }
    // uniform in [0, bound)
    uint64_t next(uint64_t bound) { return bound ? engine_() % bound : 0; }
    uint64_t seed_used() const { return seed_; }

  private:
    std::mt19937_64 engine_;
    uint64_t seed_ = 0;
};

// Chunked parallel map-reduce over [0, total). Each chunk produces a value
// via `work(begin, end)`; results are combined in chunk order so the output
// does not depend on the thread count.
template <class T, class Work, class Combine>
T parallel_chunks(uint64_t total, int threads, T init, Work work, Combine combine) {
    if (threads <= 1 || total < 1024) {
        if (total == 0) return init;
        return combine(std::move(init), work(uint64_t{0}, total));
    }
    int nchunks = threads * 4;
    uint64_t chunk = (total + nchunks - 1) / nchunks;
    std::vector<T> partial;
    partial.reserve(nchunks);
    for (int i = 0; i < nchunks; ++i) partial.push_back(init);
    std::vector<std::thread> pool;
    std::atomic<int> next_chunk{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                int c = next_chunk.fetch_add(1);
                if (c >= nchunks) break;
                uint64_t b = uint64_t(c) * chunk;
                if (b >= total) break;
                uint64_t e = std::min(total, b + chunk);
                partial[c] = work(b, e);
            }
        });
    }
    for (auto& th : pool) th.join();
    T acc = std::move(init);
    for (int c = 0; c * chunk < total; ++c) acc = combine(std::move(acc), std::move(partial[c]));
    return acc;
}

// FNV-1a, used for input digests in reports.
inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace dwb
