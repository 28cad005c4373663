#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace randopt {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the i-th output of stream (seed, stream) is a
/// pure function of (seed, stream, i), so batches can be generated in any
/// order or in parallel and still reproduce the same numbers.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(seed ^ 0x5851F42D4C957F2DULL) ^ mix64(stream + 0x14057B7EF767814FULL)) {}

    constexpr std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix64(key_ + counter_);
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    constexpr double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Uniform source for inverse-transform draws. In antithetic mode every
/// second draw replays the previous draw's uniforms mirrored as 1 - u.
class UniformStream {
public:
    explicit UniformStream(CounterRng rng) : rng_(rng) {}

    void begin_draw() {
        if (mode_ == Mode::Record) {
            mode_ = Mode::Mirror;
        } else if (mode_ == Mode::Mirror) {
            mode_ = Mode::Record;
            used_ = 0;
        } else {
            used_ = 0;
        }
        cursor_ = 0;
    }

    void set_antithetic(bool on) {
        mode_ = on ? Mode::Mirror : Mode::Plain;  // first begin_draw() flips to Record
        used_ = 0;
        cursor_ = 0;
    }

    double next() {
        switch (mode_) {
            case Mode::Plain:
                return rng_.uniform();
            case Mode::Record: {
                double u = rng_.uniform();
                if (used_ < buffer_.size()) buffer_[used_++] = u;
                return u;
            }
            case Mode::Mirror:
                if (cursor_ < used_) return 1.0 - buffer_[cursor_++];
                return rng_.uniform();
        }
        return rng_.uniform();
    }

private:
    enum class Mode { Plain, Record, Mirror };
    CounterRng rng_;
    Mode mode_ = Mode::Plain;
    std::array<double, 32> buffer_{};
    std::size_t used_ = 0;
    std::size_t cursor_ = 0;
};

}  // namespace randopt
