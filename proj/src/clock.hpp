#ifndef ANYVA_CLOCK_HPP
#define ANYVA_CLOCK_HPP

#include <chrono>
#include <cstdint>
#include <limits>

namespace anyva {

// Countdown governing every budgeted operation. One cost unit is one INSERT
// attempt, whether or not the attempt lands an entry. The canonical mode is
// deterministic unit counting; the wall-clock mode adapts the same interface
// for interactive CLI runs and makes no reproducibility promises.
class BudgetClock {
public:
    enum class Mode { units, wall, unlimited };

    static BudgetClock unlimited() { return BudgetClock(Mode::unlimited, 0); }

    static BudgetClock units(uint64_t n) { return BudgetClock(Mode::units, n); }

    static BudgetClock wall_micros(uint64_t us) {
        BudgetClock c(Mode::wall, 0);
        c.deadline_ = std::chrono::steady_clock::now() + std::chrono::microseconds(us);
        return c;
    }

    Mode mode() const { return mode_; }

    // Consume one attempt. Returns false (consuming nothing) once exhausted.
    bool try_consume() {
        switch (mode_) {
        case Mode::unlimited:
            ++attempts_;
            return true;
        case Mode::units:
            if (remaining_ == 0) return false;
            --remaining_;
            ++attempts_;
            return true;
        case Mode::wall:
            if (std::chrono::steady_clock::now() >= deadline_) return false;
            ++attempts_;
            return true;
        }
        return false;
    }

    bool exhausted() const {
        switch (mode_) {
        case Mode::unlimited: return false;
        case Mode::units: return remaining_ == 0;
        case Mode::wall: return std::chrono::steady_clock::now() >= deadline_;
        }
        return true;
    }

    uint64_t attempts() const { return attempts_; }

    // timer() in cost units; unlimited reports the max value.
    uint64_t timer_units() const {
        return mode_ == Mode::units ? remaining_ : std::numeric_limits<uint64_t>::max();
    }

    // Per-node share timer()/s (integer division); the remainder stays here
    // and is reclaimed when the sub-clock is absorbed.
    BudgetClock carve(uint64_t s) const {
        if (s == 0) s = 1;
        switch (mode_) {
        case Mode::unlimited:
            return unlimited();
        case Mode::units:
            return units(remaining_ / s);
        case Mode::wall: {
            BudgetClock c(Mode::wall, 0);
            auto now = std::chrono::steady_clock::now();
            auto left = deadline_ > now ? deadline_ - now : std::chrono::steady_clock::duration::zero();
            c.deadline_ = now + left / s;
            return c;
        }
        }
        return unlimited();
    }

    void absorb(const BudgetClock& sub) {
        attempts_ += sub.attempts_;
        if (mode_ == Mode::units)
            remaining_ = remaining_ >= sub.attempts_ ? remaining_ - sub.attempts_ : 0;
    }

private:
    BudgetClock(Mode m, uint64_t n) : mode_(m), remaining_(n) {}

    Mode mode_;
    uint64_t remaining_ = 0;
    uint64_t attempts_ = 0;
    std::chrono::steady_clock::time_point deadline_{};
};

} // namespace anyva

#endif
