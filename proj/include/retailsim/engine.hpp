#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace retailsim {

/// Minutes since simulation start.
using SimTime = double;

using AgentId = std::int32_t;
inline constexpr AgentId kNoAgent = -1;

enum class EventKind : std::uint8_t {
    Arrival,
    BrowseDone,
    PatienceExpired,
    ServiceDone,
    HorizonReached,
};

const char* to_string(EventKind k);

struct Event {
    SimTime time = 0.0;
    std::uint64_t seq = 0;  // assigned by the kernel
    AgentId target = kNoAgent;
    EventKind kind = EventKind::Arrival;
    std::int64_t payload = 0;
};

struct EventHandle {
    std::uint64_t seq = ~0ULL;
    bool valid() const { return seq != ~0ULL; }
    bool operator==(const EventHandle&) const = default;
};

class PastEvent : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Counters for the FEL conservation identity:
/// scheduled == fired + cancelled + pending.
struct KernelStats {
    std::uint64_t scheduled = 0;
    std::uint64_t fired = 0;
    std::uint64_t cancelled = 0;
    std::uint64_t pending = 0;
};

/// Single-threaded discrete-event kernel. Events with equal time fire in
/// scheduling order. Cancellation is lazy: the entry stays in the heap and
/// is skipped when popped.
class Kernel {
  public:
    using Handler = std::function<void(const Event&)>;

    Kernel() = default;
    explicit Kernel(Handler handler) : handler_(std::move(handler)) {}

    void set_handler(Handler handler) { handler_ = std::move(handler); }

    SimTime now() const { return now_; }

    EventHandle schedule(SimTime time, EventKind kind, AgentId target = kNoAgent,
                         std::int64_t payload = 0);
    EventHandle schedule_in(SimTime delay, EventKind kind, AgentId target = kNoAgent,
                            std::int64_t payload = 0) {
        return schedule(now_ + delay, kind, target, payload);
    }

    // True iff the event was still pending and is now inert.
    bool cancel(EventHandle h);
    bool is_pending(EventHandle h) const;

    // Fires every event with time <= horizon, then sets the clock to horizon.
    std::uint64_t run_until(SimTime horizon);

    KernelStats stats() const;

  private:
    enum class Status : std::uint8_t { Pending, Fired, Cancelled };

    struct Later {
        bool operator()(const Event& x, const Event& y) const {
            if (x.time != y.time) return x.time > y.time;
            return x.seq > y.seq;
        }
    };

    Handler handler_;
    SimTime now_ = 0.0;
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::vector<Status> status_;
    std::uint64_t fired_ = 0;
    std::uint64_t cancelled_ = 0;
};

}  // namespace retailsim
