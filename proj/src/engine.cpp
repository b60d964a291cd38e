#include "retailsim/engine.hpp"

#include <cmath>
#include <string>

namespace retailsim {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Arrival: return "Arrival";
        case EventKind::BrowseDone: return "BrowseDone";
        case EventKind::PatienceExpired: return "PatienceExpired";
        case EventKind::ServiceDone: return "ServiceDone";
        case EventKind::HorizonReached: return "HorizonReached";
    }
    return "?";
}

EventHandle Kernel::schedule(SimTime time, EventKind kind, AgentId target, std::int64_t payload) {
    if (!(time >= now_) || std::isnan(time)) {
        throw PastEvent("cannot schedule " + std::string(to_string(kind)) + " at t=" +
                        std::to_string(time) + " before now=" + std::to_string(now_));
    }
    Event e;
    e.time = time;
    e.seq = status_.size();
    e.target = target;
    e.kind = kind;
    e.payload = payload;
    status_.push_back(Status::Pending);
    heap_.push(e);
    return EventHandle{e.seq};
}

bool Kernel::cancel(EventHandle h) {
    if (!h.valid() || h.seq >= status_.size()) return false;
    if (status_[h.seq] != Status::Pending) return false;
    status_[h.seq] = Status::Cancelled;
    ++cancelled_;
    return true;
}

bool Kernel::is_pending(EventHandle h) const {
    return h.valid() && h.seq < status_.size() && status_[h.seq] == Status::Pending;
}

std::uint64_t Kernel::run_until(SimTime horizon) {
    if (horizon < now_) {
        throw PastEvent("run_until horizon " + std::to_string(horizon) + " precedes now");
    }
    std::uint64_t count = 0;
    while (!heap_.empty() && heap_.top().time <= horizon) {
        const Event e = heap_.top();
        heap_.pop();
        if (status_[e.seq] != Status::Pending) continue;
        status_[e.seq] = Status::Fired;
        now_ = e.time;
        ++fired_;
        ++count;
        if (handler_) handler_(e);
    }
    now_ = horizon;
    return count;
}

KernelStats Kernel::stats() const {
    KernelStats s;
    s.scheduled = status_.size();
    s.fired = fired_;
    s.cancelled = cancelled_;
    s.pending = s.scheduled - s.fired - s.cancelled;
    return s;
}

}  // namespace retailsim
