#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace meshloc {

enum class EventKind {
    OgmEmit,
    OgmArrive,
    RangingTick,
    UwbFrameArrive,
    SessionTimeout,
    PublishTick,
    LocalizationTick,
    MetricsSample,
    InterferenceEdge,
};

struct Event {
    double t = 0.0;
    std::uint64_t seq = 0;  // insertion counter; ties process in schedule order
    EventKind kind = EventKind::OgmEmit;
    std::function<void()> fn;
};

/// Min-queue over (t, seq). Scheduling into the past is a simulator bug and
/// aborts the run.
class EventQueue {
public:
    void schedule(double t, EventKind kind, std::function<void()> fn) {
        if (t < now_) throw std::logic_error("EventQueue: scheduling into the past");
        heap_.push(Event{t, next_seq_++, kind, std::move(fn)});
    }

    bool empty() const { return heap_.empty(); }

    double next_time() const { return heap_.top().t; }

    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        now_ = e.t;
        return e;
    }

    double now() const { return now_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.t != b.t) return a.t > b.t;
            return a.seq > b.seq;
        }
    };
    double now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
};

}  // namespace meshloc
