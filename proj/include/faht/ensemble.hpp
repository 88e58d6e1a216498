#ifndef FAHT_ENSEMBLE_HPP_
#define FAHT_ENSEMBLE_HPP_

#include <deque>
#include <vector>

#include "faht/core.hpp"
#include "faht/tree.hpp"

namespace faht {

// Sliding-window ensemble: a bounded FIFO queue of base trees. A fresh
// member is enqueued at each window boundary (evicting the oldest at
// capacity) and every member trains on every instance from its creation on,
// so the newest member has seen exactly the current window. Prediction is an
// unweighted majority vote. With capacity 1 and a window at least as long as
// the stream this degenerates to a single incrementally trained tree.
class WindowEnsemble {
  public:
    WindowEnsemble(StreamSchema schema, LearnerConfig base_config, long window_size, int capacity);

    // Majority vote over current members; an empty ensemble and exact ties
    // predict the negative class. Score is the granted-vote fraction.
    Prediction predict(const Instance& x) const;

    // Trains every member on the instance; founds a new member when a window
    // opens.
    void train(const Instance& x);

    // Test-then-train step: the returned prediction never sees the instance.
    Prediction process(const Instance& x);

    size_t member_count() const { return members_.size(); }
    long window_size() const { return window_size_; }
    int capacity() const { return capacity_; }
    long node_count() const;

    // Stream position at which each current member was founded, oldest first.
    std::vector<long> member_founded_at() const;

  private:
    StreamSchema schema_;
    LearnerConfig base_config_;
    long window_size_;
    int capacity_;
    long window_fill_ = 0;  // instances accumulated in the current window
    long instances_seen_ = 0;
    std::deque<FahtTree> members_;
    std::deque<long> founded_at_;
};

}  // namespace faht

#endif  // FAHT_ENSEMBLE_HPP_
