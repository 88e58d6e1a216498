#include "faht/ensemble.hpp"

namespace faht {

WindowEnsemble::WindowEnsemble(StreamSchema schema, LearnerConfig base_config,
                               long window_size, int capacity)
    : schema_(std::move(schema)),
      base_config_(std::move(base_config)),
      window_size_(window_size),
      capacity_(capacity) {
    if (window_size_ < 1) throw std::invalid_argument("WindowEnsemble: window size must be >= 1");
    if (capacity_ < 1) throw std::invalid_argument("WindowEnsemble: capacity must be >= 1");
    base_config_.validate();
}

Prediction WindowEnsemble::predict(const Instance& x) const {
    Prediction p;
    p.label = schema_.negative_class_index();
    p.score = 0.0;
    if (members_.empty()) return p;

    long granted = 0;
    for (const FahtTree& m : members_) {
        if (m.predict(x).label == schema_.positive_class_index()) ++granted;
    }
    long rejected = static_cast<long>(members_.size()) - granted;
    if (granted > rejected) p.label = schema_.positive_class_index();
    p.score = static_cast<double>(granted) / static_cast<double>(members_.size());
    return p;
}

void WindowEnsemble::train(const Instance& x) {
    if (!x.has_label()) throw std::invalid_argument("WindowEnsemble::train: instance has no label");

    if (window_fill_ == 0) {
        // Window boundary: found the learner for this window.
        if (static_cast<int>(members_.size()) == capacity_) {
            members_.pop_front();
            founded_at_.pop_front();
        }
        members_.emplace_back(schema_, base_config_);
        founded_at_.push_back(instances_seen_);
    }
    ++instances_seen_;
    ++window_fill_;
    for (FahtTree& m : members_) m.train(x);
    if (window_fill_ == window_size_) window_fill_ = 0;
}

Prediction WindowEnsemble::process(const Instance& x) {
    Prediction p = predict(x);
    train(x);
    return p;
}

long WindowEnsemble::node_count() const {
    long n = 0;
    for (const FahtTree& m : members_) n += m.node_count();
    return n;
}

std::vector<long> WindowEnsemble::member_founded_at() const {
    return {founded_at_.begin(), founded_at_.end()};
}

}  // namespace faht
