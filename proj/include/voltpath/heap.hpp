#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <vector>

namespace voltpath {

/// Addressable 4-ary min-heap over dense ids 0..n-1 with decrease-key.
/// Ties on the key are broken toward the smaller id, so delete-min order
/// is fully deterministic.
template <typename Key>
class IndexedMinHeap {
  public:
    explicit IndexedMinHeap(std::uint32_t n)
        : position_(n, kAbsent) {}

    bool empty() const { return entries_.empty(); }
    bool contains(std::uint32_t id) const { return position_[id] != kAbsent; }

    void insert(std::uint32_t id, Key key) {
        assert(!contains(id));
        position_[id] = static_cast<std::uint32_t>(entries_.size());
        entries_.push_back({key, id});
        sift_up(entries_.size() - 1);
    }

    void decrease_key(std::uint32_t id, Key key) {
        std::uint32_t slot = position_[id];
        assert(slot != kAbsent && key <= entries_[slot].key);
        entries_[slot].key = key;
        sift_up(slot);
    }

    std::uint32_t delete_min() {
        assert(!entries_.empty());
        std::uint32_t top = entries_.front().id;
        position_[top] = kAbsent;
        if (entries_.size() > 1) {
            entries_.front() = entries_.back();
            position_[entries_.front().id] = 0;
        }
        entries_.pop_back();
        if (!entries_.empty()) sift_down(0);
        return top;
    }

  private:
    struct Entry {
        Key key;
        std::uint32_t id;
    };

    static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

    static bool less(const Entry& a, const Entry& b) {
        return a.key < b.key || (a.key == b.key && a.id < b.id);
    }

    void sift_up(std::size_t slot) {
        Entry e = entries_[slot];
        while (slot > 0) {
            std::size_t parent = (slot - 1) / 4;
            if (!less(e, entries_[parent])) break;
            entries_[slot] = entries_[parent];
            position_[entries_[slot].id] = static_cast<std::uint32_t>(slot);
            slot = parent;
        }
        entries_[slot] = e;
        position_[e.id] = static_cast<std::uint32_t>(slot);
    }

    void sift_down(std::size_t slot) {
        Entry e = entries_[slot];
        for (;;) {
            std::size_t first_child = slot * 4 + 1;
            if (first_child >= entries_.size()) break;
            std::size_t best = first_child;
            std::size_t last = std::min(first_child + 4, entries_.size());
            for (std::size_t c = first_child + 1; c < last; ++c)
                if (less(entries_[c], entries_[best])) best = c;
            if (!less(entries_[best], e)) break;
            entries_[slot] = entries_[best];
            position_[entries_[slot].id] = static_cast<std::uint32_t>(slot);
            slot = best;
        }
        entries_[slot] = e;
        position_[e.id] = static_cast<std::uint32_t>(slot);
    }

    std::vector<Entry> entries_;
    std::vector<std::uint32_t> position_;
};

} // namespace voltpath
