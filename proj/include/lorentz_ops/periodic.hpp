#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lorentz_ops {

/// Eventually periodic sequence on {1, 2, ...}: explicit values up to
/// `threshold`, then value(n) = tail[n mod period] for n > threshold.
template <class V>
class Periodic {
 public:
  Periodic() : tail_{V{}} {}
  explicit Periodic(V constant) : tail_{std::move(constant)} {}
  Periodic(std::vector<V> head, std::vector<V> tail) : head_(std::move(head)), tail_(std::move(tail)) {
    if (tail_.empty()) throw std::invalid_argument("Periodic: empty tail");
    canonicalize();
  }

  /// Samples fn on 1..threshold and on one representative of each residue
  /// class beyond it. Caller guarantees fn is periodic beyond threshold.
  template <class Fn>
  static Periodic tabulate(std::uint64_t threshold, std::uint64_t period, Fn&& fn) {
    if (period == 0) throw std::invalid_argument("Periodic: zero period");
    std::vector<V> head;
    head.reserve(threshold);
    for (std::uint64_t n = 1; n <= threshold; ++n) head.push_back(fn(n));
    std::vector<V> tail(period);
    for (std::uint64_t r = 0; r < period; ++r) {
      std::uint64_t first = threshold + 1;
      std::uint64_t n = first + (r + period - first % period) % period;
      tail[r] = fn(n);
    }
    return Periodic(std::move(head), std::move(tail));
  }

  template <class W, class Fn>
  static Periodic combine(const Periodic<W>& a, const Periodic<W>& b, Fn&& fn) {
    std::uint64_t thr = std::max(a.threshold(), b.threshold());
    std::uint64_t per = std::lcm(a.period(), b.period());
    return tabulate(thr, per, [&](std::uint64_t n) { return fn(a.at(n), b.at(n)); });
  }

  template <class Fn>
  auto map(Fn&& fn) const -> Periodic<decltype(fn(std::declval<const V&>()))> {
    using W = decltype(fn(std::declval<const V&>()));
    std::vector<W> h;
    std::vector<W> t;
    h.reserve(head_.size());
    t.reserve(tail_.size());
    for (const V& v : head_) h.push_back(fn(v));
    for (const V& v : tail_) t.push_back(fn(v));
    return Periodic<W>(std::move(h), std::move(t));
  }

  typename std::vector<V>::const_reference at(std::uint64_t n) const {
    if (n == 0) throw std::out_of_range("Periodic: index 0");
    if (n <= head_.size()) return head_[n - 1];
    return tail_[n % tail_.size()];
  }

  std::uint64_t threshold() const { return head_.size(); }
  std::uint64_t period() const { return tail_.size(); }
  const std::vector<V>& head() const { return head_; }
  const std::vector<V>& tail() const { return tail_; }

  /// Every value that occurs somewhere in the sequence.
  std::vector<V> values() const {
    std::vector<V> out;
    auto add = [&](const V& v) {
      for (const V& w : out) {
        if (w == v) return;
      }
      out.push_back(v);
    };
    for (const V& v : head_) add(v);
    for (const V& v : tail_) add(v);
    return out;
  }

  friend bool operator==(const Periodic& a, const Periodic& b) {
    return a.head_ == b.head_ && a.tail_ == b.tail_;
  }

 private:
  void canonicalize() {
    const std::size_t len = tail_.size();
    for (std::size_t d = 1; d < len; ++d) {
      if (len % d != 0) continue;
      bool ok = true;
      for (std::size_t i = d; i < len && ok; ++i) ok = tail_[i] == tail_[i % d];
      if (ok) {
        tail_.resize(d);
        break;
      }
    }
    while (!head_.empty() && head_.back() == tail_[head_.size() % tail_.size()]) head_.pop_back();
  }

  std::vector<V> head_;
  std::vector<V> tail_;
};

}  // namespace lorentz_ops
