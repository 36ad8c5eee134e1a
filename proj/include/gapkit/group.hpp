#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <vector>

namespace gapkit {

/// Group element of Z^d.
using GroupElem = std::vector<std::int64_t>;

inline GroupElem group_zero(int rank) { return GroupElem(static_cast<size_t>(rank), 0); }

inline GroupElem group_add(const GroupElem& a, const GroupElem& b) {
  GroupElem r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline GroupElem group_neg(const GroupElem& a) {
  GroupElem r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline bool group_is_zero(const GroupElem& a) {
  for (auto v : a)
    if (v != 0) return false;
  return true;
}

/// The group Z^d with its l^1 word length (standard generators).
struct GroupSpec {
  int rank = 1;

  explicit GroupSpec(int d = 1) : rank(d) {
    if (d < 1) throw std::invalid_argument("GroupSpec: rank must be >= 1");
  }

  std::int64_t length(const GroupElem& g) const {
    std::int64_t l = 0;
    for (auto v : g) l += v < 0 ? -v : v;
    return l;
  }

  GroupElem identity() const { return group_zero(rank); }
};

struct GroupElemHash {
  size_t operator()(const GroupElem& g) const {
    size_t h = 1469598103934665603ull;
    for (auto v : g) {
      h ^= static_cast<size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace gapkit
