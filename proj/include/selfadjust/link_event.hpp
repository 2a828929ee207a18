#ifndef SELFADJUST_LINK_EVENT_HPP
#define SELFADJUST_LINK_EVENT_HPP

#include <cstdint>
#include <vector>

namespace selfadjust {

/// Link classification by the ordering of gamma^2*a, gamma*b, c.
enum class LinkType : std::uint8_t { T1, T2, T3A, T3B, Unclassified };

inline const char* to_string(LinkType t) {
  switch (t) {
    case LinkType::T1: return "T1";
    case LinkType::T2: return "T2";
    case LinkType::T3A: return "T3A";
    case LinkType::T3B: return "T3B";
    default: return "?";
  }
}

/// One link of a pairing round (or one rotation of a multipass round), in the
/// Figure-3 frame: a = size of the upper node's off-chain subtree, b = the
/// lower node's off-chain subtree, c = the remainder of the chain.
/// The raw fields are filled by the instrumented structure; `link_type` and
/// `delta_phi` are filled by the analysis annotator for a chosen potential.
template <typename Key = std::int64_t>
struct LinkEvent {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  Key x_key{};
  Key y_key{};
  Key winner_key{};
  Key loser_key{};
  std::uint32_t round = 1;  // 1-based pairing round
  std::uint32_t index = 1;  // 1-based link position within the round
  LinkType link_type = LinkType::Unclassified;
  double delta_phi = 0.0;
};

/// Instrumented delete-min: the number of children k of the deleted root
/// (the real cost), the heap size before the operation, and one event per
/// link. The number of links is exactly k-1.
template <typename Key = std::int64_t>
struct DeleteMinRecord {
  std::uint64_t k = 0;
  std::uint64_t n_before = 0;
  Key min_key{};
  std::vector<LinkEvent<Key>> links;
};

}  // namespace selfadjust

#endif  // SELFADJUST_LINK_EVENT_HPP
