#ifndef SELFADJUST_PAIRING_HEAP_HPP
#define SELFADJUST_PAIRING_HEAP_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "selfadjust/link_event.hpp"

namespace selfadjust {

/// Node of a multi-ary heap in leftmost-child / next-sibling encoding.
/// `left` is the leftmost child, `right` the next sibling; both are the
/// binary-view children, and `subtree_size` counts the binary-view subtree.
/// The parent pointer is bookkeeping for decrease-key detach and size fixups;
/// the linking algorithm itself never consults sizes.
template <typename Key = std::int64_t>
struct HeapNode {
  Key key{};
  HeapNode* left = nullptr;
  HeapNode* right = nullptr;
  HeapNode* parent = nullptr;
  std::uint64_t subtree_size = 1;
};

/// Multipass pairing heap. delete-min runs repeated pairing rounds, each
/// linking neighboring pairs of top-level roots left to right; an odd
/// leftover node is untouched. Keys must be unique.
template <typename Key = std::int64_t, typename Compare = std::less<Key>>
class PairingHeap {
 public:
  using Node = HeapNode<Key>;

  explicit PairingHeap(Compare cmp = Compare{}, bool track_keys = true)
      : cmp_(cmp), keys_(cmp), track_keys_(track_keys) {}

  PairingHeap(const PairingHeap&) = delete;
  PairingHeap& operator=(const PairingHeap&) = delete;
  PairingHeap(PairingHeap&& o) noexcept
      : cmp_(o.cmp_), root_(o.root_), size_(o.size_),
        keys_(std::move(o.keys_)), track_keys_(o.track_keys_) {
    o.root_ = nullptr;
    o.size_ = 0;
  }
  PairingHeap& operator=(PairingHeap&& o) noexcept {
    if (this != &o) {
      destroy();
      cmp_ = o.cmp_;
      root_ = o.root_;
      size_ = o.size_;
      keys_ = std::move(o.keys_);
      track_keys_ = o.track_keys_;
      o.root_ = nullptr;
      o.size_ = 0;
    }
    return *this;
  }
  ~PairingHeap() { destroy(); }

  bool empty() const { return root_ == nullptr; }
  std::uint64_t size() const { return size_; }
  const Node* root() const { return root_; }
  bool tracks_keys() const { return track_keys_; }

  /// Builds a heap as one root with the given keys as its children, in
  /// left-to-right multi-ary order. The root key must be the minimum.
  static PairingHeap from_root_and_children(Key root_key,
                                            std::span<const Key> children,
                                            Compare cmp = Compare{}) {
    PairingHeap h(cmp);
    h.root_ = new Node{root_key};
    h.size_ = 1;
    if (h.track_keys_) h.keys_.insert(root_key);
    Node* prev = nullptr;
    for (std::size_t i = children.size(); i-- > 0;) {
      // build right-to-left so suffix sizes accumulate
      Node* n = new Node{children[i]};
      if (!cmp(root_key, children[i]))
        throw std::invalid_argument("from_root_and_children: root not min");
      n->right = prev;
      n->subtree_size = 1 + (prev ? prev->subtree_size : 0);
      if (prev) prev->parent = n;
      prev = n;
      if (h.track_keys_ && !h.keys_.insert(children[i]).second)
        throw std::invalid_argument("from_root_and_children: duplicate key");
      ++h.size_;
    }
    h.root_->left = prev;
    if (prev) prev->parent = h.root_;
    h.root_->subtree_size = 1 + (prev ? prev->subtree_size : 0);
    return h;
  }

  /// Inserts a key with a single link against the root. Returns the node
  /// handle for later decrease-key.
  Node* insert(Key key) {
    if (track_keys_ && keys_.count(key))
      throw std::invalid_argument("insert: duplicate key");
    Node* node = new Node{key};
    if (track_keys_) keys_.insert(key);
    ++size_;
    if (root_ == nullptr) {
      root_ = node;
      return node;
    }
    attach_as_sibling(root_, node);
    root_ = link_pair(root_, node, nullptr);
    root_->parent = nullptr;
    return node;
  }

  Key find_min() const {
    if (root_ == nullptr) throw std::out_of_range("find_min: empty heap");
    return root_->key;
  }

  /// Removes the minimum; silent (no instrumentation).
  Key delete_min() { return delete_min_impl(nullptr); }

  /// Removes the minimum and records one LinkEvent per link.
  Key delete_min(DeleteMinRecord<Key>& record) {
    return delete_min_impl(&record);
  }

  /// Melds another heap into this one with a single link. Key sets must be
  /// disjoint; the scan that verifies this is optional and off by default.
  void meld(PairingHeap&& other, bool check_collisions = false) {
    if (other.root_ == nullptr) return;
    if (root_ == nullptr) {
      *this = std::move(other);
      return;
    }
    if (track_keys_ && other.track_keys_) {
      if (check_collisions) {
        for (const Key& k : other.keys_)
          if (keys_.count(k)) throw std::invalid_argument("meld: key collision");
      }
      keys_.merge(other.keys_);
    } else {
      track_keys_ = false;
      keys_.clear();
    }
    attach_as_sibling(root_, other.root_);
    root_ = link_pair(root_, other.root_, nullptr);
    root_->parent = nullptr;
    size_ += other.size_;
    other.root_ = nullptr;
    other.size_ = 0;
  }

  /// Lowers a node's key; the node's subtree is detached from its parent's
  /// child list and linked with the root.
  void decrease_key(Node* node, Key new_key) {
    if (node == nullptr) throw std::invalid_argument("decrease_key: null node");
    if (!cmp_(new_key, node->key))
      throw std::invalid_argument("decrease_key: new key not smaller");
    if (track_keys_) {
      if (keys_.count(new_key))
        throw std::invalid_argument("decrease_key: duplicate key");
      keys_.erase(node->key);
      keys_.insert(new_key);
    }
    if (node == root_) {
      node->key = new_key;
      return;
    }
    Node* p = node->parent;
    if (p->left == node) p->left = node->right;
    else p->right = node->right;
    if (node->right) node->right->parent = p;
    node->right = nullptr;
    for (Node* q = p; q != nullptr; q = q->parent)
      q->subtree_size -= node->subtree_size;
    node->parent = nullptr;
    node->key = new_key;
    attach_as_sibling(root_, node);
    root_ = link_pair(root_, node, nullptr);
    root_->parent = nullptr;
  }

  /// Full traversal check of the multi-ary heap order.
  bool verify_heap_order() const {
    if (root_ == nullptr) return true;
    std::vector<const Node*> stack{root_};
    while (!stack.empty()) {
      const Node* u = stack.back();
      stack.pop_back();
      for (const Node* v = u->left; v != nullptr; v = v->right) {
        if (!cmp_(u->key, v->key)) return false;
        stack.push_back(v);
      }
    }
    return true;
  }

  /// Recomputes binary-view sizes from scratch and checks the maintained
  /// counters plus parent pointers.
  bool verify_sizes() const {
    if (root_ == nullptr) return size_ == 0;
    if (root_->parent != nullptr || root_->right != nullptr) return false;
    std::uint64_t total = 0;
    return check_subtree(root_, total) && total == size_;
  }

 private:
  void destroy() {
    if (root_ == nullptr) return;
    std::vector<Node*> stack{root_};
    while (!stack.empty()) {
      Node* u = stack.back();
      stack.pop_back();
      if (u->left) stack.push_back(u->left);
      if (u->right) stack.push_back(u->right);
      delete u;
    }
    root_ = nullptr;
    size_ = 0;
  }

  static std::uint64_t size_of(const Node* n) {
    return n ? n->subtree_size : 0;
  }

  // Makes `y` the next sibling of top-level root `x` (which must have none)
  // and folds y's size into x.
  static void attach_as_sibling(Node* x, Node* y) {
    x->right = y;
    y->parent = x;
    x->subtree_size += y->subtree_size;
  }

  // Links two adjacent top-level roots, x left of y == x->right. The loser
  // hangs as the winner's leftmost child; the winner inherits y's next
  // sibling and x's chain position. `events` gets one record when non-null.
  Node* link_pair(Node* x, Node* y, LinkEvent<Key>* event) {
    if (!cmp_(x->key, y->key) && !cmp_(y->key, x->key))
      throw std::invalid_argument("link: equal keys");
    if (event != nullptr) {
      event->a = size_of(x->left);
      event->b = size_of(y->left);
      event->c = size_of(y->right);
      event->x_key = x->key;
      event->y_key = y->key;
    }
    Node* winner;
    if (cmp_(x->key, y->key)) {
      Node* hung = x->left;  // subtree A moves below y
      Node* rest = y->right;
      x->left = y;
      y->parent = x;
      y->right = hung;
      if (hung) hung->parent = y;
      x->right = rest;
      if (rest) rest->parent = x;
      y->subtree_size = 1 + size_of(y->left) + size_of(hung);
      winner = x;
    } else {
      Node* mid = y->left;  // subtree B moves below x
      y->left = x;
      x->parent = y;
      x->right = mid;
      if (mid) mid->parent = x;
      y->subtree_size = x->subtree_size;
      x->subtree_size = 1 + size_of(x->left) + size_of(mid);
      winner = y;
    }
    if (event != nullptr) {
      event->winner_key = winner->key;
      event->loser_key = (winner == x) ? y->key : x->key;
    }
    return winner;
  }

  Key delete_min_impl(DeleteMinRecord<Key>* record) {
    if (root_ == nullptr) throw std::out_of_range("delete_min: empty heap");
    Node* old_root = root_;
    const Key out = old_root->key;
    if (track_keys_) keys_.erase(out);
    Node* head = old_root->left;
    if (record != nullptr) {
      record->n_before = size_;
      record->min_key = out;
      record->links.clear();
      record->k = 0;
      for (Node* c = head; c != nullptr; c = c->right) ++record->k;
    }
    delete old_root;
    --size_;
    if (head == nullptr) {
      root_ = nullptr;
      return out;
    }
    head->parent = nullptr;
    std::uint32_t round = 1;
    while (head->right != nullptr) {
      Node* x = head;
      Node* prev = nullptr;
      std::uint32_t index = 1;
      while (x != nullptr && x->right != nullptr) {
        Node* y = x->right;
        LinkEvent<Key>* ev = nullptr;
        if (record != nullptr) {
          record->links.emplace_back();
          ev = &record->links.back();
          ev->round = round;
          ev->index = index;
        }
        Node* w = link_pair(x, y, ev);
        if (prev != nullptr) {
          prev->right = w;
          w->parent = prev;
        } else {
          head = w;
          w->parent = nullptr;
        }
        prev = w;
        x = w->right;
        ++index;
      }
      ++round;
    }
    root_ = head;
    return out;
  }

  bool check_subtree(const Node* n, std::uint64_t& count) const {
    // iterative post-order size recomputation
    struct Frame {
      const Node* node;
      bool expanded;
    };
    std::vector<Frame> stack{{n, false}};
    std::unordered_map<const Node*, std::uint64_t> sizes;
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (!f.expanded) {
        stack.push_back({f.node, true});
        if (f.node->left) {
          if (f.node->left->parent != f.node) return false;
          stack.push_back({f.node->left, false});
        }
        if (f.node->right) {
          if (f.node->right->parent != f.node) return false;
          stack.push_back({f.node->right, false});
        }
      } else {
        std::uint64_t s = 1;
        if (f.node->left) s += sizes[f.node->left];
        if (f.node->right) s += sizes[f.node->right];
        if (s != f.node->subtree_size) return false;
        sizes[f.node] = s;
        ++count;
      }
    }
    return true;
  }

  Compare cmp_;
  Node* root_ = nullptr;
  std::uint64_t size_ = 0;
  std::set<Key, Compare> keys_;
  bool track_keys_ = true;
};

}  // namespace selfadjust

#endif  // SELFADJUST_PAIRING_HEAP_HPP
