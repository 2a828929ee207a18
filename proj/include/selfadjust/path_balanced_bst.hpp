#ifndef SELFADJUST_PATH_BALANCED_BST_HPP
#define SELFADJUST_PATH_BALANCED_BST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "selfadjust/link_event.hpp"
#include "selfadjust/potential.hpp"

namespace selfadjust {

template <typename Key = std::int64_t>
struct BstNode {
  Key key{};
  BstNode* left = nullptr;
  BstNode* right = nullptr;
  std::uint64_t subtree_size = 1;
};

enum class RotationStage : std::uint8_t { kMedianUp, kMultipass };

/// One single rotation, in the same (a, b, c) frame as a pairing-heap link:
/// a = the upper node's off-path subtree, b = the subtree that changes sides,
/// c = the subtree that stays below the rising node.
template <typename Key = std::int64_t>
struct RotationEvent {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  Key upper_key{};
  Key lower_key{};
  RotationStage stage = RotationStage::kMultipass;
  std::uint32_t round = 0;  // 1-based multipass round; 0 for median stages
  std::uint32_t index = 1;
  LinkType link_type = LinkType::Unclassified;
  double delta_phi = 0.0;
};

/// Snapshot of one monotone path just before its multipass transformation,
/// for checking Phi(P) <= l * g(log(s(r)) / l).
struct MonotonePathCheck {
  std::uint64_t length = 1;
  std::uint64_t root_size = 1;
  double phi = 0.0;  // sum over path edges of f(size ratio); 0 without config
  bool phi_valid = false;
};

template <typename Key = std::int64_t>
struct AccessStats {
  std::uint64_t path_length = 1;  // l(P^x), the real cost
  std::vector<RotationEvent<Key>> events;
  double delta_phi = 0.0;        // valid when a PotentialConfig was supplied
  bool delta_phi_valid = false;
  double delta_psi_prime = 0.0;  // always computed
  std::vector<MonotonePathCheck> pieces;
  std::vector<double> median_psi_deltas;  // per rotate-up stage
};

/// Binary search tree whose accesses rebuild the search path into a complete
/// balanced tree. Three equivalent implementations of the access are
/// provided: the direct array rebuild, the short-path two-phase transform,
/// and the long/short decomposition with threshold tau. All use the same
/// conventions (lower median by key; the monotone side is the side not
/// containing the accessed key) and produce identical trees.
template <typename Key = std::int64_t, typename Compare = std::less<Key>>
class PathBalancedBst {
 public:
  using Node = BstNode<Key>;
  using Stats = AccessStats<Key>;

  explicit PathBalancedBst(Compare cmp = Compare{}) : cmp_(cmp) {}
  PathBalancedBst(const PathBalancedBst&) = delete;
  PathBalancedBst& operator=(const PathBalancedBst&) = delete;
  PathBalancedBst(PathBalancedBst&& o) noexcept
      : cmp_(o.cmp_), root_(o.root_), size_(o.size_) {
    o.root_ = nullptr;
    o.size_ = 0;
  }
  PathBalancedBst& operator=(PathBalancedBst&& o) noexcept {
    if (this != &o) {
      destroy();
      cmp_ = o.cmp_;
      root_ = o.root_;
      size_ = o.size_;
      o.root_ = nullptr;
      o.size_ = 0;
    }
    return *this;
  }
  ~PathBalancedBst() { destroy(); }

  static PathBalancedBst from_insert_order(std::span<const Key> keys,
                                           Compare cmp = Compare{}) {
    PathBalancedBst t(cmp);
    for (const Key& k : keys) t.insert_for_build(k);
    return t;
  }

  bool empty() const { return root_ == nullptr; }
  std::uint64_t size() const { return size_; }
  const Node* root() const { return root_; }

  bool contains(const Key& key) const {
    const Node* c = root_;
    while (c != nullptr) {
      if (cmp_(key, c->key)) c = c->left;
      else if (cmp_(c->key, key)) c = c->right;
      else return true;
    }
    return false;
  }

  PathBalancedBst clone() const {
    PathBalancedBst t(cmp_);
    t.size_ = size_;
    if (root_ == nullptr) return t;
    t.root_ = new Node{root_->key, nullptr, nullptr, root_->subtree_size};
    std::vector<std::pair<const Node*, Node*>> stack{{root_, t.root_}};
    while (!stack.empty()) {
      auto [src, dst] = stack.back();
      stack.pop_back();
      if (src->left) {
        dst->left = new Node{src->left->key, nullptr, nullptr,
                             src->left->subtree_size};
        stack.push_back({src->left, dst->left});
      }
      if (src->right) {
        dst->right = new Node{src->right->key, nullptr, nullptr,
                              src->right->subtree_size};
        stack.push_back({src->right, dst->right});
      }
    }
    return t;
  }

  std::vector<Key> in_order() const {
    std::vector<Key> out;
    out.reserve(size_);
    std::vector<const Node*> stack;
    const Node* c = root_;
    while (c != nullptr || !stack.empty()) {
      while (c != nullptr) {
        stack.push_back(c);
        c = c->left;
      }
      c = stack.back();
      stack.pop_back();
      out.push_back(c->key);
      c = c->right;
    }
    return out;
  }

  static bool same_shape(const Node* a, const Node* b) {
    std::vector<std::pair<const Node*, const Node*>> stack{{a, b}};
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      if ((x == nullptr) != (y == nullptr)) return false;
      if (x == nullptr) continue;
      if (x->key != y->key) return false;
      stack.push_back({x->left, y->left});
      stack.push_back({x->right, y->right});
    }
    return true;
  }

  bool verify_bst_order() const {
    bool first = true;
    Key prev{};
    std::vector<const Node*> stack;
    const Node* c = root_;
    while (c != nullptr || !stack.empty()) {
      while (c != nullptr) {
        stack.push_back(c);
        c = c->left;
      }
      c = stack.back();
      stack.pop_back();
      if (!first && !cmp_(prev, c->key)) return false;
      prev = c->key;
      first = false;
      c = c->right;
    }
    return true;
  }

  bool verify_sizes() const {
    if (root_ == nullptr) return size_ == 0;
    std::uint64_t count = 0;
    return verify_sizes_impl(count) && count == size_;
  }

  /// The search path to `key`, root first. Throws when the key is absent
  /// (unsuccessful searches are out of scope).
  std::vector<Node*> search_path(const Key& key) {
    std::vector<Node*> path;
    Node* c = root_;
    while (c != nullptr) {
      path.push_back(c);
      if (cmp_(key, c->key)) c = c->left;
      else if (cmp_(c->key, key)) c = c->right;
      else return path;
    }
    throw std::out_of_range("access: key not found");
  }

  /// Key-order lower median of a path: for sorted keys k_1 < ... < k_l the
  /// median is k_ceil(l/2).
  static Node* median_of_path(std::span<Node* const> path) {
    if (path.empty()) throw std::invalid_argument("median_of_path: empty");
    std::vector<Node*> sorted(path.begin(), path.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Node* a, const Node* b) { return a->key < b->key; });
    return sorted[(sorted.size() - 1) / 2];
  }

  /// Direct path-balance access: collects the search path and its hanging
  /// subtrees, then reassembles the canonical complete balanced tree in one
  /// pass of pointer moves. Emits no rotation events.
  Stats access_pathbalance(const Key& key, const PotentialConfig* cfg = nullptr) {
    std::vector<Node*> path = search_path(key);
    Stats stats;
    stats.path_length = path.size();
    if (path.size() <= 1) {
      finish_psi(stats, {});
      if (cfg) stats.delta_phi_valid = true;
      return stats;
    }
    std::unordered_set<const Node*> pathset(path.begin(), path.end());
    const std::vector<double> old_logs = path_size_logs(path);
    double phi_before = 0.0;
    if (cfg) phi_before = region_phi(root_, pathset, *cfg);

    // Sorted view of the path plus the l+1 gap subtrees in key order.
    std::vector<Node*> sorted(path.begin(), path.end());
    std::sort(sorted.begin(), sorted.end(),
              [this](const Node* a, const Node* b) { return cmp_(a->key, b->key); });
    std::unordered_map<const Node*, std::size_t> rank;
    rank.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) rank[sorted[i]] = i;
    std::vector<Node*> gaps(sorted.size() + 1, nullptr);
    for (std::size_t i = 0; i < path.size(); ++i) {
      Node* n = path[i];
      Node* next = i + 1 < path.size() ? path[i + 1] : nullptr;
      const std::size_t r = rank[n];
      if (n->left != next && n->left != nullptr) gaps[r] = n->left;
      if (n->right != next && n->right != nullptr) gaps[r + 1] = n->right;
    }
    const std::size_t xpos = rank[path.back()];
    root_ = rebuild_range(sorted, gaps, 0, sorted.size() - 1, xpos);

    finish_psi(stats, old_logs, path);
    if (cfg) {
      stats.delta_phi = region_phi(root_, pathset, *cfg) - phi_before;
      stats.delta_phi_valid = true;
    }
    return stats;
  }

  /// Simplified path-balance: rotate the accessed node to the root, then
  /// multipass-transform the two monotone halves of the former path.
  Stats access_simplified(const Key& key, const PotentialConfig* cfg = nullptr) {
    std::vector<Node*> path = search_path(key);
    Stats stats;
    stats.path_length = path.size();
    const std::vector<double> old_logs = path_size_logs(path);
    if (path.size() > 1) {
      std::unordered_set<const Node*> pathset(path.begin(), path.end());
      Node* x = path.back();
      rotate_up(&root_, path, stats, cfg);
      multipass_piece(&x->left, pathset, /*right_path=*/true, stats, cfg);
      multipass_piece(&x->right, pathset, /*right_path=*/false, stats, cfg);
    }
    finish_psi(stats, old_logs, path);
    if (cfg) stats.delta_phi_valid = true;
    return stats;
  }

  /// Short-path two-phase transform applied to the whole search path:
  /// recursively rotate medians to the local top, then multipass every
  /// monotone piece. Produces the same tree as access_pathbalance.
  Stats access_shortpath(const Key& key, const PotentialConfig* cfg = nullptr) {
    std::vector<Node*> path = search_path(key);
    Stats stats;
    stats.path_length = path.size();
    const std::vector<double> old_logs = path_size_logs(path);
    if (path.size() > 1) {
      std::unordered_set<const Node*> pathset(path.begin(), path.end());
      std::vector<Node*> sorted(path.begin(), path.end());
      std::sort(sorted.begin(), sorted.end(), [this](const Node* a, const Node* b) {
        return cmp_(a->key, b->key);
      });
      shortpath_core(&root_, std::move(sorted), path.back(), pathset, stats, cfg);
    }
    finish_psi(stats, old_logs, path);
    if (cfg) stats.delta_phi_valid = true;
    return stats;
  }

  /// Full decomposition with threshold tau: while the remaining path is
  /// longer than tau, rotate its median to the local top and multipass the
  /// monotone half not containing the key; finish with the short-path
  /// two-phase transform. tau defaults to floor(log2(size)).
  Stats access_analysis(const Key& key, std::int64_t tau = -1,
                        const PotentialConfig* cfg = nullptr) {
    if (tau < 0)
      tau = size_ > 1 ? static_cast<std::int64_t>(std::floor(std::log2(
                            static_cast<double>(size_))))
                      : 0;
    std::vector<Node*> path = search_path(key);
    Stats stats;
    stats.path_length = path.size();
    const std::vector<double> old_logs = path_size_logs(path);
    if (path.size() <= 1) {
      finish_psi(stats, old_logs, path);
      if (cfg) stats.delta_phi_valid = true;
      return stats;
    }
    std::unordered_set<const Node*> pathset(path.begin(), path.end());
    Node* x = path.back();
    std::vector<Node*> remaining(path.begin(), path.end());
    std::sort(remaining.begin(), remaining.end(),
              [this](const Node* a, const Node* b) { return cmp_(a->key, b->key); });
    Node** slot = &root_;
    const std::size_t floor_len =
        static_cast<std::size_t>(std::max<std::int64_t>(tau, 1));
    bool done = false;
    while (remaining.size() > floor_len) {
      const std::size_t m_idx = (remaining.size() - 1) / 2;
      Node* mnode = remaining[m_idx];
      std::vector<Node*> seg = subtree_path(*slot, mnode->key);
      rotate_up(slot, seg, stats, cfg);
      if (mnode == x) {
        multipass_piece(&mnode->left, pathset, true, stats, cfg);
        multipass_piece(&mnode->right, pathset, false, stats, cfg);
        done = true;
        break;
      }
      if (cmp_(key, mnode->key)) {
        multipass_piece(&mnode->right, pathset, false, stats, cfg);
        slot = &mnode->left;
        remaining.assign(remaining.begin(), remaining.begin() + m_idx);
      } else {
        multipass_piece(&mnode->left, pathset, true, stats, cfg);
        slot = &mnode->right;
        remaining.assign(remaining.begin() + m_idx + 1, remaining.end());
      }
    }
    if (!done && remaining.size() > 1)
      shortpath_core(slot, std::move(remaining), x, pathset, stats, cfg);
    finish_psi(stats, old_logs, path);
    if (cfg) stats.delta_phi_valid = true;
    return stats;
  }

  /// Rotates the node holding `key` to the root with single rotations. The
  /// former path splits into the two monotone halves below the new root.
  Stats rotate_to_root(const Key& key, const PotentialConfig* cfg = nullptr) {
    std::vector<Node*> path = search_path(key);
    Stats stats;
    stats.path_length = path.size();
    const std::vector<double> old_logs = path_size_logs(path);
    if (path.size() > 1) rotate_up(&root_, path, stats, cfg);
    finish_psi(stats, old_logs, path);
    if (cfg) stats.delta_phi_valid = true;
    return stats;
  }

  /// Multipass transformation of the designated monotone path. The path is
  /// given by its keys, root first; it must start at the tree root and
  /// follow only right-child or only left-child links.
  Stats multipass_transform_path(std::span<const Key> path_keys,
                                 const PotentialConfig* cfg = nullptr) {
    Stats stats;
    if (path_keys.empty())
      throw std::invalid_argument("multipass: empty path designation");
    std::vector<Node*> nodes;
    Node* c = root_;
    int direction = 0;  // +1 right, -1 left
    for (std::size_t i = 0; i < path_keys.size(); ++i) {
      if (c == nullptr || !(c->key == path_keys[i]))
        throw std::invalid_argument("multipass: designated path not in tree");
      nodes.push_back(c);
      if (i + 1 < path_keys.size()) {
        int step = cmp_(c->key, path_keys[i + 1]) ? +1 : -1;
        if (direction == 0) direction = step;
        else if (direction != step)
          throw std::invalid_argument("multipass: path not monotone");
        c = step > 0 ? c->right : c->left;
      }
    }
    stats.path_length = nodes.size();
    const std::vector<double> old_logs = path_size_logs(nodes);
    if (nodes.size() > 1) {
      record_piece(nodes, stats, cfg);
      multipass_nodes(&root_, nodes, /*right_path=*/direction > 0, stats, cfg);
    }
    finish_psi(stats, old_logs, nodes);
    if (cfg) stats.delta_phi_valid = true;
    return stats;
  }

  /// Whole-tree helpers for the instrumentation layer.
  double total_phi(const PotentialConfig& cfg) const {
    return total_potential(root_, cfg);
  }
  SumOfLogs psi(std::uint64_t n) const {
    return sum_of_logs_potential(root_, n);
  }

 private:
  static std::uint64_t size_of(const Node* n) { return n ? n->subtree_size : 0; }

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

  void insert_for_build(const Key& key) {
    Node** slot = &root_;
    std::vector<Node*> touched;
    while (*slot != nullptr) {
      Node* c = *slot;
      touched.push_back(c);
      if (cmp_(key, c->key)) slot = &c->left;
      else if (cmp_(c->key, key)) slot = &c->right;
      else throw std::invalid_argument("build: duplicate key");
    }
    *slot = new Node{key};
    for (Node* n : touched) ++n->subtree_size;
    ++size_;
  }

  bool verify_sizes_impl(std::uint64_t& count) const {
    struct Frame {
      const Node* node;
      bool expanded;
    };
    std::vector<Frame> stack{{root_, false}};
    std::unordered_map<const Node*, std::uint64_t> sizes;
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (!f.expanded) {
        stack.push_back({f.node, true});
        if (f.node->left) stack.push_back({f.node->left, false});
        if (f.node->right) stack.push_back({f.node->right, false});
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

  std::vector<Node*> subtree_path(Node* top, const Key& key) {
    std::vector<Node*> path;
    Node* c = top;
    while (c != nullptr) {
      path.push_back(c);
      if (cmp_(key, c->key)) c = c->left;
      else if (cmp_(c->key, key)) c = c->right;
      else return path;
    }
    throw std::logic_error("subtree_path: key not under subtree");
  }

  static std::vector<double> path_size_logs(const std::vector<Node*>& path) {
    std::vector<double> logs;
    logs.reserve(path.size());
    for (const Node* n : path)
      logs.push_back(std::log2(static_cast<double>(n->subtree_size)));
    return logs;
  }

  void finish_psi(Stats& stats, const std::vector<double>& old_logs,
                  const std::vector<Node*>& path = {}) const {
    double delta = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
      delta += std::log2(static_cast<double>(path[i]->subtree_size)) - old_logs[i];
    stats.delta_psi_prime = delta;
  }

  // Sum of phi over the search-path region: every path node (relative to its
  // path parent) plus every hanging-subtree root (relative to its path-node
  // parent). The region top is the tree root, whose own phi is 0.
  double region_phi(const Node* top,
                    const std::unordered_set<const Node*>& pathset,
                    const PotentialConfig& cfg) const {
    // Walk only within the path region; a child off the path contributes one
    // phi term and is not descended into.
    double sum = 0.0;
    std::vector<const Node*> work{top};
    while (!work.empty()) {
      const Node* u = work.back();
      work.pop_back();
      const double su = static_cast<double>(u->subtree_size);
      for (const Node* child : {u->left, u->right}) {
        if (child == nullptr) continue;
        sum += f_val(su / static_cast<double>(child->subtree_size), cfg);
        if (pathset.count(child)) work.push_back(child);
      }
    }
    return sum;
  }

  // Single rotation raising v above its parent p. The caller must repair the
  // pointer that referenced p. Records one event.
  void rotate_edge(Node* p, Node* v, RotationStage stage, std::uint32_t round,
                   std::uint32_t index, Stats& stats,
                   const PotentialConfig* cfg) {
    RotationEvent<Key> ev;
    ev.stage = stage;
    ev.round = round;
    ev.index = index;
    ev.upper_key = p->key;
    ev.lower_key = v->key;
    if (p->right == v) {
      ev.a = size_of(p->left);
      ev.b = size_of(v->left);
      ev.c = size_of(v->right);
      p->right = v->left;
      v->left = p;
    } else {
      ev.a = size_of(p->right);
      ev.b = size_of(v->right);
      ev.c = size_of(v->left);
      p->left = v->right;
      v->right = p;
    }
    v->subtree_size = p->subtree_size;
    p->subtree_size = 1 + size_of(p->left) + size_of(p->right);
    if (cfg != nullptr) {
      ev.delta_phi = delta_phi_closed_form(ev.a, ev.b, ev.c, *cfg);
      stats.delta_phi += ev.delta_phi;
    }
    stats.events.push_back(ev);
  }

  // Rotates path.back() to the top of the path; *slot must reference
  // path.front() and is updated to the risen node. Tracks the stage's
  // Psi'-change for the median-rotation invariant.
  void rotate_up(Node** slot, std::vector<Node*>& path, Stats& stats,
                 const PotentialConfig* cfg) {
    if (path.size() <= 1) return;
    double psi_before = 0.0;
    for (const Node* n : path)
      psi_before += std::log2(static_cast<double>(n->subtree_size));
    std::uint32_t index = 1;
    for (std::size_t i = path.size() - 1; i > 0; --i) {
      Node* v = path[i];
      Node* p = path[i - 1];
      rotate_edge(p, v, RotationStage::kMedianUp, 0, index++, stats, cfg);
      if (i >= 2) {
        Node* gp = path[i - 2];
        if (gp->left == p) gp->left = v;
        else gp->right = v;
      } else {
        *slot = v;
      }
      path[i - 1] = v;
    }
    double psi_after = 0.0;
    for (const Node* n : path)
      psi_after += std::log2(static_cast<double>(n->subtree_size));
    stats.median_psi_deltas.push_back(psi_after - psi_before);
  }

  void record_piece(const std::vector<Node*>& piece, Stats& stats,
                    const PotentialConfig* cfg) const {
    MonotonePathCheck check;
    check.length = piece.size();
    check.root_size = piece.front()->subtree_size;
    if (cfg != nullptr) {
      double phi = 0.0;
      for (std::size_t i = 1; i < piece.size(); ++i)
        phi += f_val(static_cast<double>(piece[i - 1]->subtree_size) /
                         static_cast<double>(piece[i]->subtree_size),
                     *cfg);
      check.phi = phi;
      check.phi_valid = true;
    }
    stats.pieces.push_back(check);
  }

  // Collects the monotone run of path nodes hanging at *slot and applies the
  // multipass transformation to it.
  void multipass_piece(Node** slot, const std::unordered_set<const Node*>& pathset,
                       bool right_path, Stats& stats, const PotentialConfig* cfg) {
    std::vector<Node*> piece;
    for (Node* c = *slot; c != nullptr && pathset.count(c);
         c = right_path ? c->right : c->left)
      piece.push_back(c);
    if (piece.size() <= 1) {
      if (!piece.empty()) record_piece(piece, stats, cfg);
      return;
    }
    record_piece(piece, stats, cfg);
    multipass_nodes(slot, piece, right_path, stats, cfg);
  }

  // Pairing rounds on a monotone path: round 1 rotates every other edge of
  // the prefix just enough to leave 2^j - 1 nodes, round i > 1 rotates
  // 2^(j-i+1) - 1 every-other edges. Each rotation pushes the upper node of
  // the pair off the path.
  void multipass_nodes(Node** slot, std::vector<Node*>& path, bool right_path,
                       Stats& stats, const PotentialConfig* cfg) {
    const std::vector<std::size_t> plan = multipass_round_plan(path.size());
    for (std::size_t r = 0; r < plan.size(); ++r) {
      const std::size_t rot = plan[r];
      if (rot == 0) continue;
      std::vector<Node*> next;
      next.reserve(path.size() - rot);
      for (std::size_t i = 0; i < rot; ++i) {
        Node* u = path[2 * i];
        Node* v = path[2 * i + 1];
        rotate_edge(u, v, RotationStage::kMultipass,
                    static_cast<std::uint32_t>(r + 1),
                    static_cast<std::uint32_t>(i + 1), stats, cfg);
        if (next.empty()) {
          *slot = v;
        } else {
          Node* prev = next.back();
          if (right_path) prev->right = v;
          else prev->left = v;
        }
        next.push_back(v);
      }
      next.insert(next.end(), path.begin() + 2 * rot, path.end());
      path = std::move(next);
    }
  }

  // Phase 1 + phase 2 of the short-path transform on the subtree at *slot.
  void shortpath_core(Node** slot, std::vector<Node*> remaining, Node* x,
                      const std::unordered_set<const Node*>& pathset,
                      Stats& stats, const PotentialConfig* cfg) {
    struct Piece {
      Node* median;
      bool left_side;  // piece hangs at median->left
    };
    std::vector<Piece> pieces;
    while (remaining.size() > 1) {
      const std::size_t m_idx = (remaining.size() - 1) / 2;
      Node* mnode = remaining[m_idx];
      std::vector<Node*> seg = subtree_path(*slot, mnode->key);
      rotate_up(slot, seg, stats, cfg);
      if (mnode == x) {
        pieces.push_back({mnode, true});
        pieces.push_back({mnode, false});
        break;
      }
      if (cmp_(x->key, mnode->key)) {
        pieces.push_back({mnode, false});
        slot = &mnode->left;
        remaining.assign(remaining.begin(), remaining.begin() + m_idx);
      } else {
        pieces.push_back({mnode, true});
        slot = &mnode->right;
        remaining.assign(remaining.begin() + m_idx + 1, remaining.end());
      }
    }
    for (const Piece& piece : pieces) {
      if (piece.left_side)
        multipass_piece(&piece.median->left, pathset, /*right_path=*/true,
                        stats, cfg);
      else
        multipass_piece(&piece.median->right, pathset, /*right_path=*/false,
                        stats, cfg);
    }
  }

  static std::vector<std::size_t> multipass_round_plan(std::size_t len) {
    std::vector<std::size_t> plan;
    if (len <= 1) return plan;
    std::size_t j = 0;
    while (((std::size_t{2} << j) - 1) <= len) ++j;  // largest j: 2^j-1 <= len
    plan.push_back(len - ((std::size_t{1} << j) - 1));  // round 1: alpha
    for (std::size_t i = 2; i <= j; ++i)
      plan.push_back((std::size_t{1} << (j - i + 1)) - 1);
    return plan;
  }

  // Canonical complete-balanced reassembly over sorted path nodes
  // sorted[lo..hi] and gap subtrees gaps[lo..hi+1]; xpos is the accessed
  // key's rank. The median side not containing x takes the multipass shape.
  Node* rebuild_range(std::vector<Node*>& sorted, std::vector<Node*>& gaps,
                      std::size_t lo, std::size_t hi, std::size_t xpos) {
    if (lo > hi) return gaps[lo];
    const std::size_t len = hi - lo + 1;
    const std::size_t m = lo + (len - 1) / 2;  // lower median
    Node* mn = sorted[m];
    if (xpos == m) {
      mn->left = multipass_shape(sorted, gaps, lo, m, true);
      mn->right = multipass_shape(sorted, gaps, m, hi, false);
    } else if (xpos > m) {
      mn->left = multipass_shape(sorted, gaps, lo, m, true);
      mn->right = (m + 1 <= hi) ? rebuild_range(sorted, gaps, m + 1, hi, xpos)
                                : gaps[m + 1];
    } else {
      mn->right = multipass_shape(sorted, gaps, m, hi, false);
      mn->left = (lo + 1 <= m) ? rebuild_range(sorted, gaps, lo, m - 1, xpos)
                               : gaps[lo];
    }
    mn->subtree_size = 1 + size_of(mn->left) + size_of(mn->right);
    return mn;
  }

  // Pointer-free simulation of the multipass rounds, used by the direct
  // rebuild to produce exactly the shape the real rotations would. For a
  // right path the piece covers keys sorted[lo..m-1] with gaps[lo..m]
  // (m = median index, exclusive); mirrored for a left path over
  // sorted[m+1..hi] with gaps[m+1..hi+1].
  Node* multipass_shape(std::vector<Node*>& sorted, std::vector<Node*>& gaps,
                        std::size_t lo, std::size_t m_or_hi, bool right_path) {
    struct Slot {
      Node* node;
      Node* payload;
    };
    std::vector<Slot> slots;
    Node* cont = nullptr;
    if (right_path) {
      const std::size_t m = m_or_hi;
      if (m == lo) return gaps[lo];
      slots.reserve(m - lo);
      for (std::size_t i = lo; i < m; ++i) slots.push_back({sorted[i], gaps[i]});
      cont = gaps[m];
    } else {
      const std::size_t m = lo, hi = m_or_hi;
      if (hi == m) return gaps[m + 1];
      slots.reserve(hi - m);
      for (std::size_t i = hi; i > m; --i)
        slots.push_back({sorted[i], gaps[i + 1]});
      cont = gaps[m + 1];
    }
    const std::vector<std::size_t> plan = multipass_round_plan(slots.size());
    std::vector<Slot> cur = std::move(slots);
    for (std::size_t rot : plan) {
      if (rot == 0) continue;
      std::vector<Slot> next;
      next.reserve(cur.size() - rot);
      for (std::size_t i = 0; i < rot; ++i) {
        Slot u = cur[2 * i];
        Slot& v = cur[2 * i + 1];
        if (right_path) {
          u.node->left = u.payload;
          u.node->right = v.payload;
        } else {
          u.node->right = u.payload;
          u.node->left = v.payload;
        }
        u.node->subtree_size =
            1 + size_of(u.node->left) + size_of(u.node->right);
        next.push_back({v.node, u.node});
      }
      next.insert(next.end(), cur.begin() + 2 * rot, cur.end());
      cur = std::move(next);
    }
    Node* res = cont;
    for (auto it = cur.rbegin(); it != cur.rend(); ++it) {
      Node* n = it->node;
      if (right_path) {
        n->left = it->payload;
        n->right = res;
      } else {
        n->right = it->payload;
        n->left = res;
      }
      n->subtree_size = 1 + size_of(n->left) + size_of(n->right);
      res = n;
    }
    return res;
  }

  Compare cmp_;
  Node* root_ = nullptr;
  std::uint64_t size_ = 0;
};

}  // namespace selfadjust

#endif  // SELFADJUST_PATH_BALANCED_BST_HPP
