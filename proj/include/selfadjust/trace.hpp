#ifndef SELFADJUST_TRACE_HPP
#define SELFADJUST_TRACE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfadjust/random.hpp"

namespace selfadjust {

enum class TraceOpKind : std::uint8_t { Insert, DeleteMin, DecreaseKey, Access, Build };

inline const char* to_string(TraceOpKind k) {
  switch (k) {
    case TraceOpKind::Insert: return "insert";
    case TraceOpKind::DeleteMin: return "deletemin";
    case TraceOpKind::DecreaseKey: return "decreasekey";
    case TraceOpKind::Access: return "access";
    case TraceOpKind::Build: return "build";
  }
  return "?";
}

struct TraceOp {
  TraceOpKind kind;
  std::vector<std::int64_t> args;
};

struct TraceError : std::runtime_error {
  int line;
  TraceError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

/// Line-oriented trace: one op per line, `#` starts a comment, blank lines
/// ignored. insert/access take one key, decreasekey takes two (old, new),
/// deletemin takes none, build takes at least one.
inline std::vector<TraceOp> parse_trace(std::istream& in) {
  std::vector<TraceOp> ops;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string verb;
    if (!(ls >> verb)) continue;  // blank or comment-only
    TraceOp op;
    if (verb == "insert") op.kind = TraceOpKind::Insert;
    else if (verb == "deletemin") op.kind = TraceOpKind::DeleteMin;
    else if (verb == "decreasekey") op.kind = TraceOpKind::DecreaseKey;
    else if (verb == "access") op.kind = TraceOpKind::Access;
    else if (verb == "build") op.kind = TraceOpKind::Build;
    else throw TraceError(lineno, "unknown verb '" + verb + "'");
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        throw TraceError(lineno, "non-integer key '" + tok + "'");
      }
      if (pos != tok.size())
        throw TraceError(lineno, "non-integer key '" + tok + "'");
      op.args.push_back(v);
    }
    const std::size_t n = op.args.size();
    switch (op.kind) {
      case TraceOpKind::Insert:
      case TraceOpKind::Access:
        if (n != 1) throw TraceError(lineno, "expected exactly 1 key");
        break;
      case TraceOpKind::DecreaseKey:
        if (n != 2) throw TraceError(lineno, "expected 2 keys (old, new)");
        break;
      case TraceOpKind::DeleteMin:
        if (n != 0) throw TraceError(lineno, "expected no keys");
        break;
      case TraceOpKind::Build:
        if (n < 1) throw TraceError(lineno, "expected at least 1 key");
        break;
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

inline std::vector<TraceOp> parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

/// Deterministic workload generator.
///  - random-perm: n inserts of a seeded permutation of 1..n, then n
///    delete-mins (heapsort).
///  - sorted / reverse: n inserts in ascending / descending order, then n
///    delete-mins.
///  - repeated-access: BST build from a seeded permutation, then n accesses
///    drawn uniformly from a fixed random subset of ceil(sqrt(n)) keys.
///  - working-set: BST build, then n accesses; with probability 0.9 the key
///    comes from the ceil(sqrt(n)) most recently accessed distinct keys.
inline std::vector<TraceOp> generate_workload(const std::string& name,
                                              std::int64_t n,
                                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("workload: n must be >= 1");
  std::vector<TraceOp> ops;
  auto push_heapsort = [&ops, n](const std::vector<std::int64_t>& keys) {
    for (std::int64_t k : keys) ops.push_back({TraceOpKind::Insert, {k}});
    for (std::int64_t i = 0; i < n; ++i)
      ops.push_back({TraceOpKind::DeleteMin, {}});
  };
  if (name == "random-perm") {
    push_heapsort(Rng::permutation(n, seed));
  } else if (name == "sorted") {
    std::vector<std::int64_t> keys(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = i + 1;
    push_heapsort(keys);
  } else if (name == "reverse") {
    std::vector<std::int64_t> keys(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = n - i;
    push_heapsort(keys);
  } else if (name == "repeated-access" || name == "working-set") {
    Rng rng(seed);
    TraceOp build{TraceOpKind::Build, Rng::permutation(n, seed)};
    ops.push_back(std::move(build));
    const std::int64_t w = static_cast<std::int64_t>(
        std::max<double>(1.0, std::ceil(std::sqrt(static_cast<double>(n)))));
    if (name == "repeated-access") {
      std::vector<std::int64_t> subset;
      subset.reserve(static_cast<std::size_t>(w));
      for (std::int64_t i = 0; i < w; ++i)
        subset.push_back(rng.uniform_i64(1, n));
      for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t k =
            subset[static_cast<std::size_t>(rng.uniform_i64(0, w - 1))];
        ops.push_back({TraceOpKind::Access, {k}});
      }
    } else {
      std::vector<std::int64_t> recent;
      for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t k;
        if (!recent.empty() && rng.uniform_real() < 0.9) {
          k = recent[static_cast<std::size_t>(
              rng.uniform_i64(0, static_cast<std::int64_t>(recent.size()) - 1))];
        } else {
          k = rng.uniform_i64(1, n);
        }
        ops.push_back({TraceOpKind::Access, {k}});
        auto it = std::find(recent.begin(), recent.end(), k);
        if (it != recent.end()) recent.erase(it);
        recent.insert(recent.begin(), k);
        if (recent.size() > static_cast<std::size_t>(w)) recent.pop_back();
      }
    }
  } else {
    throw std::invalid_argument("unknown workload '" + name + "'");
  }
  return ops;
}

}  // namespace selfadjust

#endif  // SELFADJUST_TRACE_HPP
