#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "axd/design_matrix.hpp"
#include "axd/errors.hpp"

namespace axd {

/// One FR matched with the DP that controls it (indices into the spec lists).
struct FrDpPair {
  std::size_t fr = 0;
  std::size_t dp = 0;
  friend bool operator==(const FrDpPair&, const FrDpPair&) = default;
};

struct Uncoupled {
  std::vector<FrDpPair> pairs;  // FR declaration order
};

struct Decoupled {
  std::vector<FrDpPair> order;  // adjust DPs in this order
};

struct Coupled {
  /// Irreducible blocks in dependency order (a block only depends on DPs of
  /// earlier blocks or itself). Together they cover every matched pair.
  std::vector<std::vector<FrDpPair>> blocks;
};

enum class DegenerateReason { NonSquare, NoPerfectMatching };

struct Degenerate {
  DegenerateReason reason = DegenerateReason::NonSquare;
};

enum class CouplingKind { Uncoupled, Decoupled, Coupled, Degenerate };

struct CouplingClassification {
  std::variant<Uncoupled, Decoupled, Coupled, Degenerate> value;

  CouplingKind kind() const noexcept { return static_cast<CouplingKind>(value.index()); }
  template <class T>
  const T& as() const {
    return std::get<T>(value);
  }
};

inline const char* to_string(CouplingKind k) {
  switch (k) {
    case CouplingKind::Uncoupled: return "uncoupled";
    case CouplingKind::Decoupled: return "decoupled";
    case CouplingKind::Coupled: return "coupled";
    case CouplingKind::Degenerate: return "degenerate";
  }
  return "?";
}

inline const char* to_string(DegenerateReason r) {
  return r == DegenerateReason::NonSquare ? "non-square" : "no-perfect-matching";
}

namespace detail {

// Maximum bipartite matching by augmenting paths (Kuhn). Returns the DP
// matched to each FR, or npos.
inline std::vector<std::size_t> max_matching(const DependencyMatrix& deps) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  const std::size_t m = deps.rows(), n = deps.cols();
  std::vector<std::size_t> fr_of_dp(n, npos), dp_of_fr(m, npos);
  std::vector<char> seen(n);

  std::function<bool(std::size_t)> augment = [&](std::size_t fr) {
    for (std::size_t dp = 0; dp < n; ++dp) {
      if (!deps(fr, dp) || seen[dp]) continue;
      seen[dp] = 1;
      if (fr_of_dp[dp] == npos || augment(fr_of_dp[dp])) {
        fr_of_dp[dp] = fr;
        dp_of_fr[fr] = dp;
        return true;
      }
    }
    return false;
  };

  for (std::size_t fr = 0; fr < m; ++fr) {
    std::fill(seen.begin(), seen.end(), 0);
    augment(fr);
  }
  return dp_of_fr;
}

// Tarjan's SCC over an adjacency list. Returns the component id per vertex.
inline std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& adj,
                                                   std::size_t& count) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, npos), low(n, 0), comp(n, npos), stack;
  std::vector<char> on_stack(n, 0);
  std::size_t next = 0;
  count = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (std::size_t w : adj[v]) {
      if (index[w] == npos) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };

  for (std::size_t v = 0; v < n; ++v)
    if (index[v] == npos) visit(v);
  return comp;
}

}  // namespace detail

/// Classifies a dependency structure up to row/column permutation.
///
/// With a perfect FR-DP matching in hand, pair p points at pair q when FR(p)
/// also depends on DP(q). Strongly connected components of that digraph are
/// the irreducible diagonal blocks of the block-triangular form, which do not
/// depend on which perfect matching was found. Blocks of size one everywhere
/// mean the design is decoupled (or uncoupled if no pair points anywhere).
/// Ties in the dependency order are broken by FR declaration order.
inline CouplingClassification classify(const DependencyMatrix& deps) {
  if (deps.rows() != deps.cols()) return {Degenerate{DegenerateReason::NonSquare}};
  const std::size_t n = deps.rows();

  const auto dp_of_fr = detail::max_matching(deps);
  for (std::size_t fr = 0; fr < n; ++fr)
    if (dp_of_fr[fr] == std::numeric_limits<std::size_t>::max())
      return {Degenerate{DegenerateReason::NoPerfectMatching}};

  // Pair index == FR index. Edge p -> q: FR p depends on the DP matched to q.
  std::vector<std::size_t> fr_of_dp(n);
  for (std::size_t fr = 0; fr < n; ++fr) fr_of_dp[dp_of_fr[fr]] = fr;
  std::vector<std::vector<std::size_t>> adj(n);
  std::size_t edges = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t dp = 0; dp < n; ++dp)
      if (deps(p, dp) && dp != dp_of_fr[p]) {
        adj[p].push_back(fr_of_dp[dp]);
        ++edges;
      }

  std::size_t ncomp = 0;
  const auto comp = detail::strongly_connected(adj, ncomp);

  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t p = 0; p < n; ++p) members[comp[p]].push_back(p);  // ascending FR order

  // Condensation: block a must come after block b when a depends on b.
  std::vector<std::vector<std::size_t>> dependents(ncomp);
  std::vector<std::size_t> pending(ncomp, 0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q : adj[p])
      if (comp[p] != comp[q]) {
        dependents[comp[q]].push_back(comp[p]);
        ++pending[comp[p]];
      }

  // Kahn's algorithm keyed by the smallest FR index in each block.
  using Key = std::pair<std::size_t, std::size_t>;  // (first FR, component)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t c = 0; c < ncomp; ++c)
    if (pending[c] == 0) ready.emplace(members[c].front(), c);
  std::vector<std::size_t> block_order;
  block_order.reserve(ncomp);
  while (!ready.empty()) {
    const auto [first, c] = ready.top();
    ready.pop();
    block_order.push_back(c);
    for (std::size_t d : dependents[c])
      if (--pending[d] == 0) ready.emplace(members[d].front(), d);
  }

  const bool all_singletons = ncomp == n;
  if (all_singletons && edges == 0) {
    Uncoupled out;
    for (std::size_t fr = 0; fr < n; ++fr) out.pairs.push_back({fr, dp_of_fr[fr]});
    return {out};
  }
  if (all_singletons) {
    Decoupled out;
    for (std::size_t c : block_order) {
      const std::size_t fr = members[c].front();
      out.order.push_back({fr, dp_of_fr[fr]});
    }
    return {out};
  }
  Coupled out;
  for (std::size_t c : block_order) {
    std::vector<FrDpPair> block;
    for (std::size_t fr : members[c]) block.push_back({fr, dp_of_fr[fr]});
    out.blocks.push_back(std::move(block));
  }
  return {out};
}

inline CouplingClassification classify(const DesignMatrix& matrix, double epsilon) {
  if (!matrix.square()) return {Degenerate{DegenerateReason::NonSquare}};
  return classify(binarize(matrix, epsilon));
}

/// DP adjustment order for uncoupled or decoupled designs: every FR depends
/// only on its own DP and DPs earlier in the list.
inline std::vector<FrDpPair> sequence(const CouplingClassification& c) {
  switch (c.kind()) {
    case CouplingKind::Uncoupled: return c.as<Uncoupled>().pairs;
    case CouplingKind::Decoupled: return c.as<Decoupled>().order;
    default:
      throw ContractViolation(std::string("no adjustment sequence exists for a ") +
                              to_string(c.kind()) + " design");
  }
}

/// FR rows that a change in DP `dp` disturbs.
inline std::vector<std::size_t> affected_frs(const DesignMatrix& matrix, std::size_t dp,
                                             double epsilon) {
  if (dp >= matrix.cols()) throw ContractViolation("dp index out of range");
  std::vector<std::size_t> out;
  for (std::size_t fr = 0; fr < matrix.rows(); ++fr)
    if (std::abs(matrix(fr, dp)) > epsilon) out.push_back(fr);
  return out;
}

}  // namespace axd
