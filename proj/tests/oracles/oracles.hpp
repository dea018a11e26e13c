#pragma once

// Reference computations that share no code with the library. Slow and
// simple on purpose.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Edges = std::vector<std::pair<int, int>>;
using Matrix = std::vector<std::vector<int>>;
inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline int vertex_count(const Edges& edges) {
  int n = 0;
  for (auto [u, v] : edges) n = std::max({n, u + 1, v + 1});
  return n;
}

inline Matrix floyd_warshall(const Edges& edges, int n = -1) {
  if (n < 0) n = vertex_count(edges);
  Matrix d(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : edges) d[u][v] = d[v][u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Twice the four-point delta: max over quadruples of (largest - middle) pairing sum.
inline int twice_delta(const Matrix& d) {
  const int n = static_cast<int>(d.size());
  int best = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          int s[3] = {d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]};
          std::sort(s, s + 3);
          best = std::max(best, s[2] - s[1]);
        }
  return best;
}

inline std::vector<std::vector<int>> adjacency(const Edges& edges, int n) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

// Every shortest path from u to v, by depth-first enumeration of simple paths.
inline std::vector<std::vector<int>> all_geodesics(const Edges& edges, int n, int u, int v) {
  const auto adj = adjacency(edges, n);
  std::vector<std::vector<int>> paths;
  std::vector<int> cur{u};
  std::vector<bool> used(n, false);
  used[u] = true;
  int best = kInf;
  std::function<void(int)> dfs = [&](int x) {
    const int len = static_cast<int>(cur.size()) - 1;
    if (len > best) return;
    if (x == v) {
      if (len < best) {
        best = len;
        paths.clear();
      }
      paths.push_back(cur);
      return;
    }
    for (int y : adj[x]) {
      if (used[y]) continue;
      used[y] = true;
      cur.push_back(y);
      dfs(y);
      cur.pop_back();
      used[y] = false;
    }
  };
  dfs(u);
  return paths;
}

// Random labelled tree: vertex i > 0 hangs off a uniform earlier vertex.
inline Edges random_tree(int n, std::mt19937_64& rng) {
  Edges e;
  for (int i = 1; i < n; ++i) e.emplace_back(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
  return e;
}

inline Edges cycle(int n) {
  Edges e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

inline Edges path(int n) {
  Edges e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

// {p,q} tessellation built geometrically in the Poincare disk. Vertices are
// points; the neighbours of w are the rotations of one known neighbour about
// w by multiples of 2 pi / q. Returns the induced subgraph on the vertices
// within combinatorial distance R of the origin, in discovery order.
struct GeometricTiling {
  int n = 0;
  Edges edges;
  std::vector<int> depth;
};

inline GeometricTiling geometric_tiling(int p, int q, int R) {
  using C = std::complex<double>;
  const double pi = std::acos(-1.0);
  const double half_edge = std::acosh(std::cos(pi / p) / std::sin(pi / q));
  const double r = std::tanh(half_edge);  // Euclidean radius of a point at distance 2 * half_edge
  auto to_origin = [](C w, C z) { return (z - w) / (1.0 - std::conj(w) * z); };
  auto from_origin = [](C w, C z) { return (z + w) / (1.0 + std::conj(w) * z); };
  auto rotate_about = [&](C w, C z, double angle) {
    return from_origin(w, std::polar(1.0, angle) * to_origin(w, z));
  };

  std::vector<C> pts;
  std::vector<int> depth;
  auto find = [&](C z) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (std::abs(pts[i] - z) < 1e-9) return static_cast<int>(i);
    return -1;
  };

  pts.push_back(0.0);
  depth.push_back(0);
  std::vector<std::vector<int>> nbrs(1);
  std::deque<std::pair<int, C>> queue;  // vertex, one known neighbour position
  queue.emplace_back(0, C(r, 0.0));
  std::set<std::pair<int, int>> edge_set;
  while (!queue.empty()) {
    auto [w, known] = queue.front();
    queue.pop_front();
    for (int k = 0; k < q; ++k) {
      const C z = rotate_about(pts[w], known, 2.0 * pi * k / q);
      int id = find(z);
      if (id < 0) {
        if (depth[w] == R) continue;
        id = static_cast<int>(pts.size());
        pts.push_back(z);
        depth.push_back(depth[w] + 1);
        queue.emplace_back(id, pts[w]);
      }
      edge_set.emplace(std::min(w, id), std::max(w, id));
    }
  }
  GeometricTiling t;
  t.n = static_cast<int>(pts.size());
  t.edges.assign(edge_set.begin(), edge_set.end());
  t.depth = depth;
  return t;
}

// Sorted multiset of all pairwise distances; an isomorphism invariant.
inline std::vector<int> distance_spectrum(const Matrix& d) {
  std::vector<int> s;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) s.push_back(d[i][j]);
  std::sort(s.begin(), s.end());
  return s;
}

// Free group words as vectors of nonzero ints (+k generator, -k inverse).
using Word = std::vector<int>;

inline Word reduce(const Word& w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return reduce(a);
}

// Image of a word under a rank-2 endomorphism given by the images of a, b.
inline Word apply(const Word& img_a, const Word& img_b, const Word& w) {
  Word out;
  for (int x : w) {
    const Word& g = std::abs(x) == 1 ? img_a : img_b;
    out = concat(out, x > 0 ? g : invert(g));
  }
  return out;
}

// F2 x| Z for a -> ab, b -> a in the right normal form w t^k, with
// t w t^-1 = psi(w) where psi = phi^-1 : a -> b, b -> Ba. Cayley graph on
// {a, b, t}. Returns word length of every element in the ball of radius R.
struct FbcBall {
  std::map<std::pair<Word, int>, int> length;  // (w, k) -> |w t^k|
};

inline FbcBall fbc_ball(int R) {
  const Word psi_a{2}, psi_b{-2, 1};
  const Word phi_a{1, 2}, phi_b{1};
  // psi^k for k >= 0 and phi^|k| for k < 0, cached images of a and b.
  std::map<int, std::pair<Word, Word>> power;
  power[0] = {Word{1}, Word{2}};
  auto image = [&](int k) -> const std::pair<Word, Word>& {
    const int step = k > 0 ? 1 : -1;
    int have = 0;
    while (have != k && power.count(have + step)) have += step;
    while (have != k) {
      const auto prev = power.at(have);
      const Word& ga = step > 0 ? psi_a : phi_a;
      const Word& gb = step > 0 ? psi_b : phi_b;
      // psi^k = psi^(k-1) o psi: images psi^(k-1)(psi(a)), psi^(k-1)(psi(b)).
      have += step;
      power[have] = std::make_pair(apply(prev.first, prev.second, ga), apply(prev.first, prev.second, gb));
    }
    return power.at(k);
  };
  FbcBall ball;
  std::deque<std::pair<Word, int>> queue;
  ball.length[{Word{}, 0}] = 0;
  queue.push_back({Word{}, 0});
  while (!queue.empty()) {
    const auto [w, k] = queue.front();
    queue.pop_front();
    const int len = ball.length[{w, k}];
    if (len == R) continue;
    std::vector<std::pair<Word, int>> next;
    for (int x : {1, -1, 2, -2}) {
      // w t^k x = w psi^k(x) t^k
      const auto& im = image(k);
      const Word& g = std::abs(x) == 1 ? im.first : im.second;
      next.push_back({concat(w, x > 0 ? g : invert(g)), k});
    }
    next.push_back({w, k + 1});
    next.push_back({w, k - 1});
    for (const auto& e : next) {
      if (ball.length.emplace(e, len + 1).second) queue.push_back(e);
    }
  }
  return ball;
}

inline std::vector<Word> fiber_words(const FbcBall& ball) {
  std::vector<Word> fiber;
  for (const auto& [key, len] : ball.length)
    if (key.second == 0) fiber.push_back(key.first);
  return fiber;
}

// Diameter of a word set in the Cayley tree of F2, by a longest-path pass
// over the trie of the words (deepest marked node under each trie node).
inline int trie_diameter(const std::vector<Word>& words) {
  struct Node {
    std::map<int, int> child;
    bool marked = false;
  };
  std::vector<Node> trie(1);
  for (const Word& w : words) {
    int at = 0;
    for (int x : w) {
      auto it = trie[at].child.find(x);
      if (it == trie[at].child.end()) {
        const int id = static_cast<int>(trie.size());
        trie[at].child.emplace(x, id);
        trie.emplace_back();
        at = id;
      } else {
        at = it->second;
      }
    }
    trie[at].marked = true;
  }
  // Children have larger ids than parents, so a reverse sweep is post-order.
  std::vector<int> deepest(trie.size(), -1);
  int best = 0;
  for (int v = static_cast<int>(trie.size()) - 1; v >= 0; --v) {
    int top1 = trie[v].marked ? 0 : -1;
    int top2 = -1;
    for (auto [x, c] : trie[v].child) {
      if (deepest[c] < 0) continue;
      const int h = deepest[c] + 1;
      if (h > top1) {
        top2 = top1;
        top1 = h;
      } else if (h > top2) {
        top2 = h;
      }
    }
    deepest[v] = top1;
    if (top2 >= 0) best = std::max(best, top1 + top2);
  }
  return best;
}

// Diameter, in the free word metric of the fiber, of the fiber elements in the
// ball: max over pairs of |u^-1 v|.
inline int fiber_diameter(const FbcBall& ball) {
  const std::vector<Word> fiber = fiber_words(ball);
  int best = 0;
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    const Word inv = invert(fiber[i]);
    for (std::size_t j = i + 1; j < fiber.size(); ++j)
      best = std::max(best, static_cast<int>(concat(inv, fiber[j]).size()));
  }
  return best;
}

}  // namespace oracle
