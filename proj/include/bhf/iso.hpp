#pragma once

// Isomorphism search for vertex- and edge-labeled directed graphs.
// Color refinement prunes the candidates, backtracking finds the bijection.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace bhf::detail {

struct LabeledGraph {
  std::vector<int> vertex_label;
  std::set<std::tuple<int, int, int>> edges;  // (from, to, label)
};

class IsoSearch {
 public:
  IsoSearch(const LabeledGraph& g, const LabeledGraph& h) : g_(g), h_(h) {}

  std::optional<std::vector<int>> run() {
    const int n = static_cast<int>(g_.vertex_label.size());
    if (n != static_cast<int>(h_.vertex_label.size())) return std::nullopt;
    if (g_.edges.size() != h_.edges.size()) return std::nullopt;
    build_adjacency(g_, gout_, gin_);
    build_adjacency(h_, hout_, hin_);
    if (!refine()) return std::nullopt;

    order_ = search_order();
    map_.assign(n, -1);
    used_.assign(n, false);
    if (!extend(0)) return std::nullopt;
    return map_;
  }

 private:
  using Adj = std::vector<std::vector<std::pair<int, int>>>;

  static void build_adjacency(const LabeledGraph& x, Adj& out, Adj& in) {
    const auto n = x.vertex_label.size();
    out.assign(n, {});
    in.assign(n, {});
    for (auto [u, v, l] : x.edges) {
      out[u].emplace_back(v, l);
      in[v].emplace_back(u, l);
    }
  }

  bool refine() {
    std::map<int, int> seed;
    for (int l : g_.vertex_label) seed.emplace(l, static_cast<int>(seed.size()));
    for (int l : h_.vertex_label) seed.emplace(l, static_cast<int>(seed.size()));
    gcolor_.clear();
    hcolor_.clear();
    for (int l : g_.vertex_label) gcolor_.push_back(seed[l]);
    for (int l : h_.vertex_label) hcolor_.push_back(seed[l]);
    std::size_t classes = seed.size();
    for (;;) {
      using Sig = std::tuple<int, std::vector<std::tuple<int, int, int>>>;
      std::map<Sig, int> ids;
      auto signature = [](int self, const std::vector<int>& color, const Adj& out, const Adj& in,
                          int v) {
        std::vector<std::tuple<int, int, int>> nb;
        for (auto [w, l] : out[v]) nb.emplace_back(0, l, color[w]);
        for (auto [w, l] : in[v]) nb.emplace_back(1, l, color[w]);
        std::sort(nb.begin(), nb.end());
        return Sig{self, std::move(nb)};
      };
      std::vector<Sig> gs, hs;
      for (std::size_t v = 0; v < gcolor_.size(); ++v)
        gs.push_back(signature(gcolor_[v], gcolor_, gout_, gin_, static_cast<int>(v)));
      for (std::size_t v = 0; v < hcolor_.size(); ++v)
        hs.push_back(signature(hcolor_[v], hcolor_, hout_, hin_, static_cast<int>(v)));
      for (auto& s : gs) ids.emplace(s, 0);
      for (auto& s : hs) ids.emplace(s, 0);
      int next = 0;
      for (auto& [s, id] : ids) id = next++;
      for (std::size_t v = 0; v < gs.size(); ++v) gcolor_[v] = ids[gs[v]];
      for (std::size_t v = 0; v < hs.size(); ++v) hcolor_[v] = ids[hs[v]];
      std::vector<int> a = gcolor_, b = hcolor_;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return false;
      if (ids.size() == classes) return true;
      classes = ids.size();
    }
  }

  std::vector<int> search_order() const {
    const int n = static_cast<int>(gcolor_.size());
    std::map<int, int> freq;
    for (int c : gcolor_) ++freq[c];
    std::vector<int> order;
    std::vector<bool> seen(n, false);
    auto rarity = [&](int v) { return std::make_pair(freq.at(gcolor_[v]), v); };
    for (;;) {
      int start = -1;
      for (int v = 0; v < n; ++v)
        if (!seen[v] && (start < 0 || rarity(v) < rarity(start))) start = v;
      if (start < 0) break;
      std::vector<int> queue{start};
      seen[start] = true;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        int u = queue[i];
        order.push_back(u);
        std::vector<int> nb;
        for (auto [w, l] : gout_[u]) nb.push_back(w);
        for (auto [w, l] : gin_[u]) nb.push_back(w);
        std::sort(nb.begin(), nb.end(), [&](int a, int b) { return rarity(a) < rarity(b); });
        for (int w : nb)
          if (!seen[w]) {
            seen[w] = true;
            queue.push_back(w);
          }
      }
    }
    return order;
  }

  bool consistent(int u, int v) const {
    auto check = [&](const Adj& ga, const Adj& ha, bool outgoing) {
      int mapped_g = 0, mapped_h = 0;
      for (auto [w, l] : ga[u]) {
        const int mw = (w == u) ? v : map_[w];
        if (w != u && mw < 0) continue;
        ++mapped_g;
        auto e = outgoing ? std::make_tuple(v, mw, l) : std::make_tuple(mw, v, l);
        if (!h_.edges.count(e)) return false;
      }
      for (auto [w, l] : ha[v]) {
        if (w == v || used_[w]) ++mapped_h;
      }
      return mapped_g == mapped_h;
    };
    return check(gout_, hout_, true) && check(gin_, hin_, false);
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int u = order_[depth];
    for (int v = 0; v < static_cast<int>(hcolor_.size()); ++v) {
      if (used_[v] || hcolor_[v] != gcolor_[u]) continue;
      if (!consistent(u, v)) continue;
      map_[u] = v;
      used_[v] = true;
      if (extend(depth + 1)) return true;
      map_[u] = -1;
      used_[v] = false;
    }
    return false;
  }

  const LabeledGraph& g_;
  const LabeledGraph& h_;
  Adj gout_, gin_, hout_, hin_;
  std::vector<int> gcolor_, hcolor_;
  std::vector<int> order_;
  std::vector<int> map_;
  std::vector<bool> used_;
};

inline std::optional<std::vector<int>> find_isomorphism(const LabeledGraph& g,
                                                        const LabeledGraph& h) {
  return IsoSearch(g, h).run();
}

}  // namespace bhf::detail
