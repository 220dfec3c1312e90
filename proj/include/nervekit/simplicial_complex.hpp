#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/error.hpp"

namespace nervekit {

/// A simplex as a strictly increasing list of vertex indices.
using Simplex = std::vector<std::size_t>;

inline std::size_t simplex_dimension(const Simplex& s) { return s.size() - 1; }

inline bool is_face_of(const Simplex& face, const Simplex& s) {
  return std::includes(s.begin(), s.end(), face.begin(), face.end());
}

/**
 * Abstract simplicial complex on vertices {0, ..., n-1}.
 *
 * Simplices are kept per dimension in lexicographic order; the set is closed
 * under taking faces. `dim_cap` records the truncation dimension the complex
 * was built with (-1 when it was not truncated).
 */
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Downward closure of `generators` on vertex labels {0, ..., n-1}. Every
  /// label becomes a 0-simplex unless `all_vertices` is false, in which case
  /// the result is the subcomplex generated by `generators` alone.
  static SimplicialComplex from_simplices(std::size_t n, const std::vector<Simplex>& generators,
                                          int dim_cap = -1, bool all_vertices = true) {
    SimplicialComplex k;
    k.n_ = n;
    k.dim_cap_ = dim_cap;
    k.by_dim_.assign(1, {});
    if (all_vertices) {
      for (std::size_t v = 0; v < n; ++v) k.by_dim_[0].push_back({v});
    }
    for (Simplex g : generators) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      if (g.empty()) continue;
      for (std::size_t v : g) {
        if (v >= n) {
          std::ostringstream msg;
          msg << "simplex vertex " << v << " out of range for " << n << " vertices";
          throw ValidationError(msg.str());
        }
      }
      if (g.size() > 24) throw ValidationError("simplex too large to close downward");
      const std::size_t masks = std::size_t{1} << g.size();
      for (std::size_t mask = 1; mask < masks; ++mask) {
        Simplex face;
        for (std::size_t b = 0; b < g.size(); ++b) {
          if (mask & (std::size_t{1} << b)) face.push_back(g[b]);
        }
        k.add_raw(std::move(face));
      }
    }
    k.normalize();
    return k;
  }

  std::size_t vertex_count() const { return n_; }
  int dim_cap() const { return dim_cap_; }

  /// Largest simplex dimension present (-1 if there are no vertices).
  int dimension() const {
    for (std::size_t d = by_dim_.size(); d > 0; --d) {
      if (!by_dim_[d - 1].empty()) return static_cast<int>(d - 1);
    }
    return -1;
  }

  const std::vector<Simplex>& simplices(std::size_t dim) const {
    static const std::vector<Simplex> none;
    return dim < by_dim_.size() ? by_dim_[dim] : none;
  }

  std::size_t count(std::size_t dim) const { return simplices(dim).size(); }

  std::size_t total_count() const {
    std::size_t c = 0;
    for (const auto& level : by_dim_) c += level.size();
    return c;
  }

  bool contains(const Simplex& s) const {
    if (s.empty()) return false;
    const auto& level = simplices(s.size() - 1);
    return std::binary_search(level.begin(), level.end(), s);
  }

  /// Position of s within simplices(dim s); size of that level if absent.
  std::size_t index_of(const Simplex& s) const {
    const auto& level = simplices(s.size() - 1);
    auto it = std::lower_bound(level.begin(), level.end(), s);
    if (it == level.end() || *it != s) return level.size();
    return static_cast<std::size_t>(it - level.begin());
  }

  std::vector<Simplex> all_simplices() const {
    std::vector<Simplex> out;
    for (const auto& level : by_dim_) out.insert(out.end(), level.begin(), level.end());
    return out;
  }

  /// Simplices that are not a proper face of another simplex.
  std::vector<Simplex> maximal_simplices() const {
    std::vector<Simplex> out;
    for (std::size_t d = 0; d < by_dim_.size(); ++d) {
      for (const Simplex& s : by_dim_[d]) {
        bool maximal = true;
        if (d + 1 < by_dim_.size()) {
          for (const Simplex& t : by_dim_[d + 1]) {
            if (is_face_of(s, t)) {
              maximal = false;
              break;
            }
          }
        }
        if (maximal) out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Euler characteristic from face counts.
  long euler_characteristic() const {
    long chi = 0;
    for (std::size_t d = 0; d < by_dim_.size(); ++d) {
      chi += (d % 2 == 0 ? 1L : -1L) * static_cast<long>(by_dim_[d].size());
    }
    return chi;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    if (a.n_ != b.n_) return false;
    const std::size_t levels = std::max(a.by_dim_.size(), b.by_dim_.size());
    for (std::size_t d = 0; d < levels; ++d) {
      if (a.simplices(d) != b.simplices(d)) return false;
    }
    return true;
  }

 private:
  void add_raw(Simplex s) {
    const std::size_t d = s.size() - 1;
    if (by_dim_.size() <= d) by_dim_.resize(d + 1);
    by_dim_[d].push_back(std::move(s));
  }

  void normalize() {
    for (auto& level : by_dim_) {
      std::sort(level.begin(), level.end());
      level.erase(std::unique(level.begin(), level.end()), level.end());
    }
    while (by_dim_.size() > 1 && by_dim_.back().empty()) by_dim_.pop_back();
  }

  std::size_t n_ = 0;
  int dim_cap_ = -1;
  std::vector<std::vector<Simplex>> by_dim_;
};

/// Simplices of dimension at most k.
inline SimplicialComplex skeleton(const SimplicialComplex& k, std::size_t dim) {
  std::vector<Simplex> gens;
  for (std::size_t d = 0; d <= dim; ++d) {
    const auto& level = k.simplices(d);
    gens.insert(gens.end(), level.begin(), level.end());
  }
  int cap = k.dim_cap() < 0 ? static_cast<int>(dim) : std::min<int>(k.dim_cap(), static_cast<int>(dim));
  return SimplicialComplex::from_simplices(k.vertex_count(), gens, cap, false);
}

/// Closed star of sigma: every simplex having sigma as a face, with all their
/// faces. Vertex labels are those of the ambient complex.
inline SimplicialComplex star(const SimplicialComplex& k, const Simplex& sigma) {
  if (!k.contains(sigma)) throw ValidationError("star: simplex is not in the complex");
  std::vector<Simplex> cofaces;
  for (std::size_t d = sigma.size() - 1; d < static_cast<std::size_t>(k.dimension() + 1); ++d) {
    for (const Simplex& t : k.simplices(d)) {
      if (is_face_of(sigma, t)) cofaces.push_back(t);
    }
  }
  return SimplicialComplex::from_simplices(k.vertex_count(), cofaces, k.dim_cap(), false);
}

/// Image of k under the vertex relabeling v -> perm[v].
inline SimplicialComplex relabel(const SimplicialComplex& k, const std::vector<std::size_t>& perm) {
  if (perm.size() != k.vertex_count()) throw ValidationError("relabel: permutation size mismatch");
  std::vector<Simplex> gens;
  for (const Simplex& s : k.maximal_simplices()) {
    Simplex t;
    for (std::size_t v : s) t.push_back(perm[v]);
    gens.push_back(std::move(t));
  }
  return SimplicialComplex::from_simplices(k.vertex_count(), gens, k.dim_cap(), false);
}

/// First simplex of `a` whose image under `bijection` is missing from `b`, or
/// of `b` whose preimage is missing from `a`. Empty when the map is an
/// isomorphism.
inline std::optional<Simplex> isomorphism_defect(const SimplicialComplex& a, const SimplicialComplex& b,
                                                 const std::vector<std::size_t>& bijection) {
  if (bijection.size() != a.vertex_count()) return Simplex{};
  std::vector<std::size_t> inverse(b.vertex_count(), b.vertex_count());
  for (std::size_t v = 0; v < bijection.size(); ++v) {
    if (bijection[v] >= b.vertex_count() || inverse[bijection[v]] != b.vertex_count()) return Simplex{v};
    inverse[bijection[v]] = v;
  }
  auto mapped = [](const Simplex& s, const std::vector<std::size_t>& f) {
    Simplex t;
    for (std::size_t v : s) t.push_back(f[v]);
    std::sort(t.begin(), t.end());
    return t;
  };
  for (const Simplex& s : a.all_simplices()) {
    if (!b.contains(mapped(s, bijection))) return s;
  }
  for (const Simplex& s : b.all_simplices()) {
    for (std::size_t v : s) {
      if (inverse[v] == b.vertex_count()) return s;
    }
    if (!a.contains(mapped(s, inverse))) return s;
  }
  return std::nullopt;
}

}  // namespace nervekit
