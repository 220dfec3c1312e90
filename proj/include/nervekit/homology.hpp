#pragma once

// Simplicial homology over the two-element field, used as a computable proxy
// for "same homotopy type". Agreement of Betti numbers is necessary but not
// sufficient for a homotopy equivalence, and torsion is invisible over GF(2).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nervekit/error.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/simplicial_complex.hpp"

namespace nervekit {

struct BettiVector {
  std::vector<std::size_t> ranks;  // b_0 .. b_k
  int truncation = 0;              // dimension the computation was capped at

  std::size_t operator[](std::size_t k) const { return k < ranks.size() ? ranks[k] : 0; }

  friend bool operator==(const BettiVector& a, const BettiVector& b) { return a.ranks == b.ranks; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(ranks[i]);
    }
    return s + ")";
  }
};

namespace detail {

class Gf2Column {
 public:
  explicit Gf2Column(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  void add(const Gf2Column& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  }

  /// Highest set bit, or -1 for the zero column.
  long pivot() const {
    for (std::size_t w = words_.size(); w > 0; --w) {
      if (words_[w - 1]) {
        return static_cast<long>((w - 1) * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(words_[w - 1])));
      }
    }
    return -1;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Rank of the boundary map from dim-simplices to (dim-1)-simplices.
inline std::size_t boundary_rank(const SimplicialComplex& k, std::size_t dim) {
  if (dim == 0) return 0;
  const auto& cells = k.simplices(dim);
  const auto& faces = k.simplices(dim - 1);
  if (cells.empty()) return 0;
  std::vector<long> owner(faces.size(), -1);
  std::vector<Gf2Column> reduced;
  reduced.reserve(cells.size());
  std::size_t rank = 0;
  for (const Simplex& cell : cells) {
    Gf2Column col(faces.size());
    for (std::size_t drop = 0; drop < cell.size(); ++drop) {
      Simplex face;
      face.reserve(cell.size() - 1);
      for (std::size_t i = 0; i < cell.size(); ++i) {
        if (i != drop) face.push_back(cell[i]);
      }
      const std::size_t idx = k.index_of(face);
      if (idx == faces.size()) throw ValidationError("complex is not closed under faces");
      col.flip(idx);
    }
    long p = col.pivot();
    while (p >= 0 && owner[static_cast<std::size_t>(p)] >= 0) {
      col.add(reduced[static_cast<std::size_t>(owner[static_cast<std::size_t>(p)])]);
      p = col.pivot();
    }
    if (p >= 0) {
      owner[static_cast<std::size_t>(p)] = static_cast<long>(reduced.size());
      reduced.push_back(std::move(col));
      ++rank;
    }
  }
  return rank;
}

}  // namespace detail

/**
 * Betti numbers b_0..b_d over GF(2), d = min(max_dim, dim K).
 *
 * b_k = #k-simplices - rank d_k - rank d_{k+1}. If K was truncated at
 * dimension k, b_k can only be trusted below that cap.
 */
inline BettiVector betti(const SimplicialComplex& k, int max_dim) {
  if (k.count(0) == 0) throw ValidationError("betti numbers of the empty complex are undefined");
  if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
  const int top = std::min(max_dim, k.dimension());
  BettiVector out;
  out.truncation = max_dim;
  std::vector<std::size_t> ranks(static_cast<std::size_t>(top) + 2, 0);
  for (int d = 1; d <= top + 1; ++d) ranks[static_cast<std::size_t>(d)] = detail::boundary_rank(k, static_cast<std::size_t>(d));
  for (int d = 0; d <= top; ++d) {
    const auto du = static_cast<std::size_t>(d);
    out.ranks.push_back(k.count(du) - ranks[du] - ranks[du + 1]);
  }
  return out;
}

inline BettiVector betti(const SimplicialComplex& k) { return betti(k, std::max(k.dimension(), 0)); }

/// Vietoris-Rips complex on a subset of points (relabeled 0..|points|-1):
/// cliques of the graph {d(a,b) <= scale} up to dimension max_dim.
inline SimplicialComplex vr_complex_on(const FiniteMetricSpace& space,
                                       std::span<const std::size_t> points, double scale,
                                       int max_dim) {
  if (!(scale > 0.0)) throw ValidationError("Vietoris-Rips scale must be positive");
  if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> higher(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (space(points[a], points[b]) <= scale) higher[a].push_back(b);
    }
  }
  std::vector<Simplex> gens;
  Simplex current;
  auto extend = [&](auto&& self, const std::vector<std::size_t>& candidates) -> void {
    gens.push_back(current);
    if (static_cast<int>(current.size()) > max_dim) return;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t v = candidates[i];
      std::vector<std::size_t> next;
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        const std::size_t w = candidates[j];
        if (std::binary_search(higher[v].begin(), higher[v].end(), w)) next.push_back(w);
      }
      current.push_back(v);
      self(self, next);
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    current = {v};
    extend(extend, higher[v]);
  }
  return SimplicialComplex::from_simplices(n, gens, max_dim);
}

inline SimplicialComplex vr_complex(const FiniteMetricSpace& space, double scale, int max_dim) {
  std::vector<std::size_t> all(space.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return vr_complex_on(space, all, scale, max_dim);
}

}  // namespace nervekit
