/*
Copyright 2026 The HIVC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef HIVC_SUBDIVISION_H_
#define HIVC_SUBDIVISION_H_

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hivc/bitio.h"
#include "hivc/homogeneous.h"
#include "hivc/image.h"

namespace hivc {

// Halves the longer side; squares are split into left and right halves.
// The first half gets floor(size / 2).
std::pair<Rect, Rect> split_rect(const Rect& r);
inline bool splittable(const Rect& r) { return r.w > 1 || r.h > 1; }

// Binary tree of rectangle splits. Because the split rule is fixed, the tree
// is fully described by its root and the preorder split bits.
class SubdivisionTree {
 public:
  SubdivisionTree() = default;
  explicit SubdivisionTree(const Rect& root) { nodes_.push_back({root}); }

  const Rect& root() const { return nodes_.front().rect; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Rect& rect(int node) const { return nodes_[node].rect; }
  bool is_leaf(int node) const { return nodes_[node].child < 0; }
  int first_child(int node) const { return nodes_[node].child; }
  int node_depth(int node) const { return nodes_[node].depth; }

  // Splits a leaf; returns the index of its first child (the second child
  // follows immediately).
  int split(int node);

  int leaf_count() const { return leaves_; }
  int depth() const;
  std::vector<Rect> leaves() const;  // preorder

  // Preorder, one bit per node: 1 = split, 0 = leaf.
  std::vector<bool> to_bits() const;
  void write(BitWriter& out) const;
  // Throws DecodeError on truncation or a split bit on a 1x1 leaf.
  static SubdivisionTree read(const Rect& root, BitReader& in);

  friend bool operator==(const SubdivisionTree& a, const SubdivisionTree& b) {
    return a.to_bits() == b.to_bits() && a.root() == b.root();
  }

 private:
  struct Node {
    Rect rect;
    int child = -1;
    int depth = 0;
  };
  template <typename Visit>
  void preorder(Visit&& visit) const;

  std::vector<Node> nodes_;
  int leaves_ = 1;
};

std::vector<bool> serialize_tree(const SubdivisionTree& tree);
SubdivisionTree deserialize_tree(const std::vector<bool>& bits, const Rect& root);

// Integral images of one or more equally sized planes, giving O(1) region
// sums. ssd() adds the squared deviation from the region mean over all
// planes; energy() adds the squared values themselves.
class RegionStats {
 public:
  explicit RegionStats(std::span<const RealPlane* const> planes);
  explicit RegionStats(const RealPlane& plane);

  double sum(const Rect& r, int plane = 0) const;
  double mean(const Rect& r, int plane = 0) const { return sum(r, plane) / r.area(); }
  double ssd(const Rect& r) const;
  double energy(const Rect& r) const;

 private:
  double box(const std::vector<double>& table, const Rect& r) const;

  int width_ = 0;
  int height_ = 0;
  std::vector<std::vector<double>> sums_;
  std::vector<std::vector<double>> squares_;
};

using RegionError = std::function<double(const Rect&)>;

// Greedy budgeted subdivision: the leaf with the largest error is split until
// the tree has `target_leaves` leaves. Ties go to the smaller y, then x, then
// the earlier-created leaf. Leaves whose error is <= stop_error are never
// split (a negative stop_error disables this), so the result can have fewer
// leaves than requested.
SubdivisionTree subdivide_by_error(const Rect& root, int target_leaves,
                                   const RegionError& error,
                                   double stop_error = -1.0);
// Continues the same greedy splitting from an existing tree's leaves.
void refine_by_error(SubdivisionTree& tree, int target_leaves,
                     const RegionError& error, double stop_error = -1.0);
// Default error: squared deviation from the region mean.
SubdivisionTree subdivide_by_error(const RealPlane& plane, int target_leaves);

// Budgeted subdivision of many roots at once (one per residual block). A root
// starts unopened; opening it costs one leaf and is ranked by open_error,
// later splits by leaf_error. Unopened roots come back as std::nullopt.
std::vector<std::optional<SubdivisionTree>> subdivide_forest(
    std::span<const Rect> roots, long long total_leaves,
    const RegionError& open_error, const RegionError& leaf_error);

// Mask point of a leaf: (x + w/2, y + h/2) with integer division.
inline std::pair<int, int> leaf_point(const Rect& r) {
  return {r.x + r.w / 2, r.y + r.h / 2};
}

// One mask point per leaf in a width x height mask.
InpaintingMask mask_from_tree(const SubdivisionTree& tree, int width,
                              int height);
InpaintingMask mask_from_tree(const SubdivisionTree& tree);

// Each leaf painted with the mean of `plane` over it.
RealPlane piecewise_constant_from_tree(const SubdivisionTree& tree,
                                       const RealPlane& plane);
// Leaf values in preorder painted into `out`.
void paint_leaves(const SubdivisionTree& tree, std::span<const double> values,
                  RealPlane& out);

}  // namespace hivc

#endif  // HIVC_SUBDIVISION_H_
