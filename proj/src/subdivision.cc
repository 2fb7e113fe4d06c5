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

#include "hivc/subdivision.h"

#include <algorithm>
#include <queue>
#include <string>

#include "hivc/counters.h"
#include "hivc/error.h"

namespace hivc {
namespace {

struct Candidate {
  double error;
  int y;
  int x;
  long long seq;
  int root;  // forest root index
  int node;  // -1: open the root
};

// Max-heap order: larger error first, then smaller y, x, seq.
struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.error != b.error) return a.error < b.error;
    if (a.y != b.y) return a.y > b.y;
    if (a.x != b.x) return a.x > b.x;
    return a.seq > b.seq;
  }
};

using CandidateQueue =
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess>;

}  // namespace

std::pair<Rect, Rect> split_rect(const Rect& r) {
  if (r.w >= r.h) {
    const int left = r.w / 2;
    return {{r.x, r.y, left, r.h}, {r.x + left, r.y, r.w - left, r.h}};
  }
  const int top = r.h / 2;
  return {{r.x, r.y, r.w, top}, {r.x, r.y + top, r.w, r.h - top}};
}

int SubdivisionTree::split(int node) {
  if (!is_leaf(node)) throw InvalidArgument("split: node is not a leaf");
  if (!splittable(nodes_[node].rect)) {
    throw InvalidArgument("split: 1x1 leaf cannot be split");
  }
  const auto [a, b] = split_rect(nodes_[node].rect);
  const int child = static_cast<int>(nodes_.size());
  const int d = nodes_[node].depth + 1;
  nodes_[node].child = child;
  nodes_.push_back({a, -1, d});
  nodes_.push_back({b, -1, d});
  ++leaves_;
  return child;
}

int SubdivisionTree::depth() const {
  int d = 0;
  for (const Node& n : nodes_) d = std::max(d, n.depth);
  return d;
}

template <typename Visit>
void SubdivisionTree::preorder(Visit&& visit) const {
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    visit(n);
    if (nodes_[n].child >= 0) {
      stack.push_back(nodes_[n].child + 1);
      stack.push_back(nodes_[n].child);
    }
  }
}

std::vector<Rect> SubdivisionTree::leaves() const {
  std::vector<Rect> out;
  out.reserve(leaves_);
  preorder([&](int n) {
    if (nodes_[n].child < 0) out.push_back(nodes_[n].rect);
  });
  return out;
}

std::vector<bool> SubdivisionTree::to_bits() const {
  std::vector<bool> bits;
  bits.reserve(nodes_.size());
  preorder([&](int n) { bits.push_back(nodes_[n].child >= 0); });
  return bits;
}

void SubdivisionTree::write(BitWriter& out) const {
  preorder([&](int n) { out.put_bit(nodes_[n].child >= 0); });
}

SubdivisionTree SubdivisionTree::read(const Rect& root, BitReader& in) {
  if (root.w <= 0 || root.h <= 0) throw DecodeError("tree: empty root");
  SubdivisionTree tree(root);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    if (!in.get_bit()) continue;
    if (!splittable(tree.nodes_[n].rect)) {
      throw DecodeError("tree: split bit on a 1x1 leaf");
    }
    const int child = tree.split(n);
    stack.push_back(child + 1);
    stack.push_back(child);
  }
  return tree;
}

std::vector<bool> serialize_tree(const SubdivisionTree& tree) {
  return tree.to_bits();
}

SubdivisionTree deserialize_tree(const std::vector<bool>& bits, const Rect& root) {
  BitWriter w;
  for (bool b : bits) w.put_bit(b);
  BitReader r(w.bytes(), w.bit_count());
  SubdivisionTree t = SubdivisionTree::read(root, r);
  if (r.remaining() != 0) throw DecodeError("tree: trailing bits");
  return t;
}

RegionStats::RegionStats(std::span<const RealPlane* const> planes) {
  if (planes.empty()) throw InvalidArgument("RegionStats: no planes");
  width_ = planes[0]->width();
  height_ = planes[0]->height();
  const size_t stride = static_cast<size_t>(width_) + 1;
  for (const RealPlane* p : planes) {
    if (p->width() != width_ || p->height() != height_) {
      throw InvalidArgument("RegionStats: plane sizes differ");
    }
    std::vector<double> s(stride * (height_ + 1), 0.0);
    std::vector<double> q(stride * (height_ + 1), 0.0);
    for (int y = 0; y < height_; ++y) {
      double rs = 0.0, rq = 0.0;
      for (int x = 0; x < width_; ++x) {
        const double v = p->at(x, y);
        rs += v;
        rq += v * v;
        const size_t at = (y + 1) * stride + x + 1;
        const size_t up = y * stride + x + 1;
        s[at] = s[up] + rs;
        q[at] = q[up] + rq;
      }
    }
    sums_.push_back(std::move(s));
    squares_.push_back(std::move(q));
  }
}

RegionStats::RegionStats(const RealPlane& plane)
    : RegionStats(std::span<const RealPlane* const>(
          std::vector<const RealPlane*>{&plane})) {}

double RegionStats::box(const std::vector<double>& t, const Rect& r) const {
  const size_t stride = static_cast<size_t>(width_) + 1;
  const size_t x0 = r.x, y0 = r.y, x1 = r.x + r.w, y1 = r.y + r.h;
  return t[y1 * stride + x1] - t[y0 * stride + x1] - t[y1 * stride + x0] +
         t[y0 * stride + x0];
}

double RegionStats::sum(const Rect& r, int plane) const {
  return box(sums_[plane], r);
}

double RegionStats::ssd(const Rect& r) const {
  double total = 0.0;
  const double n = static_cast<double>(r.area());
  for (size_t p = 0; p < sums_.size(); ++p) {
    const double s = box(sums_[p], r);
    total += std::max(0.0, box(squares_[p], r) - s * s / n);
  }
  return total;
}

double RegionStats::energy(const Rect& r) const {
  double total = 0.0;
  for (const auto& q : squares_) total += box(q, r);
  return total;
}

SubdivisionTree subdivide_by_error(const Rect& root, int target_leaves,
                                   const RegionError& error, double stop_error) {
  ++counters::subdivisions;
  if (target_leaves < 1) {
    throw InvalidArgument("subdivide_by_error: target must be >= 1");
  }
  SubdivisionTree tree(root);
  refine_by_error(tree, target_leaves, error, stop_error);
  return tree;
}

void refine_by_error(SubdivisionTree& tree, int target_leaves,
                     const RegionError& error, double stop_error) {
  const Rect& root = tree.root();
  if (target_leaves > root.area()) {
    throw InvalidArgument("subdivide_by_error: target " +
                          std::to_string(target_leaves) +
                          " exceeds pixel count " + std::to_string(root.area()));
  }
  CandidateQueue queue;
  long long seq = 0;
  auto push = [&](int node) {
    const Rect& r = tree.rect(node);
    if (!splittable(r)) return;
    queue.push({error(r), r.y, r.x, seq++, 0, node});
  };
  for (int node = 0; node < tree.node_count(); ++node) {
    if (tree.is_leaf(node)) push(node);
  }
  while (tree.leaf_count() < target_leaves && !queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    if (c.error <= stop_error) break;
    const int child = tree.split(c.node);
    push(child);
    push(child + 1);
  }
}

SubdivisionTree subdivide_by_error(const RealPlane& plane, int target_leaves) {
  const RegionStats stats(plane);
  return subdivide_by_error(
      Rect{0, 0, plane.width(), plane.height()}, target_leaves,
      [&](const Rect& r) { return stats.ssd(r); });
}

std::vector<std::optional<SubdivisionTree>> subdivide_forest(
    std::span<const Rect> roots, long long total_leaves,
    const RegionError& open_error, const RegionError& leaf_error) {
  ++counters::subdivisions;
  long long capacity = 0;
  for (const Rect& r : roots) capacity += r.area();
  if (total_leaves < 0 || total_leaves > capacity) {
    throw InvalidArgument("subdivide_forest: leaf budget out of range");
  }
  std::vector<std::optional<SubdivisionTree>> trees(roots.size());
  CandidateQueue queue;
  long long seq = 0;
  for (size_t i = 0; i < roots.size(); ++i) {
    const Rect& r = roots[i];
    queue.push({open_error(r), r.y, r.x, seq++, static_cast<int>(i), -1});
  }
  long long leaves = 0;
  auto push_split = [&](int root, int node) {
    const Rect& r = trees[root]->rect(node);
    if (!splittable(r)) return;
    queue.push({leaf_error(r), r.y, r.x, seq++, root, node});
  };
  while (leaves < total_leaves && !queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    if (c.node < 0) {
      trees[c.root].emplace(roots[c.root]);
      push_split(c.root, 0);
    } else {
      const int child = trees[c.root]->split(c.node);
      push_split(c.root, child);
      push_split(c.root, child + 1);
    }
    ++leaves;
  }
  return trees;
}

InpaintingMask mask_from_tree(const SubdivisionTree& tree, int width,
                              int height) {
  InpaintingMask mask(width, height);
  for (const Rect& r : tree.leaves()) {
    const auto [x, y] = leaf_point(r);
    if (x >= width || y >= height) {
      throw InvalidArgument("mask_from_tree: leaf outside mask");
    }
    mask.set(x, y);
  }
  return mask;
}

InpaintingMask mask_from_tree(const SubdivisionTree& tree) {
  const Rect& r = tree.root();
  return mask_from_tree(tree, r.x + r.w, r.y + r.h);
}

RealPlane piecewise_constant_from_tree(const SubdivisionTree& tree,
                                       const RealPlane& plane) {
  const RegionStats stats(plane);
  std::vector<double> values;
  for (const Rect& r : tree.leaves()) values.push_back(stats.mean(r));
  RealPlane out(plane.width(), plane.height());
  paint_leaves(tree, values, out);
  return out;
}

void paint_leaves(const SubdivisionTree& tree, std::span<const double> values,
                  RealPlane& out) {
  const std::vector<Rect> leaves = tree.leaves();
  if (values.size() != leaves.size()) {
    throw InvalidArgument("paint_leaves: one value per leaf required");
  }
  for (size_t i = 0; i < leaves.size(); ++i) {
    const Rect& r = leaves[i];
    for (int y = r.y; y < r.y + r.h; ++y) {
      double* row = out.row(y);
      std::fill(row + r.x, row + r.x + r.w, values[i]);
    }
  }
}

}  // namespace hivc
