#pragma once

#include "qinv/types.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace qinv {

/// Exact nearest-neighbour search over the rows of a point matrix.
/// Median-split k-d tree; adequate for the desk-scale clouds probed here
/// (up to ~10^5 points in <= 16 dimensions).
class KdTree {
  public:
    explicit KdTree(const Matrix& points) : pts_(points) {
        const Eigen::Index n = pts_.rows();
        order_.resize(static_cast<std::size_t>(n));
        std::iota(order_.begin(), order_.end(), 0);
        nodes_.reserve(static_cast<std::size_t>(2 * n / leaf_size_ + 2));
        if (n > 0) root_ = build(0, n);
    }

    struct Hit {
        double distance = std::numeric_limits<double>::infinity();
        Eigen::Index index = -1;
    };

    /// Nearest point to q; optionally skipping one row index (used when
    /// querying a cloud against itself).
    Hit nearest(const Eigen::Ref<const Vector>& q, Eigen::Index skip = -1) const {
        Hit best;
        if (root_ >= 0) search(root_, q, skip, best);
        best.distance = std::sqrt(best.distance);
        return best;
    }

  private:
    struct Node {
        int left = -1, right = -1;
        int dim = 0;
        double split = 0.0;
        Eigen::Index begin = 0, end = 0;  // leaf range into order_
        bool leaf = false;
    };

    int build(Eigen::Index begin, Eigen::Index end) {
        Node node;
        if (end - begin <= leaf_size_) {
            node.leaf = true;
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }
        // split along the widest dimension of this range
        const int d = static_cast<int>(pts_.cols());
        Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
        Vector hi = Vector::Constant(d, -std::numeric_limits<double>::infinity());
        for (Eigen::Index i = begin; i < end; ++i) {
            lo = lo.cwiseMin(pts_.row(order_[static_cast<std::size_t>(i)]).transpose());
            hi = hi.cwiseMax(pts_.row(order_[static_cast<std::size_t>(i)]).transpose());
        }
        int dim = 0;
        (hi - lo).maxCoeff(&dim);
        const Eigen::Index mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](Eigen::Index a, Eigen::Index b) {
                             return pts_(a, dim) < pts_(b, dim);
                         });
        node.dim = dim;
        node.split = pts_(order_[static_cast<std::size_t>(mid)], dim);
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[static_cast<std::size_t>(self)].left = left;
        nodes_[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    void search(int ni, const Eigen::Ref<const Vector>& q, Eigen::Index skip, Hit& best) const {
        const Node& node = nodes_[static_cast<std::size_t>(ni)];
        if (node.leaf) {
            for (Eigen::Index i = node.begin; i < node.end; ++i) {
                const Eigen::Index idx = order_[static_cast<std::size_t>(i)];
                if (idx == skip) continue;
                const double d2 = (pts_.row(idx).transpose() - q).squaredNorm();
                if (d2 < best.distance) {
                    best.distance = d2;
                    best.index = idx;
                }
            }
            return;
        }
        const double delta = q[node.dim] - node.split;
        const int near = delta < 0.0 ? node.left : node.right;
        const int far = delta < 0.0 ? node.right : node.left;
        search(near, q, skip, best);
        if (delta * delta < best.distance) search(far, q, skip, best);
    }

    static constexpr Eigen::Index leaf_size_ = 16;
    Matrix pts_;
    std::vector<Eigen::Index> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace qinv
