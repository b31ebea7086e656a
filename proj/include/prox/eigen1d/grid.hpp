// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prox/core/error.hpp"

namespace prox::eigen1d {

/// Truncated interval [t_min, t_max] split at an origin into two uniformly spaced parts.
///
/// When the interval straddles 0 the origin is 0 and is always a node, so a
/// coefficient jump at t = 0 falls on an element boundary. Each side keeps its
/// own spacing; `uniform()` produces equal spacings.
class Grid {
public:
    /// Uniform spacing (t_max - t_min) / cells. Straddling grids must put a node on 0.
    static Grid uniform(double t_min, double t_max, std::size_t cells)
    {
        check_interval(t_min, t_max);
        if (cells < 1) throw PreconditionError("Grid: need at least one cell");
        if (t_min < 0.0 && t_max > 0.0) {
            const double h = (t_max - t_min) / static_cast<double>(cells);
            const double k = -t_min / h;
            const double kr = std::round(k);
            if (std::abs(k - kr) > 1e-9 * static_cast<double>(cells) || kr < 1.0 ||
                kr > static_cast<double>(cells) - 1.0) {
                throw PreconditionError("Grid: t = 0 is not a node of the uniform grid on [" +
                                        std::to_string(t_min) + ", " + std::to_string(t_max) + "]");
            }
            const auto left = static_cast<std::size_t>(kr);
            return Grid(-h * kr, h * static_cast<double>(cells - left), left, cells - left, 0.0);
        }
        if (t_max <= 0.0) return Grid(t_min, t_max, cells, 0, t_max);
        return Grid(t_min, t_max, 0, cells, t_min);
    }

    /// Interval straddling 0 with independent cell counts on each side.
    static Grid split(double t_min, double t_max, std::size_t left_cells, std::size_t right_cells)
    {
        check_interval(t_min, t_max);
        if (!(t_min < 0.0 && t_max > 0.0)) throw PreconditionError("Grid::split: interval must straddle 0");
        if (left_cells < 1 || right_cells < 1) throw PreconditionError("Grid::split: need cells on both sides");
        return Grid(t_min, t_max, left_cells, right_cells, 0.0);
    }

    /// Same interval with every cell halved.
    Grid refined() const { return Grid(t_min_, t_max_, 2 * left_cells_, 2 * right_cells_, origin_); }

    /// Extends the interval by whole cells at either end, keeping both spacings.
    Grid extended(std::size_t extra_left, std::size_t extra_right) const
    {
        if (extra_left > 0 && left_cells_ == 0) {
            throw PreconditionError("Grid::extended: no left part to extend");
        }
        if (extra_right > 0 && right_cells_ == 0) {
            throw PreconditionError("Grid::extended: no right part to extend");
        }
        const double tl = origin_ - h_left() * static_cast<double>(left_cells_ + extra_left);
        const double tr = origin_ + h_right() * static_cast<double>(right_cells_ + extra_right);
        return Grid(left_cells_ ? tl : t_min_, right_cells_ ? tr : t_max_, left_cells_ + extra_left,
                    right_cells_ + extra_right, origin_);
    }

    std::span<const double> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t cells() const { return left_cells_ + right_cells_; }
    std::size_t left_cells() const { return left_cells_; }
    std::size_t right_cells() const { return right_cells_; }
    double t_min() const { return nodes_.front(); }
    double t_max() const { return nodes_.back(); }
    double origin() const { return origin_; }
    /// Index of the origin node (0 for a grid starting at the origin).
    std::size_t origin_index() const { return left_cells_; }
    double h_left() const { return left_cells_ ? (origin_ - t_min_) / static_cast<double>(left_cells_) : 0.0; }
    double h_right() const { return right_cells_ ? (t_max_ - origin_) / static_cast<double>(right_cells_) : 0.0; }

    /// Index of the node at t = 0, if the grid has one.
    std::optional<std::size_t> zero_index() const
    {
        if (origin_ == 0.0) return left_cells_;
        return std::nullopt;
    }

    /// Length of cell i (between nodes i and i+1).
    double spacing(std::size_t cell) const { return cell < left_cells_ ? h_left() : h_right(); }

private:
    Grid(double t_min, double t_max, std::size_t left, std::size_t right, double origin)
        : t_min_(t_min), t_max_(t_max), left_cells_(left), right_cells_(right), origin_(origin)
    {
        nodes_.resize(left + right + 1);
        const double hl = h_left();
        const double hr = h_right();
        for (std::size_t i = 0; i <= left; ++i) {
            nodes_[i] = origin - hl * static_cast<double>(left - i);
        }
        for (std::size_t j = 1; j <= right; ++j) {
            nodes_[left + j] = origin + hr * static_cast<double>(j);
        }
    }

    static void check_interval(double t_min, double t_max)
    {
        if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_min < t_max)) {
            throw PreconditionError("Grid: need finite t_min < t_max");
        }
    }

    double t_min_;
    double t_max_;
    std::size_t left_cells_;
    std::size_t right_cells_;
    double origin_;
    std::vector<double> nodes_;
};

} // namespace prox::eigen1d
