#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace groundflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or domain value; maps to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or diverging optimisation; maps to CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Discretised ground plane. Cell (x, y) is stored at y * width + x and
/// integer coordinate k is the centre of cell k.
class GroundGrid {
public:
    GroundGrid() = default;
    GroundGrid(int width_cells, int height_cells, double cell_size_m = 0.20)
        : width_(width_cells), height_(height_cells), cell_size_m_(cell_size_m) {
        if (width_ < 1 || height_ < 1)
            throw ConfigError("grid dimensions must be >= 1");
        if (!(cell_size_m_ > 0.0))
            throw ConfigError("cell size must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size_m() const { return cell_size_m_; }
    std::size_t cells() const { return static_cast<std::size_t>(width_) * height_; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    /// Continuous position inside the addressable area [0, w) x [0, h).
    bool contains(Vec2 p) const { return p.x >= 0.0 && p.y >= 0.0 && p.x < width_ && p.y < height_; }

    bool operator==(const GroundGrid& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

private:
    int width_ = 1;
    int height_ = 1;
    double cell_size_m_ = 0.20;
};

inline void require_same_grid(const GroundGrid& a, const GroundGrid& b, const char* what) {
    if (!(a == b))
        throw DimensionError(std::string(what) + ": grid mismatch (" + std::to_string(a.width()) + "x" +
                             std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()) + ")");
}

/// Unconstrained real-valued map over the grid (reconstructions, gradients).
struct ScalarField {
    GroundGrid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const GroundGrid& g, double fill = 0.0) : grid(g), values(g.cells(), fill) {}
    ScalarField(const GroundGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.cells())
            throw DimensionError("scalar field: value count does not match grid");
    }

    double& at(int x, int y) { return values[grid.index(x, y)]; }
    double at(int x, int y) const { return values[grid.index(x, y)]; }
    double sum() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
};

/// Probability-of-presence map; every value lies in [0, 1].
class Heatmap {
public:
    Heatmap() = default;
    explicit Heatmap(const GroundGrid& g) : grid_(g), values_(g.cells(), 0.0) {}
    Heatmap(const GroundGrid& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
        if (values_.size() != grid_.cells())
            throw DimensionError("heatmap: value count does not match grid");
        for (double v : values_)
            if (!(v >= 0.0 && v <= 1.0))
                throw ConfigError("heatmap value outside [0,1]: " + std::to_string(v));
    }

    const GroundGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double at(int x, int y) const { return values_[grid_.index(x, y)]; }
    ScalarField as_field() const { return ScalarField(grid_, values_); }

private:
    GroundGrid grid_;
    std::vector<double> values_;
};

/// Per-cell displacement in cells per frame interval.
class OffsetField {
public:
    OffsetField() = default;
    explicit OffsetField(const GroundGrid& g) : grid_(g), dx_(g.cells(), 0.0), dy_(g.cells(), 0.0) {}
    OffsetField(const GroundGrid& g, std::vector<double> dx, std::vector<double> dy)
        : grid_(g), dx_(std::move(dx)), dy_(std::move(dy)) {
        if (dx_.size() != grid_.cells() || dy_.size() != grid_.cells())
            throw DimensionError("offset field: component size does not match grid");
        for (std::size_t i = 0; i < dx_.size(); ++i)
            if (!std::isfinite(dx_[i]) || !std::isfinite(dy_[i]))
                throw NumericError("offset field contains a non-finite value");
    }
    static OffsetField constant(const GroundGrid& g, Vec2 d) {
        return OffsetField(g, std::vector<double>(g.cells(), d.x), std::vector<double>(g.cells(), d.y));
    }

    const GroundGrid& grid() const { return grid_; }
    std::span<const double> dx() const { return dx_; }
    std::span<const double> dy() const { return dy_; }
    Vec2 at(int x, int y) const {
        auto i = grid_.index(x, y);
        return {dx_[i], dy_[i]};
    }

    /// Bilinear sample with positions clamped to the border cells.
    Vec2 sample(Vec2 p) const;

private:
    GroundGrid grid_;
    std::vector<double> dx_;
    std::vector<double> dy_;
};

struct Detection {
    int time = 0;
    Vec2 pos;
    double confidence = 1.0;
};

struct TrackPoint {
    int time = 0;
    Vec2 pos;
};

class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(int id) : id_(id) {}

    int id() const { return id_; }
    void set_id(int id) { id_ = id; }
    const std::vector<TrackPoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }
    const TrackPoint& back() const { return points_.back(); }

    void append(int time, Vec2 pos) {
        if (!points_.empty() && time <= points_.back().time)
            throw ConfigError("trajectory times must be strictly increasing");
        points_.push_back({time, pos});
    }

    /// Position at `time`, or nullptr if the trajectory has no point there.
    const TrackPoint* find(int time) const;

private:
    int id_ = 0;
    std::vector<TrackPoint> points_;
};

// --- bilinear sampling shared by the loss and the trackers ---------------

struct BilinearStencil {
    int x0, y0, x1, y1;
    double fx, fy;
    bool clamped_x, clamped_y;
};

/// Stencil for a continuous point; coordinates outside [0, w-1] x [0, h-1]
/// are clamped to the border (zero derivative along a clamped axis).
inline BilinearStencil bilinear_stencil(const GroundGrid& g, Vec2 p) {
    BilinearStencil s{};
    auto axis = [](double v, int n, int& lo, int& hi, double& f, bool& clamped) {
        const double maxv = static_cast<double>(n - 1);
        clamped = false;
        if (v <= 0.0) {
            clamped = v < 0.0;
            v = 0.0;
        } else if (v >= maxv) {
            clamped = v > maxv;
            v = maxv;
        }
        if (n == 1) {
            lo = hi = 0;
            f = 0.0;
            clamped = true;
            return;
        }
        lo = static_cast<int>(std::floor(v));
        if (lo >= n - 1) lo = n - 2;
        hi = lo + 1;
        f = v - lo;
    };
    axis(p.x, g.width(), s.x0, s.x1, s.fx, s.clamped_x);
    axis(p.y, g.height(), s.y0, s.y1, s.fy, s.clamped_y);
    return s;
}

inline double bilinear_sample(const GroundGrid& g, std::span<const double> v, const BilinearStencil& s) {
    const double a = v[g.index(s.x0, s.y0)], b = v[g.index(s.x1, s.y0)];
    const double c = v[g.index(s.x0, s.y1)], d = v[g.index(s.x1, s.y1)];
    return (1 - s.fy) * ((1 - s.fx) * a + s.fx * b) + s.fy * ((1 - s.fx) * c + s.fx * d);
}

inline Vec2 OffsetField::sample(Vec2 p) const {
    const auto s = bilinear_stencil(grid_, p);
    return {bilinear_sample(grid_, dx_, s), bilinear_sample(grid_, dy_, s)};
}

inline const TrackPoint* Trajectory::find(int time) const {
    auto lo = points_.begin(), hi = points_.end();
    while (lo < hi) {
        auto mid = lo + (hi - lo) / 2;
        if (mid->time < time)
            lo = mid + 1;
        else
            hi = mid;
    }
    return (lo != points_.end() && lo->time == time) ? &*lo : nullptr;
}

// --- camera geometry ------------------------------------------------------

using Mat3 = Eigen::Matrix3d;

/// Ground-plane homography K [r1 r2 t] for the flat z = 0 world plane.
inline Mat3 homography_from_calib(const Mat3& K, const Mat3& R, const Eigen::Vector3d& t) {
    Mat3 Rt;
    Rt.col(0) = R.col(0);
    Rt.col(1) = R.col(1);
    Rt.col(2) = t;
    Mat3 H = K * Rt;
    if (std::abs(H.determinant()) < 1e-12)
        throw GeometryError("singular homography");
    return H;
}

inline Vec2 project_point(const Mat3& H, Vec2 p) {
    const Eigen::Vector3d q = H * Eigen::Vector3d(p.x, p.y, 1.0);
    if (std::abs(q.z()) <= 1e-12)
        throw GeometryError("point maps to infinity");
    return {q.x() / q.z(), q.y() / q.z()};
}

struct CameraModel {
    Mat3 K = Mat3::Identity();
    Mat3 R = Mat3::Identity();
    Eigen::Vector3d t = Eigen::Vector3d(0, 0, 1);
    Mat3 H = Mat3::Identity();  // ground -> image
    Mat3 H_inv = Mat3::Identity();

    CameraModel() = default;
    CameraModel(const Mat3& k, const Mat3& r, const Eigen::Vector3d& tr)
        : K(k), R(r), t(tr), H(homography_from_calib(k, r, tr)), H_inv(H.inverse()) {}

    Vec2 ground_to_image(Vec2 g) const { return project_point(H, g); }
    Vec2 image_to_ground(Vec2 px) const { return project_point(H_inv, px); }
};

}  // namespace groundflow
