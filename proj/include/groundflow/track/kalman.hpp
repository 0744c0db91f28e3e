#pragma once

#include <Eigen/Dense>

#include "groundflow/core.hpp"

namespace groundflow {

/// Constant-velocity state (x, y, vx, vy) in cells and cells per frame.
struct KalmanState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();

    Vec2 position() const { return {mean(0), mean(1)}; }
    Vec2 velocity() const { return {mean(2), mean(3)}; }
};

struct KalmanNoise {
    double process = 0.01;      // q, cells^2 / frame^2
    double measurement = 0.25;  // r, cells^2
};

/// Rejects asymmetric or indefinite covariances. Semi-definite matrices are
/// accepted so that noise-free updates remain usable.
inline void require_spd(const Eigen::Matrix4d& p) {
    if (!p.allFinite()) throw NumericError("kalman: covariance is not finite");
    const double scale = 1.0 + p.cwiseAbs().maxCoeff();
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NumericError("kalman: covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(p);
    if (eig.eigenvalues().minCoeff() < -1e-9 * scale)
        throw NumericError("kalman: covariance is not positive definite");
}

inline KalmanState kalman_init(Vec2 pos, double position_var = 0.25, double velocity_var = 4.0) {
    KalmanState s;
    s.mean << pos.x, pos.y, 0.0, 0.0;
    s.covariance = Eigen::Vector4d(position_var, position_var, velocity_var, velocity_var).asDiagonal();
    return s;
}

inline KalmanState kalman_predict(const KalmanState& s, double dt, double q) {
    require_spd(s.covariance);
    Eigen::Matrix4d F = Eigen::Matrix4d::Identity();
    F(0, 2) = dt;
    F(1, 3) = dt;
    KalmanState out;
    out.mean = F * s.mean;
    out.covariance = F * s.covariance * F.transpose() + (q * dt) * Eigen::Matrix4d::Identity();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

/// Position measurement update. `r` may be zero (exact observations) as long
/// as the predicted position covariance is nonsingular.
inline KalmanState kalman_update(const KalmanState& s, Vec2 z, double r) {
    require_spd(s.covariance);
    Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
    H(0, 0) = 1.0;
    H(1, 1) = 1.0;
    const Eigen::Matrix2d S = H * s.covariance * H.transpose() + r * Eigen::Matrix2d::Identity();
    const Eigen::Matrix<double, 4, 2> K = s.covariance * H.transpose() * S.inverse();
    KalmanState out;
    out.mean = s.mean + K * (Eigen::Vector2d(z.x, z.y) - H * s.mean);
    // Joseph form keeps the covariance symmetric positive semi-definite.
    const Eigen::Matrix4d I_KH = Eigen::Matrix4d::Identity() - K * H;
    out.covariance = I_KH * s.covariance * I_KH.transpose() + r * K * K.transpose();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

}  // namespace groundflow
