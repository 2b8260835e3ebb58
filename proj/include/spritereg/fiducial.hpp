// Copyright 2026 The spritereg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Per-dimension error measures ("fiducials") of a sprite under a rendering
// action. Warp reuse is scored by fitting a 2D affine map from the points
// captured at the last render to the current gold-standard points and
// summing the squared residuals.

#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spritereg/error.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

struct Affine2D {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();

  Point2 operator()(const Point2& p) const {
    const Eigen::Vector2d q = linear * Eigen::Vector2d(p.x, p.y) + translation;
    return {q.x(), q.y()};
  }
};

struct AffineFit {
  Affine2D transform;
  double residual = 0.0;  // sum of squared distances, pixels^2
  bool degenerate = false;  // source points collinear or coincident
};

// Relative eigenvalue cutoff below which the source scatter is treated as
// rank deficient.
inline constexpr double kDegeneracyTolerance = 1e-12;

// Least-squares affine map taking src onto dst. Solved on centroid-relative
// coordinates, where the normal equations decouple into a 2x2 system for the
// linear part and a closed form for the translation. A rank-deficient source
// scatter yields the minimum-norm linear part and sets `degenerate`.
inline AffineFit fit_affine(const PointSet& src, const PointSet& dst) {
  if (src.size() != dst.size()) {
    throw ValidationError("fit_affine: point count mismatch (" + std::to_string(src.size()) + " vs " +
                          std::to_string(dst.size()) + ")");
  }
  if (src.size() < kMinCharacteristicPoints) {
    throw ValidationError("fit_affine: needs at least 3 correspondences");
  }
  const auto n = static_cast<double>(src.size());
  Eigen::Vector2d src_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d dst_mean = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    src_mean += Eigen::Vector2d(src[i].x, src[i].y);
    dst_mean += Eigen::Vector2d(dst[i].x, dst[i].y);
  }
  src_mean /= n;
  dst_mean /= n;

  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();  // sum x x^T
  Eigen::Matrix2d cross = Eigen::Matrix2d::Zero();    // sum y x^T
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Eigen::Vector2d x = Eigen::Vector2d(src[i].x, src[i].y) - src_mean;
    const Eigen::Vector2d y = Eigen::Vector2d(dst[i].x, dst[i].y) - dst_mean;
    scatter += x * x.transpose();
    cross += y * x.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
  const Eigen::Vector2d lambda = eig.eigenvalues();
  const double cutoff = kDegeneracyTolerance * std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
  Eigen::Vector2d inv = Eigen::Vector2d::Zero();
  int rank = 0;
  for (int k = 0; k < 2; ++k) {
    if (lambda[k] > cutoff && lambda[k] > 0.0) {
      inv[k] = 1.0 / lambda[k];
      ++rank;
    }
  }
  const Eigen::Matrix2d pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();

  AffineFit fit;
  fit.degenerate = rank < 2;
  if (src == dst) return fit;  // identity, exact zero residual
  fit.transform.linear = cross * pinv;
  fit.transform.translation = dst_mean - fit.transform.linear * src_mean;

  double residual = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Point2 p = fit.transform(src[i]);
    const double dx = p.x - dst[i].x;
    const double dy = p.y - dst[i].y;
    residual += dx * dx + dy * dy;
  }
  fit.residual = residual;
  return fit;
}

// Squared-distance error of reusing the sprite's last rendered image through
// the best affine warp onto current_points.
inline double warp_error(const Sprite& sprite, const PointSet& current_points) {
  if (!sprite.last_render) {
    throw ValidationError("warp_error: sprite '" + sprite.id + "' has never been rendered");
  }
  return fit_affine(sprite.last_render->points, current_points).residual;
}

// Functional forms mapping quality knobs to normalized errors.
//   resolution = (1 - spatial_factor)^resolution_exponent
//   texture    = 1 - texture_base^(-texture_lod)
//   shading    = (shading_level / max_shading_level)^shading_exponent
// Geometry error is read from the sprite's LOD table.
struct QualityErrorModel {
  double resolution_exponent = 1.0;
  double texture_base = 2.0;
  double shading_exponent = 1.0;

  friend bool operator==(const QualityErrorModel&, const QualityErrorModel&) = default;
};

inline void validate(const QualityErrorModel& m) {
  if (!(m.resolution_exponent > 0.0) || !(m.texture_base > 1.0) || !(m.shading_exponent > 0.0) ||
      !std::isfinite(m.resolution_exponent) || !std::isfinite(m.texture_base) ||
      !std::isfinite(m.shading_exponent)) {
    throw ValidationError("quality error forms: exponents must be > 0 and texture_base > 1");
  }
}

struct Fiducial {
  double geometric_warp_error = 0.0;  // pixels^2
  double resolution_error = 0.0;
  double texture_error = 0.0;
  double geometry_error = 0.0;
  double shading_error = 0.0;

  bool is_zero() const {
    return geometric_warp_error == 0.0 && resolution_error == 0.0 && texture_error == 0.0 &&
           geometry_error == 0.0 && shading_error == 0.0;
  }

  friend bool operator==(const Fiducial&, const Fiducial&) = default;
};

// Fills the four quality components; geometric_warp_error is left at 0.
inline Fiducial quality_errors(const Sprite& sprite, const QualityVector& q,
                               const QualityErrorModel& forms = {}) {
  validate_quality(sprite, q);
  Fiducial f;
  f.resolution_error = std::pow(1.0 - q.spatial_factor, forms.resolution_exponent);
  f.texture_error = 1.0 - std::pow(forms.texture_base, -static_cast<double>(q.texture_lod));
  f.geometry_error = sprite.polygon_budget[static_cast<std::size_t>(q.geometry_lod)].geometry_error;
  f.shading_error =
      sprite.max_shading_level == 0
          ? 0.0
          : std::pow(static_cast<double>(q.shading_level) / sprite.max_shading_level, forms.shading_exponent);
  return f;
}

struct RenderAction {
  enum class Mode { kRerender, kWarp };

  Mode mode = Mode::kRerender;
  QualityVector quality;  // ignored for kWarp

  static RenderAction rerender(const QualityVector& q = QualityVector::finest()) {
    return {Mode::kRerender, q};
  }
  static RenderAction warp() { return {Mode::kWarp, QualityVector::finest()}; }

  bool is_warp() const { return mode == Mode::kWarp; }

  friend bool operator==(const RenderAction&, const RenderAction&) = default;
};

inline Fiducial evaluate_fiducial(const Sprite& sprite, const RenderAction& action,
                                  const PointSet& current_points, const QualityErrorModel& forms = {}) {
  if (!action.is_warp()) return quality_errors(sprite, action.quality, forms);
  if (!sprite.last_render) {
    throw ValidationError("cannot warp sprite '" + sprite.id + "': it has never been rendered");
  }
  Fiducial f = quality_errors(sprite, sprite.last_render->quality, forms);
  f.geometric_warp_error = warp_error(sprite, current_points);
  return f;
}

}  // namespace spritereg
