#pragma once

#include "artsyn/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace artsyn {

/// One raw ultrasound tongue frame: per-beam echo intensities as recorded,
/// row-major with one row per scanline.
struct UltrasoundFrame {
  int scanlines = 64;
  int samples_per_line = 842;
  std::vector<std::uint8_t> intensities;  // scanlines * samples_per_line

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(scanlines) * static_cast<std::size_t>(samples_per_line);
  }
  void validate() const;
  Matrix to_grid() const;  // scanlines x samples_per_line, values in [0,255]
};

/// Frame after bicubic reduction, kept as real values (row-major grid).
struct ReducedFrame {
  int height = 64;
  int width = 128;
  Vector values;  // height * width, row-major

  int dim() const { return height * width; }
  static ReducedFrame from_grid(const Matrix& grid);
  Matrix to_grid() const;
};

/// Fan-rendering parameters: maps scanline data to the probe's real
/// geometry. Beam index spans the field of view, sample index is radius.
struct WedgeGeometry {
  double field_of_view_deg = 92.0;
  double zero_offset = 50.0;  // samples skipped next to the probe face
  int output_width = 512;
  int output_height = 512;

  void validate() const;
};

/// Separable Catmull-Rom (a = -0.5) resampling with center-aligned sample
/// positions and edge-clamped taps. Output values are clipped to the
/// input's value range.
Matrix resize_bicubic(const Matrix& src, int target_h, int target_w);

/// Convenience: raw frame -> real grid -> bicubic reduction.
ReducedFrame reduce_frame(const UltrasoundFrame& frame, int height = 64, int width = 128);

/// PCA compressor over reduced ultrasound frames. Components are exact
/// eigenvectors of the sample covariance of the mean-centered training
/// frames, ordered by descending eigenvalue; the retained count is the
/// smallest one whose cumulative explained-variance share reaches the
/// requested target.
class PcaCodec {
public:
  PcaCodec() = default;

  /// max_components == 0 means "no cap".
  static PcaCodec fit(const std::vector<ReducedFrame>& frames,
                      double variance_target, int max_components = 0);

  Vector encode(const ReducedFrame& frame) const;
  ReducedFrame decode(const Vector& coeffs) const;

  /// Batch encode: rows are flattened frames (N x dim) -> N x n_components.
  Matrix encode_rows(const Matrix& flat_frames) const;
  /// Batch decode: rows are coefficient vectors -> N x dim.
  Matrix decode_rows(const Matrix& coeffs) const;

  int dim() const { return static_cast<int>(mean_.size()); }
  int n_components() const { return static_cast<int>(components_.rows()); }
  int frame_height() const { return height_; }
  int frame_width() const { return width_; }
  const Vector& mean() const { return mean_; }
  const Matrix& components() const { return components_; }  // n_components x dim
  const Vector& explained_variance() const { return explained_variance_; }
  double total_variance() const { return total_variance_; }
  double discarded_variance() const { return total_variance_ - explained_variance_.sum(); }
  Vector explained_shares() const { return explained_variance_ / total_variance_; }

  void save(const std::string& path) const;
  static PcaCodec load(const std::string& path);

private:
  Vector mean_;
  Matrix components_;
  Vector explained_variance_;
  double total_variance_ = 0.0;
  int height_ = 0;
  int width_ = 0;
};

/// Polar-to-Cartesian fan rendering. Scanline index maps to beam angle
/// (uniform across the field of view, line 0 at -fov/2), sample index to
/// radius beyond the zero offset. Pixels outside the fan are 0; inside,
/// the value is a bilinear lookup into scanline space. The fan is drawn
/// apex-down, centered, scaled to fit the output raster.
Matrix render_wedge(const Matrix& scanlines, const WedgeGeometry& geom);

}  // namespace artsyn
