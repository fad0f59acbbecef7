#pragma once

#include "artsyn/common.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace artsyn {

/// One named block of columns in a frame vector. A segment with deltas
/// occupies width*3 columns ordered [static | delta | delta-delta].
struct StreamSegment {
  std::string name;
  int width = 0;
  bool has_deltas = false;

  int span() const { return has_deltas ? 3 * width : width; }
  bool operator==(const StreamSegment&) const = default;
};

class StreamLayout {
public:
  StreamLayout() = default;

  StreamLayout& add(std::string name, int width, bool has_deltas);

  int total_width() const;
  int segment_count() const { return static_cast<int>(segments_.size()); }
  const StreamSegment& segment(int i) const { return segments_[static_cast<std::size_t>(i)]; }
  const std::vector<StreamSegment>& segments() const { return segments_; }

  /// First column of segment i within the frame vector.
  int segment_offset(int i) const;
  /// Index of the named segment, or -1.
  int find(const std::string& name) const;
  /// {offset, width} of the named segment's static block. Throws if absent.
  std::pair<int, int> static_block(const std::string& name) const;

  /// Same segments with all delta flags cleared (layout of generated statics).
  StreamLayout without_deltas() const;
  StreamLayout concat(const StreamLayout& other) const;
  bool operator==(const StreamLayout&) const = default;

  /// Paper-default acoustic side: MGC 60 + BAP 5 + LF0 1 (all with deltas)
  /// and a VUV bit without deltas. Total 199 columns.
  static StreamLayout acoustic_default();
  /// Articulatory side: ULTPCA block with deltas, 3*k columns.
  static StreamLayout articulatory(int n_coeffs);

  void write(std::ostream& os) const;
  static StreamLayout read(std::istream& is);

private:
  std::vector<StreamSegment> segments_;
};

/// Time-major feature sequence with a named column layout.
struct FeatureMatrix {
  StreamLayout layout;
  double frame_shift = 0.005;
  Matrix frames;  // T x layout.total_width()

  int frame_count() const { return static_cast<int>(frames.rows()); }
  void validate() const;
  /// View of one segment's static columns.
  Matrix segment_statics(const std::string& name) const;
};

/// Appends first and second time derivatives: windows (-0.5, 0, 0.5) and
/// (1, -2, 1) with first/last frame replication at the edges. Output
/// columns are [static | delta | delta-delta].
Matrix append_deltas(const Matrix& stream);

/// Per-column linear interpolation along the time axis.
/// T' = floor((T-1) * to_rate / from_rate) + 1.
Matrix resample_stream(const Matrix& stream, double from_rate, double to_rate);

enum class NormMode : std::uint8_t { MinMax = 0, MeanVariance = 1 };

/// Per-column normalization statistics. Min-max maps onto a target
/// interval (default [0.01, 0.99]); mean-variance standardizes with the
/// population standard deviation. Columns with negligible spread are
/// flagged constant: they map to the interval midpoint (min-max) or 0
/// (mean-variance) and invert back to their constant.
class NormStats {
public:
  NormStats() = default;

  static NormStats fit(const Matrix& stream, NormMode mode,
                       double target_lo = 0.01, double target_hi = 0.99);

  Matrix apply(const Matrix& stream) const;
  Matrix invert(const Matrix& stream) const;

  NormMode mode() const { return mode_; }
  int width() const { return static_cast<int>(stat_a_.size()); }
  /// Column means (mean-variance) or minima (min-max).
  const Vector& stat_a() const { return stat_a_; }
  /// Column stddevs (mean-variance) or maxima (min-max).
  const Vector& stat_b() const { return stat_b_; }
  /// Column variances; only meaningful in mean-variance mode.
  Vector variances() const { return stat_b_.array().square(); }

  /// Stats restricted to a column range [offset, offset+width).
  NormStats slice(int offset, int width) const;

  void write(std::ostream& os) const;
  static NormStats read(std::istream& is);
  void save(const std::string& path) const;
  static NormStats load(const std::string& path);

private:
  NormMode mode_ = NormMode::MinMax;
  Vector stat_a_, stat_b_;
  std::vector<std::uint8_t> constant_;
  double lo_ = 0.01, hi_ = 0.99;
};

/// Column-concatenates two synchronized feature matrices (layouts merge).
FeatureMatrix compose_target(const FeatureMatrix& acoustic, const FeatureMatrix& articulatory);

/// Splits a composed matrix back at the boundary given by the first
/// layout, which must be a prefix of the composed layout.
std::pair<FeatureMatrix, FeatureMatrix> split_target(const FeatureMatrix& composed,
                                                     const StreamLayout& first_layout);

inline constexpr double kUnvoicedLf0 = -1.0e10;

/// Fills unvoiced gaps of a log-F0 track by linear interpolation between
/// surrounding voiced frames (edge gaps held constant) and returns the
/// voiced/unvoiced flags. Values below `unvoiced_below` count as unvoiced.
std::pair<Vector, Vector> interpolate_lf0(const Vector& lf0, double unvoiced_below = -1.0e9);

/// Frame-stream file ("FMTX"): layout + frame shift + row-major f32 frames.
void save_features(const std::string& path, const FeatureMatrix& fm);
FeatureMatrix load_features(const std::string& path);

}  // namespace artsyn
