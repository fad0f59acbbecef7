#include "artsyn/ultra_codec.hpp"

#include "artsyn/binio.hpp"

#include <algorithm>
#include <cmath>

namespace artsyn {

void UltrasoundFrame::validate() const {
  if (scanlines < 1 || samples_per_line < 1)
    throw InvalidArgument("ultrasound frame: non-positive dimensions");
  if (intensities.size() != pixel_count())
    throw InvalidArgument("ultrasound frame: intensity buffer size " +
                          std::to_string(intensities.size()) + " does not match " +
                          std::to_string(pixel_count()));
}

Matrix UltrasoundFrame::to_grid() const {
  validate();
  Matrix g(scanlines, samples_per_line);
  for (int r = 0; r < scanlines; ++r)
    for (int c = 0; c < samples_per_line; ++c)
      g(r, c) = static_cast<double>(
          intensities[static_cast<std::size_t>(r) * samples_per_line + c]);
  return g;
}

ReducedFrame ReducedFrame::from_grid(const Matrix& grid) {
  ReducedFrame f;
  f.height = static_cast<int>(grid.rows());
  f.width = static_cast<int>(grid.cols());
  f.values.resize(f.dim());
  for (int r = 0; r < f.height; ++r)
    for (int c = 0; c < f.width; ++c) f.values[r * f.width + c] = grid(r, c);
  return f;
}

Matrix ReducedFrame::to_grid() const {
  if (values.size() != dim()) throw InvalidArgument("reduced frame: bad value count");
  Matrix g(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) g(r, c) = values[r * width + c];
  return g;
}

void WedgeGeometry::validate() const {
  if (!(field_of_view_deg > 0.0 && field_of_view_deg < 180.0))
    throw InvalidArgument("wedge geometry: field of view must be in (0, 180) degrees");
  if (zero_offset < 0.0)
    throw InvalidArgument("wedge geometry: zero offset must be >= 0");
  if (output_width < 2 || output_height < 2)
    throw InvalidArgument("wedge geometry: output raster too small");
}

namespace {

// Catmull-Rom kernel, a = -0.5.
double cubic_weight(double t) {
  t = std::abs(t);
  if (t <= 1.0) return ((1.5 * t - 2.5) * t) * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

struct Taps {
  int idx[4];
  double w[4];
};

// Center-aligned source position for output coordinate d, with the four
// surrounding taps clamped to [0, size-1].
std::vector<Taps> make_taps(int src_size, int dst_size) {
  const double scale = static_cast<double>(src_size) / dst_size;
  std::vector<Taps> taps(static_cast<std::size_t>(dst_size));
  for (int d = 0; d < dst_size; ++d) {
    const double s = (d + 0.5) * scale - 0.5;
    const int base = static_cast<int>(std::floor(s));
    const double f = s - base;
    Taps& t = taps[static_cast<std::size_t>(d)];
    t.w[0] = cubic_weight(f + 1.0);
    t.w[1] = cubic_weight(f);
    t.w[2] = cubic_weight(1.0 - f);
    t.w[3] = cubic_weight(2.0 - f);
    for (int k = 0; k < 4; ++k)
      t.idx[k] = std::clamp(base - 1 + k, 0, src_size - 1);
  }
  return taps;
}

}  // namespace

Matrix resize_bicubic(const Matrix& src, int target_h, int target_w) {
  if (src.rows() < 2 || src.cols() < 2 || target_h < 2 || target_w < 2)
    throw InvalidArgument("resize_bicubic: all dimensions must be >= 2");

  const auto col_taps = make_taps(static_cast<int>(src.cols()), target_w);
  const auto row_taps = make_taps(static_cast<int>(src.rows()), target_h);

  // Horizontal pass, then vertical.
  Matrix mid(src.rows(), target_w);
  for (Eigen::Index r = 0; r < src.rows(); ++r) {
    for (int c = 0; c < target_w; ++c) {
      const Taps& t = col_taps[static_cast<std::size_t>(c)];
      mid(r, c) = t.w[0] * src(r, t.idx[0]) + t.w[1] * src(r, t.idx[1]) +
                  t.w[2] * src(r, t.idx[2]) + t.w[3] * src(r, t.idx[3]);
    }
  }
  Matrix out(target_h, target_w);
  for (int r = 0; r < target_h; ++r) {
    const Taps& t = row_taps[static_cast<std::size_t>(r)];
    out.row(r) = t.w[0] * mid.row(t.idx[0]) + t.w[1] * mid.row(t.idx[1]) +
                 t.w[2] * mid.row(t.idx[2]) + t.w[3] * mid.row(t.idx[3]);
  }

  const double lo = src.minCoeff();
  const double hi = src.maxCoeff();
  return out.cwiseMax(lo).cwiseMin(hi);
}

ReducedFrame reduce_frame(const UltrasoundFrame& frame, int height, int width) {
  return ReducedFrame::from_grid(resize_bicubic(frame.to_grid(), height, width));
}

PcaCodec PcaCodec::fit(const std::vector<ReducedFrame>& frames,
                       double variance_target, int max_components) {
  if (frames.size() < 2)
    throw InsufficientDataError("pca fit: need at least 2 frames, got " +
                                std::to_string(frames.size()));
  if (!(variance_target > 0.0 && variance_target <= 1.0))
    throw InvalidArgument("pca fit: variance target must be in (0, 1]");
  if (max_components < 0)
    throw InvalidArgument("pca fit: negative component cap");

  const int h = frames.front().height;
  const int w = frames.front().width;
  const Eigen::Index dim = frames.front().values.size();
  const Eigen::Index n = static_cast<Eigen::Index>(frames.size());
  for (const ReducedFrame& f : frames) {
    if (f.height != h || f.width != w || f.values.size() != dim)
      throw InvalidArgument("pca fit: mismatched frame shapes");
  }

  Matrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = frames[static_cast<std::size_t>(i)].values;
  const Vector mean = x.colwise().mean();
  x.rowwise() -= mean.transpose();

  const double denom = static_cast<double>(n - 1);
  const double total_variance = x.squaredNorm() / denom;

  Vector eigvals;      // descending, sample-covariance scale
  Matrix basis;        // rank x dim, orthonormal rows
  if (n <= dim) {
    // Gram route: eigenpairs of X X^T share the nonzero spectrum of X^T X.
    const Matrix gram = x * x.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.info() != Eigen::Success) throw NumericalError("pca fit: eigensolver failed");
    const Vector ev_asc = es.eigenvalues();
    const Matrix u_asc = es.eigenvectors();
    const double cutoff = std::max(ev_asc.maxCoeff(), 0.0) * 1e-12;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev_asc.size() - 1; i >= 0; --i)
      if (ev_asc[i] > cutoff) keep.push_back(i);
    eigvals.resize(static_cast<Eigen::Index>(keep.size()));
    basis.resize(static_cast<Eigen::Index>(keep.size()), dim);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      eigvals[static_cast<Eigen::Index>(k)] = ev_asc[keep[k]] / denom;
      basis.row(static_cast<Eigen::Index>(k)) =
          (x.transpose() * u_asc.col(keep[k])).normalized();
    }
  } else {
    const Matrix cov = (x.transpose() * x) / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.info() != Eigen::Success) throw NumericalError("pca fit: eigensolver failed");
    const Vector ev_asc = es.eigenvalues();
    const Matrix v_asc = es.eigenvectors();
    const double cutoff = std::max(ev_asc.maxCoeff(), 0.0) * 1e-12;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev_asc.size() - 1; i >= 0; --i)
      if (ev_asc[i] > cutoff) keep.push_back(i);
    eigvals.resize(static_cast<Eigen::Index>(keep.size()));
    basis.resize(static_cast<Eigen::Index>(keep.size()), dim);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      eigvals[static_cast<Eigen::Index>(k)] = ev_asc[keep[k]];
      basis.row(static_cast<Eigen::Index>(k)) = v_asc.col(keep[k]).transpose();
    }
  }

  // Smallest count whose cumulative share reaches the target.
  const Eigen::Index rank = eigvals.size();
  Eigen::Index k = rank;
  double cum = 0.0;
  for (Eigen::Index i = 0; i < rank; ++i) {
    cum += eigvals[i];
    if (cum / total_variance >= variance_target) {
      k = i + 1;
      break;
    }
  }
  if (max_components > 0) k = std::min<Eigen::Index>(k, max_components);

  // Sign convention: largest-magnitude entry of each component positive.
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::Index at;
    basis.row(i).cwiseAbs().maxCoeff(&at);
    if (basis(i, at) < 0.0) basis.row(i) = -basis.row(i);
  }

  PcaCodec codec;
  codec.mean_ = mean;
  codec.components_ = basis.topRows(k);
  codec.explained_variance_ = eigvals.head(k);
  codec.total_variance_ = total_variance;
  codec.height_ = h;
  codec.width_ = w;
  return codec;
}

Vector PcaCodec::encode(const ReducedFrame& frame) const {
  if (frame.values.size() != mean_.size())
    throw InvalidArgument("pca encode: frame dim " + std::to_string(frame.values.size()) +
                          " != codec dim " + std::to_string(mean_.size()));
  return components_ * (frame.values - mean_);
}

ReducedFrame PcaCodec::decode(const Vector& coeffs) const {
  if (coeffs.size() != components_.rows())
    throw InvalidArgument("pca decode: coefficient count " + std::to_string(coeffs.size()) +
                          " != retained components " + std::to_string(components_.rows()));
  ReducedFrame f;
  f.height = height_;
  f.width = width_;
  f.values = mean_ + components_.transpose() * coeffs;
  return f;
}

Matrix PcaCodec::encode_rows(const Matrix& flat_frames) const {
  if (flat_frames.cols() != mean_.size())
    throw InvalidArgument("pca encode: row width does not match codec dim");
  return (flat_frames.rowwise() - mean_.transpose()) * components_.transpose();
}

Matrix PcaCodec::decode_rows(const Matrix& coeffs) const {
  if (coeffs.cols() != components_.rows())
    throw InvalidArgument("pca decode: row width does not match retained components");
  return (coeffs * components_).rowwise() + mean_.transpose();
}

// Layout: magic "UPCA", version u16, dim u32, n_components u32, mean f64[dim],
// components f64[n*dim] (row by row), explained_variance f64[n], then
// total_variance f64 and frame height/width u32 for reconstruction.
void PcaCodec::save(const std::string& path) const {
  auto os = binio::open_out(path);
  binio::write_magic(os, "UPCA");
  binio::write_u16(os, 1);
  binio::write_u32(os, static_cast<std::uint32_t>(dim()));
  binio::write_u32(os, static_cast<std::uint32_t>(n_components()));
  binio::write_f64_array(os, mean_.data(), static_cast<std::size_t>(mean_.size()));
  for (Eigen::Index i = 0; i < components_.rows(); ++i) {
    const Vector row = components_.row(i);
    binio::write_f64_array(os, row.data(), static_cast<std::size_t>(row.size()));
  }
  binio::write_f64_array(os, explained_variance_.data(),
                         static_cast<std::size_t>(explained_variance_.size()));
  binio::write_f64(os, total_variance_);
  binio::write_u32(os, static_cast<std::uint32_t>(height_));
  binio::write_u32(os, static_cast<std::uint32_t>(width_));
}

PcaCodec PcaCodec::load(const std::string& path) {
  auto is = binio::open_in(path);
  binio::expect_magic(is, "UPCA");
  const std::uint16_t version = binio::read_u16(is);
  if (version != 1) throw DataError("codec file: unsupported version");
  const auto dim = static_cast<Eigen::Index>(binio::read_u32(is));
  const auto k = static_cast<Eigen::Index>(binio::read_u32(is));
  PcaCodec c;
  c.mean_.resize(dim);
  binio::read_f64_array(is, c.mean_.data(), static_cast<std::size_t>(dim));
  c.components_.resize(k, dim);
  Vector row(dim);
  for (Eigen::Index i = 0; i < k; ++i) {
    binio::read_f64_array(is, row.data(), static_cast<std::size_t>(dim));
    c.components_.row(i) = row;
  }
  c.explained_variance_.resize(k);
  binio::read_f64_array(is, c.explained_variance_.data(), static_cast<std::size_t>(k));
  c.total_variance_ = binio::read_f64(is);
  c.height_ = static_cast<int>(binio::read_u32(is));
  c.width_ = static_cast<int>(binio::read_u32(is));
  return c;
}

namespace {

double lerp(double a, double b, double f) { return a + f * (b - a); }

}  // namespace

Matrix render_wedge(const Matrix& scanlines, const WedgeGeometry& geom) {
  geom.validate();
  const int n_lines = static_cast<int>(scanlines.rows());
  const int n_samples = static_cast<int>(scanlines.cols());
  if (n_lines < 1 || n_samples < 1)
    throw InvalidArgument("render_wedge: empty scanline grid");

  const double fov = geom.field_of_view_deg * 3.14159265358979323846 / 180.0;
  const double half = fov / 2.0;
  const double r_min = geom.zero_offset;
  const double r_max = geom.zero_offset + (n_samples - 1);
  const int W = geom.output_width;
  const int H = geom.output_height;
  const double span_x = 2.0 * r_max * std::sin(half);
  const double scale = std::min((W - 1) / span_x, (H - 1) / r_max);
  const double cx = (W - 1) / 2.0;
  const double cy = H - 1;

  Matrix out = Matrix::Zero(H, W);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double dx = x - cx;
      const double dy = cy - y;  // up is positive
      const double r = std::sqrt(dx * dx + dy * dy) / scale;
      if (r < r_min || r > r_max) continue;
      const double theta = std::atan2(dx, dy);
      if (std::abs(theta) > half) continue;
      const double lpos = (n_lines == 1) ? 0.0 : (theta / fov + 0.5) * (n_lines - 1);
      const double spos = r - r_min;
      const int l0 = std::clamp(static_cast<int>(std::floor(lpos)), 0, n_lines - 1);
      const int l1 = std::min(l0 + 1, n_lines - 1);
      const int s0 = std::clamp(static_cast<int>(std::floor(spos)), 0, n_samples - 1);
      const int s1 = std::min(s0 + 1, n_samples - 1);
      const double fl = lpos - l0;
      const double fs = spos - s0;
      out(y, x) = lerp(lerp(scanlines(l0, s0), scanlines(l0, s1), fs),
                       lerp(scanlines(l1, s0), scanlines(l1, s1), fs), fl);
    }
  }
  return out;
}

}  // namespace artsyn
