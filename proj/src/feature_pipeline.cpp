#include "artsyn/feature_pipeline.hpp"

#include "artsyn/binio.hpp"

#include <algorithm>
#include <cmath>

namespace artsyn {

StreamLayout& StreamLayout::add(std::string name, int width, bool has_deltas) {
  if (width < 1) throw InvalidArgument("stream layout: segment width must be >= 1");
  if (find(name) >= 0) throw InvalidArgument("stream layout: duplicate segment " + name);
  segments_.push_back({std::move(name), width, has_deltas});
  return *this;
}

int StreamLayout::total_width() const {
  int w = 0;
  for (const auto& s : segments_) w += s.span();
  return w;
}

int StreamLayout::segment_offset(int i) const {
  int off = 0;
  for (int j = 0; j < i; ++j) off += segments_[static_cast<std::size_t>(j)].span();
  return off;
}

int StreamLayout::find(const std::string& name) const {
  for (std::size_t i = 0; i < segments_.size(); ++i)
    if (segments_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::pair<int, int> StreamLayout::static_block(const std::string& name) const {
  const int i = find(name);
  if (i < 0) throw InvalidArgument("stream layout: no segment named " + name);
  return {segment_offset(i), segments_[static_cast<std::size_t>(i)].width};
}

StreamLayout StreamLayout::without_deltas() const {
  StreamLayout out;
  for (const auto& s : segments_) out.add(s.name, s.width, false);
  return out;
}

StreamLayout StreamLayout::concat(const StreamLayout& other) const {
  StreamLayout out = *this;
  for (const auto& s : other.segments_) out.add(s.name, s.width, s.has_deltas);
  return out;
}

StreamLayout StreamLayout::acoustic_default() {
  StreamLayout l;
  l.add("MGC", 60, true).add("BAP", 5, true).add("LF0", 1, true).add("VUV", 1, false);
  return l;
}

StreamLayout StreamLayout::articulatory(int n_coeffs) {
  StreamLayout l;
  l.add("ULTPCA", n_coeffs, true);
  return l;
}

void StreamLayout::write(std::ostream& os) const {
  binio::write_u32(os, static_cast<std::uint32_t>(segments_.size()));
  for (const auto& s : segments_) {
    binio::write_string(os, s.name);
    binio::write_u32(os, static_cast<std::uint32_t>(s.width));
    binio::write_u8(os, s.has_deltas ? 1 : 0);
  }
}

StreamLayout StreamLayout::read(std::istream& is) {
  StreamLayout l;
  const std::uint32_t n = binio::read_u32(is);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string name = binio::read_string(is);
    const int width = static_cast<int>(binio::read_u32(is));
    const bool deltas = binio::read_u8(is) != 0;
    l.add(std::move(name), width, deltas);
  }
  return l;
}

void FeatureMatrix::validate() const {
  if (frames.cols() != layout.total_width())
    throw InvalidArgument("feature matrix: row width " + std::to_string(frames.cols()) +
                          " does not match layout width " +
                          std::to_string(layout.total_width()));
}

Matrix FeatureMatrix::segment_statics(const std::string& name) const {
  const auto [off, w] = layout.static_block(name);
  return frames.middleCols(off, w);
}

Matrix append_deltas(const Matrix& stream) {
  const Eigen::Index t_count = stream.rows();
  const Eigen::Index d = stream.cols();
  if (t_count < 1 || d < 1) throw InvalidArgument("append_deltas: empty stream");
  Matrix out(t_count, 3 * d);
  out.leftCols(d) = stream;
  auto at = [&](Eigen::Index t) -> Matrix::ConstRowXpr {
    return stream.row(std::clamp<Eigen::Index>(t, 0, t_count - 1));
  };
  for (Eigen::Index t = 0; t < t_count; ++t) {
    out.block(t, d, 1, d) = 0.5 * at(t + 1) - 0.5 * at(t - 1);
    out.block(t, 2 * d, 1, d) = at(t - 1) - 2.0 * at(t) + at(t + 1);
  }
  return out;
}

Matrix resample_stream(const Matrix& stream, double from_rate, double to_rate) {
  if (!(from_rate > 0.0) || !(to_rate > 0.0))
    throw InvalidArgument("resample_stream: rates must be positive");
  const Eigen::Index t_count = stream.rows();
  if (t_count < 2) throw InvalidArgument("resample_stream: need at least 2 frames");

  const Eigen::Index out_count =
      static_cast<Eigen::Index>(std::floor((t_count - 1) * to_rate / from_rate)) + 1;
  Matrix out(out_count, stream.cols());
  for (Eigen::Index k = 0; k < out_count; ++k) {
    double pos = k * from_rate / to_rate;
    pos = std::clamp<double>(pos, 0.0, static_cast<double>(t_count - 1));
    const auto i0 = static_cast<Eigen::Index>(std::floor(pos));
    const Eigen::Index i1 = std::min(i0 + 1, t_count - 1);
    const double f = pos - i0;
    out.row(k) = stream.row(i0) + f * (stream.row(i1) - stream.row(i0));
  }
  return out;
}

NormStats NormStats::fit(const Matrix& stream, NormMode mode,
                         double target_lo, double target_hi) {
  if (stream.rows() < 1) throw InvalidArgument("norm fit: need at least one frame");
  if (!(target_lo < target_hi)) throw InvalidArgument("norm fit: bad target interval");
  NormStats s;
  s.mode_ = mode;
  s.lo_ = target_lo;
  s.hi_ = target_hi;
  const Eigen::Index d = stream.cols();
  s.stat_a_.resize(d);
  s.stat_b_.resize(d);
  s.constant_.assign(static_cast<std::size_t>(d), 0);
  if (mode == NormMode::MinMax) {
    s.stat_a_ = stream.colwise().minCoeff();
    s.stat_b_ = stream.colwise().maxCoeff();
    for (Eigen::Index c = 0; c < d; ++c)
      if (s.stat_b_[c] - s.stat_a_[c] < 1e-12) s.constant_[static_cast<std::size_t>(c)] = 1;
  } else {
    s.stat_a_ = stream.colwise().mean();
    for (Eigen::Index c = 0; c < d; ++c) {
      const double var =
          (stream.col(c).array() - s.stat_a_[c]).square().sum() / stream.rows();
      s.stat_b_[c] = std::sqrt(var);
      if (s.stat_b_[c] < 1e-12) s.constant_[static_cast<std::size_t>(c)] = 1;
    }
  }
  return s;
}

Matrix NormStats::apply(const Matrix& stream) const {
  if (stream.cols() != width())
    throw InvalidArgument("norm apply: width " + std::to_string(stream.cols()) +
                          " does not match stats width " + std::to_string(width()));
  Matrix out(stream.rows(), stream.cols());
  for (Eigen::Index c = 0; c < stream.cols(); ++c) {
    if (constant_[static_cast<std::size_t>(c)]) {
      out.col(c).setConstant(mode_ == NormMode::MinMax ? 0.5 * (lo_ + hi_) : 0.0);
    } else if (mode_ == NormMode::MinMax) {
      const double g = (hi_ - lo_) / (stat_b_[c] - stat_a_[c]);
      out.col(c) = (stream.col(c).array() - stat_a_[c]) * g + lo_;
    } else {
      out.col(c) = (stream.col(c).array() - stat_a_[c]) / stat_b_[c];
    }
  }
  return out;
}

Matrix NormStats::invert(const Matrix& stream) const {
  if (stream.cols() != width())
    throw InvalidArgument("norm invert: width " + std::to_string(stream.cols()) +
                          " does not match stats width " + std::to_string(width()));
  Matrix out(stream.rows(), stream.cols());
  for (Eigen::Index c = 0; c < stream.cols(); ++c) {
    if (constant_[static_cast<std::size_t>(c)]) {
      out.col(c).setConstant(stat_a_[c]);
    } else if (mode_ == NormMode::MinMax) {
      const double g = (stat_b_[c] - stat_a_[c]) / (hi_ - lo_);
      out.col(c) = (stream.col(c).array() - lo_) * g + stat_a_[c];
    } else {
      out.col(c) = stream.col(c).array() * stat_b_[c] + stat_a_[c];
    }
  }
  return out;
}

NormStats NormStats::slice(int offset, int width) const {
  if (offset < 0 || width < 1 || offset + width > this->width())
    throw InvalidArgument("norm slice: range out of bounds");
  NormStats s;
  s.mode_ = mode_;
  s.lo_ = lo_;
  s.hi_ = hi_;
  s.stat_a_ = stat_a_.segment(offset, width);
  s.stat_b_ = stat_b_.segment(offset, width);
  s.constant_.assign(constant_.begin() + offset, constant_.begin() + offset + width);
  return s;
}

void NormStats::write(std::ostream& os) const {
  binio::write_u8(os, static_cast<std::uint8_t>(mode_));
  binio::write_u32(os, static_cast<std::uint32_t>(width()));
  binio::write_f64(os, lo_);
  binio::write_f64(os, hi_);
  binio::write_f64_array(os, stat_a_.data(), static_cast<std::size_t>(stat_a_.size()));
  binio::write_f64_array(os, stat_b_.data(), static_cast<std::size_t>(stat_b_.size()));
  for (const std::uint8_t c : constant_) binio::write_u8(os, c);
}

NormStats NormStats::read(std::istream& is) {
  NormStats s;
  s.mode_ = static_cast<NormMode>(binio::read_u8(is));
  const auto d = static_cast<Eigen::Index>(binio::read_u32(is));
  s.lo_ = binio::read_f64(is);
  s.hi_ = binio::read_f64(is);
  s.stat_a_.resize(d);
  s.stat_b_.resize(d);
  binio::read_f64_array(is, s.stat_a_.data(), static_cast<std::size_t>(d));
  binio::read_f64_array(is, s.stat_b_.data(), static_cast<std::size_t>(d));
  s.constant_.resize(static_cast<std::size_t>(d));
  for (auto& c : s.constant_) c = binio::read_u8(is);
  return s;
}

void NormStats::save(const std::string& path) const {
  auto os = binio::open_out(path);
  binio::write_magic(os, "NSTA");
  binio::write_u16(os, 1);
  write(os);
}

NormStats NormStats::load(const std::string& path) {
  auto is = binio::open_in(path);
  binio::expect_magic(is, "NSTA");
  if (binio::read_u16(is) != 1) throw DataError("norm stats file: unsupported version");
  return read(is);
}

FeatureMatrix compose_target(const FeatureMatrix& acoustic, const FeatureMatrix& articulatory) {
  acoustic.validate();
  articulatory.validate();
  if (acoustic.frames.rows() != articulatory.frames.rows())
    throw InvalidArgument("compose_target: frame counts differ, " +
                          std::to_string(acoustic.frames.rows()) + " vs " +
                          std::to_string(articulatory.frames.rows()));
  if (std::abs(acoustic.frame_shift - articulatory.frame_shift) > 1e-12)
    throw InvalidArgument("compose_target: frame shifts differ");
  FeatureMatrix out;
  out.layout = acoustic.layout.concat(articulatory.layout);
  out.frame_shift = acoustic.frame_shift;
  out.frames.resize(acoustic.frames.rows(), acoustic.frames.cols() + articulatory.frames.cols());
  out.frames << acoustic.frames, articulatory.frames;
  return out;
}

std::pair<FeatureMatrix, FeatureMatrix> split_target(const FeatureMatrix& composed,
                                                     const StreamLayout& first_layout) {
  composed.validate();
  const int n_first = first_layout.segment_count();
  if (n_first > composed.layout.segment_count())
    throw InvalidArgument("split_target: prefix layout longer than composed layout");
  for (int i = 0; i < n_first; ++i)
    if (!(composed.layout.segment(i) == first_layout.segment(i)))
      throw InvalidArgument("split_target: layout is not a prefix of the composed layout");

  const int w_first = first_layout.total_width();
  FeatureMatrix a, b;
  a.layout = first_layout;
  a.frame_shift = composed.frame_shift;
  a.frames = composed.frames.leftCols(w_first);
  for (int i = n_first; i < composed.layout.segment_count(); ++i) {
    const auto& s = composed.layout.segment(i);
    b.layout.add(s.name, s.width, s.has_deltas);
  }
  b.frame_shift = composed.frame_shift;
  b.frames = composed.frames.rightCols(composed.frames.cols() - w_first);
  return {std::move(a), std::move(b)};
}

std::pair<Vector, Vector> interpolate_lf0(const Vector& lf0, double unvoiced_below) {
  const Eigen::Index t_count = lf0.size();
  Vector cont = Vector::Zero(t_count);
  Vector vuv = Vector::Zero(t_count);
  std::vector<Eigen::Index> voiced;
  for (Eigen::Index t = 0; t < t_count; ++t) {
    if (lf0[t] > unvoiced_below) {
      vuv[t] = 1.0;
      voiced.push_back(t);
    }
  }
  if (voiced.empty()) return {cont, vuv};

  // Edge gaps hold the nearest voiced value; interior gaps interpolate.
  for (Eigen::Index t = 0; t <= voiced.front(); ++t) cont[t] = lf0[voiced.front()];
  for (Eigen::Index t = voiced.back(); t < t_count; ++t) cont[t] = lf0[voiced.back()];
  for (std::size_t i = 0; i + 1 < voiced.size(); ++i) {
    const Eigen::Index a = voiced[i];
    const Eigen::Index b = voiced[i + 1];
    cont[a] = lf0[a];
    for (Eigen::Index t = a + 1; t < b; ++t) {
      const double f = static_cast<double>(t - a) / static_cast<double>(b - a);
      cont[t] = lf0[a] + f * (lf0[b] - lf0[a]);
    }
  }
  cont[voiced.back()] = lf0[voiced.back()];
  return {cont, vuv};
}

void save_features(const std::string& path, const FeatureMatrix& fm) {
  fm.validate();
  auto os = binio::open_out(path);
  binio::write_magic(os, "FMTX");
  binio::write_u16(os, 1);
  binio::write_f64(os, fm.frame_shift);
  fm.layout.write(os);
  binio::write_u32(os, static_cast<std::uint32_t>(fm.frames.rows()));
  for (Eigen::Index t = 0; t < fm.frames.rows(); ++t)
    for (Eigen::Index c = 0; c < fm.frames.cols(); ++c)
      binio::write_f32(os, static_cast<float>(fm.frames(t, c)));
}

FeatureMatrix load_features(const std::string& path) {
  auto is = binio::open_in(path);
  binio::expect_magic(is, "FMTX");
  if (binio::read_u16(is) != 1) throw DataError("feature file: unsupported version");
  FeatureMatrix fm;
  fm.frame_shift = binio::read_f64(is);
  fm.layout = StreamLayout::read(is);
  const auto t_count = static_cast<Eigen::Index>(binio::read_u32(is));
  fm.frames.resize(t_count, fm.layout.total_width());
  for (Eigen::Index t = 0; t < t_count; ++t)
    for (Eigen::Index c = 0; c < fm.frames.cols(); ++c)
      fm.frames(t, c) = static_cast<double>(binio::read_f32(is));
  return fm;
}

}  // namespace artsyn
