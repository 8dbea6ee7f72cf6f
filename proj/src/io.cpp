#include "igdepth/io.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace igdepth {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = msg;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 gray or 3 rgb after transforms
  int depth = 8;     // 8 or 16 bits per channel
  std::vector<std::uint8_t> bytes;  // rows packed, 16-bit big-endian

  std::uint16_t sample16(std::size_t i) const {
    return static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
  }
};

// Decodes to gray or RGB without alpha; 16-bit data is kept at 16 bits
// unless `to8` is set.
RawImage decode(const std::string& path, bool want_rgb, bool to8) {
  File file(std::fopen(path.c_str(), "rb"));
  if (!file) throw_data("cannot open " + path);
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw_data(path + ": not a PNG file");
  }
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message,
                                           png_fail, png_warn);
  if (!png) throw_internal("libpng: cannot allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw_internal("libpng: cannot allocate info struct");
  }
  RawImage raw;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw_data(path + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int bits = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && bits < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (to8 && bits == 16) png_set_strip_16(png);
  const bool is_gray =
      color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA;
  if (want_rgb && is_gray) png_set_gray_to_rgb(png);
  if (!want_rgb && !is_gray) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  raw.width = static_cast<int>(png_get_image_width(png, info));
  raw.height = static_cast<int>(png_get_image_height(png, info));
  raw.channels = png_get_channels(png, info);
  raw.depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  raw.bytes.resize(stride * raw.height);
  rows.resize(raw.height);
  for (int y = 0; y < raw.height; ++y) rows[y] = raw.bytes.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return raw;
}

void encode(const std::string& path, int width, int height, int color_type,
            int bits, const std::vector<std::uint8_t>& bytes) {
  File file(std::fopen(path.c_str(), "wb"));
  if (!file) throw_data("cannot write " + path);
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                            png_fail, png_warn);
  if (!png) throw_internal("libpng: cannot allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw_internal("libpng: cannot allocate info struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw_data(path + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bits, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t stride =
      static_cast<std::size_t>(width) * channels * (bits / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(bytes.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw_data("cannot write " + path);
}

std::vector<std::uint8_t> pack16(std::span<const std::uint16_t> values) {
  std::vector<std::uint8_t> out(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[2 * i] = static_cast<std::uint8_t>(values[i] >> 8);
    out[2 * i + 1] = static_cast<std::uint8_t>(values[i] & 0xff);
  }
  return out;
}

std::string scale_path(const std::string& path) { return path + ".scale"; }

}  // namespace

RgbImage read_rgb_png(const std::string& path) {
  RawImage raw = decode(path, true, true);
  return {raw.width, raw.height, std::move(raw.bytes)};
}

void write_rgb_png(const std::string& path, const RgbImage& image) {
  const auto data = image.data();
  encode(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8,
         std::vector<std::uint8_t>(data.begin(), data.end()));
}

double depth_png_scale(const std::string& path) {
  std::ifstream in(scale_path(path));
  if (!in) return kMillimeter;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.substr(0, eq) != "meters_per_unit") {
      continue;
    }
    double scale = 0.0;
    try {
      scale = std::stod(line.substr(eq + 1));
    } catch (const std::exception&) {
      throw_data(scale_path(path) + ": malformed meters_per_unit");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw_data(scale_path(path) + ": meters_per_unit must be > 0");
    }
    return scale;
  }
  throw_data(scale_path(path) + ": missing meters_per_unit");
}

DepthMap read_depth_png(const std::string& path) {
  const double scale = depth_png_scale(path);
  const RawImage raw = decode(path, false, false);
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  std::vector<double> depth(n, 0.0);
  std::vector<std::uint8_t> valid(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = raw.depth == 16 ? raw.sample16(i) : raw.bytes[i];
    if (v == 0) continue;
    depth[i] = v * scale;
    valid[i] = 1;
  }
  return {raw.width, raw.height, std::move(depth), std::move(valid)};
}

void write_depth_png(const std::string& path, const DepthMap& depth,
                     std::optional<double> meters_per_unit) {
  double max_depth = 0.0;
  for (std::size_t i = 0; i < depth.pixel_count(); ++i) {
    if (depth.valid(i)) max_depth = std::max(max_depth, depth.at(i));
  }
  double scale = kMillimeter;
  if (meters_per_unit) {
    scale = *meters_per_unit;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw_usage("write_depth_png: meters_per_unit must be > 0");
    }
    if (std::lround(max_depth / scale) > 65535) {
      throw_data("write_depth_png: depth exceeds the 16-bit range at the "
                 "requested scale");
    }
  } else {
    while (std::lround(max_depth / scale) > 65535) scale += kMillimeter;
  }
  std::vector<std::uint16_t> values(depth.pixel_count(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!depth.valid(i)) continue;
    values[i] = static_cast<std::uint16_t>(
        std::max(1L, std::lround(depth.at(i) / scale)));
  }
  encode(path, depth.width(), depth.height(), PNG_COLOR_TYPE_GRAY, 16,
         pack16(values));
  std::ostringstream os;
  os.precision(17);
  os << "meters_per_unit=" << scale << "\n";
  write_text_file(scale_path(path), os.str());
}

SegmentMap read_labels_png(const std::string& path) {
  const RawImage raw = decode(path, false, false);
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  std::vector<std::int32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = raw.depth == 16 ? raw.sample16(i) : raw.bytes[i];
  }
  try {
    return {raw.width, raw.height, std::move(labels)};
  } catch (const Error& e) {
    throw_data(path + ": " + e.what());
  }
}

void write_labels_png(const std::string& path, const SegmentMap& labels) {
  if (labels.num_segments() > 65536) {
    throw_data("write_labels_png: more than 65536 segments");
  }
  std::vector<std::uint16_t> values(labels.labels().begin(),
                                    labels.labels().end());
  encode(path, labels.width(), labels.height(), PNG_COLOR_TYPE_GRAY, 16,
         pack16(values));
}

EvalMask read_mask_png(const std::string& path) {
  const RawImage raw = decode(path, false, false);
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  std::vector<std::uint8_t> include(n);
  for (std::size_t i = 0; i < n; ++i) {
    include[i] = (raw.depth == 16 ? raw.sample16(i) : raw.bytes[i]) != 0;
  }
  return {raw.width, raw.height, std::move(include)};
}

void write_mask_png(const std::string& path, std::span<const std::uint8_t> mask,
                    int width, int height) {
  if (mask.size() != static_cast<std::size_t>(width) * height) {
    throw_data("write_mask_png: buffer does not match width*height");
  }
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? 255 : 0;
  encode(path, width, height, PNG_COLOR_TYPE_GRAY, 8, bytes);
}

namespace {

void write_csv_header(std::ostream& os, int width, int height,
                      const std::string& sampler, std::size_t budget) {
  os << "# igdepth samples width=" << width << " height=" << height
     << " sampler=" << sampler << " budget=" << budget << "\n";
  os << "x,y,depth_m\n";
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

void write_samples_csv(const std::string& path, const SampleSet& samples) {
  std::ostringstream os;
  write_csv_header(os, samples.width(), samples.height(), samples.sampler_id(),
                   samples.budget());
  os.precision(17);
  for (const auto& s : samples.entries()) {
    os << s.x << "," << s.y << "," << s.depth << "\n";
  }
  write_text_file(path, os.str());
}

void write_pattern_csv(const std::string& path, const SamplePattern& pattern) {
  std::ostringstream os;
  write_csv_header(os, pattern.width, pattern.height, pattern.sampler_id,
                   pattern.budget);
  for (const auto& p : pattern.coords) os << p.x << "," << p.y << ",\n";
  write_text_file(path, os.str());
}

SampleCsv read_samples_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  SampleCsv out;
  std::string line;
  bool header = false;
  int line_no = 0;
  std::size_t empty_depth = 0;
  const auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line_no << ": " << what;
    throw_data(os.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::istringstream fields{std::string(text.substr(1))};
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "width") out.width = parse_number<int>(value);
        if (key == "height") out.height = parse_number<int>(value);
        if (key == "sampler") out.sampler_id = value;
        if (key == "budget") out.budget = parse_number<std::size_t>(value);
      }
      continue;
    }
    if (!header) {
      if (text != "x,y,depth_m") fail("expected header x,y,depth_m");
      header = true;
      continue;
    }
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos
                        ? std::string_view::npos
                        : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos) fail("expected three fields");
    const auto x = parse_number<int>(trim(text.substr(0, c1)));
    const auto y = parse_number<int>(trim(text.substr(c1 + 1, c2 - c1 - 1)));
    if (!x || !y) fail("malformed coordinate");
    const std::string_view dtext = trim(text.substr(c2 + 1));
    double depth = 0.0;
    if (dtext.empty()) {
      ++empty_depth;
    } else {
      const auto d = parse_number<double>(dtext);
      if (!d || !std::isfinite(*d)) fail("malformed depth");
      depth = *d;
    }
    out.entries.push_back({*x, *y, depth});
  }
  if (!header) throw_data(path + ": missing header x,y,depth_m");
  if (empty_depth != 0 && empty_depth != out.entries.size()) {
    throw_data(path + ": some rows have depth and some do not");
  }
  out.has_depth = out.entries.empty() || empty_depth == 0;
  return out;
}

SampleSet to_sample_set(const SampleCsv& csv, int width, int height) {
  if (!csv.has_depth) {
    throw_data("sample file holds an unexecuted pattern (no depth column)");
  }
  const std::string id = csv.sampler_id.empty() ? "file" : csv.sampler_id;
  return {width, height, csv.entries, id,
          std::max(csv.budget.value_or(0), csv.entries.size())};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot write " + path);
  out << text;
  if (!out.flush()) throw_data("cannot write " + path);
}

}  // namespace igdepth
