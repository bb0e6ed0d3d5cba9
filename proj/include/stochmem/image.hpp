#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stochmem/error.hpp"
#include "stochmem/random.hpp"

namespace stochmem {

/// Row-major grayscale image normalized to [0, 1].
class ImageGray {
public:
    ImageGray() = default;
    ImageGray(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), data_(width * height, fill) {
        if (width == 0 || height == 0) throw DomainError("image dimensions must be positive");
        if (!(fill >= 0.0 && fill <= 1.0)) throw DomainError("pixel values must lie in [0, 1]");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    const std::vector<double>& data() const noexcept { return data_; }

    double operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

    void set(std::size_t x, std::size_t y, double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("pixel values must lie in [0, 1]");
        data_[y * width_ + x] = v;
    }

    /// Clamp-to-edge access for neighborhood operators.
    double clamped(std::ptrdiff_t x, std::ptrdiff_t y) const {
        const auto cx = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(width_) - 1);
        const auto cy = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(height_) - 1);
        return data_[static_cast<std::size_t>(cy) * width_ + static_cast<std::size_t>(cx)];
    }

    friend bool operator==(const ImageGray&, const ImageGray&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

inline bool same_dims(const ImageGray& a, const ImageGray& b) {
    return a.width() == b.width() && a.height() == b.height();
}

/// Average absolute per-pixel difference in percent of full scale.
inline double error_metric(const ImageGray& out, const ImageGray& expected) {
    if (!same_dims(out, expected)) throw DomainError("error metric needs images of equal size");
    double sum = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) sum += std::abs(out.data()[i] - expected.data()[i]);
    return 100.0 * sum / static_cast<double>(out.size());
}

// ---------------------------------------------------------------------------
// PGM (netpbm graymap), P5 binary and P2 ASCII, maxval 255 only.

class PgmError : public ParseError {
public:
    enum class Kind { Io, MalformedHeader, UnsupportedMaxval, TruncatedPayload, BadPixel };

    PgmError(Kind kind, const std::string& what) : ParseError(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

namespace detail {

// Next whitespace-delimited header token, skipping '#' comments.
inline bool pgm_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    for (;;) {
        while (c != EOF && std::isspace(c)) c = in.get();
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        break;
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    // The single whitespace byte after maxval has been consumed here, as P5 requires.
    return !tok.empty();
}

inline std::size_t pgm_number(std::istream& in, const char* field) {
    std::string tok;
    if (!pgm_token(in, tok)) throw PgmError(PgmError::Kind::MalformedHeader, std::string("missing ") + field);
    if (!std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        throw PgmError(PgmError::Kind::MalformedHeader, std::string("non-numeric ") + field);
    return std::stoul(tok);
}

} // namespace detail

inline ImageGray read_pgm(std::istream& in) {
    using Kind = PgmError::Kind;
    std::string magic;
    if (!detail::pgm_token(in, magic) || (magic != "P5" && magic != "P2"))
        throw PgmError(Kind::MalformedHeader, "not a PGM file (expected P5 or P2)");
    const std::size_t w = detail::pgm_number(in, "width");
    const std::size_t h = detail::pgm_number(in, "height");
    const std::size_t maxval = detail::pgm_number(in, "maxval");
    if (w == 0 || h == 0) throw PgmError(Kind::MalformedHeader, "zero image dimension");
    if (maxval != 255) throw PgmError(Kind::UnsupportedMaxval, "only maxval 255 is supported");

    ImageGray img(w, h);
    if (magic == "P5") {
        std::vector<char> buf(w * h);
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(in.gcount()) != buf.size())
            throw PgmError(Kind::TruncatedPayload, "PGM payload shorter than width*height");
        for (std::size_t i = 0; i < buf.size(); ++i)
            img.set(i % w, i / w, static_cast<unsigned char>(buf[i]) / 255.0);
    } else {
        std::string tok;
        for (std::size_t i = 0; i < w * h; ++i) {
            if (!detail::pgm_token(in, tok))
                throw PgmError(Kind::TruncatedPayload, "PGM payload shorter than width*height");
            if (!std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
                std::stoul(tok) > 255)
                throw PgmError(Kind::BadPixel, "bad ASCII pixel value '" + tok + "'");
            img.set(i % w, i / w, std::stoul(tok) / 255.0);
        }
    }
    return img;
}

inline ImageGray load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmError::Kind::Io, "cannot open " + path);
    return read_pgm(in);
}

inline std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5)); }

inline void write_pgm(std::ostream& out, const ImageGray& img) {
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    std::string bytes(img.size(), '\0');
    for (std::size_t i = 0; i < img.size(); ++i) bytes[i] = static_cast<char>(to_byte(img.data()[i]));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline void save_pgm(const ImageGray& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PgmError(PgmError::Kind::Io, "cannot write " + path);
    write_pgm(out, img);
    if (!out) throw PgmError(PgmError::Kind::Io, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Deterministic synthetic inputs.

namespace synth {

inline constexpr std::uint64_t kSynthSeed = 0x5EEDC0DEULL;

inline ImageGray gradient(std::size_t w, std::size_t h) {
    ImageGray img(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            img.set(x, y, static_cast<double>(x + y) / static_cast<double>(w + h - 2 == 0 ? 1 : w + h - 2));
    return img;
}

inline ImageGray checkerboard(std::size_t w, std::size_t h, std::size_t square = 16, double lo = 0.0,
                              double hi = 1.0) {
    ImageGray img(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) img.set(x, y, ((x / square + y / square) % 2) ? hi : lo);
    return img;
}

/// Gradient background with a bright disk and a dark bar, plus a mild
/// per-pixel texture (uniform in +-texture).
inline ImageGray scene(std::size_t w, std::size_t h, double texture = 0.03, std::uint32_t variant = 0) {
    ImageGray img(w, h);
    const double cx = 0.62 * w, cy = 0.4 * h, r = 0.22 * std::min(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double v = 0.15 + 0.55 * (static_cast<double>(x) / w) * (0.5 + 0.5 * static_cast<double>(y) / h);
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) v = 0.8 - 0.15 * std::sqrt(dx * dx + dy * dy) / r;
            if (x > w / 8 && x < w / 3 && y > h / 2 && y < (7 * h) / 8) v = 0.08;
            auto rng = derive_generator({kSynthSeed, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                                         1000 + variant});
            v += texture * (2.0 * rng.next_unit() - 1.0);
            img.set(x, y, std::clamp(v, 0.0, 1.0));
        }
    return img;
}

/// Replaces a `fraction` of pixels with 0 or 1 (salt-and-pepper noise).
inline ImageGray salt_pepper(const ImageGray& src, double fraction = 0.05) {
    ImageGray img = src;
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x) {
            auto rng = derive_generator(
                {kSynthSeed, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), 2000});
            if (rng.next_unit() < fraction) img.set(x, y, rng.next_unit() < 0.5 ? 0.0 : 1.0);
        }
    return img;
}

struct VideoSpec {
    std::size_t frames = 33;
    std::size_t square = 24;       // side of the moving square in pixels
    std::size_t step = 3;          // pixels moved per frame along x
    double square_value = 0.9;
    double temporal_noise = 0.04;  // per-frame Gaussian sensor noise sigma
    bool moving = true;
};

inline std::size_t square_x0(const VideoSpec& spec, std::size_t w, std::size_t frame) {
    const std::size_t travel = w > spec.square ? w - spec.square : 1;
    return spec.moving ? (4 + frame * spec.step) % travel : w / 3;
}

/// Frame sequence of a static textured scene with a square sliding left to right.
inline std::vector<ImageGray> video(std::size_t w, std::size_t h, const VideoSpec& spec = {}) {
    const ImageGray bg = scene(w, h, 0.03, 7);
    std::vector<ImageGray> frames;
    frames.reserve(spec.frames);
    const std::size_t y0 = h / 2 - std::min(h / 2, spec.square / 2);
    for (std::size_t f = 0; f < spec.frames; ++f) {
        ImageGray img = bg;
        const std::size_t x0 = square_x0(spec, w, f);
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                double v = bg(x, y);
                if (x >= x0 && x < x0 + spec.square && y >= y0 && y < y0 + spec.square) v = spec.square_value;
                if (spec.temporal_noise > 0.0) {
                    auto rng = derive_generator({kSynthSeed, static_cast<std::uint32_t>(x),
                                                 static_cast<std::uint32_t>(y), 3000 + static_cast<std::uint32_t>(f)});
                    v += spec.temporal_noise * rng.next_gaussian();
                }
                img.set(x, y, std::clamp(v, 0.0, 1.0));
            }
        frames.push_back(std::move(img));
    }
    return frames;
}

} // namespace synth

} // namespace stochmem
