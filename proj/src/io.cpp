#include "fgl/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fgl::io {

namespace {

// Explicit little-endian packing so files mean the same thing everywhere.

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v)
    {
        u8(static_cast<std::uint8_t>(v));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v)
    {
        u16(static_cast<std::uint16_t>(v));
        u16(static_cast<std::uint16_t>(v >> 16));
    }
    void u64(std::uint64_t v)
    {
        u32(static_cast<std::uint32_t>(v));
        u32(static_cast<std::uint32_t>(v >> 32));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const char* p, std::size_t n) { buf_.append(p, n); }

    void save(const std::string& path) const
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw DataFormatError("io: cannot open '" + path + "' for writing");
        f.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!f) throw DataFormatError("io: short write to '" + path + "'");
    }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string data, std::string path)
        : buf_(std::move(data)), path_(std::move(path))
    {
    }

    static ByteReader from_file(const std::string& path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw DataFormatError("io: cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return ByteReader(std::move(ss).str(), path);
    }

    std::uint8_t u8()
    {
        need(1);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint16_t u16()
    {
        const std::uint16_t lo = u8();
        return static_cast<std::uint16_t>(lo | (static_cast<std::uint16_t>(u8()) << 8));
    }
    std::uint32_t u32()
    {
        const std::uint32_t lo = u16();
        return lo | (static_cast<std::uint32_t>(u16()) << 16);
    }
    std::uint64_t u64()
    {
        const std::uint64_t lo = u32();
        return lo | (static_cast<std::uint64_t>(u32()) << 32);
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string bytes(std::size_t n)
    {
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool exhausted() const { return pos_ == buf_.size(); }
    void expect_exhausted() const
    {
        if (!exhausted()) throw DataFormatError("io: trailing bytes in '" + path_ + "'");
    }

private:
    void need(std::size_t n) const
    {
        if (pos_ + n > buf_.size())
            throw DataFormatError("io: unexpected end of file in '" + path_ + "'");
    }

    std::string buf_;
    std::string path_;
    std::size_t pos_ = 0;
};

constexpr std::uint16_t kDatasetVersion = 1;
constexpr std::uint16_t kCheckpointVersion = 1;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void write_dataset(const std::string& path, const std::vector<dsp::ProcessedSample>& samples,
                   Mode mode)
{
    if (samples.empty()) throw std::invalid_argument("io: refusing to write an empty dataset");
    const std::vector<int>& shape = samples.front().image.shape;
    if (shape.size() != 3) throw std::invalid_argument("io: samples must be H x W x C");
    for (const auto& s : samples)
        if (s.image.shape != shape)
            throw std::invalid_argument("io: mixed sample shapes in one dataset");

    ByteWriter w;
    w.bytes("FGL1", 4);
    w.u16(kDatasetVersion);
    w.u8(static_cast<std::uint8_t>(mode));
    w.u32(static_cast<std::uint32_t>(samples.size()));
    w.u16(static_cast<std::uint16_t>(shape[0]));
    w.u16(static_cast<std::uint16_t>(shape[1]));
    w.u16(static_cast<std::uint16_t>(shape[2]));
    for (const auto& s : samples) {
        w.u8(static_cast<std::uint8_t>(s.label));
        w.u8(static_cast<std::uint8_t>(s.variant));
        for (double v : s.image.data) w.f32(static_cast<float>(v));
    }
    w.save(path);
}

std::vector<dsp::ProcessedSample> read_dataset(const std::string& path, Mode* mode_out)
{
    ByteReader r = ByteReader::from_file(path);
    if (r.bytes(4) != "FGL1") throw DataFormatError("io: '" + path + "' is not a dataset file");
    if (r.u16() != kDatasetVersion) throw DataFormatError("io: unsupported dataset version in '" + path + "'");
    const std::uint8_t mode_byte = r.u8();
    if (mode_byte > 1) throw DataFormatError("io: bad mode byte in '" + path + "'");
    const Mode mode = static_cast<Mode>(mode_byte);
    const std::uint32_t count = r.u32();
    const int h = r.u16();
    const int wdt = r.u16();
    const int c = r.u16();
    if (count == 0 || h == 0 || wdt == 0 || c == 0)
        throw DataFormatError("io: degenerate dataset header in '" + path + "'");

    std::vector<dsp::ProcessedSample> out;
    out.reserve(count);
    const std::size_t per = static_cast<std::size_t>(h) * wdt * c;
    for (std::uint32_t i = 0; i < count; ++i) {
        dsp::ProcessedSample s;
        const std::uint8_t label = r.u8();
        const std::uint8_t variant = r.u8();
        if (label >= kNumClasses) throw DataFormatError("io: bad label in '" + path + "'");
        if (variant > 1) throw DataFormatError("io: bad variant in '" + path + "'");
        s.label = static_cast<GestureClass>(label);
        s.variant = static_cast<Variant>(variant);
        s.mode = mode;
        s.image = Tensor({h, wdt, c});
        for (std::size_t j = 0; j < per; ++j) s.image[j] = static_cast<double>(r.f32());
        out.push_back(std::move(s));
    }
    r.expect_exhausted();
    if (mode_out) *mode_out = mode;
    return out;
}

namespace {

void put_tensor(ByteWriter& w, const std::string& name, const Tensor& t)
{
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.u16(static_cast<std::uint16_t>(t.shape.size()));
    for (int d : t.shape) w.u32(static_cast<std::uint32_t>(d));
    for (double v : t.data) w.f64(v);
}

std::pair<std::string, Tensor> get_tensor(ByteReader& r)
{
    const std::uint16_t len = r.u16();
    std::string name = r.bytes(len);
    const std::uint16_t ndim = r.u16();
    std::vector<int> shape(ndim);
    for (auto& d : shape) d = static_cast<int>(r.u32());
    Tensor t(shape);
    for (auto& v : t.data) v = r.f64();
    return {std::move(name), std::move(t)};
}

} // namespace

void write_checkpoint(const std::string& path, const nn::Cnn& model)
{
    const nn::NetworkSpec& s = model.spec;
    ByteWriter w;
    w.bytes("FGLM", 4);
    w.u16(kCheckpointVersion);
    w.u8(static_cast<std::uint8_t>(s.input_w == 16 ? Mode::RangeAngle : Mode::Range));
    w.u16(static_cast<std::uint16_t>(s.input_h));
    w.u16(static_cast<std::uint16_t>(s.input_w));
    w.u16(static_cast<std::uint16_t>(s.input_c));
    w.u16(static_cast<std::uint16_t>(s.conv_blocks));
    w.u16(static_cast<std::uint16_t>(s.kernel_h));
    w.u16(static_cast<std::uint16_t>(s.kernel_w));
    w.u16(static_cast<std::uint16_t>(s.filters));
    w.u16(static_cast<std::uint16_t>(s.num_classes));

    w.u32(static_cast<std::uint32_t>(2 * model.conv_kernels.size() + 2));
    for (std::size_t b = 0; b < model.conv_kernels.size(); ++b) {
        const std::string tag = "conv" + std::to_string(b);
        put_tensor(w, tag + ".kernels", model.conv_kernels[b]);
        put_tensor(w, tag + ".bias", model.conv_biases[b]);
    }
    put_tensor(w, "fc.weights", model.fc_weights);
    put_tensor(w, "fc.bias", model.fc_bias);
    w.save(path);
}

nn::Cnn read_checkpoint(const std::string& path)
{
    ByteReader r = ByteReader::from_file(path);
    if (r.bytes(4) != "FGLM") throw DataFormatError("io: '" + path + "' is not a checkpoint file");
    if (r.u16() != kCheckpointVersion)
        throw DataFormatError("io: unsupported checkpoint version in '" + path + "'");
    r.u8(); // mode byte, informational

    nn::NetworkSpec s;
    s.input_h = r.u16();
    s.input_w = r.u16();
    s.input_c = r.u16();
    s.conv_blocks = r.u16();
    s.kernel_h = r.u16();
    s.kernel_w = r.u16();
    s.filters = r.u16();
    s.num_classes = r.u16();
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw DataFormatError("io: invalid architecture in '" + path + "': " + e.what());
    }

    nn::Cnn m;
    m.spec = s;
    const std::uint32_t count = r.u32();
    if (count != static_cast<std::uint32_t>(2 * s.conv_blocks + 2))
        throw DataFormatError("io: unexpected tensor count in '" + path + "'");

    for (int b = 0; b < s.conv_blocks; ++b) {
        const std::string tag = "conv" + std::to_string(b);
        auto [kname, kt] = get_tensor(r);
        auto [bname, bt] = get_tensor(r);
        const int cin = b == 0 ? s.input_c : s.filters;
        if (kname != tag + ".kernels" || bname != tag + ".bias" ||
            kt.shape != std::vector<int>{s.kernel_h, s.kernel_w, cin, s.filters} ||
            bt.shape != std::vector<int>{s.filters})
            throw DataFormatError("io: malformed conv tensors in '" + path + "'");
        m.conv_kernels.push_back(std::move(kt));
        m.conv_biases.push_back(std::move(bt));
    }
    auto [wname, wt] = get_tensor(r);
    auto [bname, bt] = get_tensor(r);
    if (wname != "fc.weights" || bname != "fc.bias" ||
        wt.shape != std::vector<int>{static_cast<int>(s.flat_features()), s.num_classes} ||
        bt.shape != std::vector<int>{s.num_classes})
        throw DataFormatError("io: malformed head tensors in '" + path + "'");
    m.fc_weights = std::move(wt);
    m.fc_bias = std::move(bt);
    r.expect_exhausted();
    return m;
}

Config Config::parse_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw DataFormatError("io: cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_text(std::move(ss).str());
}

Config Config::parse_text(const std::string& text)
{
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataFormatError("io: config line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw DataFormatError("io: config line " + std::to_string(lineno) + " has an empty key");
        cfg.values_[key] = val;
    }
    return cfg;
}

std::string Config::str(const std::string& key, const std::string& fallback) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(it->second, &used, 0);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw DataFormatError("io: config key '" + key + "' is not an integer: " + it->second);
    }
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(it->second, &used, 0);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw DataFormatError("io: config key '" + key + "' is not an unsigned integer: " + it->second);
    }
}

double Config::real(const std::string& key, double fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw DataFormatError("io: config key '" + key + "' is not a number: " + it->second);
    }
}

bool Config::boolean(const std::string& key, bool fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw DataFormatError("io: config key '" + key + "' is not a boolean: " + v);
}

std::uint64_t fnv1a64(const void* data, std::size_t n)
{
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataFormatError("io: cannot open '" + path + "' for checksumming");
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof buf);
        const std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::uint64_t>>& entries)
{
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw DataFormatError("io: cannot open '" + path + "' for writing");
    for (const auto& [name, sum] : entries) {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(sum));
        f << hex << ' ' << name << '\n';
    }
    if (!f) throw DataFormatError("io: short write to '" + path + "'");
}

std::map<std::string, std::uint64_t> read_manifest(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw DataFormatError("io: cannot open manifest '" + path + "'");
    std::map<std::string, std::uint64_t> out;
    std::string line;
    while (std::getline(f, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto sp = t.find(' ');
        if (sp == std::string::npos || sp != 16)
            throw DataFormatError("io: malformed manifest line in '" + path + "'");
        out[t.substr(sp + 1)] = std::stoull(t.substr(0, sp), nullptr, 16);
    }
    return out;
}

void write_pgm16(const sar::SarImage& image, const std::string& path)
{
    if (image.nx <= 0 || image.ny <= 0 || image.pixels.size() !=
        static_cast<std::size_t>(image.nx) * static_cast<std::size_t>(image.ny))
        throw std::invalid_argument("io: inconsistent image");

    ByteWriter w;
    const std::string hdr =
        "P5\n" + std::to_string(image.nx) + " " + std::to_string(image.ny) + "\n65535\n";
    w.bytes(hdr.data(), hdr.size());
    for (double v : image.pixels) {
        double x = v;
        if (x < 0.0) x = 0.0;
        if (x > 1.0) x = 1.0;
        const auto q = static_cast<std::uint16_t>(x * 65535.0 + 0.5);
        // PGM wants the most significant byte first.
        w.u8(static_cast<std::uint8_t>(q >> 8));
        w.u8(static_cast<std::uint8_t>(q & 0xFF));
    }
    w.save(path);

    std::ofstream side(path + ".txt", std::ios::trunc);
    if (!side) throw DataFormatError("io: cannot open '" + path + ".txt' for writing");
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "x_min = %.9g\nx_max = %.9g\ny_min = %.9g\ny_max = %.9g\n"
                  "z_slice = %.9g\npeak_value = %.9g\n",
                  image.x_min, image.x_max, image.y_min, image.y_max, image.z_slice,
                  image.peak_value);
    side << buf;
}

} // namespace fgl::io
