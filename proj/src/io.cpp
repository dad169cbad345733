#include "mpgi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mpgi {

namespace {

// Skips whitespace and '#' comments between PNM header tokens.
int next_header_int(std::istream& in, const char* what) {
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw IoError(std::string("truncated PGM header reading ") + what);
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    long long v = 0;
    if (!(in >> v)) throw IoError(std::string("bad PGM header field: ") + what);
    return static_cast<int>(v);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Scene load_scene_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scene file " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5")
        throw IoError("unsupported PNM magic '" + magic + "' in " + path.string());
    const int width = next_header_int(in, "width");
    const int height = next_header_int(in, "height");
    const int maxval = next_header_int(in, "maxval");
    if (width < 1 || height < 1) throw IoError("bad PGM dimensions in " + path.string());
    if (maxval < 1 || maxval > 255)
        throw IoError("PGM maxval " + std::to_string(maxval) + " unsupported (8-bit only)");

    const size_t n = static_cast<size_t>(width) * height;
    std::vector<double> pixels(n);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n)
            throw IoError("truncated P5 payload in " + path.string());
        for (size_t i = 0; i < n; ++i) pixels[i] = raw[i] / static_cast<double>(maxval);
    } else {
        for (size_t i = 0; i < n; ++i) {
            long long v;
            if (!(in >> v)) throw IoError("truncated P2 payload in " + path.string());
            if (v < 0 || v > maxval) throw IoError("P2 sample out of range in " + path.string());
            pixels[i] = v / static_cast<double>(maxval);
        }
    }

    // Non-square inputs are embedded in a square before power-of-two padding.
    const int raw_side = std::max(width, height);
    Scene s;
    s.side = raw_side;
    s.reflectance.assign(static_cast<size_t>(raw_side) * raw_side, 0.0);
    s.provenance = path.string();
    const int ox = (raw_side - height) / 2, oy = (raw_side - width) / 2;
    for (int x = 0; x < height; ++x)
        for (int y = 0; y < width; ++y)
            s.at(x + ox, y + oy) = pixels[static_cast<size_t>(x) * width + y];
    return pad_to_power_of_two(s);
}

void write_pgm_p5(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << img.side << ' ' << img.side << "\n255\n";
    std::vector<unsigned char> raw(img.v.size());
    for (size_t i = 0; i < img.v.size(); ++i) {
        const double c = std::clamp(img.v[i], 0.0, 1.0);
        raw[i] = static_cast<unsigned char>(std::lround(c * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("short write to " + path.string());
}

void write_image_csv(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (int x = 0; x < img.side; ++x) {
        for (int y = 0; y < img.side; ++y) {
            if (y) out << ',';
            out << format_double(img.at(x, y));
        }
        out << '\n';
    }
}

void write_record_csv(const std::filesystem::path& path, const BucketRecord& record) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "# mpgi-record v1\n";
    out << "# K=" << record.K << '\n';
    out << "# mode=" << to_string(record.mode) << '\n';
    out << "# seed=" << record.seed << '\n';
    out << "# noise_kind="
        << (record.noise.kind == NoiseModel::Kind::none ? "none" : "gaussian") << '\n';
    out << "# noise_sigma=" << format_double(record.noise.sigma) << '\n';
    out << "# noise_mean_offset=" << format_double(record.noise.mean_offset) << '\n';
    if (record.noise.target_dsnr_db)
        out << "# target_dsnr_db=" << format_double(*record.noise.target_dsnr_db) << '\n';
    out << "m,bucket_value\n";
    for (size_t m = 0; m < record.values.size(); ++m)
        out << m << ',' << format_double(record.values[m]) << '\n';
}

BucketRecord read_record_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open record file " + path.string());
    BucketRecord rec;
    std::string line;
    bool saw_header = false;
    long long expected_m = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string val = line.substr(eq + 1);
            if (key == "K") rec.K = std::stoi(val);
            else if (key == "mode") rec.mode = mode_from_string(val);
            else if (key == "seed") rec.seed = std::stoull(val);
            else if (key == "noise_kind")
                rec.noise.kind = val == "none" ? NoiseModel::Kind::none
                                               : NoiseModel::Kind::gaussian;
            else if (key == "noise_sigma") rec.noise.sigma = std::stod(val);
            else if (key == "noise_mean_offset") rec.noise.mean_offset = std::stod(val);
            else if (key == "target_dsnr_db") rec.noise.target_dsnr_db = std::stod(val);
            continue;
        }
        if (!saw_header) {
            if (line != "m,bucket_value")
                throw IoError("missing m,bucket_value header in " + path.string());
            saw_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("corrupt record row: " + line);
        const long long m = std::stoll(line.substr(0, comma));
        if (m != expected_m)
            throw IoError("record is gapped at m=" + std::to_string(expected_m));
        ++expected_m;
        rec.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (!saw_header || rec.values.empty())
        throw IoError("empty or headerless record " + path.string());
    return rec;
}

}  // namespace mpgi
