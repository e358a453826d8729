// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "beaa/data/dataset.hpp"

namespace beaa::data {

namespace {

struct RawImage {
    int channels = 0, height = 0, width = 0;
    std::vector<double> pixels;  // planar (c, h, w), [0, 1]
};

int read_pnm_int(std::istream& is) {
    // skips whitespace and '#' comments
    int c = is.get();
    while (c == '#' || std::isspace(c)) {
        if (c == '#')
            while (c != '\n' && c != EOF) c = is.get();
        c = is.get();
    }
    int v = 0;
    bool any = false;
    while (std::isdigit(c)) {
        v = v * 10 + (c - '0');
        any = true;
        c = is.get();
    }
    if (!any) throw std::runtime_error("pnm: malformed header");
    return v;
}

RawImage read_pnm(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("image: cannot open " + file.string());
    char m0 = static_cast<char>(is.get());
    char m1 = static_cast<char>(is.get());
    if (m0 != 'P' || (m1 != '5' && m1 != '6'))
        throw std::runtime_error("image: unsupported format (want binary PGM/PPM): " + file.string());
    const int channels = m1 == '6' ? 3 : 1;
    const int w = read_pnm_int(is);
    const int h = read_pnm_int(is);
    const int maxv = read_pnm_int(is);
    if (maxv <= 0 || maxv > 255) throw std::runtime_error("image: unsupported max value");
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * channels);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!is) throw std::runtime_error("image: truncated pixel data in " + file.string());
    RawImage img;
    img.channels = channels;
    img.height = h;
    img.width = w;
    img.pixels.resize(raw.size());
    // interleaved -> planar
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c)
                img.pixels[(static_cast<std::size_t>(c) * h + y) * w + x] =
                    static_cast<double>(raw[(static_cast<std::size_t>(y) * w + x) * channels + c]) /
                    static_cast<double>(maxv);
    return img;
}

std::vector<double> resize_bilinear(const RawImage& img, int target) {
    std::vector<double> out(static_cast<std::size_t>(img.channels) * target * target);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < target; ++y)
            for (int x = 0; x < target; ++x) {
                const double sy = (y + 0.5) * img.height / target - 0.5;
                const double sx = (x + 0.5) * img.width / target - 0.5;
                const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, img.height - 1);
                const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, img.width - 1);
                const int y1 = std::min(y0 + 1, img.height - 1);
                const int x1 = std::min(x0 + 1, img.width - 1);
                const double fy = std::clamp(sy - y0, 0.0, 1.0);
                const double fx = std::clamp(sx - x0, 0.0, 1.0);
                auto px = [&](int yy, int xx) {
                    return img.pixels[(static_cast<std::size_t>(c) * img.height + yy) * img.width + xx];
                };
                out[(static_cast<std::size_t>(c) * target + y) * target + x] =
                    (1 - fy) * ((1 - fx) * px(y0, x0) + fx * px(y0, x1)) +
                    fy * ((1 - fx) * px(y1, x0) + fx * px(y1, x1));
            }
    return out;
}

}  // namespace

Dataset load_image_dir(const std::filesystem::path& dir, int target_size, std::uint64_t seed) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("image dir: not a directory: " + dir.string());
    std::vector<std::filesystem::path> class_dirs;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_directory()) class_dirs.push_back(e.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw std::runtime_error("image dir: no class subdirectories");

    Dataset ds;
    ds.height = ds.width = target_size;
    ds.class_count = static_cast<int>(class_dirs.size());
    ds.channels = 0;

    Rng rng(derive_seed(seed, 0x1d17));
    for (int cls = 0; cls < ds.class_count; ++cls) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(class_dirs[cls]))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw std::runtime_error("image dir: empty class directory " + class_dirs[cls].string());

        // per-class 60/10/30 split by seeded shuffle
        std::vector<std::size_t> order(files.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        const auto n = files.size();
        const auto n_train = static_cast<std::size_t>(std::llround(0.6 * static_cast<double>(n)));
        const auto n_val = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(n)));
        std::vector<Split> assign(n, Split::test);
        for (std::size_t i = 0; i < n && i < n_train; ++i) assign[order[i]] = Split::train;
        for (std::size_t i = n_train; i < n && i < n_train + n_val; ++i) assign[order[i]] = Split::val;

        for (std::size_t f = 0; f < files.size(); ++f) {
            RawImage img = read_pnm(files[f]);
            if (ds.channels == 0) ds.channels = img.channels;
            if (img.channels != ds.channels)
                throw std::runtime_error("image dir: mixed channel counts at " + files[f].string());
            auto px = resize_bilinear(img, target_size);
            ds.images.insert(ds.images.end(), px.begin(), px.end());
            ds.labels.push_back(cls);
            ds.splits.push_back(assign[f]);
        }
    }
    ds.validate();
    normalize_per_channel(ds);
    return ds;
}

}  // namespace beaa::data
