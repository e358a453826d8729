// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/shard_io.hpp"

#include <fstream>
#include <json.hpp>

#include "beaa/he/serial.hpp"

namespace beaa::pack {

using nlohmann::json;

void save_cipher_shards(const std::filesystem::path& dir, const PackedCipherTensor& t) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["layout"] = t.layout == Layout::element_wise ? "element-wise" : "channel-wise";
    manifest["batch"] = t.batch;
    manifest["channels"] = t.channels;
    manifest["height"] = t.height;
    manifest["width"] = t.width;
    json files = json::array();
    const std::size_t per_channel = static_cast<std::size_t>(t.height) * t.width;
    for (int c = 0; c < t.channels; ++c) {
        char name[32];
        std::snprintf(name, sizeof(name), "shard_c%03d.bin", c);
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("shards: cannot write " + (dir / name).string());
        he::write_container_header(os, he::ContainerKind::cipher_shard);
        unsigned char hdr[8];
        for (int i = 0; i < 4; ++i) hdr[i] = static_cast<unsigned char>(static_cast<std::uint32_t>(c) >> (8 * i));
        const auto n = static_cast<std::uint32_t>(per_channel);
        for (int i = 0; i < 4; ++i) hdr[4 + i] = static_cast<unsigned char>(n >> (8 * i));
        os.write(reinterpret_cast<const char*>(hdr), 8);
        for (std::size_t i = 0; i < per_channel; ++i)
            he::write_ciphertext_body(os, t.cells[static_cast<std::size_t>(c) * per_channel + i]);
        files.push_back(name);
    }
    manifest["files"] = std::move(files);
    std::ofstream ms(dir / "manifest.json");
    if (!ms) throw std::runtime_error("shards: cannot write manifest");
    ms << manifest.dump(2) << '\n';
}

PackedCipherTensor load_cipher_shards(const std::filesystem::path& dir) {
    std::ifstream ms(dir / "manifest.json");
    if (!ms) throw std::runtime_error("shards: missing manifest.json in " + dir.string());
    json manifest = json::parse(ms);
    PackedCipherTensor t;
    t.layout = manifest.at("layout") == "element-wise" ? Layout::element_wise : Layout::channel_wise;
    t.batch = manifest.at("batch");
    t.channels = manifest.at("channels");
    t.height = manifest.at("height");
    t.width = manifest.at("width");
    const std::size_t per_channel = static_cast<std::size_t>(t.height) * t.width;
    t.cells.resize(static_cast<std::size_t>(t.channels) * per_channel);
    int c = 0;
    for (const auto& f : manifest.at("files")) {
        std::ifstream is(dir / f.get<std::string>(), std::ios::binary);
        if (!is) throw std::runtime_error("shards: cannot read " + (dir / f.get<std::string>()).string());
        if (he::read_container_header(is) != he::ContainerKind::cipher_shard)
            throw std::runtime_error("shards: unexpected container kind");
        unsigned char hdr[8];
        is.read(reinterpret_cast<char*>(hdr), 8);
        if (!is) throw std::runtime_error("shards: truncated shard header");
        std::uint32_t channel = 0, count = 0;
        for (int i = 0; i < 4; ++i) channel |= static_cast<std::uint32_t>(hdr[i]) << (8 * i);
        for (int i = 0; i < 4; ++i) count |= static_cast<std::uint32_t>(hdr[4 + i]) << (8 * i);
        if (channel != static_cast<std::uint32_t>(c) || count != per_channel)
            throw std::runtime_error("shards: manifest/shard mismatch");
        for (std::size_t i = 0; i < per_channel; ++i)
            t.cells[static_cast<std::size_t>(c) * per_channel + i] = he::read_ciphertext_body(is);
        ++c;
    }
    if (c != t.channels) throw std::runtime_error("shards: channel count mismatch");
    return t;
}

}  // namespace beaa::pack
