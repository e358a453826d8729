// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/nn/model_io.hpp"

#include <cstring>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "beaa/he/serial.hpp"

namespace beaa::nn {

using nlohmann::json;

namespace {

json conv_to_json(const Conv2d& c) {
    return {{"in", c.in_ch},   {"out", c.out_ch}, {"k", c.ksize},
            {"stride", c.stride}, {"pad", c.pad},  {"bias", c.has_bias}};
}

Conv2d conv_from_json(const json& j) {
    Conv2d c;
    c.in_ch = j.at("in");
    c.out_ch = j.at("out");
    c.ksize = j.at("k");
    c.stride = j.at("stride");
    c.pad = j.at("pad");
    c.has_bias = j.at("bias");
    return c;
}

void append_blob(std::vector<std::pair<std::string, const std::vector<double>*>>& blobs,
                 std::string name, const std::vector<double>& v) {
    blobs.emplace_back(std::move(name), &v);
}

void put_f32_blob(std::ostream& os, const std::vector<double>& v) {
    for (double d : v) {
        const float f = static_cast<float>(d);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        os.write(reinterpret_cast<const char*>(b), 4);
    }
}

std::vector<double> get_f32_blob(std::istream& is, std::size_t count) {
    std::vector<double> v(count);
    for (auto& d : v) {
        unsigned char b[4];
        is.read(reinterpret_cast<char*>(b), 4);
        if (!is) throw std::runtime_error("model: truncated tensor blob");
        std::uint32_t bits = 0;
        for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        float f;
        std::memcpy(&f, &bits, 4);
        d = static_cast<double>(f);
    }
    return v;
}

}  // namespace

void save_model(std::ostream& os, const ModelBundle& m) {
    if (m.spec.layers.size() != m.weights.layers.size())
        throw std::invalid_argument("save_model: spec/weights layer count mismatch");

    json meta;
    meta["version"] = 1;
    meta["input"] = {{"channels", m.spec.in_channels},
                     {"height", m.spec.in_height},
                     {"width", m.spec.in_width}};
    meta["num_classes"] = m.spec.num_classes;
    if (!m.norm_mean.empty()) {
        meta["normalization"] = {{"mean", m.norm_mean}, {"std", m.norm_std}};
    }

    std::vector<std::pair<std::string, const std::vector<double>*>> blobs;
    json layers = json::array();
    for (std::size_t i = 0; i < m.spec.layers.size(); ++i) {
        const auto tag = "layer" + std::to_string(i);
        const LayerSpec& l = m.spec.layers[i];
        const LayerParams& p = m.weights.layers[i];
        json jl;
        if (const auto* c = std::get_if<Conv2d>(&l)) {
            jl = conv_to_json(*c);
            jl["type"] = "conv";
            const auto& cp = std::get<ConvParams>(p);
            append_blob(blobs, tag + ".w", cp.w);
            if (!cp.b.empty()) append_blob(blobs, tag + ".b", cp.b);
        } else if (const auto* bn = std::get_if<BatchNorm>(&l)) {
            jl = {{"type", "batchnorm"}, {"eps", bn->eps}, {"momentum", bn->momentum}};
            const auto& bp = std::get<BnParams>(p);
            append_blob(blobs, tag + ".gamma", bp.gamma);
            append_blob(blobs, tag + ".beta", bp.beta);
            append_blob(blobs, tag + ".mean", bp.running_mean);
            append_blob(blobs, tag + ".var", bp.running_var);
        } else if (const auto* a = std::get_if<Activation>(&l)) {
            jl = {{"type", "activation"},
                  {"kind", a->kind == ActKind::relu ? "relu" : "poly"},
                  {"granularity", to_string(a->granularity)}};
            if (a->kind == ActKind::poly) {
                const auto& ap = std::get<ActParams>(p);
                jl["shape"] = {{"channels", ap.poly.channels},
                               {"height", ap.poly.height},
                               {"width", ap.poly.width}};
                append_blob(blobs, tag + ".coeff", ap.poly.coeff);
            }
        } else if (const auto* pool = std::get_if<AvgPool>(&l)) {
            jl = {{"type", "avgpool"}, {"window", pool->window}, {"stride", pool->stride}};
        } else if (std::holds_alternative<GlobalAvgPool>(l)) {
            jl = {{"type", "gap"}};
        } else if (std::holds_alternative<Affine>(l)) {
            jl = {{"type", "affine"}};
            const auto& ap = std::get<AffineParams>(p);
            append_blob(blobs, tag + ".scale", ap.scale);
            append_blob(blobs, tag + ".shift", ap.shift);
        } else {
            const auto& f = std::get<Fire>(l);
            jl = {{"type", "fire"},
                  {"squeeze", conv_to_json(f.squeeze)},
                  {"expand1", conv_to_json(f.expand1)},
                  {"expand3", conv_to_json(f.expand3)}};
            const auto& fp = std::get<FireParams>(p);
            append_blob(blobs, tag + ".squeeze.w", fp.squeeze.w);
            append_blob(blobs, tag + ".squeeze.b", fp.squeeze.b);
            append_blob(blobs, tag + ".expand1.w", fp.expand1.w);
            append_blob(blobs, tag + ".expand1.b", fp.expand1.b);
            append_blob(blobs, tag + ".expand3.w", fp.expand3.w);
            append_blob(blobs, tag + ".expand3.b", fp.expand3.b);
        }
        layers.push_back(std::move(jl));
    }
    meta["layers"] = std::move(layers);

    json tensors = json::array();
    for (const auto& [name, vec] : blobs) tensors.push_back({{"name", name}, {"len", vec->size()}});
    meta["tensors"] = std::move(tensors);

    he::write_container_header(os, he::ContainerKind::model);
    const std::string text = meta.dump();
    const std::uint32_t len = static_cast<std::uint32_t>(text.size());
    unsigned char lb[4];
    for (int i = 0; i < 4; ++i) lb[i] = static_cast<unsigned char>(len >> (8 * i));
    os.write(reinterpret_cast<const char*>(lb), 4);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& [name, vec] : blobs) put_f32_blob(os, *vec);
}

ModelBundle load_model(std::istream& is) {
    if (he::read_container_header(is) != he::ContainerKind::model)
        throw std::runtime_error("model: unexpected container kind");
    unsigned char lb[4];
    is.read(reinterpret_cast<char*>(lb), 4);
    if (!is) throw std::runtime_error("model: truncated header");
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(lb[i]) << (8 * i);
    std::string text(len, '\0');
    is.read(text.data(), len);
    if (!is) throw std::runtime_error("model: truncated metadata");
    const json meta = json::parse(text);

    ModelBundle m;
    m.spec.in_channels = meta.at("input").at("channels");
    m.spec.in_height = meta.at("input").at("height");
    m.spec.in_width = meta.at("input").at("width");
    m.spec.num_classes = meta.at("num_classes");
    if (meta.contains("normalization")) {
        m.norm_mean = meta["normalization"].at("mean").get<std::vector<double>>();
        m.norm_std = meta["normalization"].at("std").get<std::vector<double>>();
    }

    std::vector<std::pair<std::string, std::size_t>> tensor_order;
    for (const auto& t : meta.at("tensors"))
        tensor_order.emplace_back(t.at("name").get<std::string>(), t.at("len").get<std::size_t>());
    std::size_t next_tensor = 0;
    auto take = [&](const std::string& name) {
        if (next_tensor >= tensor_order.size() || tensor_order[next_tensor].first != name)
            throw std::runtime_error("model: tensor order mismatch at " + name);
        return get_f32_blob(is, tensor_order[next_tensor++].second);
    };

    // Pass 1: specs (tensor blobs follow the JSON in declaration order).
    for (const auto& jl : meta.at("layers")) {
        const std::string type = jl.at("type");
        if (type == "conv") {
            m.spec.layers.push_back(conv_from_json(jl));
        } else if (type == "batchnorm") {
            m.spec.layers.push_back(BatchNorm{jl.at("eps"), jl.at("momentum")});
        } else if (type == "activation") {
            Activation a;
            a.kind = jl.at("kind") == "relu" ? ActKind::relu : ActKind::poly;
            a.granularity = granularity_from_string(jl.at("granularity"));
            m.spec.layers.push_back(a);
        } else if (type == "avgpool") {
            m.spec.layers.push_back(AvgPool{jl.at("window"), jl.at("stride")});
        } else if (type == "gap") {
            m.spec.layers.push_back(GlobalAvgPool{});
        } else if (type == "affine") {
            m.spec.layers.push_back(Affine{});
        } else if (type == "fire") {
            Fire f;
            f.squeeze = conv_from_json(jl.at("squeeze"));
            f.expand1 = conv_from_json(jl.at("expand1"));
            f.expand3 = conv_from_json(jl.at("expand3"));
            m.spec.layers.push_back(f);
        } else {
            throw std::runtime_error("model: unknown layer type " + type);
        }
    }

    // Pass 2: weights.
    std::size_t idx = 0;
    for (const auto& jl : meta.at("layers")) {
        const std::string type = jl.at("type");
        const auto tag = "layer" + std::to_string(idx);
        if (type == "conv") {
            ConvParams cp;
            cp.w = take(tag + ".w");
            if (jl.at("bias").get<bool>()) cp.b = take(tag + ".b");
            m.weights.layers.emplace_back(std::move(cp));
        } else if (type == "batchnorm") {
            BnParams bp;
            bp.gamma = take(tag + ".gamma");
            bp.beta = take(tag + ".beta");
            bp.running_mean = take(tag + ".mean");
            bp.running_var = take(tag + ".var");
            m.weights.layers.emplace_back(std::move(bp));
        } else if (type == "activation") {
            if (jl.at("kind") == "poly") {
                ActParams ap;
                ap.poly.granularity = granularity_from_string(jl.at("granularity"));
                ap.poly.channels = jl.at("shape").at("channels");
                ap.poly.height = jl.at("shape").at("height");
                ap.poly.width = jl.at("shape").at("width");
                ap.poly.coeff = take(tag + ".coeff");
                m.weights.layers.emplace_back(std::move(ap));
            } else {
                m.weights.layers.emplace_back(NoParams{});
            }
        } else if (type == "affine") {
            AffineParams ap;
            ap.scale = take(tag + ".scale");
            ap.shift = take(tag + ".shift");
            m.weights.layers.emplace_back(std::move(ap));
        } else if (type == "fire") {
            FireParams fp;
            fp.squeeze.w = take(tag + ".squeeze.w");
            fp.squeeze.b = take(tag + ".squeeze.b");
            fp.expand1.w = take(tag + ".expand1.w");
            fp.expand1.b = take(tag + ".expand1.b");
            fp.expand3.w = take(tag + ".expand3.w");
            fp.expand3.b = take(tag + ".expand3.b");
            m.weights.layers.emplace_back(std::move(fp));
        } else {
            m.weights.layers.emplace_back(NoParams{});
        }
        ++idx;
    }
    m.spec.shapes();  // validate
    return m;
}

void save_model_file(const std::filesystem::path& p, const ModelBundle& m) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
    save_model(os, m);
}

ModelBundle load_model_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + p.string());
    return load_model(is);
}

}  // namespace beaa::nn
