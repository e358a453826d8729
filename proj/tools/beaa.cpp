// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
//
// beaa — batch-oriented element-wise approximate activation over CKKS.
//
// Subcommands cover the full workflow: train-teacher / train-student on
// cleartext data, keygen / encrypt / infer for the homomorphic path,
// eval-plain for reference runs, benchmark for the batch-scaling harness
// and report for slot-utilization and metrics summaries.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "beaa/data/dataset.hpp"
#include "beaa/he/serial.hpp"
#include "beaa/henn/compiler.hpp"
#include "beaa/henn/cost.hpp"
#include "beaa/henn/executor.hpp"
#include "beaa/nn/model_io.hpp"
#include "beaa/shard_io.hpp"
#include "beaa/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace beaa;

namespace {

void write_json(const fs::path& p, const json& j) {
    fs::create_directories(p.parent_path().empty() ? fs::path(".") : p.parent_path());
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << j.dump(2) << '\n';
}

data::Dataset load_dataset(const std::string& kind, const fs::path& dir, int image_size,
                           std::size_t train_limit, std::uint64_t seed) {
    if (kind == "cifar10") return data::load_cifar10(dir, train_limit, 0, 0.1, seed);
    if (kind == "imagedir") return data::load_image_dir(dir, image_size, seed);
    throw std::runtime_error("unknown dataset kind '" + kind + "' (want cifar10 or imagedir)");
}

data::Split split_from_string(const std::string& s) {
    if (s == "train") return data::Split::train;
    if (s == "val") return data::Split::val;
    if (s == "test") return data::Split::test;
    throw std::runtime_error("unknown split '" + s + "'");
}

std::string backend_kind_of_public(const he::PublicKey& pk) {
    return std::holds_alternative<he::SimKey>(pk.body) ? "sim" : "lattice";
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

nn::SqueezeNetOptConfig topology_from_file(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("cannot read topology config " + p.string());
    json j = json::parse(is);
    nn::SqueezeNetOptConfig cfg;
    cfg.conv1_out = j.value("conv1_out", cfg.conv1_out);
    cfg.fire1_squeeze = j.value("fire1_squeeze", cfg.fire1_squeeze);
    cfg.fire1_expand = j.value("fire1_expand", cfg.fire1_expand);
    cfg.fire2_squeeze = j.value("fire2_squeeze", cfg.fire2_squeeze);
    cfg.fire2_expand = j.value("fire2_expand", cfg.fire2_expand);
    cfg.conv2_out = j.value("conv2_out", cfg.conv2_out);
    cfg.conv3_out = j.value("conv3_out", cfg.conv3_out);
    return cfg;
}

void write_metrics_csv(const fs::path& p, const std::vector<train::EpochMetrics>& metrics) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << train::metrics_csv_header() << '\n';
    for (const auto& m : metrics) os << train::metrics_csv_row(m) << '\n';
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
    std::string preset = "desk";
    std::string backend = "lattice";
    std::string rotations;
    std::uint64_t seed = 1;
    std::string out = "keys";
};

int run_keygen(const KeygenArgs& a) {
    he::HeParams params = he::HeParams::preset(a.preset);
    auto be = he::make_backend(a.backend, params);
    Rng rng(derive_seed(a.seed, 0x6e79));
    const auto steps = parse_int_list(a.rotations);
    auto keys = be->keygen(steps, rng);

    fs::create_directories(a.out);
    he::save_params_file(fs::path(a.out) / "params.bin", params);
    he::save_secret_key_file(fs::path(a.out) / "secret.key", keys.secret);
    he::save_public_keys_file(fs::path(a.out) / "public.keys", keys.public_key, keys.eval,
                              keys.rotation);
    write_json(fs::path(a.out) / "resolved-config.json",
               {{"command", "keygen"},
                {"preset", a.preset},
                {"backend", a.backend},
                {"rotations", steps},
                {"seed", a.seed},
                {"ring_degree", params.ring_degree},
                {"levels", params.max_level()},
                {"slot_count", params.slot_count()}});
    std::cout << "keygen: N=" << params.ring_degree << " levels=" << params.max_level()
              << " slots=" << params.slot_count() << " -> " << a.out << '\n';
    return 0;
}

struct EncryptArgs {
    std::string keys = "keys";
    std::string data;
    std::string dataset = "cifar10";
    std::string split = "test";
    int batch = 64;
    int skip = 0;
    int image_size = 32;
    std::uint64_t seed = 1;
    std::string out = "ct";
};

int run_encrypt(const EncryptArgs& a) {
    const he::HeParams params = he::load_params_file(fs::path(a.keys) / "params.bin");
    he::PublicKey pk;
    he::EvalKey evk;
    he::RotationKeys rot;
    he::load_public_keys_file(fs::path(a.keys) / "public.keys", pk, evk, rot);
    auto be = he::make_backend(backend_kind_of_public(pk), params);

    data::Dataset ds = load_dataset(a.dataset, a.data, a.image_size, 0, a.seed);
    const auto idx_all = ds.indices_of(split_from_string(a.split));
    if (static_cast<std::size_t>(a.skip) + a.batch > idx_all.size())
        throw std::runtime_error("encrypt: split has only " + std::to_string(idx_all.size()) +
                                 " images");
    std::vector<std::size_t> idx(idx_all.begin() + a.skip, idx_all.begin() + a.skip + a.batch);

    pack::ImageBatch batch;
    batch.batch = a.batch;
    batch.channels = ds.channels;
    batch.height = ds.height;
    batch.width = ds.width;
    nn::Tensor t = ds.gather(idx);
    batch.data = std::move(t.v);

    auto packed = pack::pack_elementwise(batch, params);
    Rng rng(derive_seed(a.seed, 0xe9c0));
    auto ct = pack::encrypt_packed(packed, *be, pk, rng);
    pack::save_cipher_shards(a.out, ct);

    json labels = json::array();
    for (std::size_t i = 0; i < idx.size(); ++i) labels.push_back(ds.labels[idx[i]]);
    write_json(fs::path(a.out) / "labels.json", {{"indices", idx}, {"labels", labels}});
    write_json(fs::path(a.out) / "resolved-config.json",
               {{"command", "encrypt"},
                {"keys", a.keys},
                {"data", a.data},
                {"dataset", a.dataset},
                {"split", a.split},
                {"batch", a.batch},
                {"skip", a.skip},
                {"image_size", a.image_size},
                {"seed", a.seed},
                {"slot_utilization", pack::slot_utilization(a.batch, params)}});
    std::cout << "encrypt: " << a.batch << " images -> " << packed.cells.size() << " cells, "
              << "slot utilization " << 100.0 * pack::slot_utilization(a.batch, params) << "%\n";
    return 0;
}

struct InferArgs {
    std::string keys = "keys";
    std::string model;
    std::string ct = "ct";
    std::string out = "infer-out";
    std::string secret;
};

int run_infer(const InferArgs& a) {
    const he::HeParams params = he::load_params_file(fs::path(a.keys) / "params.bin");
    he::PublicKey pk;
    he::EvalKey evk;
    he::RotationKeys rot;
    he::load_public_keys_file(fs::path(a.keys) / "public.keys", pk, evk, rot);
    auto be = he::make_backend(backend_kind_of_public(pk), params);

    nn::ModelBundle m = nn::load_model_file(a.model);
    auto [fspec, fweights] = nn::fold_batchnorm(m.spec, m.weights);
    henn::HePlan plan = henn::compile(fspec, fweights, params);

    auto input = pack::load_cipher_shards(a.ct);
    auto result = henn::execute(plan, input, *be, evk);

    fs::create_directories(a.out);
    pack::save_cipher_shards(fs::path(a.out) / "logits", result.logits);
    json cfg = {{"command", "infer"},      {"keys", a.keys},   {"model", a.model},
                {"ct", a.ct},              {"depth", plan.depth}, {"wall_s", result.wall_s},
                {"batch", input.batch}};

    if (!a.secret.empty()) {
        he::SecretKey sk = he::load_secret_key_file(a.secret);
        std::vector<std::vector<double>> logit_slots;
        logit_slots.reserve(result.logits.cells.size());
        for (const auto& cell : result.logits.cells)
            logit_slots.push_back(be->decrypt_decode(cell, sk));

        std::vector<int> labels;
        const fs::path lf = fs::path(a.ct) / "labels.json";
        if (fs::exists(lf)) {
            std::ifstream is(lf);
            json lj = json::parse(is);
            labels = lj.at("labels").get<std::vector<int>>();
        }
        std::ofstream os(fs::path(a.out) / "predictions.csv");
        os << "index,pred,label\n";
        std::size_t correct = 0;
        for (int i = 0; i < input.batch; ++i) {
            int arg = 0;
            for (std::size_t c = 1; c < logit_slots.size(); ++c)
                if (logit_slots[c][i] > logit_slots[arg][i]) arg = static_cast<int>(c);
            const int label = i < static_cast<int>(labels.size()) ? labels[i] : -1;
            if (label >= 0 && label == arg) ++correct;
            os << i << ',' << arg << ',' << label << '\n';
        }
        if (!labels.empty()) {
            cfg["accuracy"] = static_cast<double>(correct) / input.batch;
            std::cout << "infer: accuracy " << static_cast<double>(correct) / input.batch << '\n';
        }
    }
    write_json(fs::path(a.out) / "resolved-config.json", cfg);
    std::cout << "infer: executed depth-" << plan.depth << " plan over " << input.batch
              << " images in " << result.wall_s << "s\n";
    return 0;
}

struct EvalPlainArgs {
    std::string model;
    std::string data;
    std::string dataset = "cifar10";
    std::string split = "test";
    int limit = 0;
    int skip = 0;
    int image_size = 32;
    std::uint64_t seed = 1;
    std::string out = "eval-out";
};

int run_eval_plain(const EvalPlainArgs& a) {
    nn::ModelBundle m = nn::load_model_file(a.model);
    data::Dataset ds = load_dataset(a.dataset, a.data, a.image_size, 0, a.seed);
    auto idx = ds.indices_of(split_from_string(a.split));
    if (a.skip > 0) idx.erase(idx.begin(), idx.begin() + std::min<std::size_t>(a.skip, idx.size()));
    if (a.limit > 0 && idx.size() > static_cast<std::size_t>(a.limit)) idx.resize(a.limit);
    if (idx.empty()) throw std::runtime_error("eval-plain: empty selection");

    fs::create_directories(a.out);
    std::ofstream os(fs::path(a.out) / "predictions.csv");
    os << "index,pred,label\n";
    std::size_t correct = 0;
    const int bs = 256;
    for (std::size_t start = 0; start < idx.size(); start += bs) {
        const std::size_t stop = std::min(idx.size(), start + bs);
        std::vector<std::size_t> part(idx.begin() + start, idx.begin() + stop);
        nn::Tensor logits = nn::forward_plain(m.spec, m.weights, ds.gather(part), nullptr, false);
        for (std::size_t i = 0; i < part.size(); ++i) {
            int arg = 0;
            for (int c = 1; c < m.spec.num_classes; ++c)
                if (logits.at(static_cast<int>(i), c, 0, 0) > logits.at(static_cast<int>(i), arg, 0, 0))
                    arg = c;
            if (arg == ds.labels[part[i]]) ++correct;
            os << (start + i) << ',' << arg << ',' << ds.labels[part[i]] << '\n';
        }
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(idx.size());
    write_json(fs::path(a.out) / "resolved-config.json",
               {{"command", "eval-plain"},
                {"model", a.model},
                {"dataset", a.dataset},
                {"split", a.split},
                {"count", idx.size()},
                {"accuracy", acc}});
    std::cout << "eval-plain: accuracy " << acc << " over " << idx.size() << " images\n";
    return 0;
}

struct TrainArgs {
    std::string data;
    std::string dataset = "cifar10";
    std::string out = "model.bin";
    std::string metrics = "metrics.csv";
    std::string config;
    std::string topology;
    std::string granularity = "element";  // student only
    std::string teacher;                  // student only
    bool kd = false;                      // student only
    int image_size = 32;
    int train_limit = 0;
    train::TrainConfig cfg;
};

void apply_config_file(TrainArgs& a, const CLI::App* cmd) {
    if (a.config.empty()) return;
    std::ifstream is(a.config);
    if (!is) throw std::runtime_error("cannot read config " + a.config);
    json j = json::parse(is);
    auto set_d = [&](const char* flag, const char* key, double& field) {
        if (cmd->count(flag) == 0 && j.contains(key)) field = j[key];
    };
    auto set_i = [&](const char* flag, const char* key, int& field) {
        if (cmd->count(flag) == 0 && j.contains(key)) field = j[key];
    };
    set_d("--lr", "learning_rate", a.cfg.learning_rate);
    set_d("--momentum", "momentum", a.cfg.momentum);
    set_d("--reg-lambda", "reg_lambda", a.cfg.reg_lambda);
    set_d("--temperature", "temperature", a.cfg.temperature);
    set_d("--distill-alpha", "distill_alpha", a.cfg.distill_alpha);
    set_i("--epochs", "epochs", a.cfg.epochs);
    set_i("--batch-size", "batch_size", a.cfg.batch_size);
    set_d("--lr-decay", "lr_decay", a.cfg.lr_decay);
    set_d("--act-noise", "act_coeff_noise", a.cfg.act_coeff_noise);
    if (cmd->count("--seed") == 0 && j.contains("seed")) a.cfg.seed = j["seed"];
    if (cmd->count("--augment") == 0 && j.contains("augment_flip")) a.cfg.augment_flip = j["augment_flip"];
    if (cmd->count("--granularity") == 0 && j.contains("granularity")) a.granularity = j["granularity"];
}

json train_config_json(const TrainArgs& a, const std::string& command) {
    return {{"command", command},
            {"dataset", a.dataset},
            {"data", a.data},
            {"learning_rate", a.cfg.learning_rate},
            {"momentum", a.cfg.momentum},
            {"reg_lambda", a.cfg.reg_lambda},
            {"temperature", a.cfg.temperature},
            {"distill_alpha", a.cfg.distill_alpha},
            {"epochs", a.cfg.epochs},
            {"batch_size", a.cfg.batch_size},
            {"seed", a.cfg.seed},
            {"augment_flip", a.cfg.augment_flip},
            {"act_coeff_noise", a.cfg.act_coeff_noise},
            {"lr_decay", a.cfg.lr_decay},
            {"granularity", a.granularity},
            {"kd", a.kd},
            {"teacher", a.teacher},
            {"train_limit", a.train_limit}};
}

int run_train(TrainArgs& a, bool teacher_mode) {
    data::Dataset ds =
        load_dataset(a.dataset, a.data, a.image_size, static_cast<std::size_t>(a.train_limit), a.cfg.seed);
    nn::SqueezeNetOptConfig topo;
    if (!a.topology.empty()) topo = topology_from_file(a.topology);

    train::TrainResult result;
    nn::NetworkSpec spec;
    if (teacher_mode) {
        spec = nn::build_squeezenet_opt(ds.class_count, ds.channels, ds.height, ds.width,
                                        nn::ActKind::relu, nn::Granularity::layer, topo);
        result = train::train_teacher(spec, ds, a.cfg);
    } else {
        spec = nn::build_squeezenet_opt(ds.class_count, ds.channels, ds.height, ds.width,
                                        nn::ActKind::poly, nn::granularity_from_string(a.granularity),
                                        topo);
        std::optional<train::TeacherRef> tref;
        nn::ModelBundle teacher_bundle;
        if (a.kd) {
            if (a.teacher.empty()) throw std::runtime_error("train-student: --kd requires --teacher");
            teacher_bundle = nn::load_model_file(a.teacher);
            tref = train::TeacherRef{&teacher_bundle.spec, &teacher_bundle.weights};
        }
        result = train::train_student(spec, ds, a.cfg, tref);
    }

    nn::ModelBundle out;
    out.spec = std::move(spec);
    out.weights = std::move(result.weights);
    out.norm_mean = ds.norm_mean;
    out.norm_std = ds.norm_std;
    nn::save_model_file(a.out, out);
    write_metrics_csv(a.metrics, result.metrics);
    const double test_acc = train::evaluate_accuracy(out.spec, out.weights, ds, data::Split::test);
    json cfg = train_config_json(a, teacher_mode ? "train-teacher" : "train-student");
    cfg["final_val_acc"] = result.metrics.empty() ? 0.0 : result.metrics.back().val_acc;
    cfg["test_acc"] = test_acc;
    write_json(fs::path(a.out).string() + ".config.json", cfg);
    std::cout << (teacher_mode ? "train-teacher" : "train-student") << ": test accuracy " << test_acc
              << " -> " << a.out << '\n';
    return 0;
}

struct BenchArgs {
    std::string preset = "desk";
    std::string backend = "lattice";
    std::string batches = "64,256,1024";
    std::string layouts = "element,channel";
    std::string net = "bench";  // bench | squeezenet
    std::uint64_t seed = 1;
    int timing_reps = 3;
    std::string out = "bench.csv";
};

// Small fixed network for batch-scaling runs: 8x8 single-channel input,
// two 3x3 convs with element-wise activations and a 1x1 classifier head.
nn::NetworkSpec bench_spec(int classes = 4) {
    nn::NetworkSpec s;
    s.in_channels = 1;
    s.in_height = 8;
    s.in_width = 8;
    s.num_classes = classes;
    s.layers.push_back(nn::Conv2d{1, 4, 3, 1, 1, true});
    s.layers.push_back(nn::Activation{nn::ActKind::poly, nn::Granularity::element});
    s.layers.push_back(nn::Conv2d{4, 4, 3, 1, 1, true});
    s.layers.push_back(nn::Activation{nn::ActKind::poly, nn::Granularity::element});
    s.layers.push_back(nn::AvgPool{2, 2});
    s.layers.push_back(nn::Conv2d{4, classes, 1, 1, 0, true});
    s.layers.push_back(nn::GlobalAvgPool{});
    s.shapes();
    return s;
}

int run_benchmark(const BenchArgs& a) {
    he::HeParams params = he::HeParams::preset(a.preset);
    auto be = he::make_backend(a.backend, params);
    Rng rng(derive_seed(a.seed, 0xbe7c));
    auto keys = be->keygen(std::vector<int>{1}, rng);

    nn::NetworkSpec spec;
    if (a.net == "bench") {
        spec = bench_spec();
    } else if (a.net == "squeezenet") {
        spec = nn::build_squeezenet_opt(10, 3, 32, 32, nn::ActKind::poly, nn::Granularity::element);
    } else {
        throw std::runtime_error("benchmark: unknown net '" + a.net + "'");
    }
    nn::ModelWeights weights = nn::init_weights(spec, rng, 0.02);
    // scale weights down a little so random activations stay bounded
    for (auto view : train::param_views(weights))
        if (view.cls == train::ParamClass::conv_weight)
            for (auto& w : *view.data) w *= 0.5;

    auto [fspec, fweights] = nn::fold_batchnorm(spec, weights);
    const henn::OpTimings timings = henn::measure_op_timings(*be, keys, a.timing_reps);

    std::ofstream os(a.out);
    if (!os) throw std::runtime_error("cannot write " + a.out);
    os << "M,layout,total_s,amortized_s,add_count,cmult_count,mult_count,rot_count,depth\n";

    const auto batches = parse_int_list(a.batches);
    std::stringstream layouts_ss(a.layouts);
    std::vector<std::string> layouts;
    for (std::string tok; std::getline(layouts_ss, tok, ',');) layouts.push_back(tok);

    for (int m : batches) {
        for (const auto& layout : layouts) {
            if (layout == "element") {
                if (static_cast<std::uint32_t>(m) > params.slot_count())
                    throw std::runtime_error("benchmark: batch exceeds slot capacity");
                henn::HePlan plan = henn::compile(fspec, fweights, params);
                pack::ImageBatch batch = pack::ImageBatch::zeros(m, spec.in_channels, spec.in_height,
                                                                 spec.in_width);
                std::uniform_real_distribution<double> d(-1.0, 1.0);
                for (auto& x : batch.data) x = d(rng);
                auto enc = pack::encrypt_packed(pack::pack_elementwise(batch, params), *be,
                                                keys.public_key, rng);
                auto res = henn::execute(plan, enc, *be, keys.eval);
                const auto& c = plan.counts;
                os << m << ",element-wise," << res.wall_s << ',' << res.wall_s / m << ',' << c.add
                   << ',' << c.cmult << ',' << c.mult << ',' << c.rot << ',' << plan.depth << '\n';
                std::cout << "M=" << m << " element-wise total " << res.wall_s << "s amortized "
                          << res.wall_s / m << "s\n";
            } else if (layout == "channel") {
                auto est = henn::estimate_cost(fspec, fweights, params, m, pack::Layout::channel_wise,
                                               timings);
                const auto& c = est.counts;
                os << m << ",channel-wise," << est.predicted_total_s << ','
                   << est.predicted_amortized_s << ',' << c.add << ',' << c.cmult << ',' << c.mult
                   << ',' << c.rot << ',' << est.depth << '\n';
                std::cout << "M=" << m << " channel-wise (analytic) total " << est.predicted_total_s
                          << "s\n";
            } else {
                throw std::runtime_error("benchmark: unknown layout '" + layout + "'");
            }
        }
    }
    write_json(a.out + ".config.json", {{"command", "benchmark"},
                                        {"preset", a.preset},
                                        {"backend", a.backend},
                                        {"batches", a.batches},
                                        {"layouts", a.layouts},
                                        {"net", a.net},
                                        {"seed", a.seed}});
    std::cout << "benchmark: wrote " << a.out << '\n';
    return 0;
}

struct ReportArgs {
    std::string preset = "paper";
    int height = 32, width = 32, channels = 3;
    int batch = 0;  // element-wise batch; 0 = full capacity N/2
    std::string metrics_dir;
    std::string bench;
};

int run_report(const ReportArgs& a) {
    he::HeParams params = he::HeParams::preset(a.preset);
    const std::uint64_t slots = params.slot_count();
    const std::uint64_t hw = static_cast<std::uint64_t>(a.height) * a.width;
    const std::uint64_t m = a.batch > 0 ? static_cast<std::uint64_t>(a.batch) : slots;

    std::cout << "slot utilization (preset " << a.preset << ", N=" << params.ring_degree
              << ", capacity " << slots << " slots)\n";
    std::cout << "  channel-wise: " << hw << " of " << slots << " slots = "
              << 100.0 * pack::slot_utilization(hw, params) << "%\n";
    std::cout << "  element-wise (M=" << m << "): " << m << " of " << slots << " slots = "
              << 100.0 * pack::slot_utilization(m, params) << "%\n";

    if (!a.metrics_dir.empty()) {
        std::cout << "training metrics summaries (" << a.metrics_dir << ")\n";
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(a.metrics_dir))
            if (e.path().extension() == ".csv") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream is(f);
            std::string line, last;
            std::getline(is, line);  // header
            while (std::getline(is, line))
                if (!line.empty()) last = line;
            if (last.empty()) continue;
            std::stringstream ss(last);
            std::vector<std::string> cols;
            for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
            if (cols.size() >= 6)
                std::cout << "  " << f.filename().string() << ": final total_loss=" << cols[3]
                          << " train_acc=" << cols[4] << " val_acc=" << cols[5] << '\n';
        }
    }
    if (!a.bench.empty()) {
        std::ifstream is(a.bench);
        if (!is) throw std::runtime_error("cannot read " + a.bench);
        std::cout << "benchmark summary (" << a.bench << ")\n";
        std::string line;
        std::getline(is, line);
        double min_total = 1e300, max_total = 0;
        while (std::getline(is, line)) {
            std::stringstream ss(line);
            std::string mcol, layout, total, amortized;
            std::getline(ss, mcol, ',');
            std::getline(ss, layout, ',');
            std::getline(ss, total, ',');
            std::getline(ss, amortized, ',');
            std::cout << "  M=" << mcol << ' ' << layout << " total=" << total
                      << "s amortized=" << amortized << "s\n";
            if (layout == "element-wise") {
                min_total = std::min(min_total, std::stod(total));
                max_total = std::max(max_total, std::stod(total));
            }
        }
        if (max_total > 0)
            std::cout << "  element-wise total-time spread: " << 100.0 * (max_total / min_total - 1.0)
                      << "%\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch-oriented element-wise approximate activation over a leveled CKKS backend"};
    app.require_subcommand(1);

    KeygenArgs kg;
    auto* c_kg = app.add_subcommand("keygen", "generate HE keys");
    c_kg->add_option("--preset", kg.preset, "HE parameter preset (toy|desk|paper)");
    c_kg->add_option("--backend", kg.backend, "backend kind (lattice|sim)");
    c_kg->add_option("--rotations", kg.rotations, "comma-separated rotation steps");
    c_kg->add_option("--seed", kg.seed, "rng seed");
    c_kg->add_option("--out", kg.out, "output directory");

    EncryptArgs enc;
    auto* c_enc = app.add_subcommand("encrypt", "pack a batch element-wise and encrypt it");
    c_enc->add_option("--keys", enc.keys, "key directory from keygen");
    c_enc->add_option("--data", enc.data, "dataset directory")->required();
    c_enc->add_option("--dataset", enc.dataset, "dataset kind (cifar10|imagedir)");
    c_enc->add_option("--split", enc.split, "split to read (train|val|test)");
    c_enc->add_option("--batch", enc.batch, "batch size M");
    c_enc->add_option("--skip", enc.skip, "skip this many images of the split");
    c_enc->add_option("--image-size", enc.image_size, "imagedir resize target");
    c_enc->add_option("--seed", enc.seed, "rng seed");
    c_enc->add_option("--out", enc.out, "output shard directory");

    InferArgs inf;
    auto* c_inf = app.add_subcommand("infer", "run encrypted inference over shards");
    c_inf->add_option("--keys", inf.keys, "key directory");
    c_inf->add_option("--model", inf.model, "model container")->required();
    c_inf->add_option("--ct", inf.ct, "ciphertext shard directory");
    c_inf->add_option("--out", inf.out, "output directory");
    c_inf->add_option("--secret", inf.secret, "secret key file (decrypt logits to predictions)");

    EvalPlainArgs ev;
    auto* c_ev = app.add_subcommand("eval-plain", "cleartext evaluation of a model");
    c_ev->add_option("--model", ev.model, "model container")->required();
    c_ev->add_option("--data", ev.data, "dataset directory")->required();
    c_ev->add_option("--dataset", ev.dataset, "dataset kind");
    c_ev->add_option("--split", ev.split, "split");
    c_ev->add_option("--limit", ev.limit, "max images (0 = all)");
    c_ev->add_option("--skip", ev.skip, "skip this many images");
    c_ev->add_option("--image-size", ev.image_size, "imagedir resize target");
    c_ev->add_option("--seed", ev.seed, "dataset split seed");
    c_ev->add_option("--out", ev.out, "output directory");

    auto add_train_opts = [](CLI::App* cmd, TrainArgs& a) {
        cmd->add_option("--data", a.data, "dataset directory")->required();
        cmd->add_option("--dataset", a.dataset, "dataset kind (cifar10|imagedir)");
        cmd->add_option("--out", a.out, "output model file");
        cmd->add_option("--metrics", a.metrics, "metrics CSV path");
        cmd->add_option("--config", a.config, "JSON config file (CLI flags override)");
        cmd->add_option("--topology", a.topology, "topology widths JSON");
        cmd->add_option("--image-size", a.image_size, "imagedir resize target");
        cmd->add_option("--train-limit", a.train_limit, "cap on train images (0 = all)");
        cmd->add_option("--lr", a.cfg.learning_rate, "learning rate");
        cmd->add_option("--momentum", a.cfg.momentum, "Nesterov impulse coefficient");
        cmd->add_option("--reg-lambda", a.cfg.reg_lambda, "L2 coefficient penalty");
        cmd->add_option("--temperature", a.cfg.temperature, "distillation temperature");
        cmd->add_option("--distill-alpha", a.cfg.distill_alpha, "distillation intensity");
        cmd->add_option("--epochs", a.cfg.epochs, "epochs");
        cmd->add_option("--batch-size", a.cfg.batch_size, "batch size");
        cmd->add_option("--seed", a.cfg.seed, "master seed");
        cmd->add_flag("--augment", a.cfg.augment_flip, "random horizontal flips");
        cmd->add_option("--act-noise", a.cfg.act_coeff_noise, "activation coefficient init noise");
        cmd->add_option("--lr-decay", a.cfg.lr_decay, "per-epoch lr multiplier");
    };

    TrainArgs tt;
    auto* c_tt = app.add_subcommand("train-teacher", "train the ReLU teacher network");
    add_train_opts(c_tt, tt);

    TrainArgs ts;
    auto* c_ts = app.add_subcommand("train-student", "train a polynomial-activation student");
    add_train_opts(c_ts, ts);
    c_ts->add_option("--granularity", ts.granularity, "layer|channel|element");
    c_ts->add_option("--teacher", ts.teacher, "teacher model container (for --kd)");
    c_ts->add_flag("--kd", ts.kd, "enable knowledge distillation");

    BenchArgs bm;
    auto* c_bm = app.add_subcommand("benchmark", "batch-scaling benchmark harness");
    c_bm->add_option("--preset", bm.preset, "HE preset");
    c_bm->add_option("--backend", bm.backend, "backend kind");
    c_bm->add_option("--batches", bm.batches, "comma-separated batch sizes");
    c_bm->add_option("--layouts", bm.layouts, "element,channel");
    c_bm->add_option("--net", bm.net, "bench | squeezenet");
    c_bm->add_option("--seed", bm.seed, "rng seed");
    c_bm->add_option("--timing-reps", bm.timing_reps, "microbenchmark repetitions");
    c_bm->add_option("--out", bm.out, "CSV output path");

    ReportArgs rp;
    auto* c_rp = app.add_subcommand("report", "slot utilization and run summaries");
    c_rp->add_option("--preset", rp.preset, "HE preset");
    c_rp->add_option("--height", rp.height, "image height");
    c_rp->add_option("--width", rp.width, "image width");
    c_rp->add_option("--channels", rp.channels, "image channels");
    c_rp->add_option("--batch", rp.batch, "element-wise batch (0 = capacity)");
    c_rp->add_option("--metrics-dir", rp.metrics_dir, "directory of metrics CSVs to summarize");
    c_rp->add_option("--bench", rp.bench, "benchmark CSV to summarize");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_kg->parsed()) return run_keygen(kg);
        if (c_enc->parsed()) return run_encrypt(enc);
        if (c_inf->parsed()) return run_infer(inf);
        if (c_ev->parsed()) return run_eval_plain(ev);
        if (c_tt->parsed()) {
            apply_config_file(tt, c_tt);
            return run_train(tt, true);
        }
        if (c_ts->parsed()) {
            apply_config_file(ts, c_ts);
            return run_train(ts, false);
        }
        if (c_bm->parsed()) return run_benchmark(bm);
        if (c_rp->parsed()) return run_report(rp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
