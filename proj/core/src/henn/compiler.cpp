// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/henn/compiler.hpp"

#include <cmath>
#include <map>
#include <variant>

namespace beaa::henn {

namespace {

using nn::Shape;

struct ConvStage {
    nn::Conv2d spec;
    const nn::ConvParams* params;
    double in_factor = 1.0, out_factor = 1.0;
};
struct ActStage {
    const nn::PolyActivation* poly;
    const nn::AffineParams* affine = nullptr;  // merged folded BatchNorm
    double in_factor = 1.0, out_factor = 1.0;
};
struct AffineStage {
    const nn::AffineParams* params;
    double in_factor = 1.0, out_factor = 1.0;
};
struct PoolStage {
    int window = 0;  // 0 = global
};
struct FireStage {
    nn::Fire spec;
    const nn::FireParams* params;
    double in_factor = 1.0, out_factor = 1.0;
};
struct ScalarStage {
    double factor = 1.0;
};

struct Stage {
    std::variant<ConvStage, ActStage, AffineStage, PoolStage, FireStage, ScalarStage> op;
    int layer_index = 0;
    std::string name;
};

struct Grid {
    Shape shape;
    std::vector<int> regs;  // (c, y, x) row-major
    int at(int c, int y, int x) const {
        return regs[(static_cast<std::size_t>(c) * shape.h + y) * shape.w + x];
    }
};

class Emitter {
public:
    Emitter(const he::HeParams& params, Shape in_shape, int num_classes) : params_(params) {
        plan_.params_fp = params.fingerprint();
        plan_.in_channels = in_shape.c;
        plan_.in_height = in_shape.h;
        plan_.in_width = in_shape.w;
        plan_.num_classes = num_classes;
        plan_.input_level = params.max_level();
        plan_.input_scale = params.default_scale;
        level_ = params.max_level();
        scale_ = params.default_scale;

        grid_.shape = in_shape;
        grid_.regs.resize(static_cast<std::size_t>(in_shape.c) * in_shape.h * in_shape.w);
        for (auto& r : grid_.regs) r = alloc();
        plan_.input_regs = grid_.regs;
    }

    void run(const std::vector<Stage>& stages) {
        // trim unused levels up front: every later op then runs on fewer primes
        int needed = 0;
        for (const auto& st : stages) {
            if (std::holds_alternative<ActStage>(st.op)) needed += 2;
            else if (std::holds_alternative<FireStage>(st.op)) needed += 2;
            else if (std::holds_alternative<PoolStage>(st.op)) needed += 0;
            else needed += 1;
        }
        if (needed < level_) emit_input_trim(level_ - needed);

        const int start_level = level_;
        for (const auto& st : stages) std::visit([&](const auto& s) { emit(s, st); }, st.op);
        plan_.output_regs = grid_.regs;
        plan_.depth = start_level - level_;
        plan_.n_regs = next_reg_;
        plan_.free_after_layer.assign(static_cast<std::size_t>(next_reg_), -1);
        finalize_liveness();
    }

    HePlan take() { return std::move(plan_); }

private:
    int alloc() { return next_reg_++; }

    void need_levels(int k, const Stage& st) const {
        if (level_ - k < 0) throw CompileDepthError(st.layer_index, st.name, level_, k);
    }

    void touch(int reg) { last_read_[reg] = static_cast<int>(plan_.layer_end.size()); }

    Instr& push(HePlan::Block& b, OpKind kind, int dst, int a, int bb = -1) {
        Instr in;
        in.kind = kind;
        in.dst = dst;
        in.a = a;
        in.b = bb;
        touch(a);
        if (bb >= 0) touch(bb);
        b.instrs.push_back(in);
        switch (kind) {
            case OpKind::cmult_scalar: ++plan_.counts.cmult; break;
            case OpKind::add: ++plan_.counts.add; break;
            case OpKind::add_plain_scalar: ++plan_.counts.add_plain; break;
            case OpKind::mult: ++plan_.counts.mult; break;
            case OpKind::rescale: ++plan_.counts.rescale; break;
            case OpKind::mod_drop: ++plan_.counts.mod_drop; break;
            case OpKind::relabel: break;
        }
        return b.instrs.back();
    }

    void barrier(const std::string& name) {
        plan_.layer_end.push_back(plan_.blocks.size());
        plan_.layer_names.push_back(name);
    }

    void emit_input_trim(int drops) {
        Grid next;
        next.shape = grid_.shape;
        next.regs.resize(grid_.regs.size());
        for (std::size_t i = 0; i < grid_.regs.size(); ++i) {
            HePlan::Block blk;
            int cur = grid_.regs[i];
            for (int k = 0; k < drops; ++k) {
                const int r = alloc();
                auto& di = push(blk, OpKind::mod_drop, r, cur);
                di.expect_level = level_ - 1 - k;
                di.expect_scale = scale_;
                cur = r;
            }
            next.regs[i] = cur;
            plan_.blocks.push_back(std::move(blk));
        }
        grid_ = std::move(next);
        level_ -= drops;
        barrier("input.trim");
    }

    // one conv-like stage: weights w(out, in, ky, kx) pre-scaled, bias pre-scaled
    void emit_conv(const nn::Conv2d& c, const nn::ConvParams& p, double in_factor, double out_factor,
                   const Stage& st, Grid& io_grid, const std::string& name) {
        need_levels(1, st);
        const Shape in = io_grid.shape;
        const Shape out = nn::layer_output_shape(nn::LayerSpec{c}, in);
        const double q = static_cast<double>(params_.modulus_chain[level_]);
        const double w_scale = params_.default_scale;
        const double stage_in_scale = scale_;
        const double out_scale = stage_in_scale * w_scale / q;

        Grid next;
        next.shape = out;
        next.regs.resize(static_cast<std::size_t>(out.c) * out.h * out.w);
        auto widx = [&](int oc, int ic, int ky, int kx) {
            return ((static_cast<std::size_t>(oc) * c.in_ch + ic) * c.ksize + ky) * c.ksize + kx;
        };
        for (int oc = 0; oc < out.c; ++oc)
            for (int oy = 0; oy < out.h; ++oy)
                for (int ox = 0; ox < out.w; ++ox) {
                    HePlan::Block blk;
                    int acc = -1;
                    for (int ic = 0; ic < c.in_ch; ++ic)
                        for (int ky = 0; ky < c.ksize; ++ky)
                            for (int kx = 0; kx < c.ksize; ++kx) {
                                const int iy = oy * c.stride - c.pad + ky;
                                const int ix = ox * c.stride - c.pad + kx;
                                if (iy < 0 || iy >= in.h || ix < 0 || ix >= in.w) continue;
                                const double w = p.w[widx(oc, ic, ky, kx)] * in_factor * out_factor;
                                const int t = alloc();
                                auto& mi = push(blk, OpKind::cmult_scalar, t, io_grid.at(ic, iy, ix));
                                mi.scalar = w;
                                mi.scale_arg = w_scale;
                                mi.expect_level = level_;
                                mi.expect_scale = stage_in_scale * w_scale;
                                if (acc < 0) {
                                    acc = t;
                                } else {
                                    const int s = alloc();
                                    auto& ai = push(blk, OpKind::add, s, acc, t);
                                    ai.expect_level = level_;
                                    ai.expect_scale = stage_in_scale * w_scale;
                                    acc = s;
                                }
                            }
                    const int r = alloc();
                    auto& ri = push(blk, OpKind::rescale, r, acc);
                    ri.expect_level = level_ - 1;
                    ri.expect_scale = out_scale;
                    int res = r;
                    if (!p.b.empty()) {
                        const int bsum = alloc();
                        auto& bi = push(blk, OpKind::add_plain_scalar, bsum, r);
                        bi.scalar = p.b[oc] * out_factor;
                        bi.scale_arg = out_scale;
                        bi.expect_level = level_ - 1;
                        bi.expect_scale = out_scale;
                        res = bsum;
                    }
                    next.regs[(static_cast<std::size_t>(oc) * out.h + oy) * out.w + ox] = res;
                    plan_.blocks.push_back(std::move(blk));
                }
        io_grid = std::move(next);
        level_ -= 1;
        scale_ = out_scale;
        barrier(name);
    }

    void emit(const ConvStage& s, const Stage& st) {
        emit_conv(s.spec, *s.params, s.in_factor, s.out_factor, st, grid_, st.name);
    }

    void emit(const FireStage& s, const Stage& st) {
        Grid squeeze_grid = grid_;
        emit_conv(s.spec.squeeze, s.params->squeeze, s.in_factor, 1.0, st, squeeze_grid,
                  st.name + ".squeeze");
        // expand branches share the squeeze output and concatenate on channels
        Grid g1 = squeeze_grid, g3 = squeeze_grid;
        const int save_level = level_;
        const double save_scale = scale_;
        emit_conv(s.spec.expand1, s.params->expand1, 1.0, s.out_factor, st, g1, st.name + ".expand1");
        level_ = save_level;
        scale_ = save_scale;
        emit_conv(s.spec.expand3, s.params->expand3, 1.0, s.out_factor, st, g3, st.name + ".expand3");

        Grid next;
        next.shape = {g1.shape.c + g3.shape.c, g1.shape.h, g1.shape.w};
        next.regs = g1.regs;
        next.regs.insert(next.regs.end(), g3.regs.begin(), g3.regs.end());
        grid_ = std::move(next);
    }

    void emit(const ActStage& s, const Stage& st) {
        need_levels(2, st);
        const auto& poly = *s.poly;
        const Shape in = grid_.shape;
        const double q_l = static_cast<double>(params_.modulus_chain[level_]);
        const double q_l1 = static_cast<double>(params_.modulus_chain[level_ - 1]);
        const double x_scale = scale_;
        const double c_scale = params_.default_scale;
        const double sq_scale = x_scale * x_scale;
        const double sqr_scale = sq_scale / q_l;
        const double target = sqr_scale * c_scale / q_l1;
        const double s2 = target * q_l1 / x_scale;
        const double f = s.in_factor;

        Grid next;
        next.shape = in;
        next.regs.resize(grid_.regs.size());
        for (int c = 0; c < in.c; ++c) {
            const double gamma = s.affine ? s.affine->scale[static_cast<std::size_t>(c)] : 1.0;
            const double beta = s.affine ? s.affine->shift[static_cast<std::size_t>(c)] : 0.0;
            for (int y = 0; y < in.h; ++y)
                for (int x = 0; x < in.w; ++x) {
                    const double* t = poly.triple(poly.triple_index(c, y, x));
                    const double e1 = s.out_factor * gamma * t[0] * f * f;
                    const double e2 = s.out_factor * gamma * t[1] * f;
                    const double e3 = s.out_factor * (gamma * t[2] + beta);
                    const int xin = grid_.at(c, y, x);
                    HePlan::Block blk;

                    const int sq = alloc();
                    auto& mi = push(blk, OpKind::mult, sq, xin, xin);
                    mi.expect_level = level_;
                    mi.expect_scale = sq_scale;
                    const int sqr = alloc();
                    auto& sri = push(blk, OpKind::rescale, sqr, sq);
                    sri.expect_level = level_ - 1;
                    sri.expect_scale = sqr_scale;
                    const int t1 = alloc();
                    auto& c1i = push(blk, OpKind::cmult_scalar, t1, sqr);
                    c1i.scalar = e1;
                    c1i.scale_arg = c_scale;
                    c1i.expect_level = level_ - 1;
                    c1i.expect_scale = sqr_scale * c_scale;
                    const int t1r = alloc();
                    auto& r1i = push(blk, OpKind::rescale, t1r, t1);
                    r1i.expect_level = level_ - 2;
                    r1i.expect_scale = target;

                    const int xd = alloc();
                    auto& di = push(blk, OpKind::mod_drop, xd, xin);
                    di.expect_level = level_ - 1;
                    di.expect_scale = x_scale;
                    const int t2 = alloc();
                    auto& c2i = push(blk, OpKind::cmult_scalar, t2, xd);
                    c2i.scalar = e2;
                    c2i.scale_arg = s2;
                    c2i.expect_level = level_ - 1;
                    c2i.expect_scale = x_scale * s2;
                    const int t2r = alloc();
                    auto& r2i = push(blk, OpKind::rescale, t2r, t2);
                    r2i.expect_level = level_ - 2;
                    r2i.expect_scale = (x_scale * s2) / q_l1;
                    const int t2l = alloc();
                    auto& li = push(blk, OpKind::relabel, t2l, t2r);
                    li.scalar = target;
                    li.expect_level = level_ - 2;
                    li.expect_scale = target;

                    const int sum = alloc();
                    auto& ai = push(blk, OpKind::add, sum, t1r, t2l);
                    ai.expect_level = level_ - 2;
                    ai.expect_scale = target;
                    const int out = alloc();
                    auto& pi = push(blk, OpKind::add_plain_scalar, out, sum);
                    pi.scalar = e3;
                    pi.scale_arg = target;
                    pi.expect_level = level_ - 2;
                    pi.expect_scale = target;

                    next.regs[(static_cast<std::size_t>(c) * in.h + y) * in.w + x] = out;
                    plan_.blocks.push_back(std::move(blk));
                }
        }
        grid_ = std::move(next);
        level_ -= 2;
        scale_ = target;
        barrier(st.name);
    }

    void emit(const AffineStage& s, const Stage& st) {
        need_levels(1, st);
        const Shape in = grid_.shape;
        const double q = static_cast<double>(params_.modulus_chain[level_]);
        const double c_scale = params_.default_scale;
        const double out_scale = scale_ * c_scale / q;
        Grid next;
        next.shape = in;
        next.regs.resize(grid_.regs.size());
        for (int c = 0; c < in.c; ++c)
            for (int y = 0; y < in.h; ++y)
                for (int x = 0; x < in.w; ++x) {
                    HePlan::Block blk;
                    const int t = alloc();
                    auto& mi = push(blk, OpKind::cmult_scalar, t, grid_.at(c, y, x));
                    mi.scalar = s.params->scale[static_cast<std::size_t>(c)] * s.in_factor * s.out_factor;
                    mi.scale_arg = c_scale;
                    mi.expect_level = level_;
                    mi.expect_scale = scale_ * c_scale;
                    const int r = alloc();
                    auto& ri = push(blk, OpKind::rescale, r, t);
                    ri.expect_level = level_ - 1;
                    ri.expect_scale = out_scale;
                    const int o = alloc();
                    auto& pi = push(blk, OpKind::add_plain_scalar, o, r);
                    pi.scalar = s.params->shift[static_cast<std::size_t>(c)] * s.out_factor;
                    pi.scale_arg = out_scale;
                    pi.expect_level = level_ - 1;
                    pi.expect_scale = out_scale;
                    next.regs[(static_cast<std::size_t>(c) * in.h + y) * in.w + x] = o;
                    plan_.blocks.push_back(std::move(blk));
                }
        grid_ = std::move(next);
        level_ -= 1;
        scale_ = out_scale;
        barrier(st.name);
    }

    void emit(const PoolStage& s, const Stage& st) {
        const Shape in = grid_.shape;
        const bool global = s.window == 0;
        const int win = global ? in.h : s.window;
        const Shape out = global ? Shape{in.c, 1, 1} : Shape{in.c, in.h / win, in.w / win};
        Grid next;
        next.shape = out;
        next.regs.resize(static_cast<std::size_t>(out.c) * out.h * out.w);
        for (int c = 0; c < out.c; ++c)
            for (int oy = 0; oy < out.h; ++oy)
                for (int ox = 0; ox < out.w; ++ox) {
                    std::vector<int> group;
                    if (global) {
                        for (int y = 0; y < in.h; ++y)
                            for (int x = 0; x < in.w; ++x) group.push_back(grid_.at(c, y, x));
                    } else {
                        for (int ky = 0; ky < win; ++ky)
                            for (int kx = 0; kx < win; ++kx)
                                group.push_back(grid_.at(c, oy * win + ky, ox * win + kx));
                    }
                    int acc = group[0];
                    if (group.size() > 1) {
                        HePlan::Block blk;
                        for (std::size_t i = 1; i < group.size(); ++i) {
                            const int sreg = alloc();
                            auto& ai = push(blk, OpKind::add, sreg, acc, group[i]);
                            ai.expect_level = level_;
                            ai.expect_scale = scale_;
                            acc = sreg;
                        }
                        plan_.blocks.push_back(std::move(blk));
                    } else {
                        touch(acc);
                    }
                    next.regs[(static_cast<std::size_t>(c) * out.h + oy) * out.w + ox] = acc;
                }
        grid_ = std::move(next);
        barrier(st.name);
    }

    void emit(const ScalarStage& s, const Stage& st) {
        need_levels(1, st);
        const double q = static_cast<double>(params_.modulus_chain[level_]);
        const double c_scale = params_.default_scale;
        const double out_scale = scale_ * c_scale / q;
        Grid next;
        next.shape = grid_.shape;
        next.regs.resize(grid_.regs.size());
        for (std::size_t i = 0; i < grid_.regs.size(); ++i) {
            HePlan::Block blk;
            const int t = alloc();
            auto& mi = push(blk, OpKind::cmult_scalar, t, grid_.regs[i]);
            mi.scalar = s.factor;
            mi.scale_arg = c_scale;
            mi.expect_level = level_;
            mi.expect_scale = scale_ * c_scale;
            const int r = alloc();
            auto& ri = push(blk, OpKind::rescale, r, t);
            ri.expect_level = level_ - 1;
            ri.expect_scale = out_scale;
            next.regs[i] = r;
            plan_.blocks.push_back(std::move(blk));
        }
        grid_ = std::move(next);
        level_ -= 1;
        scale_ = out_scale;
        barrier(st.name);
    }

    void finalize_liveness() {
        // register r may be freed once the layer holding its last read ends
        for (auto& [reg, layer] : last_read_) plan_.free_after_layer[static_cast<std::size_t>(reg)] = layer;
        for (int r : plan_.output_regs)
            plan_.free_after_layer[static_cast<std::size_t>(r)] = static_cast<int>(plan_.layer_end.size());
    }

    const he::HeParams& params_;
    HePlan plan_;
    Grid grid_;
    int next_reg_ = 0;
    int level_ = 0;
    double scale_ = 0.0;
    std::map<int, int> last_read_;
};

}  // namespace

HePlan compile(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
               const he::HeParams& params) {
    params.validate();
    spec.shapes();
    if (weights.layers.size() != spec.layers.size())
        throw std::invalid_argument("compile: weights do not match spec");

    // stage construction with pending pool factors
    std::vector<Stage> stages;
    double pending = 1.0;
    nn::Shape shape = spec.input_shape();
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& layer = spec.layers[i];
        const std::string tag = "layer" + std::to_string(i);
        if (std::holds_alternative<nn::BatchNorm>(layer))
            throw std::invalid_argument("compile: fold BatchNorm before compiling (layer " +
                                        std::to_string(i) + ")");
        if (const auto* conv = std::get_if<nn::Conv2d>(&layer)) {
            stages.push_back({ConvStage{*conv, &std::get<nn::ConvParams>(weights.layers[i]), pending, 1.0},
                              static_cast<int>(i), tag + ".conv"});
            pending = 1.0;
        } else if (const auto* act = std::get_if<nn::Activation>(&layer)) {
            if (act->kind != nn::ActKind::poly)
                throw std::invalid_argument("compile: non-polynomial activation at layer " +
                                            std::to_string(i));
            ActStage st;
            st.poly = &std::get<nn::ActParams>(weights.layers[i]).poly;
            st.in_factor = pending;
            pending = 1.0;
            // a folded BatchNorm directly after the activation merges into it
            if (i + 1 < spec.layers.size() && std::holds_alternative<nn::Affine>(spec.layers[i + 1])) {
                st.affine = &std::get<nn::AffineParams>(weights.layers[i + 1]);
                stages.push_back({st, static_cast<int>(i), tag + ".act+affine"});
                ++i;
            } else {
                stages.push_back({st, static_cast<int>(i), tag + ".act"});
            }
        } else if (std::holds_alternative<nn::Affine>(layer)) {
            stages.push_back({AffineStage{&std::get<nn::AffineParams>(weights.layers[i]), pending, 1.0},
                              static_cast<int>(i), tag + ".affine"});
            pending = 1.0;
        } else if (const auto* pool = std::get_if<nn::AvgPool>(&layer)) {
            stages.push_back({PoolStage{pool->window}, static_cast<int>(i), tag + ".pool"});
            pending /= static_cast<double>(pool->window) * pool->window;
        } else if (std::holds_alternative<nn::GlobalAvgPool>(layer)) {
            stages.push_back({PoolStage{0}, static_cast<int>(i), tag + ".gap"});
            pending /= static_cast<double>(shape.h) * shape.w;
        } else {
            const auto& fire = std::get<nn::Fire>(layer);
            stages.push_back({FireStage{fire, &std::get<nn::FireParams>(weights.layers[i]), pending, 1.0},
                              static_cast<int>(i), tag + ".fire"});
            pending = 1.0;
        }
        shape = nn::layer_output_shape(layer, shape);
    }
    if (pending != 1.0) {
        // trailing pools: fold the factor into the last stage with output
        // constants, or append an explicit scalar stage
        bool absorbed = false;
        for (auto it = stages.rbegin(); it != stages.rend() && !absorbed; ++it) {
            if (auto* cs = std::get_if<ConvStage>(&it->op)) {
                cs->out_factor *= pending;
                absorbed = true;
            } else if (auto* as = std::get_if<ActStage>(&it->op)) {
                as->out_factor *= pending;
                absorbed = true;
            } else if (auto* fs = std::get_if<AffineStage>(&it->op)) {
                fs->out_factor *= pending;
                absorbed = true;
            } else if (auto* fi = std::get_if<FireStage>(&it->op)) {
                fi->out_factor *= pending;
                absorbed = true;
            }
        }
        if (!absorbed)
            stages.push_back({ScalarStage{pending}, static_cast<int>(spec.layers.size()) - 1, "trailing.scale"});
    }

    Emitter em(params, spec.input_shape(), spec.num_classes);
    em.run(stages);
    return em.take();
}

}  // namespace beaa::henn
