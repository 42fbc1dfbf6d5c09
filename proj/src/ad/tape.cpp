#include "ad/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "util/errors.hpp"

namespace asqg::ad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_same_tape(Value a, Value b, const char* op) {
    if (a.tape == nullptr || b.tape == nullptr || a.tape != b.tape)
        throw ShapeError(std::string(op) + ": values belong to different tapes");
}

}  // namespace

const Tensor& Value::t() const { return tape->at(*this); }

Value Tape::leaf(Tensor t) {
    nodes_.push_back(Node{std::move(t), {}, {}, false});
    nodes_.back().needs_grad = nodes_.back().value.requires_grad;
    return Value{this, static_cast<int>(nodes_.size()) - 1};
}

Value Tape::constant(Tensor t) {
    t.requires_grad = false;
    return leaf(std::move(t));
}

Value Tape::emit(Tensor out, std::vector<int> parents, BackFn back) {
    bool needs = false;
    for (int p : parents) needs = needs || nodes_[static_cast<size_t>(p)].needs_grad;
    nodes_.push_back(Node{std::move(out), std::move(parents), std::move(back), needs});
    return Value{this, static_cast<int>(nodes_.size()) - 1};
}

const Tensor& Tape::at(Value v) const {
    return nodes_.at(static_cast<size_t>(v.id)).value;
}

const std::vector<double>& Tape::grad(Value v) const {
    if (!has_grads_) throw ShapeError("grad requested before backward");
    return grads_.at(static_cast<size_t>(v.id));
}

Tensor Tape::grad_tensor(Value v) const {
    return Tensor(at(v).shape, grad(v));
}

void Tape::backward(Value loss) {
    if (loss.tape != this) throw ShapeError("backward: loss from another tape");
    const Node& top = nodes_.at(static_cast<size_t>(loss.id));
    if (top.value.numel() != 1)
        throw ShapeError("backward: loss must be scalar, got " + top.value.shape_str());

    grads_.assign(nodes_.size(), {});
    for (size_t i = 0; i < nodes_.size(); ++i)
        grads_[i].assign(nodes_[i].value.numel(), 0.0);
    grads_[static_cast<size_t>(loss.id)][0] = 1.0;

    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[static_cast<size_t>(i)];
        if (n.back && n.needs_grad) n.back(*this, i);
    }

    for (size_t i = 0; i < nodes_.size(); ++i) {
        Node& n = nodes_[i];
        if (!n.back && n.value.requires_grad) n.value.grad = grads_[i];
    }
    has_grads_ = true;
}

// ---- elementwise ----

Value operator+(Value a, Value b) {
    check_same_tape(a, b, "add");
    const Tensor& ta = a.t();
    const Tensor& tb = b.t();
    check_same_shape(ta, tb, "add");
    Tensor out = ta;
    out.requires_grad = false;
    out.grad.reset();
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += tb.values[i];
    int ia = a.id, ib = b.id;
    return a.tape->emit(std::move(out), {ia, ib}, [ia, ib](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& ga = t.g(ia);
        auto& gb = t.g(ib);
        for (size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i];
            gb[i] += g[i];
        }
    });
}

Value operator-(Value a, Value b) {
    check_same_tape(a, b, "sub");
    const Tensor& ta = a.t();
    const Tensor& tb = b.t();
    check_same_shape(ta, tb, "sub");
    Tensor out = ta;
    out.requires_grad = false;
    out.grad.reset();
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= tb.values[i];
    int ia = a.id, ib = b.id;
    return a.tape->emit(std::move(out), {ia, ib}, [ia, ib](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& ga = t.g(ia);
        auto& gb = t.g(ib);
        for (size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i];
            gb[i] -= g[i];
        }
    });
}

Value operator*(Value a, Value b) {
    check_same_tape(a, b, "mul");
    const Tensor& ta = a.t();
    const Tensor& tb = b.t();
    check_same_shape(ta, tb, "mul");
    Tensor out = ta;
    out.requires_grad = false;
    out.grad.reset();
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] *= tb.values[i];
    int ia = a.id, ib = b.id;
    return a.tape->emit(std::move(out), {ia, ib}, [ia, ib](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& va = t.val(ia).values;
        const auto& vb = t.val(ib).values;
        auto& ga = t.g(ia);
        auto& gb = t.g(ib);
        for (size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i] * vb[i];
            gb[i] += g[i] * va[i];
        }
    });
}

Value scale(Value a, double k) {
    Tensor out = a.t();
    out.requires_grad = false;
    out.grad.reset();
    for (double& v : out.values) v *= k;
    int ia = a.id;
    return a.tape->emit(std::move(out), {ia}, [ia, k](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& ga = t.g(ia);
        for (size_t i = 0; i < g.size(); ++i) ga[i] += k * g[i];
    });
}

Value tanh(Value a) {
    Tensor out = a.t();
    out.requires_grad = false;
    out.grad.reset();
    for (double& v : out.values) v = std::tanh(v);
    int ia = a.id;
    return a.tape->emit(std::move(out), {ia}, [ia](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& y = t.val(self).values;
        auto& ga = t.g(ia);
        for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
    });
}

Value sigmoid(Value a) {
    Tensor out = a.t();
    out.requires_grad = false;
    out.grad.reset();
    for (double& v : out.values) v = 1.0 / (1.0 + std::exp(-v));
    int ia = a.id;
    return a.tape->emit(std::move(out), {ia}, [ia](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& y = t.val(self).values;
        auto& ga = t.g(ia);
        for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
    });
}

// ---- linear algebra ----

Value matmul(Value a, Value b) {
    check_same_tape(a, b, "matmul");
    const Tensor& ta = a.t();
    const Tensor& tb = b.t();
    if (ta.rank() != 2 || tb.rank() != 2 || ta.shape[1] != tb.shape[0])
        throw ShapeError("matmul: incompatible shapes " + ta.shape_str() + " x " + tb.shape_str());
    int m = ta.shape[0], k = ta.shape[1], n = tb.shape[1];
    Tensor out = Tensor::zeros({m, n});
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
            double av = ta.at(i, p);
            if (av == 0.0) continue;
            for (int j = 0; j < n; ++j)
                out.values[static_cast<size_t>(i) * n + j] += av * tb.at(p, j);
        }
    int ia = a.id, ib = b.id;
    return a.tape->emit(std::move(out), {ia, ib}, [ia, ib, m, k, n](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& va = t.val(ia).values;
        const auto& vb = t.val(ib).values;
        auto& ga = t.g(ia);
        auto& gb = t.g(ib);
        // dA = dC . B^T ; dB = A^T . dC
        for (int i = 0; i < m; ++i)
            for (int p = 0; p < k; ++p) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j)
                    acc += g[static_cast<size_t>(i) * n + j] * vb[static_cast<size_t>(p) * n + j];
                ga[static_cast<size_t>(i) * k + p] += acc;
            }
        for (int p = 0; p < k; ++p)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i)
                    acc += va[static_cast<size_t>(i) * k + p] * g[static_cast<size_t>(i) * n + j];
                gb[static_cast<size_t>(p) * n + j] += acc;
            }
    });
}

Value matvec(Value a, Value x) {
    check_same_tape(a, x, "matvec");
    const Tensor& ta = a.t();
    const Tensor& tx = x.t();
    if (ta.rank() != 2 || tx.rank() != 1 || ta.shape[1] != tx.shape[0])
        throw ShapeError("matvec: incompatible shapes " + ta.shape_str() + " x " + tx.shape_str());
    int m = ta.shape[0], k = ta.shape[1];
    Tensor out = Tensor::zeros({m});
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int p = 0; p < k; ++p) acc += ta.at(i, p) * tx.at(p);
        out.values[static_cast<size_t>(i)] = acc;
    }
    int ia = a.id, ix = x.id;
    return a.tape->emit(std::move(out), {ia, ix}, [ia, ix, m, k](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& va = t.val(ia).values;
        const auto& vx = t.val(ix).values;
        auto& ga = t.g(ia);
        auto& gx = t.g(ix);
        for (int i = 0; i < m; ++i) {
            double gi = g[static_cast<size_t>(i)];
            if (gi == 0.0) continue;
            for (int p = 0; p < k; ++p) {
                ga[static_cast<size_t>(i) * k + p] += gi * vx[static_cast<size_t>(p)];
                gx[static_cast<size_t>(p)] += gi * va[static_cast<size_t>(i) * k + p];
            }
        }
    });
}

Value vecmat(Value x, Value a) {
    check_same_tape(x, a, "vecmat");
    const Tensor& tx = x.t();
    const Tensor& ta = a.t();
    if (tx.rank() != 1 || ta.rank() != 2 || tx.shape[0] != ta.shape[0])
        throw ShapeError("vecmat: incompatible shapes " + tx.shape_str() + " x " + ta.shape_str());
    int k = ta.shape[0], n = ta.shape[1];
    Tensor out = Tensor::zeros({n});
    for (int p = 0; p < k; ++p) {
        double xv = tx.at(p);
        if (xv == 0.0) continue;
        for (int j = 0; j < n; ++j) out.values[static_cast<size_t>(j)] += xv * ta.at(p, j);
    }
    int ix = x.id, ia = a.id;
    return x.tape->emit(std::move(out), {ix, ia}, [ix, ia, k, n](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& vx = t.val(ix).values;
        const auto& va = t.val(ia).values;
        auto& gx = t.g(ix);
        auto& ga = t.g(ia);
        for (int p = 0; p < k; ++p) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += va[static_cast<size_t>(p) * n + j] * g[static_cast<size_t>(j)];
            gx[static_cast<size_t>(p)] += acc;
            double xv = vx[static_cast<size_t>(p)];
            if (xv == 0.0) continue;
            for (int j = 0; j < n; ++j) ga[static_cast<size_t>(p) * n + j] += xv * g[static_cast<size_t>(j)];
        }
    });
}

Value dot(Value x, Value y) {
    check_same_tape(x, y, "dot");
    const Tensor& tx = x.t();
    const Tensor& ty = y.t();
    if (tx.rank() != 1 || ty.rank() != 1) throw ShapeError("dot: rank-1 operands required");
    check_same_shape(tx, ty, "dot");
    double acc = 0.0;
    for (size_t i = 0; i < tx.values.size(); ++i) acc += tx.values[i] * ty.values[i];
    int ix = x.id, iy = y.id;
    return x.tape->emit(Tensor::scalar(acc), {ix, iy}, [ix, iy](Tape& t, int self) {
        double g = t.g(self)[0];
        const auto& vx = t.val(ix).values;
        const auto& vy = t.val(iy).values;
        auto& gx = t.g(ix);
        auto& gy = t.g(iy);
        for (size_t i = 0; i < vx.size(); ++i) {
            gx[i] += g * vy[i];
            gy[i] += g * vx[i];
        }
    });
}

Value add_rowvec(Value m, Value v) {
    check_same_tape(m, v, "add_rowvec");
    const Tensor& tm = m.t();
    const Tensor& tv = v.t();
    if (tm.rank() != 2 || tv.rank() != 1 || tm.shape[1] != tv.shape[0])
        throw ShapeError("add_rowvec: incompatible shapes " + tm.shape_str() + " + " + tv.shape_str());
    int r = tm.shape[0], c = tm.shape[1];
    Tensor out = tm;
    out.requires_grad = false;
    out.grad.reset();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out.values[static_cast<size_t>(i) * c + j] += tv.at(j);
    int im = m.id, iv = v.id;
    return m.tape->emit(std::move(out), {im, iv}, [im, iv, r, c](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& gm = t.g(im);
        auto& gv = t.g(iv);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                double gij = g[static_cast<size_t>(i) * c + j];
                gm[static_cast<size_t>(i) * c + j] += gij;
                gv[static_cast<size_t>(j)] += gij;
            }
    });
}

// ---- structural ----

Value concat(const std::vector<Value>& parts) {
    if (parts.empty()) throw ShapeError("concat: no parts");
    Tape* tape = parts[0].tape;
    std::vector<double> vals;
    std::vector<int> ids;
    std::vector<int> sizes;
    for (Value p : parts) {
        check_same_tape(parts[0], p, "concat");
        const Tensor& tp = p.t();
        if (tp.rank() != 1) throw ShapeError("concat: rank-1 parts required");
        vals.insert(vals.end(), tp.values.begin(), tp.values.end());
        ids.push_back(p.id);
        sizes.push_back(static_cast<int>(tp.values.size()));
    }
    Tensor out = Tensor::vector(std::move(vals));
    return tape->emit(std::move(out), ids, [ids, sizes](Tape& t, int self) {
        const auto& g = t.g(self);
        size_t off = 0;
        for (size_t p = 0; p < ids.size(); ++p) {
            auto& gp = t.g(ids[p]);
            for (int i = 0; i < sizes[p]; ++i) gp[static_cast<size_t>(i)] += g[off + static_cast<size_t>(i)];
            off += static_cast<size_t>(sizes[p]);
        }
    });
}

Value slice(Value v, int offset, int len) {
    const Tensor& tv = v.t();
    if (tv.rank() != 1) throw ShapeError("slice: rank-1 operand required");
    if (offset < 0 || len <= 0 || offset + len > tv.shape[0])
        throw ShapeError("slice: range [" + std::to_string(offset) + "," + std::to_string(offset + len) +
                         ") out of bounds for " + tv.shape_str());
    Tensor out = Tensor::vector(std::vector<double>(tv.values.begin() + offset, tv.values.begin() + offset + len));
    int iv = v.id;
    return v.tape->emit(std::move(out), {iv}, [iv, offset, len](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& gv = t.g(iv);
        for (int i = 0; i < len; ++i) gv[static_cast<size_t>(offset + i)] += g[static_cast<size_t>(i)];
    });
}

Value row(Value m, int i) {
    const Tensor& tm = m.t();
    if (tm.rank() != 2) throw ShapeError("row: rank-2 operand required");
    if (i < 0 || i >= tm.shape[0])
        throw ShapeError("row: index " + std::to_string(i) + " out of bounds for " + tm.shape_str());
    int c = tm.shape[1];
    Tensor out = Tensor::vector(std::vector<double>(tm.values.begin() + static_cast<size_t>(i) * c,
                                                    tm.values.begin() + static_cast<size_t>(i + 1) * c));
    int im = m.id;
    return m.tape->emit(std::move(out), {im}, [im, i, c](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& gm = t.g(im);
        for (int j = 0; j < c; ++j) gm[static_cast<size_t>(i) * c + j] += g[static_cast<size_t>(j)];
    });
}

Value stack_rows(const std::vector<Value>& rows) {
    if (rows.empty()) throw ShapeError("stack_rows: no rows");
    Tape* tape = rows[0].tape;
    int c = rows[0].t().shape[0];
    std::vector<double> vals;
    std::vector<int> ids;
    for (Value r : rows) {
        check_same_tape(rows[0], r, "stack_rows");
        const Tensor& tr = r.t();
        if (tr.rank() != 1 || tr.shape[0] != c)
            throw ShapeError("stack_rows: row shape mismatch " + tr.shape_str());
        vals.insert(vals.end(), tr.values.begin(), tr.values.end());
        ids.push_back(r.id);
    }
    Tensor out = Tensor::matrix(static_cast<int>(rows.size()), c, std::move(vals));
    return tape->emit(std::move(out), ids, [ids, c](Tape& t, int self) {
        const auto& g = t.g(self);
        for (size_t r = 0; r < ids.size(); ++r) {
            auto& gr = t.g(ids[r]);
            for (int j = 0; j < c; ++j) gr[static_cast<size_t>(j)] += g[r * static_cast<size_t>(c) + static_cast<size_t>(j)];
        }
    });
}

Value pick(Value v, int i) {
    const Tensor& tv = v.t();
    if (tv.rank() != 1) throw ShapeError("pick: rank-1 operand required");
    if (i < 0 || i >= tv.shape[0])
        throw ShapeError("pick: index " + std::to_string(i) + " out of bounds for " + tv.shape_str());
    int iv = v.id;
    return v.tape->emit(Tensor::scalar(tv.at(i)), {iv}, [iv, i](Tape& t, int self) {
        t.g(iv)[static_cast<size_t>(i)] += t.g(self)[0];
    });
}

Value sum(Value a) {
    const Tensor& ta = a.t();
    double acc = 0.0;
    for (double v : ta.values) acc += v;
    int ia = a.id;
    return a.tape->emit(Tensor::scalar(acc), {ia}, [ia](Tape& t, int self) {
        double g = t.g(self)[0];
        auto& ga = t.g(ia);
        for (double& gv : ga) gv += g;
    });
}

// ---- softmax family ----

namespace {

void check_softmax_input(const Tensor& tv, const std::vector<uint8_t>* valid, const char* op) {
    if (tv.rank() != 1) throw ShapeError(std::string(op) + ": rank-1 operand required");
    if (tv.shape[0] < 1) throw ShapeError(std::string(op) + ": empty input");
    for (double v : tv.values)
        if (std::isnan(v)) throw ShapeError(std::string(op) + ": NaN input");
    if (valid) {
        if (static_cast<int>(valid->size()) != tv.shape[0])
            throw ShapeError(std::string(op) + ": mask length mismatch");
        bool any = false;
        for (uint8_t m : *valid) any = any || (m != 0);
        if (!any) throw ShapeError(std::string(op) + ": all positions masked");
    }
}

}  // namespace

Value softmax(Value v, const std::vector<uint8_t>* valid) {
    const Tensor& tv = v.t();
    check_softmax_input(tv, valid, "softmax");
    int n = tv.shape[0];
    std::vector<uint8_t> mask = valid ? *valid : std::vector<uint8_t>(static_cast<size_t>(n), 1);
    double mx = kNegInf;
    for (int i = 0; i < n; ++i)
        if (mask[static_cast<size_t>(i)] && tv.at(i) > mx) mx = tv.at(i);
    Tensor out = Tensor::zeros({n});
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!mask[static_cast<size_t>(i)]) continue;
        double e = std::exp(tv.at(i) - mx);
        out.values[static_cast<size_t>(i)] = e;
        z += e;
    }
    for (double& o : out.values) o /= z;
    int iv = v.id;
    return v.tape->emit(std::move(out), {iv}, [iv, mask](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& y = t.val(self).values;
        auto& gv = t.g(iv);
        double gy = 0.0;
        for (size_t i = 0; i < y.size(); ++i) gy += g[i] * y[i];
        for (size_t i = 0; i < y.size(); ++i)
            if (mask[i]) gv[i] += y[i] * (g[i] - gy);
    });
}

Value log_softmax(Value v, const std::vector<uint8_t>* valid) {
    const Tensor& tv = v.t();
    check_softmax_input(tv, valid, "log_softmax");
    int n = tv.shape[0];
    std::vector<uint8_t> mask = valid ? *valid : std::vector<uint8_t>(static_cast<size_t>(n), 1);
    double mx = kNegInf;
    for (int i = 0; i < n; ++i)
        if (mask[static_cast<size_t>(i)] && tv.at(i) > mx) mx = tv.at(i);
    double z = 0.0;
    for (int i = 0; i < n; ++i)
        if (mask[static_cast<size_t>(i)]) z += std::exp(tv.at(i) - mx);
    double lz = mx + std::log(z);
    Tensor out = Tensor::full({n}, kNegInf);
    for (int i = 0; i < n; ++i)
        if (mask[static_cast<size_t>(i)]) out.values[static_cast<size_t>(i)] = tv.at(i) - lz;
    int iv = v.id;
    return v.tape->emit(std::move(out), {iv}, [iv, mask](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& y = t.val(self).values;
        auto& gv = t.g(iv);
        double gsum = 0.0;
        for (size_t i = 0; i < y.size(); ++i)
            if (mask[i]) gsum += g[i];
        for (size_t i = 0; i < y.size(); ++i)
            if (mask[i]) gv[i] += g[i] - std::exp(y[i]) * gsum;
    });
}

Value dropout(Value x, double p_drop, bool training, Rng& rng) {
    if (p_drop < 0.0 || p_drop >= 1.0)
        throw ShapeError("dropout: p_drop must be in [0,1), got " + std::to_string(p_drop));
    if (!training || p_drop == 0.0) return x;
    const Tensor& tx = x.t();
    double keep = 1.0 - p_drop;
    auto mask = std::make_shared<std::vector<double>>(tx.numel());
    Tensor out = tx;
    out.requires_grad = false;
    out.grad.reset();
    for (size_t i = 0; i < out.values.size(); ++i) {
        double m = rng.uniform() < p_drop ? 0.0 : 1.0 / keep;
        (*mask)[i] = m;
        out.values[i] *= m;
    }
    int ix = x.id;
    return x.tape->emit(std::move(out), {ix}, [ix, mask](Tape& t, int self) {
        const auto& g = t.g(self);
        auto& gx = t.g(ix);
        for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (*mask)[i];
    });
}

Value weight_norm(Value direction, Value gain) {
    check_same_tape(direction, gain, "weight_norm");
    const Tensor& td = direction.t();
    const Tensor& tg = gain.t();
    if (tg.numel() != 1) throw ShapeError("weight_norm: gain must be scalar");
    double norm_sq = 0.0;
    for (double v : td.values) norm_sq += v * v;
    double norm = std::sqrt(norm_sq);
    if (norm == 0.0) throw ShapeError("weight_norm: zero-norm direction");
    double s = tg.values[0] / norm;
    Tensor out = td;
    out.requires_grad = false;
    out.grad.reset();
    for (double& v : out.values) v *= s;
    int id = direction.id, ig = gain.id;
    return direction.tape->emit(std::move(out), {id, ig}, [id, ig, norm](Tape& t, int self) {
        const auto& g = t.g(self);
        const auto& d = t.val(id).values;
        double gain_v = t.val(ig).values[0];
        auto& gd = t.g(id);
        auto& gg = t.g(ig);
        double gd_dot = 0.0;  // sum_k g_k d_k
        for (size_t i = 0; i < g.size(); ++i) gd_dot += g[i] * d[i];
        gg[0] += gd_dot / norm;
        double c = gd_dot / (norm * norm);
        for (size_t i = 0; i < g.size(); ++i) gd[i] += (gain_v / norm) * (g[i] - d[i] * c);
    });
}

}  // namespace asqg::ad
