#include "lambekdm/tensor.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "lambekdm/errors.hpp"

namespace lambekdm {

namespace {

size_t pow_size(int dim, size_t rank) {
    size_t n = 1;
    for (size_t i = 0; i < rank; ++i) n *= static_cast<size_t>(dim);
    return n;
}

// Odometer over `rank` digits in base `dim`; returns false after the last.
bool advance(std::vector<int>& idx, int dim) {
    for (size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < dim) return true;
        idx[i] = 0;
    }
    return false;
}

// Gauss-Jordan with partial pivoting.  Returns false when a pivot degenerates.
bool invert_matrix(int n, const std::vector<double>& a, std::vector<double>& inv,
                   double& det) {
    size_t N = static_cast<size_t>(n);
    std::vector<double> work = a;
    inv.assign(N * N, 0.0);
    for (size_t i = 0; i < N; ++i) inv[i * N + i] = 1.0;
    det = 1.0;
    for (size_t col = 0; col < N; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < N; ++r)
            if (std::fabs(work[r * N + col]) > std::fabs(work[piv * N + col])) piv = r;
        if (std::fabs(work[piv * N + col]) < 1e-13) return false;
        if (piv != col) {
            for (size_t c = 0; c < N; ++c) {
                std::swap(work[piv * N + c], work[col * N + c]);
                std::swap(inv[piv * N + c], inv[col * N + c]);
            }
            det = -det;
        }
        double p = work[col * N + col];
        det *= p;
        for (size_t c = 0; c < N; ++c) {
            work[col * N + c] /= p;
            inv[col * N + c] /= p;
        }
        for (size_t r = 0; r < N; ++r) {
            if (r == col) continue;
            double f = work[r * N + col];
            if (f == 0.0) continue;
            for (size_t c = 0; c < N; ++c) {
                work[r * N + c] -= f * work[col * N + c];
                inv[r * N + c] -= f * inv[col * N + c];
            }
        }
    }
    return true;
}

} // namespace

Tensor::Tensor(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)),
      comps_(pow_size(dim, variance_.size()), 0.0) {
    if (dim < 1) throw Error(Errc::DimMismatch, "tensor dimension must be positive");
}

Tensor::Tensor(int dim, std::vector<Variance> variance, std::vector<double> components)
    : dim_(dim), variance_(std::move(variance)), comps_(std::move(components)) {
    if (dim < 1) throw Error(Errc::DimMismatch, "tensor dimension must be positive");
    if (comps_.size() != pow_size(dim, variance_.size()))
        throw Error(Errc::ShapeMismatch,
                    "component count " + std::to_string(comps_.size()) +
                        " does not fill a rank-" + std::to_string(variance_.size()) +
                        " tensor of dimension " + std::to_string(dim));
}

Tensor Tensor::vector(std::vector<double> components) {
    int dim = static_cast<int>(components.size());
    return Tensor(dim, {Variance::Up}, std::move(components));
}

Tensor Tensor::covector(std::vector<double> components) {
    int dim = static_cast<int>(components.size());
    return Tensor(dim, {Variance::Down}, std::move(components));
}

Tensor Tensor::scalar(double value) { return Tensor(1, {}, {value}); }

size_t Tensor::offset(const std::vector<int>& index) const {
    if (index.size() != variance_.size())
        throw Error(Errc::SlotOutOfRange, "index rank does not match tensor rank");
    size_t off = 0;
    for (size_t i = 0; i < index.size(); ++i) {
        if (index[i] < 0 || index[i] >= dim_)
            throw Error(Errc::SlotOutOfRange, "index out of range");
        off = off * static_cast<size_t>(dim_) + static_cast<size_t>(index[i]);
    }
    return off;
}

double Tensor::at(const std::vector<int>& index) const { return comps_[offset(index)]; }

void Tensor::set(const std::vector<int>& index, double value) { comps_[offset(index)] = value; }

Metric::Metric(int dim, std::vector<double> entries) : dim_(dim), d_(std::move(entries)) {
    if (dim < 1) throw Error(Errc::DimMismatch, "metric dimension must be positive");
    if (d_.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim))
        throw Error(Errc::ShapeMismatch, "metric entry count does not fill a square matrix");
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::fabs(d(i, j) - d(j, i)) > 1e-12)
                throw Error(Errc::AsymmetricMetric,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") differs from its mirror");
    double det = 0.0;
    if (!invert_matrix(dim, d_, dinv_, det))
        throw Error(Errc::SingularMetric, "metric is not invertible");
    // Residual check: d * dinv must reproduce the identity.
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += d(i, k) * dinv(k, j);
            if (std::fabs(s - (i == j ? 1.0 : 0.0)) > 1e-9)
                throw Error(Errc::SingularMetric, "inverse residual exceeds 1e-9");
        }
}

Metric Metric::identity(int dim) {
    std::vector<double> d(static_cast<size_t>(dim) * static_cast<size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) d[static_cast<size_t>(i * dim + i)] = 1.0;
    return Metric(dim, std::move(d));
}

BasisChange::BasisChange(int dim, std::vector<double> entries)
    : dim_(dim), m_(std::move(entries)) {
    if (dim < 1) throw Error(Errc::DimMismatch, "basis change dimension must be positive");
    if (m_.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim))
        throw Error(Errc::ShapeMismatch, "basis change entry count does not fill a square matrix");
    double det = 0.0;
    if (!invert_matrix(dim, m_, minv_, det) || std::fabs(det) <= 1e-12)
        throw Error(Errc::SingularBasisChange, "basis change matrix is not invertible");
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
    if (a.dim() != b.dim())
        throw Error(Errc::DimMismatch, "tensor product operands have different dimensions");
    std::vector<Variance> var = a.variance();
    var.insert(var.end(), b.variance().begin(), b.variance().end());
    std::vector<double> comps;
    comps.reserve(a.components().size() * b.components().size());
    for (double x : a.components())
        for (double y : b.components()) comps.push_back(x * y);
    return Tensor(a.dim(), std::move(var), std::move(comps));
}

Tensor contract(const Tensor& t, size_t up_slot, size_t down_slot) {
    if (up_slot >= t.rank() || down_slot >= t.rank() || up_slot == down_slot)
        throw Error(Errc::SlotOutOfRange, "contraction slots invalid");
    if (t.variance()[up_slot] != Variance::Up || t.variance()[down_slot] != Variance::Down)
        throw Error(Errc::VarianceMismatch, "contraction needs one Up and one Down slot");

    std::vector<Variance> var;
    std::vector<size_t> keep;
    for (size_t i = 0; i < t.rank(); ++i)
        if (i != up_slot && i != down_slot) {
            var.push_back(t.variance()[i]);
            keep.push_back(i);
        }

    Tensor out(t.dim(), var);
    std::vector<int> ridx(var.size(), 0);
    std::vector<int> full(t.rank(), 0);
    do {
        for (size_t j = 0; j < keep.size(); ++j) full[keep[j]] = ridx[j];
        double s = 0.0;
        for (int k = 0; k < t.dim(); ++k) {
            full[up_slot] = k;
            full[down_slot] = k;
            s += t.at(full);
        }
        out.set(ridx, s);
    } while (advance(ridx, t.dim()));
    return out;
}

double inner_product(const Metric& m, const Tensor& v, const Tensor& w) {
    if (v.rank() != 1 || w.rank() != 1 || v.variance()[0] != Variance::Up ||
        w.variance()[0] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "inner product takes two vectors");
    if (v.dim() != m.dim() || w.dim() != m.dim())
        throw Error(Errc::DimMismatch, "inner product dimensions disagree");
    // Grouped so the floating-point sum is literally symmetric in v and w.
    double s = 0.0;
    for (int j = 0; j < m.dim(); ++j)
        s += m.d(j, j) * (v.components()[static_cast<size_t>(j)] *
                          w.components()[static_cast<size_t>(j)]);
    for (int j = 0; j < m.dim(); ++j)
        for (int j2 = j + 1; j2 < m.dim(); ++j2)
            s += m.d(j, j2) * (v.components()[static_cast<size_t>(j)] *
                                   w.components()[static_cast<size_t>(j2)] +
                               v.components()[static_cast<size_t>(j2)] *
                                   w.components()[static_cast<size_t>(j)]);
    return s;
}

double metric_norm(const Metric& m, const Tensor& v) {
    double q = inner_product(m, v, v);
    if (q <= 1e-12)
        throw Error(Errc::ZeroNorm, "vector norm vanishes under this metric");
    return std::sqrt(q);
}

double cosine_similarity(const Metric& m, const Tensor& v, const Tensor& w) {
    return inner_product(m, v, w) / (metric_norm(m, v) * metric_norm(m, w));
}

Tensor dual_vector(const Metric& m, const Tensor& v) {
    if (v.rank() != 1 || v.variance()[0] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "dual_vector takes a vector");
    if (v.dim() != m.dim()) throw Error(Errc::DimMismatch, "dual_vector dimensions disagree");
    std::vector<double> comps(static_cast<size_t>(m.dim()), 0.0);
    for (int j2 = 0; j2 < m.dim(); ++j2) {
        double s = 0.0;
        for (int j = 0; j < m.dim(); ++j)
            s += m.d(j, j2) * v.components()[static_cast<size_t>(j)];
        comps[static_cast<size_t>(j2)] = s;
    }
    return Tensor::covector(std::move(comps));
}

namespace {

Tensor move_index(const Metric& m, const Tensor& t, size_t slot, bool lower) {
    if (slot >= t.rank()) throw Error(Errc::SlotOutOfRange, "slot out of range");
    if (t.dim() != m.dim()) throw Error(Errc::DimMismatch, "metric dimension disagrees");
    Variance need = lower ? Variance::Up : Variance::Down;
    if (t.variance()[slot] != need)
        throw Error(Errc::VarianceMismatch,
                    lower ? "lower_index needs an Up slot" : "raise_index needs a Down slot");
    std::vector<Variance> var = t.variance();
    var[slot] = lower ? Variance::Down : Variance::Up;
    Tensor out(t.dim(), var);
    std::vector<int> idx(t.rank(), 0);
    do {
        double s = 0.0;
        std::vector<int> src = idx;
        for (int k = 0; k < t.dim(); ++k) {
            src[slot] = k;
            double g = lower ? m.d(idx[slot], k) : m.dinv(idx[slot], k);
            s += g * t.at(src);
        }
        out.set(idx, s);
    } while (advance(idx, t.dim()));
    return out;
}

} // namespace

Tensor lower_index(const Metric& m, const Tensor& t, size_t slot) {
    return move_index(m, t, slot, true);
}

Tensor raise_index(const Metric& m, const Tensor& t, size_t slot) {
    return move_index(m, t, slot, false);
}

Tensor canonicalize_mixed(const Metric& m, const Tensor& t) {
    if (t.rank() != 2 || t.variance()[0] != Variance::Down ||
        t.variance()[1] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "canonicalize_mixed takes a (Down, Up) tensor");
    if (t.dim() != m.dim()) throw Error(Errc::DimMismatch, "metric dimension disagrees");
    int n = t.dim();
    Tensor out(n, {Variance::Up, Variance::Down});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i2 = 0; i2 < n; ++i2)
                for (int j2 = 0; j2 < n; ++j2)
                    s += m.dinv(i, i2) * m.d(j, j2) * t.at({i2, j2});
            out.set({i, j}, s);
        }
    return out;
}

Tensor transform_vector(const BasisChange& bc, const Tensor& v) {
    if (v.rank() != 1 || v.variance()[0] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "transform_vector takes a vector");
    if (v.dim() != bc.dim()) throw Error(Errc::DimMismatch, "basis change dimension disagrees");
    std::vector<double> comps(static_cast<size_t>(bc.dim()), 0.0);
    for (int i2 = 0; i2 < bc.dim(); ++i2) {
        double s = 0.0;
        for (int i = 0; i < bc.dim(); ++i)
            s += bc.m(i, i2) * v.components()[static_cast<size_t>(i)];
        comps[static_cast<size_t>(i2)] = s;
    }
    return Tensor::vector(std::move(comps));
}

Metric transform_metric(const BasisChange& bc, const Metric& m) {
    if (m.dim() != bc.dim()) throw Error(Errc::DimMismatch, "basis change dimension disagrees");
    int n = m.dim();
    std::vector<double> d(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    s += bc.minv(a, i) * m.d(i, j) * bc.minv(b, j);
            d[static_cast<size_t>(a * n + b)] = s;
        }
    // Symmetrize away rounding noise before the constructor's symmetry check.
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double avg = 0.5 * (d[static_cast<size_t>(a * n + b)] +
                                d[static_cast<size_t>(b * n + a)]);
            d[static_cast<size_t>(a * n + b)] = d[static_cast<size_t>(b * n + a)] = avg;
        }
    return Metric(n, std::move(d));
}

double eps_l(const Tensor& dualv, const Tensor& u) {
    if (dualv.rank() != 1 || dualv.variance()[0] != Variance::Down)
        throw Error(Errc::VarianceMismatch, "eps_l takes a covector first");
    if (u.rank() != 1 || u.variance()[0] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "eps_l takes a vector second");
    if (dualv.dim() != u.dim()) throw Error(Errc::DimMismatch, "eps_l dimensions disagree");
    double s = 0.0;
    for (int j = 0; j < u.dim(); ++j)
        s += dualv.components()[static_cast<size_t>(j)] *
             u.components()[static_cast<size_t>(j)];
    return s;
}

double eps_r(const Tensor& v, const Tensor& dualu) {
    if (v.rank() != 1 || v.variance()[0] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "eps_r takes a vector first");
    if (dualu.rank() != 1 || dualu.variance()[0] != Variance::Down)
        throw Error(Errc::VarianceMismatch, "eps_r takes a covector second");
    if (v.dim() != dualu.dim()) throw Error(Errc::DimMismatch, "eps_r dimensions disagree");
    double s = 0.0;
    for (int j = 0; j < v.dim(); ++j)
        s += v.components()[static_cast<size_t>(j)] *
             dualu.components()[static_cast<size_t>(j)];
    return s;
}

namespace {

Tensor delta_pair(int dim, Variance first, Variance second) {
    Tensor out(dim, {first, second});
    for (int i = 0; i < dim; ++i) out.set({i, i}, 1.0);
    return out;
}

} // namespace

Tensor eta_l(const Metric& m) { return delta_pair(m.dim(), Variance::Up, Variance::Down); }

Tensor eta_r(const Metric& m) { return delta_pair(m.dim(), Variance::Down, Variance::Up); }

namespace {

struct FitState {
    int dim;
    std::vector<double> d; // symmetric, row-major

    double dot(const std::vector<double>& mat, const Tensor& a, const Tensor& b) const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                s += mat[static_cast<size_t>(i * dim + j)] *
                     a.components()[static_cast<size_t>(i)] *
                     b.components()[static_cast<size_t>(j)];
        return s;
    }
};

// Objective and gradient of sum (cos - target)^2 + reg * ||d - I||_F^2.
// Returns false when some sample norm is not positive under d.
bool fit_eval(const FitState& st, const std::vector<SimilarityJudgment>& samples, double reg,
              double& obj, std::vector<double>* grad) {
    int n = st.dim;
    obj = 0.0;
    if (grad) grad->assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
    for (const SimilarityJudgment& s : samples) {
        double a = st.dot(st.d, s.v, s.w);
        double b = st.dot(st.d, s.v, s.v);
        double c = st.dot(st.d, s.w, s.w);
        if (b <= 1e-12 || c <= 1e-12) return false;
        double rbc = 1.0 / std::sqrt(b * c);
        double cs = a * rbc;
        double e = cs - s.target;
        obj += e * e;
        if (grad) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double vi = s.v.components()[static_cast<size_t>(i)];
                    double vj = s.v.components()[static_cast<size_t>(j)];
                    double wi = s.w.components()[static_cast<size_t>(i)];
                    double wj = s.w.components()[static_cast<size_t>(j)];
                    double dcs = rbc * (vi * wj) -
                                 0.5 * cs * (vi * vj / b + wi * wj / c);
                    (*grad)[static_cast<size_t>(i * n + j)] += 2.0 * e * dcs;
                }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double diff = st.d[static_cast<size_t>(i * n + j)] - (i == j ? 1.0 : 0.0);
            obj += reg * diff * diff;
            if (grad) (*grad)[static_cast<size_t>(i * n + j)] += 2.0 * reg * diff;
        }
    if (grad) {
        // The metric is symmetric; keep the search direction in that subspace.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double avg = 0.5 * ((*grad)[static_cast<size_t>(i * n + j)] +
                                    (*grad)[static_cast<size_t>(j * n + i)]);
                (*grad)[static_cast<size_t>(i * n + j)] = avg;
                (*grad)[static_cast<size_t>(j * n + i)] = avg;
            }
    }
    return true;
}

bool feasible(int n, const std::vector<double>& d,
              const std::vector<SimilarityJudgment>& samples) {
    std::vector<double> inv;
    double det = 0.0;
    if (!invert_matrix(n, d, inv, det) || std::fabs(det) < 1e-9) return false;
    FitState st{n, d};
    double obj;
    return fit_eval(st, samples, 0.0, obj, nullptr);
}

} // namespace

MetricFitResult metric_fit(const std::vector<SimilarityJudgment>& samples, int dim,
                           const MetricFitOptions& opts) {
    if (samples.empty()) throw Error(Errc::ShapeMismatch, "metric_fit needs at least one sample");
    for (const SimilarityJudgment& s : samples)
        if (s.v.dim() != dim || s.w.dim() != dim || s.v.rank() != 1 || s.w.rank() != 1)
            throw Error(Errc::DimMismatch, "metric_fit sample shape disagrees with dim");

    size_t nn = static_cast<size_t>(dim) * static_cast<size_t>(dim);
    FitState st{dim, std::vector<double>(nn, 0.0)};
    for (int i = 0; i < dim; ++i) st.d[static_cast<size_t>(i * dim + i)] = 1.0;

    // Optional perturbed start for experimentation; absent variable keeps the
    // run fully reproducible from the identity.
    if (const char* seed_text = std::getenv("LAMBEK_DM_SEED")) {
        std::mt19937 rng(static_cast<unsigned>(std::strtoul(seed_text, nullptr, 10)));
        std::normal_distribution<double> noise(0.0, 1e-3);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                double x = noise(rng);
                st.d[static_cast<size_t>(i * dim + j)] += x;
                if (i != j) st.d[static_cast<size_t>(j * dim + i)] += x;
            }
    }

    if (!feasible(dim, st.d, samples))
        throw Error(Errc::ZeroNorm, "a sample has nonpositive norm at the starting metric");

    double obj;
    std::vector<double> grad;
    if (!fit_eval(st, samples, opts.reg, obj, &grad))
        throw Error(Errc::ZeroNorm, "a sample has nonpositive norm at the starting metric");

    std::vector<double> prev_d, prev_grad;
    double step = 1e-2;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm < opts.grad_tol) break;

        // Barzilai-Borwein step from the previous move, fallback to the last
        // accepted step length.
        if (!prev_d.empty()) {
            double sy = 0.0, yy = 0.0;
            for (size_t k = 0; k < st.d.size(); ++k) {
                double sk = st.d[k] - prev_d[k];
                double yk = grad[k] - prev_grad[k];
                sy += sk * yk;
                yy += yk * yk;
            }
            if (yy > 1e-300 && sy > 0.0) step = sy / yy;
        }
        step = std::min(std::max(step, 1e-12), 1e3);

        prev_d = st.d;
        prev_grad = grad;

        // Backtracking: accept a feasible step that does not increase the
        // objective; shrink otherwise.
        double trial_step = step;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> cand(st.d.size());
            for (size_t k = 0; k < st.d.size(); ++k)
                cand[k] = prev_d[k] - trial_step * prev_grad[k];
            if (feasible(dim, cand, samples)) {
                FitState cst{dim, cand};
                double cobj;
                std::vector<double> cgrad;
                if (fit_eval(cst, samples, opts.reg, cobj, &cgrad) && cobj <= obj) {
                    st.d = std::move(cand);
                    obj = cobj;
                    grad = std::move(cgrad);
                    step = trial_step;
                    moved = true;
                    break;
                }
            }
            trial_step *= 0.5;
        }
        if (!moved) break; // no descent direction left at representable steps
    }

    std::vector<double> inv;
    double det = 0.0;
    if (!invert_matrix(dim, st.d, inv, det) || std::fabs(det) < 1e-9)
        throw Error(Errc::DegenerateFit, "fitted metric left the invertible region");
    return MetricFitResult{Metric(dim, st.d), obj, it};
}

} // namespace lambekdm
