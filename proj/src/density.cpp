#include "lambekdm/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lambekdm/errors.hpp"

namespace lambekdm {

namespace {

size_t pair_count(const SpaceFactor& f) {
    return static_cast<size_t>(f.dim) * static_cast<size_t>(f.dim);
}

size_t component_count(const std::vector<SpaceFactor>& factors) {
    size_t total = 1;
    for (const auto& f : factors) total *= pair_count(f);
    return total;
}

std::string variance_name(FactorVariance v) {
    switch (v) {
        case FactorVariance::Standard: return "standard";
        case FactorVariance::Dual: return "dual";
        case FactorVariance::Mixed: return "mixed";
    }
    return "?";
}

std::string describe(const SpaceFactor& f) {
    return f.label + "." + std::to_string(f.subsystem) + " " + variance_name(f.variance());
}

// Multiplies the n x n stored slice of one factor by fixed matrices on both
// sides, for every setting of the surrounding indices.
void conjugate_axis(std::vector<double>& comps, size_t head, int n, size_t tail,
                    const std::vector<double>& left, const std::vector<double>& right) {
    const size_t nn = static_cast<size_t>(n) * n;
    std::vector<double> slice(nn), tmp(nn);
    for (size_t h = 0; h < head; ++h) {
        for (size_t q = 0; q < tail; ++q) {
            for (size_t p = 0; p < nn; ++p)
                slice[p] = comps[(h * nn + p) * tail + q];
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k)
                        acc += slice[static_cast<size_t>(r) * n + k] * right[static_cast<size_t>(k) * n + c];
                    tmp[static_cast<size_t>(r) * n + c] = acc;
                }
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k)
                        acc += left[static_cast<size_t>(r) * n + k] * tmp[static_cast<size_t>(k) * n + c];
                    slice[static_cast<size_t>(r) * n + c] = acc;
                }
            for (size_t p = 0; p < nn; ++p)
                comps[(h * nn + p) * tail + q] = slice[p];
        }
    }
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations; dimensions
// here are small, so simplicity beats asymptotics.
std::vector<double> symmetric_eigenvalues(int n, std::vector<double> a) {
    auto at = [&](int r, int c) -> double& { return a[static_cast<size_t>(r) * n + c]; };
    for (int sweep = 0; sweep < 120; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eigs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eigs[static_cast<size_t>(i)] = at(i, i);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

} // namespace

FactorVariance SpaceFactor::variance() const {
    if (row == LegKind::Standard && col == LegKind::Standard) return FactorVariance::Standard;
    if (row == LegKind::Dual && col == LegKind::Dual) return FactorVariance::Dual;
    return FactorVariance::Mixed;
}

SpaceFactor standard_factor(std::string label, int subsystem, int dim) {
    return SpaceFactor{std::move(label), subsystem, dim, LegKind::Standard, LegKind::Standard};
}

SpaceFactor dual_factor(std::string label, int subsystem, int dim) {
    return SpaceFactor{std::move(label), subsystem, dim, LegKind::Dual, LegKind::Dual};
}

DMTensor::DMTensor(std::vector<SpaceFactor> factors)
    : DMTensor(std::move(factors), {}) {}

DMTensor::DMTensor(std::vector<SpaceFactor> factors, std::vector<double> components)
    : factors_(std::move(factors)), comps_(std::move(components)) {
    for (const auto& f : factors_)
        if (f.dim <= 0)
            throw Error(Errc::ShapeMismatch, "factor " + f.label + " needs a positive dimension");
    size_t want = component_count(factors_);
    if (comps_.empty())
        comps_.assign(want, 0.0);
    else if (comps_.size() != want)
        throw Error(Errc::ShapeMismatch, "expected " + std::to_string(want) + " components, got " +
                                             std::to_string(comps_.size()));
}

DMTensor DMTensor::scalar(double value) {
    return DMTensor({}, {value});
}

size_t DMTensor::offset(const std::vector<std::pair<int, int>>& index) const {
    if (index.size() != factors_.size())
        throw Error(Errc::ShapeMismatch, "index has " + std::to_string(index.size()) +
                                             " pairs for " + std::to_string(factors_.size()) + " factors");
    size_t off = 0;
    for (size_t k = 0; k < factors_.size(); ++k) {
        int n = factors_[k].dim;
        auto [r, c] = index[k];
        if (r < 0 || r >= n || c < 0 || c >= n)
            throw Error(Errc::SlotOutOfRange, "pair (" + std::to_string(r) + "," + std::to_string(c) +
                                                  ") out of range for dimension " + std::to_string(n));
        off = off * pair_count(factors_[k]) + static_cast<size_t>(r) * n + c;
    }
    return off;
}

double DMTensor::at(const std::vector<std::pair<int, int>>& index) const {
    return comps_[offset(index)];
}

void DMTensor::set(const std::vector<std::pair<int, int>>& index, double value) {
    comps_[offset(index)] = value;
}

BigMetric::BigMetric(Metric base) : base_(std::move(base)) {
    const int n = base_.dim();
    const size_t nn = static_cast<size_t>(n) * n;
    big_.assign(nn * nn, 0.0);
    // Row = stored out pair (j', j), column = stored in pair (i, i'); lowering
    // contracts each in index with one d entry.
    for (int jp = 0; jp < n; ++jp)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                for (int ip = 0; ip < n; ++ip)
                    big_[(static_cast<size_t>(jp) * n + j) * nn + static_cast<size_t>(i) * n + ip] =
                        base_.d(i, jp) * base_.d(ip, j);
}

double BigMetric::component(int out_pair, int in_pair) const {
    const size_t nn = static_cast<size_t>(dim()) * dim();
    if (out_pair < 0 || in_pair < 0 || static_cast<size_t>(out_pair) >= nn ||
        static_cast<size_t>(in_pair) >= nn)
        throw Error(Errc::SlotOutOfRange, "pair index outside the lifted metric");
    return big_[static_cast<size_t>(out_pair) * nn + static_cast<size_t>(in_pair)];
}

namespace {

const SpaceFactor& single_standard_factor(const BigMetric& m, const DMTensor& t) {
    if (t.factors().size() != 1)
        throw Error(Errc::ShapeMismatch, "metric lowering expects a single factor, got " +
                                             std::to_string(t.factors().size()));
    const SpaceFactor& f = t.factors().front();
    if (f.variance() != FactorVariance::Standard)
        throw Error(Errc::VarianceMismatch, "metric lowering expects a standard factor, got " + describe(f));
    if (f.dim != m.dim())
        throw Error(Errc::DimMismatch, "factor dimension " + std::to_string(f.dim) +
                                           " does not match metric dimension " + std::to_string(m.dim()));
    return f;
}

} // namespace

DMTensor BigMetric::apply_lifted(const DMTensor& t) const {
    const SpaceFactor& f = single_standard_factor(*this, t);
    const size_t nn = pair_count(f);
    std::vector<double> out(nn, 0.0);
    for (size_t J = 0; J < nn; ++J) {
        double acc = 0.0;
        for (size_t Jp = 0; Jp < nn; ++Jp) acc += big_[J * nn + Jp] * t.components()[Jp];
        out[J] = acc;
    }
    return DMTensor({dual_factor(f.label, f.subsystem, f.dim)}, std::move(out));
}

DMTensor BigMetric::apply_base(const DMTensor& t) const {
    const SpaceFactor& f = single_standard_factor(*this, t);
    std::vector<double> comps = t.components();
    conjugate_axis(comps, 1, f.dim, 1, base_.components(), base_.components());
    return DMTensor({dual_factor(f.label, f.subsystem, f.dim)}, std::move(comps));
}

std::string PermutationOp::print() const {
    std::string marker = kind == PermKind::Upper ? "P^" : "P_";
    std::string ids;
    if (sub1 < 10 && sub1 >= 0 && sub2 < 10 && sub2 >= 0)
        ids = std::to_string(sub1) + std::to_string(sub2);
    else
        ids = std::to_string(sub1) + "," + std::to_string(sub2);
    return marker + ids;
}

namespace {

PermutationOp make_perm(PermKind kind, std::string label, int sub1, int sub2) {
    if (sub1 == sub2)
        throw Error(Errc::ParseError, "permutation needs two distinct subsystems, got " +
                                          std::to_string(sub1) + " twice");
    return PermutationOp{kind, std::move(label), sub1, sub2};
}

} // namespace

PermutationOp upper_perm(std::string label, int sub1, int sub2) {
    return make_perm(PermKind::Upper, std::move(label), sub1, sub2);
}

PermutationOp lower_perm(std::string label, int sub1, int sub2) {
    return make_perm(PermKind::Lower, std::move(label), sub1, sub2);
}

DMTensor dm_from_vector(const Tensor& v, const SpaceFactor& factor) {
    if (v.rank() != 1 || v.variance()[0] != Variance::Up)
        throw Error(Errc::VarianceMismatch, "pure state ingestion expects a contravariant vector");
    if (factor.variance() != FactorVariance::Standard)
        throw Error(Errc::VarianceMismatch, "pure state ingestion targets a standard factor, got " +
                                                describe(factor));
    if (v.dim() != factor.dim)
        throw Error(Errc::DimMismatch, "vector dimension " + std::to_string(v.dim()) +
                                           " does not match factor dimension " + std::to_string(factor.dim));
    const int n = factor.dim;
    std::vector<double> comps(pair_count(factor));
    for (int i = 0; i < n; ++i)
        for (int ip = 0; ip < n; ++ip)
            comps[static_cast<size_t>(i) * n + ip] = v.components()[static_cast<size_t>(i)] *
                                                     v.components()[static_cast<size_t>(ip)];
    return DMTensor({factor}, std::move(comps));
}

DMTensor dm_delta(const SpaceFactor& factor) {
    const int n = factor.dim;
    std::vector<double> comps(pair_count(factor), 0.0);
    for (int i = 0; i < n; ++i) comps[static_cast<size_t>(i) * n + i] = 1.0;
    return DMTensor({factor}, std::move(comps));
}

DMTensor dm_mix(const std::vector<double>& weights, const std::vector<DMTensor>& dms) {
    if (dms.empty() || weights.size() != dms.size())
        throw Error(Errc::WeightError, "mixture needs one weight per tensor, got " +
                                           std::to_string(weights.size()) + " weights for " +
                                           std::to_string(dms.size()) + " tensors");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0)
            throw Error(Errc::WeightError, "mixture weight " + std::to_string(w) + " is negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(Errc::WeightError, "mixture weights sum to " + std::to_string(total));
    for (const auto& dm : dms)
        if (!dm.same_factors(dms.front()))
            throw Error(Errc::ShapeMismatch, "mixture tensors live in different spaces");
    std::vector<double> comps(dms.front().size(), 0.0);
    for (size_t k = 0; k < dms.size(); ++k)
        for (size_t p = 0; p < comps.size(); ++p) comps[p] += weights[k] * dms[k].components()[p];
    return DMTensor(dms.front().factors(), std::move(comps));
}

DMTensor dm_tensor(const DMTensor& a, const DMTensor& b) {
    std::vector<SpaceFactor> factors = a.factors();
    factors.insert(factors.end(), b.factors().begin(), b.factors().end());
    std::vector<double> comps(a.size() * b.size());
    for (size_t pa = 0; pa < a.size(); ++pa)
        for (size_t pb = 0; pb < b.size(); ++pb)
            comps[pa * b.size() + pb] = a.components()[pa] * b.components()[pb];
    return DMTensor(std::move(factors), std::move(comps));
}

DMTensor dm_multiply(const DMTensor& a, const DMTensor& b) {
    if (a.factors().empty() || b.factors().empty())
        throw Error(Errc::NoContractibleBoundary, "multiplication needs a factor on each side of the boundary");
    const SpaceFactor& fa = a.factors().back();
    const SpaceFactor& fb = b.factors().front();
    bool variance_pair =
        (fa.variance() == FactorVariance::Standard && fb.variance() == FactorVariance::Dual) ||
        (fa.variance() == FactorVariance::Dual && fb.variance() == FactorVariance::Standard);
    if (!variance_pair || fa.label != fb.label || fa.subsystem != fb.subsystem)
        throw Error(Errc::NoContractibleBoundary,
                    "boundary factors " + describe(fa) + " and " + describe(fb) +
                        " are not a standard/dual pair over one space");
    if (fa.dim != fb.dim)
        throw Error(Errc::DimMismatch, "boundary factors of " + fa.label + " have dimensions " +
                                           std::to_string(fa.dim) + " and " + std::to_string(fb.dim));

    const int n = fa.dim;
    size_t head = 1;
    for (size_t k = 0; k + 1 < a.factors().size(); ++k) head *= pair_count(a.factors()[k]);
    size_t tail = 1;
    for (size_t k = 1; k < b.factors().size(); ++k) tail *= pair_count(b.factors()[k]);

    std::vector<SpaceFactor> factors(a.factors().begin(), a.factors().end() - 1);
    factors.push_back(SpaceFactor{fa.label, fa.subsystem, n, fa.row, fb.col});
    factors.insert(factors.end(), b.factors().begin() + 1, b.factors().end());

    std::vector<double> comps(head * pair_count(fa) * tail, 0.0);
    const auto& A = a.components();
    const auto& B = b.components();
    for (size_t h = 0; h < head; ++h)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                for (size_t q = 0; q < tail; ++q) {
                    double acc = 0.0;
                    for (int t = 0; t < n; ++t)
                        acc += A[(h * n + static_cast<size_t>(r)) * n + t] *
                               B[(static_cast<size_t>(t) * n + c) * tail + q];
                    comps[((h * n + static_cast<size_t>(r)) * n + c) * tail + q] = acc;
                }
    return DMTensor(std::move(factors), std::move(comps));
}

DMTensor dm_trace(const DMTensor& t, const TraceTarget& target) {
    size_t k = t.factors().size();
    for (size_t i = 0; i < t.factors().size(); ++i) {
        const SpaceFactor& f = t.factors()[i];
        if (f.label == target.label && f.subsystem == target.subsystem &&
            f.variance() == FactorVariance::Mixed) {
            k = i;
            break;
        }
    }
    if (k == t.factors().size())
        throw Error(Errc::FactorNotFound, "no mixed residue over " + target.label + "." +
                                              std::to_string(target.subsystem) + " to trace");

    const int n = t.factors()[k].dim;
    size_t head = 1, tail = 1;
    for (size_t i = 0; i < k; ++i) head *= pair_count(t.factors()[i]);
    for (size_t i = k + 1; i < t.factors().size(); ++i) tail *= pair_count(t.factors()[i]);

    std::vector<SpaceFactor> factors;
    for (size_t i = 0; i < t.factors().size(); ++i)
        if (i != k) factors.push_back(t.factors()[i]);

    const size_t nn = static_cast<size_t>(n) * n;
    std::vector<double> comps(head * tail, 0.0);
    for (size_t h = 0; h < head; ++h)
        for (size_t q = 0; q < tail; ++q) {
            double acc = 0.0;
            for (int r = 0; r < n; ++r)
                acc += t.components()[(h * nn + static_cast<size_t>(r) * n + r) * tail + q];
            comps[h * tail + q] = acc;
        }
    return DMTensor(std::move(factors), std::move(comps));
}

DMTensor contract_factor_pair(const DMTensor& t, size_t i, size_t j) {
    if (i >= t.factors().size() || j >= t.factors().size() || i == j)
        throw Error(Errc::SlotOutOfRange, "factor pair positions " + std::to_string(i) + ", " +
                                              std::to_string(j) + " invalid for " +
                                              std::to_string(t.factors().size()) + " factors");
    size_t sp = i, dp = j;
    if (t.factors()[sp].variance() == FactorVariance::Dual) std::swap(sp, dp);
    const SpaceFactor fs = t.factors()[sp];
    const SpaceFactor fd = t.factors()[dp];
    if (fs.variance() != FactorVariance::Standard || fd.variance() != FactorVariance::Dual ||
        fs.label != fd.label || fs.subsystem != fd.subsystem)
        throw Error(Errc::FactorMismatch,
                    "cannot contract " + describe(fs) + " against " + describe(fd));
    if (fs.dim != fd.dim)
        throw Error(Errc::DimMismatch, "paired factors over " + fs.label + " have dims " +
                                           std::to_string(fs.dim) + " and " +
                                           std::to_string(fd.dim));

    std::vector<size_t> stride(t.factors().size(), 1);
    for (size_t k = t.factors().size(); k-- > 1;)
        stride[k - 1] = stride[k] * pair_count(t.factors()[k]);

    std::vector<SpaceFactor> factors;
    std::vector<size_t> kept;
    for (size_t k = 0; k < t.factors().size(); ++k)
        if (k != sp && k != dp) {
            factors.push_back(t.factors()[k]);
            kept.push_back(k);
        }

    const int n = fs.dim;
    std::vector<double> comps(component_count(factors), 0.0);
    for (size_t o = 0; o < comps.size(); ++o) {
        size_t base = 0, rem = o;
        for (size_t k = kept.size(); k-- > 0;) {
            size_t pc = pair_count(factors[k]);
            base += (rem % pc) * stride[kept[k]];
            rem /= pc;
        }
        double acc = 0.0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                acc += t.components()[base + (static_cast<size_t>(x) * n + y) * stride[sp] +
                                      (static_cast<size_t>(y) * n + x) * stride[dp]];
        comps[o] = acc;
    }
    return DMTensor(std::move(factors), std::move(comps));
}

DMTensor big_metric_apply(const BigMetric& m, const DMTensor& t) {
    return m.apply_lifted(t);
}

DMTensor dual_functor(const DMTensor& t, const std::map<std::string, Metric>& metrics) {
    const size_t K = t.factors().size();
    std::vector<double> comps = t.components();

    // Convert each factor's components through its label's metric in place.
    size_t tail = comps.size();
    size_t head = 1;
    for (size_t k = 0; k < K; ++k) {
        const SpaceFactor& f = t.factors()[k];
        auto it = metrics.find(f.label);
        if (it == metrics.end())
            throw Error(Errc::MissingInterpretation, "no metric registered for space label " + f.label);
        const Metric& m = it->second;
        if (m.dim() != f.dim)
            throw Error(Errc::DimMismatch, "metric for " + f.label + " has dimension " +
                                               std::to_string(m.dim()) + ", factor has " +
                                               std::to_string(f.dim));
        tail /= pair_count(f);
        const auto& left = f.row == LegKind::Standard ? m.components() : m.inverse_components();
        const auto& right = f.col == LegKind::Standard ? m.components() : m.inverse_components();
        conjugate_axis(comps, head, f.dim, tail, left, right);
        head *= pair_count(f);
    }

    // Reverse the factor axes and flip every leg.
    std::vector<SpaceFactor> factors;
    for (size_t k = K; k-- > 0;) {
        SpaceFactor f = t.factors()[k];
        f.row = f.row == LegKind::Standard ? LegKind::Dual : LegKind::Standard;
        f.col = f.col == LegKind::Standard ? LegKind::Dual : LegKind::Standard;
        factors.push_back(f);
    }
    std::vector<double> out(comps.size());
    std::vector<size_t> pair_sizes(K), digits(K, 0);
    for (size_t k = 0; k < K; ++k) pair_sizes[k] = pair_count(t.factors()[k]);
    for (size_t src = 0; src < comps.size(); ++src) {
        size_t dst = 0;
        for (size_t k = K; k-- > 0;) dst = dst * pair_sizes[k] + digits[k];
        out[dst] = comps[src];
        for (size_t k = K; k-- > 0;) {
            if (++digits[k] < pair_sizes[k]) break;
            digits[k] = 0;
        }
    }
    return DMTensor(std::move(factors), std::move(out));
}

DMTensor apply_permutation(const PermutationOp& p, const DMTensor& t) {
    if (p.sub1 == p.sub2)
        throw Error(Errc::ParseError, "permutation needs two distinct subsystems");
    FactorVariance acted = p.kind == PermKind::Upper ? FactorVariance::Standard : FactorVariance::Dual;
    std::vector<SpaceFactor> factors = t.factors();
    for (auto& f : factors) {
        if (f.label != p.label || f.variance() != acted) continue;
        if (f.subsystem == p.sub1)
            f.subsystem = p.sub2;
        else if (f.subsystem == p.sub2)
            f.subsystem = p.sub1;
    }
    return DMTensor(std::move(factors), t.components());
}

TraceTarget apply_permutation(const PermutationOp& p, const TraceTarget& target) {
    if (p.sub1 == p.sub2)
        throw Error(Errc::ParseError, "permutation needs two distinct subsystems");
    if (p.kind != PermKind::Lower || target.label != p.label) return target;
    TraceTarget out = target;
    if (out.subsystem == p.sub1)
        out.subsystem = p.sub2;
    else if (out.subsystem == p.sub2)
        out.subsystem = p.sub1;
    return out;
}

DMValidation dm_validate(const DMTensor& t) {
    if (t.factors().size() != 1)
        throw Error(Errc::ShapeMismatch, "state validation covers single-factor tensors, got " +
                                             std::to_string(t.factors().size()) + " factors");
    const SpaceFactor& f = t.factors().front();
    if (f.variance() == FactorVariance::Mixed)
        throw Error(Errc::VarianceMismatch, "state validation does not apply to a mixed residue");
    const int n = f.dim;
    const auto& A = t.components();
    auto at = [&](int r, int c) { return A[static_cast<size_t>(r) * n + c]; };

    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c)
            if (std::abs(at(r, c) - at(c, r)) > 1e-9)
                return {false, "components are not symmetric at (" + std::to_string(r) + "," +
                                   std::to_string(c) + ")"};
    double trace = 0.0;
    for (int r = 0; r < n; ++r) trace += at(r, r);
    if (std::abs(trace - 1.0) > 1e-9)
        return {false, "trace is " + std::to_string(trace) + ", expected 1"};

    std::vector<double> sym(A.begin(), A.end());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            sym[static_cast<size_t>(r) * n + c] = 0.5 * (at(r, c) + at(c, r));
    auto eigs = symmetric_eigenvalues(n, sym);
    if (!eigs.empty() && eigs.front() < -1e-9)
        return {false, "negative eigenvalue " + std::to_string(eigs.front())};
    return {true, ""};
}

} // namespace lambekdm
