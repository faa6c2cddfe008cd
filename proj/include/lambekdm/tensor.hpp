#pragma once

#include <vector>

namespace lambekdm {

enum class Variance { Up, Down };

// Dense (k,l)-tensor over one space of dimension dim: k contravariant (Up)
// and l covariant (Down) slots in an explicit order, row-major components.
class Tensor {
public:
    Tensor(int dim, std::vector<Variance> variance);
    Tensor(int dim, std::vector<Variance> variance, std::vector<double> components);

    static Tensor vector(std::vector<double> components);   // one Up slot
    static Tensor covector(std::vector<double> components); // one Down slot
    static Tensor scalar(double value);

    int dim() const { return dim_; }
    size_t rank() const { return variance_.size(); }
    const std::vector<Variance>& variance() const { return variance_; }
    const std::vector<double>& components() const { return comps_; }

    double at(const std::vector<int>& index) const;
    void set(const std::vector<int>& index, double value);

    bool same_shape(const Tensor& o) const {
        return dim_ == o.dim_ && variance_ == o.variance_;
    }

private:
    size_t offset(const std::vector<int>& index) const;

    int dim_;
    std::vector<Variance> variance_;
    std::vector<double> comps_;
};

// Symmetric, nondegenerate bilinear form with its inverse cached.
// Construction validates symmetry (1e-12) and invertibility (d * dinv within
// 1e-9 of the identity).
class Metric {
public:
    Metric(int dim, std::vector<double> entries);
    static Metric identity(int dim);

    int dim() const { return dim_; }
    double d(int i, int j) const { return d_[static_cast<size_t>(i * dim_ + j)]; }
    double dinv(int i, int j) const { return dinv_[static_cast<size_t>(i * dim_ + j)]; }
    const std::vector<double>& components() const { return d_; }
    const std::vector<double>& inverse_components() const { return dinv_; }

private:
    int dim_;
    std::vector<double> d_, dinv_;
};

// Invertible change of basis; entry (i, i') is the coefficient of the new
// basis vector i' in old basis vector i.  Vectors transform by the transpose,
// the metric by the inverse pair, keeping inner products invariant.
class BasisChange {
public:
    BasisChange(int dim, std::vector<double> entries);

    int dim() const { return dim_; }
    double m(int i, int j) const { return m_[static_cast<size_t>(i * dim_ + j)]; }
    double minv(int i, int j) const { return minv_[static_cast<size_t>(i * dim_ + j)]; }

private:
    int dim_;
    std::vector<double> m_, minv_;
};

Tensor tensor_product(const Tensor& a, const Tensor& b);

// Sums the Up slot against the Down slot (a dimension-matched trace); both
// slots disappear from the result.
Tensor contract(const Tensor& t, size_t up_slot, size_t down_slot);

double inner_product(const Metric& m, const Tensor& v, const Tensor& w);
double metric_norm(const Metric& m, const Tensor& v);
double cosine_similarity(const Metric& m, const Tensor& v, const Tensor& w);

// v_j' = sum_j d_jj' v^j
Tensor dual_vector(const Metric& m, const Tensor& v);

Tensor lower_index(const Metric& m, const Tensor& t, size_t slot);
Tensor raise_index(const Metric& m, const Tensor& t, size_t slot);

// Reorders a (Down, Up) tensor into the canonical (Up, Down) layout by
// raising through the first slot and lowering through the second.
Tensor canonicalize_mixed(const Metric& m, const Tensor& t);

Tensor transform_vector(const BasisChange& bc, const Tensor& v);
Metric transform_metric(const BasisChange& bc, const Metric& m);

// Pairing of an already-dualized vector with a vector; together with
// dual_vector this recovers the inner product.
double eps_l(const Tensor& dualv, const Tensor& u);
double eps_r(const Tensor& v, const Tensor& dualu);

// Units of the pairing: the identity element in V (x) V* resp. V* (x) V.
// Their components are the Kronecker delta in every basis; the metric
// argument fixes the dimension and documents which space they belong to.
Tensor eta_l(const Metric& m);
Tensor eta_r(const Metric& m);

struct SimilarityJudgment {
    Tensor v, w;
    double target; // desired cosine
};

struct MetricFitOptions {
    double reg = 1e-3;      // pull toward the identity metric
    int max_iters = 5000;
    double grad_tol = 1e-10;
};

struct MetricFitResult {
    Metric metric;
    double objective;
    int iters;
};

// Least-squares fit of a metric to cosine judgments by projected gradient
// descent from the identity (steps keeping the metric invertible and all
// sample norms positive).  Deterministic; set LAMBEK_DM_SEED to perturb the
// starting point.
MetricFitResult metric_fit(const std::vector<SimilarityJudgment>& samples, int dim,
                           const MetricFitOptions& opts = {});

} // namespace lambekdm
