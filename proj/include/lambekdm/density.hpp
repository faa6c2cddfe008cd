#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lambekdm/tensor.hpp"

namespace lambekdm {

// Which basis an index of a density-space factor runs over.  Standard legs
// index the standard basis (contravariant components), dual legs the dual
// basis (covariant components).
enum class LegKind { Standard, Dual };

enum class FactorVariance { Standard, Dual, Mixed };

// One factor of a tensor product of density-matrix spaces: a (row, col) index
// pair over a labeled space.  Equal labels with different subsystem ids count
// as different spaces and never contract.  A standard factor stores X^{ii'}
// as (row=i, col=i'); a dual factor stores X_{j'j} as (row=j', col=j).  These
// layouts make boundary contraction a plain matrix product of stored arrays.
// Mixed factors (one leg of each kind) arise only as multiplication residues
// and are what partial traces close.
struct SpaceFactor {
    std::string label;
    int subsystem = 0;
    int dim = 0;
    LegKind row = LegKind::Standard;
    LegKind col = LegKind::Standard;

    FactorVariance variance() const;
    bool operator==(const SpaceFactor&) const = default;
};

SpaceFactor standard_factor(std::string label, int subsystem, int dim);
SpaceFactor dual_factor(std::string label, int subsystem, int dim);

// Names the factor a partial trace closes or a permutation retargets.
struct TraceTarget {
    std::string label;
    int subsystem = 0;
    bool operator==(const TraceTarget&) const = default;
};

// Dense element of a tensor product of density-matrix spaces.  Components are
// row-major over factors, one (row, col) pair per factor, each pair itself
// row-major; a factor of dimension n contributes n^2 positions.  A tensor
// with no factors is a scalar with a single component.  Immutable by
// convention: operations return new values.
class DMTensor {
public:
    explicit DMTensor(std::vector<SpaceFactor> factors);
    DMTensor(std::vector<SpaceFactor> factors, std::vector<double> components);

    static DMTensor scalar(double value);

    const std::vector<SpaceFactor>& factors() const { return factors_; }
    const std::vector<double>& components() const { return comps_; }
    size_t size() const { return comps_.size(); }

    // One (row, col) pair per factor, in factor order.
    double at(const std::vector<std::pair<int, int>>& index) const;
    void set(const std::vector<std::pair<int, int>>& index, double value);

    bool same_factors(const DMTensor& o) const { return factors_ == o.factors_; }

private:
    size_t offset(const std::vector<std::pair<int, int>>& index) const;

    std::vector<SpaceFactor> factors_;
    std::vector<double> comps_;
};

// The metric a base metric d induces on the density-matrix space: an n^2 by
// n^2 array over stored index pairs whose entries are products of two d
// entries.  Lowering a standard factor with it equals conjugating the stored
// array by d; apply_lifted uses the assembled pair-index matrix, apply_base
// the two d congruences directly, and the two agree to rounding.
class BigMetric {
public:
    explicit BigMetric(Metric base);

    const Metric& base() const { return base_; }
    int dim() const { return base_.dim(); }

    // Entry over flattened stored pairs: out pair (j', j), in pair (i, i').
    double component(int out_pair, int in_pair) const;
    const std::vector<double>& lifted_components() const { return big_; }

    // Single standard factor in, single dual factor out.
    DMTensor apply_lifted(const DMTensor& t) const;
    DMTensor apply_base(const DMTensor& t) const;

private:
    Metric base_;
    std::vector<double> big_;
};

// Relabels subsystems: an upper operator acts on standard factors of its
// space, a lower operator on dual factors, swapping the two subsystem ids
// wherever they occur.  Factors of other labels, other variances, or other
// subsystems are untouched; with no match at all the tensor is unchanged.
enum class PermKind { Upper, Lower };

struct PermutationOp {
    PermKind kind = PermKind::Upper;
    std::string label;
    int sub1 = 0;
    int sub2 = 0;

    std::string print() const; // "P^23" / "P_13" style
    bool operator==(const PermutationOp&) const = default;
};

PermutationOp upper_perm(std::string label, int sub1, int sub2);
PermutationOp lower_perm(std::string label, int sub1, int sub2);

// Pure state from an embedding vector: components v^i v^i'.
DMTensor dm_from_vector(const Tensor& v, const SpaceFactor& factor);

// Identity-component tensor on one factor (stored array is the unit matrix).
DMTensor dm_delta(const SpaceFactor& factor);

// Convex mixture of same-shaped tensors; weights must be nonnegative and sum
// to one within 1e-9.
DMTensor dm_mix(const std::vector<double>& weights, const std::vector<DMTensor>& dms);

// Juxtaposition: concatenated factors, outer-product components.
DMTensor dm_tensor(const DMTensor& a, const DMTensor& b);

// Directional multiplication.  The boundary factors (last of a, first of b)
// must be a standard/dual pair, either order, over the same label and
// subsystem.  One index of each pair contracts (a's col against b's row) and
// the two factors merge into one mixed residue carrying a's row and b's col;
// on stored arrays the boundary pair multiplies as matrices.
DMTensor dm_multiply(const DMTensor& a, const DMTensor& b);

// Partial trace over the mixed residue factor named by the target; sums the
// stored diagonal of that pair and drops the factor.  With a single factor
// this is the total trace, leaving a scalar.
DMTensor dm_trace(const DMTensor& t, const TraceTarget& target);

// Contracts one pure standard factor against one pure dual factor of the same
// label, subsystem, and dimension, at arbitrary positions i and j (either
// order) of a single tensor.  Sums the standard pair (x, y) against the dual
// stored pair (y, x); both factors drop from the result.  On adjacent factors
// this equals dm_multiply of the split halves followed by dm_trace of the
// residue; it exists because eliminations on compound argument types and
// subsystem-routed traces also pair factors that are not adjacent.
DMTensor contract_factor_pair(const DMTensor& t, size_t i, size_t j);

// Lowers a single standard factor through the induced metric; see BigMetric.
DMTensor big_metric_apply(const BigMetric& m, const DMTensor& t);

// Dual space functor: reverses factor order, flips every leg, and converts
// components with the metric registered for each factor's label (lowering
// standard legs through d, raising dual legs through its inverse).
// Involutive.  Every label that occurs must have a metric in the table.
DMTensor dual_functor(const DMTensor& t, const std::map<std::string, Metric>& metrics);

DMTensor apply_permutation(const PermutationOp& p, const DMTensor& t);

// A lower operator also reroutes a pending trace between its two subsystems;
// an upper operator leaves trace targets alone.
TraceTarget apply_permutation(const PermutationOp& p, const TraceTarget& target);

struct DMValidation {
    bool ok = false;
    std::string reason;
};

// Checks a single-factor standard or dual tensor for physical-state shape:
// symmetric stored array, eigenvalues above -1e-9, trace within 1e-9 of one.
// Components here are distributional in general, so this is opt-in plumbing
// rather than a constructor invariant.
DMValidation dm_validate(const DMTensor& t);

} // namespace lambekdm
