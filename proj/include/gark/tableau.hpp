#pragma once

// GARK tableau data model: N-way partitioned coefficient blocks, the
// (A^L, A^D, A^U) structured form, stage permutations and the structural
// queries built on them (IMIM detection, internal consistency, stiff
// accuracy).

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gark/types.hpp"

namespace gark {

/// One (partition, stage) pair, both zero-based storage indices.
struct StageRef {
  Index partition = 0;
  Index stage = 0;

  friend bool operator==(const StageRef&, const StageRef&) = default;
};

/// Ordering of all global stages; entry r names the stage placed at row r.
struct StagePermutation {
  std::vector<StageRef> order;
};

/// Flattened tableau: the full 𝐬×𝐬 matrix and weight vector.
template <typename Scalar>
struct FlatTableau {
  Matrix<Scalar> A;
  Vector<Scalar> b;
};

/// N-way partitioned GARK tableau.
///
/// Partitions are stored zero-based. When `has_nonstiff_partition()` is true,
/// storage partition 0 is the explicit nonstiff term f^{(0)} and storage
/// partitions 1..N are the stiff terms; otherwise storage index q holds the
/// stiff term labelled q+1. `label()` converts to the conventional numbering.
template <typename Scalar>
class GarkTableau {
 public:
  using MatrixType = Matrix<Scalar>;
  using VectorType = Vector<Scalar>;

  GarkTableau() = default;

  /// `blocks` is row-major over (q, m): blocks[q * P + m] = A^{(q,m)}.
  /// Empty `stage_times` defaults each c^{(q)} to the row sums of A^{(q,q)}.
  GarkTableau(std::vector<MatrixType> blocks, std::vector<VectorType> weights,
              bool has_nonstiff = false,
              std::vector<VectorType> stage_times = {})
      : blocks_(std::move(blocks)),
        weights_(std::move(weights)),
        stage_times_(std::move(stage_times)),
        has_nonstiff_(has_nonstiff) {
    const auto P = static_cast<Index>(weights_.size());
    if (P < 1) throw DimensionError("tableau needs at least one partition");
    if (has_nonstiff_ && P < 2)
      throw DimensionError("a nonstiff partition needs at least one stiff partner");
    if (static_cast<Index>(blocks_.size()) != P * P)
      throw DimensionError("expected P*P coupling blocks");
    stage_counts_.resize(P);
    offsets_.resize(P + 1);
    offsets_[0] = 0;
    for (Index q = 0; q < P; ++q) {
      stage_counts_[q] = weights_[q].size();
      if (stage_counts_[q] < 1) throw DimensionError("partition with no stages");
      offsets_[q + 1] = offsets_[q] + stage_counts_[q];
    }
    abscissae_.resize(P * P);
    for (Index q = 0; q < P; ++q) {
      for (Index m = 0; m < P; ++m) {
        const auto& blk = blocks_[q * P + m];
        if (blk.rows() != stage_counts_[q] || blk.cols() != stage_counts_[m])
          throw DimensionError("block A(" + std::to_string(label(q)) + "," +
                               std::to_string(label(m)) + ") has wrong shape");
        abscissae_[q * P + m] = blk.rowwise().sum();
      }
    }
    if (stage_times_.empty()) {
      for (Index q = 0; q < P; ++q) stage_times_.push_back(abscissae_[q * P + q]);
    } else if (static_cast<Index>(stage_times_.size()) != P) {
      throw DimensionError("stage_times must have one vector per partition");
    }
    for (Index q = 0; q < P; ++q)
      if (stage_times_[q].size() != stage_counts_[q])
        throw DimensionError("stage_times length mismatch");
  }

  Index num_partitions() const { return static_cast<Index>(weights_.size()); }
  Index num_stiff_partitions() const { return num_partitions() - (has_nonstiff_ ? 1 : 0); }
  bool has_nonstiff_partition() const { return has_nonstiff_; }
  Index stage_count(Index q) const { return stage_counts_[q]; }
  const std::vector<Index>& stage_counts() const { return stage_counts_; }
  Index total_stages() const { return offsets_.empty() ? 0 : offsets_.back(); }
  Index offset(Index q) const { return offsets_[q]; }
  Index global_index(StageRef s) const { return offsets_[s.partition] + s.stage; }

  /// Conventional partition number: 0 for f^{(0)}, 1..N for stiff terms.
  int label(Index q) const { return static_cast<int>(has_nonstiff_ ? q : q + 1); }

  const MatrixType& block(Index q, Index m) const { return blocks_[q * num_partitions() + m]; }
  const VectorType& weights(Index q) const { return weights_[q]; }
  /// c^{(q,m)} = A^{(q,m)} 1.
  const VectorType& abscissae(Index q, Index m) const { return abscissae_[q * num_partitions() + m]; }
  /// Evaluation times c^{(q)} used for f^{(q)}_i.
  const VectorType& stage_times(Index q) const { return stage_times_[q]; }

  const std::vector<MatrixType>& blocks() const { return blocks_; }
  const std::vector<VectorType>& all_weights() const { return weights_; }
  const std::vector<VectorType>& all_stage_times() const { return stage_times_; }

  StageRef stage_at(Index global) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
    const auto q = static_cast<Index>(std::distance(offsets_.begin(), it)) - 1;
    return {q, global - offsets_[q]};
  }

  FlatTableau<Scalar> flatten() const {
    const Index s = total_stages();
    const Index P = num_partitions();
    FlatTableau<Scalar> flat{MatrixType::Zero(s, s), VectorType::Zero(s)};
    for (Index q = 0; q < P; ++q) {
      flat.b.segment(offsets_[q], stage_counts_[q]) = weights_[q];
      for (Index m = 0; m < P; ++m)
        flat.A.block(offsets_[q], offsets_[m], stage_counts_[q], stage_counts_[m]) = block(q, m);
    }
    return flat;
  }

  VectorType flat_stage_times() const {
    VectorType c(total_stages());
    for (Index q = 0; q < num_partitions(); ++q)
      c.segment(offsets_[q], stage_counts_[q]) = stage_times_[q];
    return c;
  }

  template <typename Other>
  GarkTableau<Other> cast() const {
    std::vector<Matrix<Other>> blocks;
    std::vector<Vector<Other>> weights, times;
    for (const auto& b : blocks_) blocks.push_back(b.template cast<Other>());
    for (const auto& w : weights_) weights.push_back(w.template cast<Other>());
    for (const auto& c : stage_times_) times.push_back(c.template cast<Other>());
    GarkTableau<Other> out(std::move(blocks), std::move(weights), has_nonstiff_, std::move(times));
    out.name = name;
    return out;
  }

  std::string name;

 private:
  std::vector<MatrixType> blocks_;
  std::vector<VectorType> weights_;
  std::vector<VectorType> abscissae_;
  std::vector<VectorType> stage_times_;
  std::vector<Index> stage_counts_;
  std::vector<Index> offsets_;
  bool has_nonstiff_ = false;
};

// ---------------------------------------------------------------------------
// Structured (A^L, A^D, A^U) form

enum class AssemblyMode { Adi, ParallelAdi, General };

inline const char* to_string(AssemblyMode mode) {
  switch (mode) {
    case AssemblyMode::Adi: return "adi";
    case AssemblyMode::ParallelAdi: return "parallel";
    case AssemblyMode::General: return "general";
  }
  return "general";
}

/// Coefficients of a prepended explicit partition f^{(0)} with s0 stages.
template <typename Scalar>
struct NonstiffBlocks {
  Matrix<Scalar> a00;      // s0 x s0
  Matrix<Scalar> to_stiff;   // A^{(q,0)}: s x s0
  Matrix<Scalar> from_stiff; // A^{(0,q)}: s0 x s
  Vector<Scalar> b0;
  Vector<Scalar> c0;
};

template <typename Scalar>
struct StructuredTableau {
  Matrix<Scalar> lower;  // A^L, used for m < q
  Matrix<Scalar> diag;   // A^D, used for m == q
  Matrix<Scalar> upper;  // A^U, used for m > q
  Vector<Scalar> b;
  Vector<Scalar> c;
  Index num_partitions = 1;
  AssemblyMode mode = AssemblyMode::General;
  std::optional<NonstiffBlocks<Scalar>> nonstiff;
  std::string name;

  Index stages() const { return b.size(); }

  /// Throws DimensionError on shape, triangularity or mode violations.
  void validate() const {
    const Index s = b.size();
    auto square = [s](const Matrix<Scalar>& m) { return m.rows() == s && m.cols() == s; };
    if (s < 1 || !square(lower) || !square(diag) || !square(upper) || c.size() != s)
      throw DimensionError("structured tableau blocks must be s x s with s = |b| = |c|");
    if (num_partitions < 1) throw DimensionError("num_partitions must be >= 1");
    for (Index i = 0; i < s; ++i) {
      for (Index j = i; j < s; ++j) {
        if (upper(i, j) != Scalar(0))
          throw DimensionError("A^U must be strictly lower triangular");
        if (j > i && (diag(i, j) != Scalar(0) || lower(i, j) != Scalar(0)))
          throw DimensionError("A^D and A^L must be lower triangular");
      }
    }
    if (mode == AssemblyMode::Adi && lower != diag)
      throw DimensionError("ADI structure requires A^L == A^D");
    if (mode == AssemblyMode::ParallelAdi && lower != upper)
      throw DimensionError("parallel ADI structure requires A^L == A^U");
    if (nonstiff) {
      const auto& f0 = *nonstiff;
      const Index s0 = f0.b0.size();
      if (s0 < 1 || f0.a00.rows() != s0 || f0.a00.cols() != s0 || f0.c0.size() != s0 ||
          f0.to_stiff.rows() != s || f0.to_stiff.cols() != s0 ||
          f0.from_stiff.rows() != s0 || f0.from_stiff.cols() != s)
        throw DimensionError("nonstiff coupling blocks have wrong shape");
    }
  }
};

namespace detail {

template <typename Scalar>
Scalar max_abs(const Matrix<Scalar>& A) {
  return A.size() == 0 ? Scalar(0) : A.cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar zero_threshold(const Matrix<Scalar>& A) {
  return Scalar(1e-14) * max_abs(A);
}

}  // namespace detail

/// Block assembly without structural checks: A^{(q,m)} = lower/diag/upper for
/// m < q, m == q, m > q and b^{(q)} = b. Used for splittings whose blocks are
/// not triangular (Strang, Yanenko, ...).
template <typename Scalar>
GarkTableau<Scalar> assemble_blocks(const Matrix<Scalar>& lower, const Matrix<Scalar>& diag,
                                    const Matrix<Scalar>& upper, const Vector<Scalar>& b,
                                    Index num_partitions,
                                    std::vector<Vector<Scalar>> stage_times = {}) {
  if (num_partitions < 1) throw DimensionError("num_partitions must be >= 1");
  std::vector<Matrix<Scalar>> blocks;
  blocks.reserve(num_partitions * num_partitions);
  for (Index q = 0; q < num_partitions; ++q)
    for (Index m = 0; m < num_partitions; ++m)
      blocks.push_back(m < q ? lower : (m == q ? diag : upper));
  std::vector<Vector<Scalar>> weights(num_partitions, b);
  return GarkTableau<Scalar>(std::move(blocks), std::move(weights), false, std::move(stage_times));
}

/// Expands a structured tableau into its N-way (or N+1-way) GARK tableau.
template <typename Scalar>
GarkTableau<Scalar> assemble_structured(const StructuredTableau<Scalar>& st) {
  st.validate();
  const Index N = st.num_partitions;
  if (!st.nonstiff) {
    std::vector<Vector<Scalar>> times(N, st.c);
    auto t = assemble_blocks(st.lower, st.diag, st.upper, st.b, N, std::move(times));
    t.name = st.name;
    return t;
  }
  const auto& f0 = *st.nonstiff;
  const Index P = N + 1;
  std::vector<Matrix<Scalar>> blocks;
  blocks.reserve(P * P);
  for (Index q = 0; q < P; ++q) {
    for (Index m = 0; m < P; ++m) {
      if (q == 0 && m == 0) blocks.push_back(f0.a00);
      else if (q == 0) blocks.push_back(f0.from_stiff);
      else if (m == 0) blocks.push_back(f0.to_stiff);
      else blocks.push_back(m < q ? st.lower : (m == q ? st.diag : st.upper));
    }
  }
  std::vector<Vector<Scalar>> weights{f0.b0};
  std::vector<Vector<Scalar>> times{f0.c0};
  for (Index q = 0; q < N; ++q) {
    weights.push_back(st.b);
    times.push_back(st.c);
  }
  GarkTableau<Scalar> t(std::move(blocks), std::move(weights), true, std::move(times));
  t.name = st.name;
  return t;
}

// ---------------------------------------------------------------------------
// Permutations

template <typename Scalar>
StagePermutation identity_permutation(const GarkTableau<Scalar>& t) {
  StagePermutation p;
  for (Index q = 0; q < t.num_partitions(); ++q)
    for (Index i = 0; i < t.stage_count(q); ++i) p.order.push_back({q, i});
  return p;
}

/// Stage-level-major ordering (all partitions of stage 1, then stage 2, ...).
/// Requires equal stage counts; for ADI structures this is the vec-permutation.
template <typename Scalar>
StagePermutation vec_permutation(const GarkTableau<Scalar>& t) {
  const Index s = t.stage_count(0);
  for (Index q = 1; q < t.num_partitions(); ++q)
    if (t.stage_count(q) != s) throw DimensionError("vec-permutation needs equal stage counts");
  StagePermutation p;
  for (Index i = 0; i < s; ++i)
    for (Index q = 0; q < t.num_partitions(); ++q) p.order.push_back({q, i});
  return p;
}

/// Global flat indices of a permutation; validates that it is a bijection.
template <typename Scalar>
std::vector<Index> to_indices(const GarkTableau<Scalar>& t, const StagePermutation& p) {
  const Index s = t.total_stages();
  if (static_cast<Index>(p.order.size()) != s)
    throw DimensionError("permutation length does not match the number of stages");
  std::vector<Index> idx;
  std::vector<bool> seen(s, false);
  idx.reserve(s);
  for (const auto& ref : p.order) {
    if (ref.partition < 0 || ref.partition >= t.num_partitions() || ref.stage < 0 ||
        ref.stage >= t.stage_count(ref.partition))
      throw DimensionError("permutation references a non-existent stage");
    const Index g = t.global_index(ref);
    if (seen[g]) throw DimensionError("permutation repeats a stage");
    seen[g] = true;
    idx.push_back(g);
  }
  return idx;
}

inline std::vector<Index> invert(std::span<const Index> order) {
  std::vector<Index> inv(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) inv[order[r]] = static_cast<Index>(r);
  return inv;
}

/// Ã = P A Pᵀ, b̃ = P b where row r of P selects flat stage order[r].
template <typename Scalar>
FlatTableau<Scalar> permute(const FlatTableau<Scalar>& flat, std::span<const Index> order) {
  const auto s = static_cast<Index>(order.size());
  if (s != flat.b.size()) throw DimensionError("permutation length does not match the number of stages");
  FlatTableau<Scalar> out{Matrix<Scalar>(s, s), Vector<Scalar>(s)};
  for (Index r = 0; r < s; ++r) {
    out.b(r) = flat.b(order[r]);
    for (Index k = 0; k < s; ++k) out.A(r, k) = flat.A(order[r], order[k]);
  }
  return out;
}

template <typename Scalar>
FlatTableau<Scalar> permute(const GarkTableau<Scalar>& t, const StagePermutation& p) {
  const auto idx = to_indices(t, p);
  return permute(t.flatten(), idx);
}

/// Regroups a permuted flat tableau into partition blocks: stages of each
/// partition are renumbered in the order they appear in `p`.
template <typename Scalar>
GarkTableau<Scalar> regroup(const FlatTableau<Scalar>& permuted, const GarkTableau<Scalar>& shape,
                            const StagePermutation& p) {
  const Index P = shape.num_partitions();
  std::vector<std::vector<Index>> rows(P);
  for (Index r = 0; r < static_cast<Index>(p.order.size()); ++r) rows[p.order[r].partition].push_back(r);
  std::vector<Matrix<Scalar>> blocks;
  std::vector<Vector<Scalar>> weights, times;
  const auto c = shape.flat_stage_times();
  const auto idx = to_indices(shape, p);
  for (Index q = 0; q < P; ++q) {
    const auto& rq = rows[q];
    Vector<Scalar> w(rq.size()), tq(rq.size());
    for (std::size_t i = 0; i < rq.size(); ++i) {
      w(i) = permuted.b(rq[i]);
      tq(i) = c(idx[rq[i]]);
    }
    weights.push_back(w);
    times.push_back(tq);
    for (Index m = 0; m < P; ++m) {
      const auto& rm = rows[m];
      Matrix<Scalar> blk(rq.size(), rm.size());
      for (std::size_t i = 0; i < rq.size(); ++i)
        for (std::size_t j = 0; j < rm.size(); ++j) blk(i, j) = permuted.A(rq[i], rm[j]);
      blocks.push_back(blk);
    }
  }
  GarkTableau<Scalar> out(std::move(blocks), std::move(weights), shape.has_nonstiff_partition(),
                          std::move(times));
  out.name = shape.name;
  return out;
}

template <typename Scalar>
bool is_lower_triangular(const Matrix<Scalar>& A, Scalar threshold) {
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = i + 1; j < A.cols(); ++j)
      if (std::abs(A(i, j)) > threshold) return false;
  return true;
}

/// Topological stage order making P A Pᵀ lower triangular, if one exists.
/// Nonzero off-diagonal entries (above 1e-14 of the largest magnitude) are
/// dependency edges; diagonal self-loops are allowed. Among ready stages the
/// smallest (stage index, partition) goes first.
template <typename Scalar>
std::optional<StagePermutation> find_imim_permutation(const GarkTableau<Scalar>& t) {
  const auto flat = t.flatten();
  const Index s = t.total_stages();
  const Scalar thr = detail::zero_threshold(flat.A);

  std::vector<Index> pending(s, 0);
  std::vector<std::vector<Index>> dependents(s);
  for (Index k = 0; k < s; ++k)
    for (Index l = 0; l < s; ++l)
      if (k != l && std::abs(flat.A(k, l)) > thr) {
        ++pending[k];
        dependents[l].push_back(k);
      }

  using Key = std::tuple<Index, Index, Index>;  // (stage, partition, global)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  auto push = [&](Index g) {
    const auto ref = t.stage_at(g);
    ready.emplace(ref.stage, ref.partition, g);
  };
  for (Index k = 0; k < s; ++k)
    if (pending[k] == 0) push(k);

  StagePermutation p;
  p.order.reserve(s);
  while (!ready.empty()) {
    const auto [stage, partition, g] = ready.top();
    ready.pop();
    p.order.push_back({partition, stage});
    for (Index k : dependents[g])
      if (--pending[k] == 0) push(k);
  }
  if (static_cast<Index>(p.order.size()) != s) return std::nullopt;
  return p;
}

/// Every partition sees identical abscissae c^{(q,m)} for all m.
template <typename Scalar>
bool is_internally_consistent(const GarkTableau<Scalar>& t, Scalar tol) {
  for (Index q = 0; q < t.num_partitions(); ++q)
    for (Index m = 1; m < t.num_partitions(); ++m)
      if ((t.abscissae(q, m) - t.abscissae(q, 0)).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

namespace detail {

// Row of stage `g` across all partitions equals the weights.
template <typename Scalar>
bool row_matches_weights(const FlatTableau<Scalar>& flat, Index g, Scalar tol) {
  return (flat.A.row(g).transpose() - flat.b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

/// Direct mode checks b^{(m)ᵀ} = last row of A^{(N,m)}. Permutation mode
/// additionally accepts any IMIM ordering whose final stage has that property.
template <typename Scalar>
bool is_stiffly_accurate(const GarkTableau<Scalar>& t, Scalar tol, bool up_to_permutation = false) {
  const auto flat = t.flatten();
  const Index last = t.total_stages() - 1;
  if (detail::row_matches_weights(flat, last, tol)) return true;
  if (!up_to_permutation) return false;

  const auto perm = find_imim_permutation(t);
  if (!perm) return false;
  if (detail::row_matches_weights(flat, t.global_index(perm->order.back()), tol)) return true;

  // Any stage nobody else depends on can be moved to the end of a
  // topological order.
  const Scalar thr = detail::zero_threshold(flat.A);
  for (Index g = 0; g <= last; ++g) {
    if (!detail::row_matches_weights(flat, g, tol)) continue;
    bool sink = true;
    for (Index k = 0; k <= last && sink; ++k)
      if (k != g && std::abs(flat.A(k, g)) > thr) sink = false;
    if (sink) return true;
  }
  return false;
}

}  // namespace gark
