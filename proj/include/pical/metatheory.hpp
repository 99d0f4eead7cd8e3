#ifndef PICAL_METATHEORY_HPP
#define PICAL_METATHEORY_HPP

#include <cstdint>
#include <optional>

#include "pical/checker.hpp"
#include "pical/semantics.hpp"

namespace pical {

/// Witness that split_ctx(gamma_l, delta) == xi_l: the resources `delta` a
/// derivation consumed on its way from gamma_l to xi_l.
struct SplitEvidence {
  Ctx gamma_l;
  Ctx delta;
  Ctx xi_l;
};

/// The consumption of a derivation: the unique delta with
/// split_ctx(input, delta) == output.
SplitEvidence derivation_consumption(const AlgebraSet& set, const Derivation& d);

/// Framing: moves a derivation to any input context that affords the same
/// consumption. The result types the same process with contexts
/// (gamma_r, split_ctx(gamma_r, delta)). Throws FrameUndefined when gamma_r
/// cannot absorb the consumption, EvidenceMismatch when the evidence does
/// not describe `d`.
Derivation frame(const AlgebraSet& set, const Derivation& d, const SplitEvidence& ev,
                 const Ctx& gamma_r);

/// Weakening: inserts a fresh slot (t, alg, x) at position i of every
/// context; the subject becomes lift(i, P).
Derivation weaken(const AlgebraSet& set, const Derivation& d, std::size_t i, const Type& t,
                  const AlgebraId& alg, const UsagePair& x);

/// Strengthening: deletes position i from every context; requires
/// unused(i, subject); the subject becomes lower(i, P).
Derivation strengthen(const AlgebraSet& set, const Derivation& d, std::size_t i);

/// Exchange: swaps positions i and i+1 of every context; the subject becomes
/// exchange(i, P). Involutive.
Derivation exchange_deriv(const AlgebraSet& set, const Derivation& d, std::size_t i);

/// Evidence for generalised substitution from i to j: the substituted
/// variable holds m extra before and n extra after (relative to the floors),
/// and the floor consumption delta is empty at i, so everything from m to n
/// is spent inside the process.
///   d.input  at i splits by m to gamma_floor     gamma_j at j splits by m to gamma_floor
///   d.output at i splits by n to psi_floor       psi_j   at j splits by n to psi_floor
///   split_ctx(gamma_floor, delta) == psi_floor   delta[i] == l-empty
struct SubstEvidence {
  std::size_t i;
  std::size_t j;
  UsagePair m;
  UsagePair n;
  Ctx gamma_floor;
  Ctx gamma_j;
  Ctx psi_floor;
  Ctx psi_j;
  Ctx delta;
};

/// Generalised substitution: turns a derivation of P into one of
/// subst(P, j, i) with contexts (gamma_j, psi_j). All evidence arrows are
/// validated by recomputation; EvidenceMismatch names the failing one.
Derivation subst_deriv(const AlgebraSet& set, const Derivation& d, const SubstEvidence& ev);

/// Subject congruence: applies a structural-congruence rewrite to the
/// subject while preserving the root contexts exactly.
Derivation subject_cong(const AlgebraSet& set, const Derivation& d, const CongRule& rule,
                        const CongPath& path);

/// Derivation-level flatten_normalize: same root contexts, normalized
/// subject.
Derivation normalize_deriv(const AlgebraSet& set, const Derivation& d);

/// Capability to communicate on free channel `index`: the input context
/// affords a full l-# there, leaving `leftover`.
struct Capability {
  std::size_t index;
  Ctx leftover;
};

/// Extracts the capability promised by any external reduction of the
/// subject; NoCapability if the subject has no such step (or, which would be
/// a checker/engine defect, the context cannot pay).
Capability derive_capability(const AlgebraSet& set, const Derivation& d, std::size_t index);

/// Subject reduction: given a step from reductions(subject), produces a
/// derivation of the reduct. Internal steps keep the root contexts; external
/// steps start from the capability leftover. The output context is preserved
/// exactly in both cases.
Derivation subject_reduction(const AlgebraSet& set, const Derivation& d, const Reduction& step,
                             const std::optional<Capability>& capability = std::nullopt);

struct AlgebraMix {
  double lin = 1.0;
  double gra = 1.0;
  double sha = 1.0;
};

struct GenCase {
  PreCtx gamma;
  Idxs idxs;
  Ctx usage;
  Process process;
};

/// Generates a well-typed process by sampling typing-rule applications top
/// down: 40% par and 20% each restriction/input/output at nonzero budget,
/// graded multiplicities in 0..4, algebra choice weighted by `mix`.
/// Deterministic in the seed; budget 0 yields end.
GenCase gen_well_typed(const AlgebraSet& set, std::uint64_t seed, std::size_t budget,
                       const AlgebraMix& mix = {});

}  // namespace pical

#endif
