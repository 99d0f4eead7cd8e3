#ifndef PICAL_ALGEBRA_HPP
#define PICAL_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pical/error.hpp"

namespace pical {

using AlgebraId = std::string;

/// A single multiplicity value. Numeric values cover the linear carrier
/// {0,1} and the graded naturals; the distinguished omega value is the sole
/// inhabitant of the shared carrier. Printing and parsing are uniform:
/// omega renders as "w", everything else as a decimal.
class Usage {
 public:
  Usage() : Usage(0, false) {}
  static Usage num(std::uint32_t v) { return Usage(v, false); }
  static Usage omega() { return Usage(0, true); }

  bool is_omega() const { return omega_; }
  std::uint32_t value() const { return value_; }

  friend bool operator==(const Usage& a, const Usage& b) {
    return a.omega_ == b.omega_ && (a.omega_ || a.value_ == b.value_);
  }
  friend bool operator!=(const Usage& a, const Usage& b) { return !(a == b); }

 private:
  Usage(std::uint32_t v, bool omega) : value_(v), omega_(omega) {}
  std::uint32_t value_;
  bool omega_;
};

std::string to_string(const Usage& u);
std::optional<Usage> parse_usage_literal(std::string_view text);

/// Input and output multiplicities of a channel, both drawn from the same
/// usage algebra.
struct UsagePair {
  Usage input;
  Usage output;

  friend bool operator==(const UsagePair& a, const UsagePair& b) {
    return a.input == b.input && a.output == b.output;
  }
  friend bool operator!=(const UsagePair& a, const UsagePair& b) { return !(a == b); }
};

std::string to_string(const UsagePair& p);

/// A usage algebra: a partial commutative monoid with computable, unique
/// leftovers, a minimal zero and a unit element counting one input/output.
///
/// The ternary relation x = y + z is represented by its decision procedure
/// `split(x, y)`, which returns the unique z when one exists. Laws checked
/// by `check_algebra_laws`:
///   - uniqueness of x given (y, z), and of y given (x, z)
///   - associativity and commutativity
///   - computability (split decides existence)
///   - zero is a left identity and is minimal
class UsageAlgebra {
 public:
  explicit UsageAlgebra(AlgebraId id) : id_(std::move(id)) {}
  virtual ~UsageAlgebra() = default;

  const AlgebraId& id() const { return id_; }

  virtual Usage zero() const = 0;
  virtual Usage one() const = 0;
  virtual bool valid(const Usage& u) const = 0;

  /// Returns z such that x = y + z, if the split is defined.
  virtual std::optional<Usage> split(const Usage& x, const Usage& y) const = 0;

  /// Carrier values for law checking: the full carrier when finite, a
  /// bounded prefix otherwise.
  virtual std::vector<Usage> carrier_samples(std::uint32_t bound) const = 0;

  bool check_split(const Usage& x, const Usage& y, const Usage& z) const {
    auto r = split(x, y);
    return r.has_value() && *r == z;
  }

  UsagePair pair_empty() const { return {zero(), zero()}; }  // l-empty
  UsagePair pair_in() const { return {one(), zero()}; }      // l-in
  UsagePair pair_out() const { return {zero(), one()}; }     // l-out
  UsagePair pair_both() const { return {one(), one()}; }     // l-#

  /// Componentwise split on multiplicity pairs; defined iff both components are.
  std::optional<UsagePair> split_pair(const UsagePair& x, const UsagePair& y) const;

  std::optional<Usage> parse_usage(std::string_view text) const;

 private:
  AlgebraId id_;
};

std::unique_ptr<UsageAlgebra> make_linear_algebra();
std::unique_ptr<UsageAlgebra> make_graded_algebra();
std::unique_ptr<UsageAlgebra> make_shared_algebra();

/// Runs the algebra law suite over carrier_samples(bound); throws
/// AlgebraLawError on the first violation.
void check_algebra_laws(const UsageAlgebra& alg, std::uint32_t bound = 16);

/// An indexed set of usage algebras. The three standard instances are
/// registered under "lin", "gra" and "sha"; further algebras can be added
/// before the set is shared, each gated by the law-check harness.
/// Immutable once populated; concurrent reads are safe.
class AlgebraSet {
 public:
  static const AlgebraSet& standard();

  AlgebraSet() = default;
  AlgebraSet(AlgebraSet&&) = default;
  AlgebraSet& operator=(AlgebraSet&&) = default;
  AlgebraSet(const AlgebraSet&) = delete;
  AlgebraSet& operator=(const AlgebraSet&) = delete;

  /// Registers an algebra under its own id after law-checking it.
  void register_algebra(std::unique_ptr<UsageAlgebra> alg, std::uint32_t law_bound = 16);

  bool contains(const AlgebraId& id) const { return algebras_.count(id) != 0; }
  const UsageAlgebra& at(const AlgebraId& id) const;

  std::vector<AlgebraId> ids() const;

 private:
  std::map<AlgebraId, std::unique_ptr<UsageAlgebra>> algebras_;
};

}  // namespace pical

#endif
