#include "pical/algebra.hpp"

#include <charconv>

namespace pical {

std::string to_string(const Usage& u) {
  if (u.is_omega()) return "w";
  return std::to_string(u.value());
}

std::optional<Usage> parse_usage_literal(std::string_view text) {
  if (text == "w") return Usage::omega();
  if (text.empty()) return std::nullopt;
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return Usage::num(v);
}

std::string to_string(const UsagePair& p) {
  return "(" + to_string(p.input) + "," + to_string(p.output) + ")";
}

std::optional<UsagePair> UsageAlgebra::split_pair(const UsagePair& x, const UsagePair& y) const {
  auto in = split(x.input, y.input);
  if (!in) return std::nullopt;
  auto out = split(x.output, y.output);
  if (!out) return std::nullopt;
  return UsagePair{*in, *out};
}

std::optional<Usage> UsageAlgebra::parse_usage(std::string_view text) const {
  auto u = parse_usage_literal(text);
  if (!u || !valid(*u)) return std::nullopt;
  return u;
}

namespace {

// Carrier {0,1}; 0=0+0, 1=1+0, 1=0+1 and nothing else.
class LinearAlgebra final : public UsageAlgebra {
 public:
  LinearAlgebra() : UsageAlgebra("lin") {}
  Usage zero() const override { return Usage::num(0); }
  Usage one() const override { return Usage::num(1); }
  bool valid(const Usage& u) const override { return !u.is_omega() && u.value() <= 1; }
  std::optional<Usage> split(const Usage& x, const Usage& y) const override {
    if (!valid(x) || !valid(y)) return std::nullopt;
    if (y.value() > x.value()) return std::nullopt;
    return Usage::num(x.value() - y.value());
  }
  std::vector<Usage> carrier_samples(std::uint32_t) const override {
    return {Usage::num(0), Usage::num(1)};
  }
};

// Carrier is the naturals; x = y + z in the usual sense.
class GradedAlgebra final : public UsageAlgebra {
 public:
  GradedAlgebra() : UsageAlgebra("gra") {}
  Usage zero() const override { return Usage::num(0); }
  Usage one() const override { return Usage::num(1); }
  bool valid(const Usage& u) const override { return !u.is_omega(); }
  std::optional<Usage> split(const Usage& x, const Usage& y) const override {
    if (!valid(x) || !valid(y)) return std::nullopt;
    if (y.value() > x.value()) return std::nullopt;
    return Usage::num(x.value() - y.value());
  }
  std::vector<Usage> carrier_samples(std::uint32_t bound) const override {
    std::vector<Usage> out;
    out.reserve(bound + 1);
    for (std::uint32_t v = 0; v <= bound; ++v) out.push_back(Usage::num(v));
    return out;
  }
};

// Single-element carrier {w}; zero = one = w and w = w + w.
class SharedAlgebra final : public UsageAlgebra {
 public:
  SharedAlgebra() : UsageAlgebra("sha") {}
  Usage zero() const override { return Usage::omega(); }
  Usage one() const override { return Usage::omega(); }
  bool valid(const Usage& u) const override { return u.is_omega(); }
  std::optional<Usage> split(const Usage& x, const Usage& y) const override {
    if (!valid(x) || !valid(y)) return std::nullopt;
    return Usage::omega();
  }
  std::vector<Usage> carrier_samples(std::uint32_t) const override { return {Usage::omega()}; }
};

}  // namespace

std::unique_ptr<UsageAlgebra> make_linear_algebra() { return std::make_unique<LinearAlgebra>(); }
std::unique_ptr<UsageAlgebra> make_graded_algebra() { return std::make_unique<GradedAlgebra>(); }
std::unique_ptr<UsageAlgebra> make_shared_algebra() { return std::make_unique<SharedAlgebra>(); }

void check_algebra_laws(const UsageAlgebra& alg, std::uint32_t bound) {
  const auto samples = alg.carrier_samples(bound);
  auto fail = [&](const std::string& law, const std::string& detail) {
    throw AlgebraLawError("algebra '" + alg.id() + "' violates " + law + ": " + detail);
  };

  if (samples.empty()) fail("nonempty carrier", "no samples");
  if (!alg.valid(alg.zero())) fail("zero membership", "zero not in carrier");
  if (!alg.valid(alg.one())) fail("one membership", "one not in carrier");

  // unique: x = y + z and x' = y + z imply x = x'.
  for (const auto& x : samples)
    for (const auto& x2 : samples)
      for (const auto& y : samples) {
        auto z = alg.split(x, y);
        auto z2 = alg.split(x2, y);
        if (z && z2 && *z == *z2 && x != x2)
          fail("uniqueness of the total", to_string(x) + " vs " + to_string(x2) + " over " + to_string(y));
      }

  // unique-left: x = y + z and x = y' + z imply y = y'.
  for (const auto& x : samples)
    for (const auto& y : samples)
      for (const auto& y2 : samples) {
        auto z = alg.split(x, y);
        auto z2 = alg.split(x, y2);
        if (z && z2 && *z == *z2 && y != y2)
          fail("uniqueness of the part", to_string(y) + " vs " + to_string(y2) + " under " + to_string(x));
      }

  // assoc: x = y + z and y = u + v imply exists w with x = u + w and w = v + z.
  for (const auto& x : samples)
    for (const auto& y : samples)
      for (const auto& u : samples) {
        auto z = alg.split(x, y);
        auto v = alg.split(y, u);
        if (!z || !v) continue;
        auto w = alg.split(x, u);
        if (!w) fail("associativity", "no witness for x=" + to_string(x) + " u=" + to_string(u));
        if (!alg.check_split(*w, *v, *z))
          fail("associativity", "witness mismatch at x=" + to_string(x) + " y=" + to_string(y));
      }

  // comm: x = y + z implies x = z + y.
  for (const auto& x : samples)
    for (const auto& y : samples) {
      auto z = alg.split(x, y);
      if (z && !alg.check_split(x, *z, y))
        fail("commutativity", "x=" + to_string(x) + " y=" + to_string(y));
    }

  // compute: split is a decision procedure; on the sampled carrier it must
  // agree with exhaustive search for a witness.
  for (const auto& x : samples)
    for (const auto& y : samples) {
      bool found = false;
      for (const auto& z : samples)
        if (alg.check_split(x, y, z)) found = true;
      auto r = alg.split(x, y);
      if (found && !r) fail("computability", "split misses a witness");
      if (r && !alg.valid(*r)) fail("computability", "split left the carrier");
    }

  // left identity: x = zero + x.
  for (const auto& x : samples)
    if (!alg.check_split(x, alg.zero(), x)) fail("left identity", "x=" + to_string(x));

  // minimality: zero = y + z implies y = zero.
  for (const auto& y : samples) {
    auto z = alg.split(alg.zero(), y);
    if (z && y != alg.zero()) fail("minimality of zero", "y=" + to_string(y));
  }
}

const AlgebraSet& AlgebraSet::standard() {
  static const AlgebraSet instance = [] {
    AlgebraSet set;
    set.register_algebra(make_linear_algebra());
    set.register_algebra(make_graded_algebra());
    set.register_algebra(make_shared_algebra());
    return set;
  }();
  return instance;
}

void AlgebraSet::register_algebra(std::unique_ptr<UsageAlgebra> alg, std::uint32_t law_bound) {
  if (!alg) throw InvariantError("null algebra");
  if (algebras_.count(alg->id()))
    throw InvariantError("algebra '" + alg->id() + "' already registered");
  check_algebra_laws(*alg, law_bound);
  algebras_.emplace(alg->id(), std::move(alg));
}

const UsageAlgebra& AlgebraSet::at(const AlgebraId& id) const {
  auto it = algebras_.find(id);
  if (it == algebras_.end()) throw UnknownAlgebraError("unknown algebra '" + id + "'");
  return *it->second;
}

std::vector<AlgebraId> AlgebraSet::ids() const {
  std::vector<AlgebraId> out;
  for (const auto& [id, _] : algebras_) out.push_back(id);
  return out;
}

}  // namespace pical
