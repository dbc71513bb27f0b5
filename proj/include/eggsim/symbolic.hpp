#pragma once

// Minimal noncommutative term algebra for the angular-momentum recursion.
// Terms are ordered products of opaque matrix atoms ending in one vector atom;
// the only rewriting performed is distribution and the product rule.

#include <compare>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eggsim/dynamics.hpp"

namespace eggsim::symbolic {

enum class AtomKind {
  RelRot,       // R_n^r          "R2"
  RelRotInv,    // R_n^{r-}       "R2-"
  RelRotDot,    // d/dt R_n^r     "dR2"
  RelRotInvDot, // d/dt R_n^{r-}  "dR2-"
  Inertia,      // Theta_n        "Th1"
  OmegaBody,    // omega          "w"
  OmegaBodyDot, // d/dt omega     "dw"
  RelRate,      // omega_n^r      "w2r"
  RelRateDot,   // d/dt omega_n^r "dw2r"
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Atom {
  AtomKind kind = AtomKind::OmegaBody;
  int index = 0; // frame number; 0 for the body rate atoms

  /// Throws std::invalid_argument for kind/index pairs that do not occur in the chain.
  static Atom make(AtomKind kind, int index = 0);
  static Atom parse(std::string_view token);

  bool is_vector() const;
  /// True when d/dt of this atom is nonzero (everything except inertia tensors).
  bool is_time_varying() const;
  Atom derivative() const;
  std::string text() const;

  auto operator<=>(const Atom&) const = default;
};

class SymbolicTerm {
public:
  /// Throws std::invalid_argument unless exactly the last factor is a vector atom.
  explicit SymbolicTerm(std::vector<Atom> factors);
  static SymbolicTerm parse(std::string_view line);

  const std::vector<Atom>& factors() const { return factors_; }
  bool contains(const Atom& atom) const;
  bool contains_kind(AtomKind kind) const;
  SymbolicTerm premultiplied(const Atom& matrix) const;
  std::string text() const;

  auto operator<=>(const SymbolicTerm&) const = default;

private:
  std::vector<Atom> factors_;
};

/// Multiset of terms. Equality compares canonical forms.
class SymbolicSum {
public:
  SymbolicSum() = default;
  explicit SymbolicSum(std::vector<SymbolicTerm> terms) : terms_(std::move(terms)) {}

  static SymbolicSum parse(std::string_view text);
  static SymbolicSum read_file(const std::filesystem::path& path);

  const std::vector<SymbolicTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  SymbolicSum& operator+=(const SymbolicSum& other);
  friend SymbolicSum operator+(SymbolicSum a, const SymbolicSum& b) { return a += b; }

  /// Every term left-multiplied by a matrix atom.
  SymbolicSum premultiplied(const Atom& matrix) const;
  /// Product rule applied to every term.
  SymbolicSum derivative() const;
  /// Terms that do not contain the given atom kind.
  SymbolicSum without(AtomKind kind) const;
  /// Terms that contain the given atom kind.
  SymbolicSum only_with(AtomKind kind) const;

  /// Terms sorted by their text form.
  SymbolicSum canonical() const;
  /// One term per line, atoms separated by single spaces, canonical order.
  std::string text() const;

  bool operator==(const SymbolicSum& other) const;

private:
  std::vector<SymbolicTerm> terms_;
};

/// Fully distributed angular momentum L_1.
SymbolicSum expand_L();
/// Product-rule derivative of expand_L().
SymbolicSum expand_Tmec();
/// The differentiated recursion expanded term by term; an independent route to expand_Tmec().
SymbolicSum expand_Tmec_recursive();
/// expand_Tmec() without the terms carrying d/dt omega.
SymbolicSum expand_B();

/// Matrix-only products of the nested combined inertia, each represented as a
/// term ending in "dw" so it can be compared with the d/dt omega part of T_mec.
SymbolicSum expand_theta_com_times_omega_dot();

/// Numeric values for atoms.
class Bindings {
public:
  void set(const Atom& atom, const Matrix3& value);
  void set(const Atom& atom, const Vector3& value);

  /// Throws std::out_of_range naming the atom when no value is bound.
  const Matrix3& matrix(const Atom& atom) const;
  const Vector3& vector(const Atom& atom) const;

  /// Bindings consistent with the gimbal chain at the given state.
  static Bindings from_state(const FrameChain& chain, const ChainState& state);

private:
  std::map<Atom, Matrix3> matrices_;
  std::map<Atom, Vector3> vectors_;
};

Vector3 evaluate(const SymbolicTerm& term, const Bindings& bindings);
Vector3 evaluate(const SymbolicSum& sum, const Bindings& bindings);

} // namespace eggsim::symbolic
