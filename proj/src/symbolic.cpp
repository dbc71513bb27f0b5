#include "eggsim/symbolic.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace eggsim::symbolic {

namespace {

bool valid_index(AtomKind kind, int index) {
  switch (kind) {
  case AtomKind::RelRot:
  case AtomKind::RelRotInv:
  case AtomKind::RelRotDot:
  case AtomKind::RelRotInvDot:
  case AtomKind::RelRate:
  case AtomKind::RelRateDot:
    return index >= 2 && index <= 4;
  case AtomKind::Inertia:
    return index >= 1 && index <= 4;
  case AtomKind::OmegaBody:
  case AtomKind::OmegaBodyDot:
    return index == 0;
  }
  return false;
}

int parse_index(std::string_view digits, std::string_view token) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw ParseError("malformed atom '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
      ++j;
    }
    if (j > i) {
      out.push_back(line.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

} // namespace

Atom Atom::make(AtomKind kind, int index) {
  if (!valid_index(kind, index)) {
    throw std::invalid_argument("atom index " + std::to_string(index) + " not valid for this atom kind");
  }
  return Atom{kind, index};
}

Atom Atom::parse(std::string_view token) {
  try {
    if (token == "w") {
      return make(AtomKind::OmegaBody);
    }
    if (token == "dw") {
      return make(AtomKind::OmegaBodyDot);
    }
    if (token.starts_with("Th")) {
      return make(AtomKind::Inertia, parse_index(token.substr(2), token));
    }
    const bool dotted = token.starts_with("d");
    std::string_view rest = dotted ? token.substr(1) : token;
    if (rest.starts_with("w") && rest.ends_with("r")) {
      const int n = parse_index(rest.substr(1, rest.size() - 2), token);
      return make(dotted ? AtomKind::RelRateDot : AtomKind::RelRate, n);
    }
    if (rest.starts_with("R")) {
      const bool inverse = rest.ends_with("-");
      const int n = parse_index(rest.substr(1, rest.size() - 1 - (inverse ? 1 : 0)), token);
      if (inverse) {
        return make(dotted ? AtomKind::RelRotInvDot : AtomKind::RelRotInv, n);
      }
      return make(dotted ? AtomKind::RelRotDot : AtomKind::RelRot, n);
    }
  } catch (const std::invalid_argument&) {
    // fall through to the parse error below
  }
  throw ParseError("unknown atom '" + std::string(token) + "'");
}

bool Atom::is_vector() const {
  switch (kind) {
  case AtomKind::OmegaBody:
  case AtomKind::OmegaBodyDot:
  case AtomKind::RelRate:
  case AtomKind::RelRateDot:
    return true;
  default:
    return false;
  }
}

bool Atom::is_time_varying() const { return kind != AtomKind::Inertia; }

Atom Atom::derivative() const {
  switch (kind) {
  case AtomKind::RelRot: return {AtomKind::RelRotDot, index};
  case AtomKind::RelRotInv: return {AtomKind::RelRotInvDot, index};
  case AtomKind::OmegaBody: return {AtomKind::OmegaBodyDot, index};
  case AtomKind::RelRate: return {AtomKind::RelRateDot, index};
  default: break;
  }
  throw std::logic_error("second derivatives are not representable: " + text());
}

std::string Atom::text() const {
  const std::string n = std::to_string(index);
  switch (kind) {
  case AtomKind::RelRot: return "R" + n;
  case AtomKind::RelRotInv: return "R" + n + "-";
  case AtomKind::RelRotDot: return "dR" + n;
  case AtomKind::RelRotInvDot: return "dR" + n + "-";
  case AtomKind::Inertia: return "Th" + n;
  case AtomKind::OmegaBody: return "w";
  case AtomKind::OmegaBodyDot: return "dw";
  case AtomKind::RelRate: return "w" + n + "r";
  case AtomKind::RelRateDot: return "dw" + n + "r";
  }
  return "?";
}

SymbolicTerm::SymbolicTerm(std::vector<Atom> factors) : factors_(std::move(factors)) {
  if (factors_.empty() || !factors_.back().is_vector()) {
    throw std::invalid_argument("a term must end in a vector atom");
  }
  for (std::size_t i = 0; i + 1 < factors_.size(); ++i) {
    if (factors_[i].is_vector()) {
      throw std::invalid_argument("vector atom " + factors_[i].text() + " may only appear last");
    }
  }
}

SymbolicTerm SymbolicTerm::parse(std::string_view line) {
  std::vector<Atom> atoms;
  for (std::string_view token : split_ws(line)) {
    atoms.push_back(Atom::parse(token));
  }
  try {
    return SymbolicTerm(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(e.what()) + ": '" + std::string(line) + "'");
  }
}

bool SymbolicTerm::contains(const Atom& atom) const {
  return std::find(factors_.begin(), factors_.end(), atom) != factors_.end();
}

bool SymbolicTerm::contains_kind(AtomKind kind) const {
  return std::any_of(factors_.begin(), factors_.end(), [kind](const Atom& a) { return a.kind == kind; });
}

SymbolicTerm SymbolicTerm::premultiplied(const Atom& matrix) const {
  std::vector<Atom> f;
  f.reserve(factors_.size() + 1);
  f.push_back(matrix);
  f.insert(f.end(), factors_.begin(), factors_.end());
  return SymbolicTerm(std::move(f));
}

std::string SymbolicTerm::text() const {
  std::string out;
  for (const Atom& a : factors_) {
    if (!out.empty()) {
      out += ' ';
    }
    out += a.text();
  }
  return out;
}

SymbolicSum SymbolicSum::parse(std::string_view text) {
  std::vector<SymbolicTerm> terms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(start, end - start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!split_ws(line).empty()) {
      terms.push_back(SymbolicTerm::parse(line));
    }
    start = end + 1;
  }
  return SymbolicSum(std::move(terms));
}

SymbolicSum SymbolicSum::read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

SymbolicSum& SymbolicSum::operator+=(const SymbolicSum& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

SymbolicSum SymbolicSum::premultiplied(const Atom& matrix) const {
  std::vector<SymbolicTerm> out;
  out.reserve(terms_.size());
  for (const SymbolicTerm& t : terms_) {
    out.push_back(t.premultiplied(matrix));
  }
  return SymbolicSum(std::move(out));
}

SymbolicSum SymbolicSum::derivative() const {
  std::vector<SymbolicTerm> out;
  for (const SymbolicTerm& t : terms_) {
    const auto& f = t.factors();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f[i].is_time_varying()) {
        continue;
      }
      std::vector<Atom> g = f;
      g[i] = f[i].derivative();
      out.emplace_back(std::move(g));
    }
  }
  return SymbolicSum(std::move(out));
}

SymbolicSum SymbolicSum::without(AtomKind kind) const {
  std::vector<SymbolicTerm> out;
  std::copy_if(terms_.begin(), terms_.end(), std::back_inserter(out),
               [kind](const SymbolicTerm& t) { return !t.contains_kind(kind); });
  return SymbolicSum(std::move(out));
}

SymbolicSum SymbolicSum::only_with(AtomKind kind) const {
  std::vector<SymbolicTerm> out;
  std::copy_if(terms_.begin(), terms_.end(), std::back_inserter(out),
               [kind](const SymbolicTerm& t) { return t.contains_kind(kind); });
  return SymbolicSum(std::move(out));
}

SymbolicSum SymbolicSum::canonical() const {
  std::vector<std::pair<std::string, SymbolicTerm>> keyed;
  keyed.reserve(terms_.size());
  for (const SymbolicTerm& t : terms_) {
    keyed.emplace_back(t.text(), t);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SymbolicTerm> out;
  out.reserve(keyed.size());
  for (auto& [key, term] : keyed) {
    out.push_back(std::move(term));
  }
  return SymbolicSum(std::move(out));
}

std::string SymbolicSum::text() const {
  std::string out;
  for (const SymbolicTerm& t : canonical().terms_) {
    out += t.text();
    out += '\n';
  }
  return out;
}

bool SymbolicSum::operator==(const SymbolicSum& other) const {
  return canonical().terms_ == other.canonical().terms_;
}

namespace {

Atom rel_rot(int n) { return Atom::make(AtomKind::RelRot, n); }
Atom rel_rot_inv(int n) { return Atom::make(AtomKind::RelRotInv, n); }
Atom rel_rot_dot(int n) { return Atom::make(AtomKind::RelRotDot, n); }
Atom rel_rot_inv_dot(int n) { return Atom::make(AtomKind::RelRotInvDot, n); }
Atom inertia(int n) { return Atom::make(AtomKind::Inertia, n); }

SymbolicSum single(const Atom& vector_atom) { return SymbolicSum({SymbolicTerm({vector_atom})}); }

// Angular velocities omega_1..omega_4 (index 0..3).
std::array<SymbolicSum, 4> omegas() {
  std::array<SymbolicSum, 4> w;
  w[0] = single(Atom::make(AtomKind::OmegaBody));
  for (int n = 2; n <= 4; ++n) {
    w[n - 1] = single(Atom::make(AtomKind::RelRate, n)) + w[n - 2].premultiplied(rel_rot(n));
  }
  return w;
}

std::array<SymbolicSum, 4> momenta(const std::array<SymbolicSum, 4>& w) {
  std::array<SymbolicSum, 4> l;
  l[3] = w[3].premultiplied(inertia(4));
  for (int n = 4; n >= 2; --n) {
    l[n - 2] = l[n - 1].premultiplied(rel_rot_inv(n)) + w[n - 2].premultiplied(inertia(n - 1));
  }
  return l;
}

} // namespace

SymbolicSum expand_L() { return momenta(omegas())[0].canonical(); }

SymbolicSum expand_Tmec() { return expand_L().derivative().canonical(); }

SymbolicSum expand_Tmec_recursive() {
  const std::array<SymbolicSum, 4> w = omegas();
  const std::array<SymbolicSum, 4> l = momenta(w);

  std::array<SymbolicSum, 4> wd;
  wd[0] = single(Atom::make(AtomKind::OmegaBodyDot));
  for (int n = 2; n <= 4; ++n) {
    wd[n - 1] = single(Atom::make(AtomKind::RelRateDot, n)) + w[n - 2].premultiplied(rel_rot_dot(n)) +
                wd[n - 2].premultiplied(rel_rot(n));
  }
  SymbolicSum ld = wd[3].premultiplied(inertia(4));
  for (int n = 4; n >= 2; --n) {
    ld = l[n - 1].premultiplied(rel_rot_inv_dot(n)) + ld.premultiplied(rel_rot_inv(n)) +
         wd[n - 2].premultiplied(inertia(n - 1));
  }
  return ld.canonical();
}

SymbolicSum expand_B() { return expand_Tmec().without(AtomKind::OmegaBodyDot).canonical(); }

SymbolicSum expand_theta_com_times_omega_dot() {
  // Matrix products kept as atom lists; the nested form is distributed level by level.
  std::vector<std::vector<Atom>> m{{inertia(4)}};
  for (int n = 4; n >= 2; --n) {
    std::vector<std::vector<Atom>> next;
    for (const auto& product : m) {
      std::vector<Atom> p{rel_rot_inv(n)};
      p.insert(p.end(), product.begin(), product.end());
      p.push_back(rel_rot(n));
      next.push_back(std::move(p));
    }
    next.push_back({inertia(n - 1)});
    m = std::move(next);
  }
  std::vector<SymbolicTerm> terms;
  for (auto& product : m) {
    product.push_back(Atom::make(AtomKind::OmegaBodyDot));
    terms.emplace_back(std::move(product));
  }
  return SymbolicSum(std::move(terms)).canonical();
}

void Bindings::set(const Atom& atom, const Matrix3& value) {
  if (atom.is_vector()) {
    throw std::invalid_argument("atom " + atom.text() + " is a vector");
  }
  matrices_[atom] = value;
}

void Bindings::set(const Atom& atom, const Vector3& value) {
  if (!atom.is_vector()) {
    throw std::invalid_argument("atom " + atom.text() + " is a matrix");
  }
  vectors_[atom] = value;
}

const Matrix3& Bindings::matrix(const Atom& atom) const {
  const auto it = matrices_.find(atom);
  if (it == matrices_.end()) {
    throw std::out_of_range("missing binding for atom " + atom.text());
  }
  return it->second;
}

const Vector3& Bindings::vector(const Atom& atom) const {
  const auto it = vectors_.find(atom);
  if (it == vectors_.end()) {
    throw std::out_of_range("missing binding for atom " + atom.text());
  }
  return it->second;
}

Bindings Bindings::from_state(const FrameChain& chain, const ChainState& state) {
  const RelativeKinematics k = relative_kinematics(chain, state);
  Bindings b;
  for (int n = 1; n <= 4; ++n) {
    b.set(inertia(n), chain.frames[n - 1].inertia());
  }
  for (int n = 2; n <= 4; ++n) {
    b.set(rel_rot(n), k.rot[n - 1]);
    b.set(rel_rot_inv(n), k.rot_inv[n - 1]);
    b.set(rel_rot_dot(n), k.rot_dot[n - 1]);
    b.set(rel_rot_inv_dot(n), k.rot_inv_dot[n - 1]);
    b.set(Atom::make(AtomKind::RelRate, n), k.rate[n - 1]);
    b.set(Atom::make(AtomKind::RelRateDot, n), k.rate_dot[n - 1]);
  }
  b.set(Atom::make(AtomKind::OmegaBody), state.omega);
  b.set(Atom::make(AtomKind::OmegaBodyDot), state.omega_dot);
  return b;
}

Vector3 evaluate(const SymbolicTerm& term, const Bindings& bindings) {
  const auto& f = term.factors();
  Vector3 v = bindings.vector(f.back());
  for (std::size_t i = f.size() - 1; i-- > 0;) {
    v = bindings.matrix(f[i]) * v;
  }
  return v;
}

Vector3 evaluate(const SymbolicSum& sum, const Bindings& bindings) {
  Vector3 total = Vector3::Zero();
  for (const SymbolicTerm& t : sum.terms()) {
    total += evaluate(t, bindings);
  }
  return total;
}

} // namespace eggsim::symbolic
