#include <gtest/gtest.h>

#include <random>

#include "eggsim/oracles/validation.hpp"
#include "eggsim/symbolic.hpp"

using namespace eggsim;
using namespace eggsim::symbolic;

TEST(Atom, TextRoundTrip) {
  for (const char* t : {"R2", "R3-", "dR4", "dR2-", "Th1", "Th4", "w", "dw", "w3r", "dw4r"}) {
    EXPECT_EQ(Atom::parse(t).text(), t);
  }
}

TEST(Atom, RejectsCombinationsOutsideTheChain) {
  EXPECT_THROW(Atom::make(AtomKind::RelRot, 1), std::invalid_argument);
  EXPECT_THROW(Atom::make(AtomKind::Inertia, 5), std::invalid_argument);
  EXPECT_NO_THROW(Atom::make(AtomKind::Inertia, 1));
  EXPECT_THROW(Atom::parse("R1"), ParseError);
  EXPECT_THROW(Atom::parse("Q2"), ParseError);
}

TEST(Atom, Derivatives) {
  EXPECT_EQ(Atom::parse("R3").derivative().text(), "dR3");
  EXPECT_EQ(Atom::parse("R3-").derivative().text(), "dR3-");
  EXPECT_EQ(Atom::parse("w").derivative().text(), "dw");
  EXPECT_EQ(Atom::parse("w2r").derivative().text(), "dw2r");
  EXPECT_FALSE(Atom::parse("Th2").is_time_varying());
}

TEST(Term, VectorOnlyInLastPosition) {
  EXPECT_THROW(SymbolicTerm({Atom::parse("w"), Atom::parse("R2")}), std::invalid_argument);
  EXPECT_THROW(SymbolicTerm({Atom::parse("R2"), Atom::parse("Th2")}), std::invalid_argument);
  EXPECT_EQ(SymbolicTerm::parse("R2- Th2 R2 w").text(), "R2- Th2 R2 w");
}

TEST(ExpandL, TenTermsWithKnownEndpoints) {
  const SymbolicSum l = expand_L();
  EXPECT_EQ(l.size(), 10u);
  const SymbolicSum first = SymbolicSum::parse("Th1 w");
  const SymbolicSum last = SymbolicSum::parse("R2- R3- R4- Th4 R4 R3 R2 w");
  EXPECT_EQ(l.only_with(AtomKind::Inertia).size(), 10u);
  auto has = [&](const SymbolicSum& s) {
    const std::string text = l.text();
    return text.find(s.terms()[0].text() + "\n") != std::string::npos;
  };
  EXPECT_TRUE(has(first));
  EXPECT_TRUE(has(last));
}

TEST(ExpandL, MatchesGoldenFile) {
  EXPECT_EQ(expand_L(), SymbolicSum::read_file(oracles::default_golden_dir() / "appendix_a.txt"));
}

TEST(ExpandB, MatchesGoldenFileAndEveryTermIsDotted) {
  const SymbolicSum b = expand_B();
  EXPECT_EQ(b, SymbolicSum::read_file(oracles::default_golden_dir() / "appendix_b.txt"));
  for (const SymbolicTerm& t : b.terms()) {
    bool dotted = false;
    for (const Atom& a : t.factors()) {
      dotted = dotted || a.kind == AtomKind::RelRotDot || a.kind == AtomKind::RelRotInvDot ||
               a.kind == AtomKind::RelRateDot;
    }
    EXPECT_TRUE(dotted) << t.text();
    EXPECT_FALSE(t.contains_kind(AtomKind::OmegaBodyDot));
  }
}

TEST(ExpandTmec, PartitionsIntoBAndCombinedInertia) {
  const SymbolicSum tmec = expand_Tmec();
  EXPECT_EQ(tmec, expand_Tmec_recursive());
  EXPECT_EQ(tmec.only_with(AtomKind::OmegaBodyDot), expand_theta_com_times_omega_dot());
  EXPECT_EQ(tmec.without(AtomKind::OmegaBodyDot), expand_B());
  // Product-rule fanout: one term per time-varying factor of each L term.
  std::size_t fanout = 0;
  const SymbolicSum l = expand_L();
  for (const SymbolicTerm& t : l.terms()) {
    for (const Atom& a : t.factors()) {
      fanout += a.is_time_varying() ? 1 : 0;
    }
  }
  EXPECT_EQ(tmec.size(), fanout);
}

TEST(Canonical, IdempotentAndSorted) {
  const SymbolicSum s = expand_Tmec();
  EXPECT_EQ(s.canonical().text(), s.canonical().canonical().text());
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(s.text());
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(Canonical, OrderInsensitiveEquality) {
  EXPECT_EQ(SymbolicSum::parse("Th1 w\nR2- Th2 R2 w\n"), SymbolicSum::parse("# comment\nR2- Th2 R2 w\n\nTh1 w\n"));
  EXPECT_FALSE(SymbolicSum::parse("Th1 w\nTh1 w\n") == SymbolicSum::parse("Th1 w\n"));
}

TEST(Evaluate, IdentityBindingsGiveTensorSum) {
  const FrameChain chain = FrameChain::from_params([] {
    std::mt19937_64 rng(20);
    return oracles::random_params(rng);
  }());
  ChainState s;
  s.omega = Vector3(0.2, -0.4, 1.0);
  Matrix3 sum = Matrix3::Zero();
  for (const auto& f : chain.frames) {
    sum += f.inertia();
  }
  EXPECT_LE((evaluate(expand_L(), Bindings::from_state(chain, s)) - sum * s.omega).norm(), 1e-15);
}

TEST(Evaluate, MissingBindingNamesTheAtom) {
  Bindings b;
  b.set(Atom::parse("w"), Vector3(1, 0, 0));
  try {
    evaluate(SymbolicTerm::parse("R3 w"), b);
    FAIL() << "expected out_of_range";
  } catch (const std::out_of_range& e) {
    EXPECT_NE(std::string(e.what()).find("R3"), std::string::npos);
  }
}

TEST(Evaluate, ExpansionsMatchRecursion) {
  EXPECT_TRUE(oracles::check_appendix_a_numeric(1000, 21).passed);
  EXPECT_TRUE(oracles::check_appendix_b_numeric(1000, 22).passed);
}

TEST(Evaluate, TmecExpansionMatchesRecursionWithOmegaDot) {
  std::mt19937_64 rng(23);
  const SymbolicSum tmec = expand_Tmec();
  for (int i = 0; i < 200; ++i) {
    const FrameChain chain = FrameChain::from_params(oracles::random_params(rng));
    const ChainState s = oracles::random_chain_state(rng);
    EXPECT_LE(oracles::relative_error(evaluate(tmec, Bindings::from_state(chain, s)), mechanical_torque(chain, s)),
              1e-12);
  }
}
