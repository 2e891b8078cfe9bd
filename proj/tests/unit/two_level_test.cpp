#include <gtest/gtest.h>

#include <functional>

#include "support/support.hpp"

namespace gog {
namespace {

using testing::Generator;
using testing::local_word;

constexpr std::size_t kRadius = 20;

std::vector<std::string> images(const TwoLevelTwist& twist) {
  auto marking = top_marking(twist);
  auto phi = induced_automorphism(assemble(twist), marking);
  std::vector<std::string> out;
  for (auto const& image : phi.images()) out.push_back(marking.basis().format(image));
  return out;
}

std::size_t non_zero_edges(const TwoLevelTwist& twist) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < twist.top().edge_count(); ++i) {
    if (!locally_zero(twist, Edge{i}, kRadius).vertex) ++count;
  }
  return count;
}

void expect_same_outer_class(const TwoLevelTwist& before, const MoveResult& move) {
  EXPECT_TRUE(outer_class_witness(before, move.twist, move.transport)) << move.description;
  EXPECT_LE(non_zero_edges(move.twist), non_zero_edges(before)) << move.description;
}

std::string error_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const std::exception& error) {
    return error.what();
  }
  return "";
}

TEST(Assemble, IdentityData) {
  auto b = testing::fixture_b();
  auto identity_local = LocalTwist(DehnTwist::identity(b.local(Vertex{0}).twist.gog()), Vertex{0});
  auto one = PathWord::trivial(Vertex{0});
  TwoLevelTwist plain(b.top(), {identity_local}, {one, one}, {one, one});
  auto morphism = assemble(plain);
  EXPECT_EQ(morphism.corrections, GOGMorphism::identity(plain.top_gog()).corrections);
  EXPECT_EQ(images(plain), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Assemble, FixtureByHand) {
  // t_c goes to delta(c bar) t_c delta(c)^-1 with delta(c) = b, delta(c bar) = 1.
  auto b = testing::fixture_b();
  EXPECT_EQ(images(b), (std::vector<std::string>{"a", "ba", "cB"}));
  EXPECT_TRUE(validate(assemble(b)).empty());
}

TEST(Assemble, ReassemblyKeepsTheOuterClass) {
  auto b = testing::fixture_b();
  auto const& local = b.local(Vertex{0}).twist.gog();
  Generator gen(71);
  for (int i = 0; i < 30; ++i) {
    auto after = b;
    for (std::size_t e = 0; e < 2; ++e) {
      auto u = gen.loop(local, Vertex{0}, static_cast<std::size_t>(gen.integer(0, 2)), 2);
      after = after.with_delta_star(Edge{e}, b.delta_star(Edge{e}), u);
    }
    auto path = gen.loop(local, Vertex{0}, static_cast<std::size_t>(gen.integer(0, 2)), 2);
    after = after.with_base_point(Vertex{0}, Vertex{0}, path);
    auto transport = reassembly_transport(b, after, {path});
    EXPECT_TRUE(outer_class_witness(b, after, transport));
  }
}

TEST(LocallyZero, Examples) {
  auto b = testing::fixture_b();
  EXPECT_TRUE(locally_zero(b, Edge{1}, kRadius).vertex);
  EXPECT_FALSE(locally_zero(b, Edge{0}, kRadius).vertex);
  EXPECT_TRUE(locally_zero(b, Edge{0}, kRadius).certified);
  // A vertex element already has path length zero.
  EXPECT_TRUE(locally_zero(testing::fixture_b_with_reverse("a"), Edge{1}, kRadius).vertex);
}

TEST(ForwardOrientation, Fixture) {
  auto forward = forward_orientation(testing::fixture_b(), kRadius);
  EXPECT_EQ(forward.forward, (std::vector<Edge>{Edge{0}}));
  EXPECT_TRUE(forward.certified);
}

TEST(ForwardOrientation, BothOrNeitherSideZero) {
  auto both = testing::fixture_b().with_delta_star(Edge{0}, PathWord::trivial(Vertex{0}),
                                                   PathWord::trivial(Vertex{0}));
  EXPECT_EQ(error_of([&] { forward_orientation(both, kRadius); }),
            "edge 'c': both orientations are locally zero");
  auto neither = testing::fixture_b_with_reverse("T[b]");
  EXPECT_EQ(error_of([&] { forward_orientation(neither, kRadius); }),
            "edge 'c': neither orientation is locally zero");
}

TEST(CheckEfficient2Level, FixturePasses) {
  auto report = check_efficient_2level(testing::fixture_b(), kRadius);
  EXPECT_TRUE(report.efficient());
  EXPECT_TRUE(report.certified);
  EXPECT_EQ(report.rank, 3U);
  ASSERT_EQ(report.local_reports.size(), 1U);
  EXPECT_TRUE(report.local_reports.front().second.efficient());
}

TEST(CheckEfficient2Level, DuplicateCorrections) {
  auto equal = check_efficient_2level(testing::parallel_edges("t[b]"), kRadius);
  EXPECT_FALSE(equal.efficient());
  EXPECT_TRUE(equal.forward_ok);
  EXPECT_FALSE(equal.distinct_corrections);
  EXPECT_EQ(equal.witnesses, (std::vector<std::string>{"e conjugate to g by U = 1@v"}));

  auto planted = check_efficient_2level(testing::parallel_edges("a.t[b].A"), kRadius);
  EXPECT_FALSE(planted.distinct_corrections);
  EXPECT_EQ(planted.witnesses, (std::vector<std::string>{"e conjugate to g by U = A@v"}));
}

TEST(CheckEfficient2Level, DoublyNonZeroPair) {
  auto report = check_efficient_2level(testing::fixture_b_with_reverse("T[b]"), kRadius);
  EXPECT_FALSE(report.efficient());
  EXPECT_FALSE(report.forward_ok);
  EXPECT_EQ(report.forward_detail, "edge 'c': neither orientation is locally zero");
}

TEST(MoveSubdivide, KeepsOuterClass) {
  auto b = testing::fixture_b();
  auto once = move_subdivide(b, Edge{0});
  expect_same_outer_class(b, once);
  EXPECT_EQ(once.twist.top().vertex_count(), 2U);
  EXPECT_EQ(once.twist.top().pair_count(), 2U);
  EXPECT_EQ(images(once.twist), images(b));
  // The side that was trivial stays trivial, the new vertex sees trivial words.
  for (std::size_t i = 0; i < once.twist.top().edge_count(); ++i) {
    Edge e{i};
    if (once.twist.top().terminal(e) != Vertex{0}) {
      EXPECT_TRUE(once.twist.delta_star(e).is_trivial());
    }
  }
  std::size_t trivial_into_v = 0;
  for (std::size_t i = 0; i < once.twist.top().edge_count(); ++i) {
    Edge e{i};
    if (once.twist.top().terminal(e) == Vertex{0} && once.twist.delta_star(e).is_trivial()) {
      ++trivial_into_v;
    }
  }
  EXPECT_EQ(trivial_into_v, 1U);
}

TEST(MoveSubdivide, DoubleSubdivisionKeepsOuterClass) {
  auto b = testing::fixture_b();
  auto once = move_subdivide(b, Edge{0});
  for (std::size_t p = 0; p < once.twist.top().pair_count(); ++p) {
    auto twice = move_subdivide(once.twist, Edge{2 * p});
    expect_same_outer_class(once.twist, twice);
    EXPECT_EQ(images(twice.twist), images(b));
  }
}

TEST(MoveContract, UndoesSubdivision) {
  auto b = testing::fixture_b();
  auto once = move_subdivide(b, Edge{0});
  bool contracted = false;
  for (std::size_t p = 0; p < once.twist.top().pair_count(); ++p) {
    Edge e{2 * p};
    if (!locally_zero(once.twist, e, kRadius).vertex ||
        !locally_zero(once.twist, e.bar(), kRadius).vertex) {
      continue;
    }
    auto back = move_contract(once.twist, e, kRadius);
    expect_same_outer_class(once.twist, back);
    EXPECT_EQ(back.twist.top().vertex_count(), 1U);
    EXPECT_TRUE(check_efficient_2level(back.twist, kRadius).efficient());
    contracted = true;
  }
  EXPECT_TRUE(contracted);
}

TEST(MoveContract, Errors) {
  auto b = testing::fixture_b();
  EXPECT_EQ(error_of([&] { move_contract(b, Edge{0}, kRadius); }), "contract: edge 'c' is a loop");
  auto blocked = testing::blow_up_needed();
  EXPECT_EQ(error_of([&] { move_contract(blocked, Edge{2}, kRadius); }),
            "contract: edge 'd': general blow-up not implemented (out of scope)");
  auto parallel = testing::parallel_edges("t[b]");
  EXPECT_EQ(error_of([&] { move_contract(parallel, Edge{0}, kRadius); }),
            "contract: edge 'e' must be locally zero on both sides");
}

TEST(MoveAlign, SelfAlignIsIdentity) {
  auto b = testing::fixture_b();
  auto same = move_align(b, Edge{0}, Edge{0}, PathWord::trivial(Vertex{0}));
  EXPECT_EQ(same.twist.delta_stars(), b.delta_stars());
  expect_same_outer_class(b, same);
}

TEST(MoveAlign, PlantedConjugatePair) {
  auto twist = testing::parallel_edges("a.t[b].A");
  auto aligned = move_align(twist, Edge{0}, Edge{4}, local_word("A"));
  EXPECT_EQ(aligned.twist.delta_star(Edge{0}), twist.delta_star(Edge{4}));
  expect_same_outer_class(twist, aligned);
  EXPECT_FALSE(error_of([&] { move_align(twist, Edge{0}, Edge{4}, local_word("a")); }).empty());
  EXPECT_FALSE(error_of([&] { move_align(twist, Edge{0}, Edge{1}, local_word("a")); }).empty());
}

TEST(MoveAlign, RandomConjugatesKeepTheOuterClass) {
  // Any twisted conjugate of delta*(g) is a valid replacement target.
  auto base = testing::parallel_edges("t[b]");
  auto const& local = base.local(Vertex{0});
  auto inverse = local.twist.inverse().as_morphism();
  Generator gen(72);
  for (int i = 0; i < 30; ++i) {
    auto u = gen.loop(local.twist.gog(), Vertex{0}, static_cast<std::size_t>(gen.integer(0, 2)), 2);
    auto target = h_conjugate(base.delta_star(Edge{0}), u, inverse);
    auto twist = base.with_delta_star(Edge{4}, target, base.connecting(Edge{4}));
    auto aligned = move_align(twist, Edge{0}, Edge{4}, u);
    EXPECT_TRUE(equal_pointed(aligned.twist.delta_star(Edge{0}), target, local.twist.gog()));
    expect_same_outer_class(twist, aligned);
  }
}

TEST(MoveReplaceCorrection, RandomWitnessesKeepTheOuterClass) {
  auto b = testing::fixture_b();
  auto const& local = b.local(Vertex{0});
  auto inverse = local.twist.inverse().as_morphism();
  Generator gen(73);
  for (int i = 0; i < 30; ++i) {
    Edge e{static_cast<std::size_t>(gen.integer(0, 1))};
    auto u = gen.loop(local.twist.gog(), Vertex{0}, static_cast<std::size_t>(gen.integer(0, 2)), 2);
    auto move = move_replace_correction(b, e, u);
    EXPECT_TRUE(equal_pointed(move.twist.delta_star(e), h_conjugate(b.delta_star(e), u, inverse),
                              local.twist.gog()));
    expect_same_outer_class(b, move);
  }
}

TEST(MoveFold, ParallelEdges) {
  auto twist = testing::parallel_edges("t[b]");
  auto steps = move_fold(twist, Edge{0}, Edge{4}, kRadius);
  ASSERT_FALSE(steps.empty());
  auto current = twist;
  for (auto const& step : steps) {
    expect_same_outer_class(current, step);
    current = step.twist;
  }
  EXPECT_EQ(current.top().pair_count(), twist.top().pair_count() - 1);
  EXPECT_TRUE(check_efficient_2level(current, kRadius).efficient());
}

TEST(MoveFold, Errors) {
  auto twist = testing::parallel_edges("a.t[b].A");
  EXPECT_EQ(error_of([&] { move_fold(twist, Edge{0}, Edge{0}, kRadius); }),
            "fold: edges must be distinct");
  EXPECT_FALSE(error_of([&] { move_fold(twist, Edge{0}, Edge{4}, kRadius); }).empty());
  EXPECT_FALSE(error_of([&] { move_fold(twist, Edge{0}, Edge{1}, kRadius); }).empty());
}

std::vector<std::string> trace(const MakeEfficientResult& result) {
  std::vector<std::string> out;
  for (auto const& step : result.steps) out.push_back(step.description);
  return out;
}

TEST(MakeEfficient, FixtureUnchanged) {
  auto b = testing::fixture_b();
  auto result = make_efficient(b, kRadius);
  ASSERT_TRUE(result.result);
  EXPECT_TRUE(result.steps.empty());
  EXPECT_EQ(result.result->delta_stars(), b.delta_stars());
  EXPECT_TRUE(result.report.efficient());
}

TEST(MakeEfficient, ContractsARedundantSubdivision) {
  auto subdivided = move_subdivide(testing::fixture_b(), Edge{0}).twist;
  auto result = make_efficient(subdivided, kRadius);
  ASSERT_TRUE(result.result) << result.failure;
  EXPECT_EQ(trace(result), (std::vector<std::string>{"contract c1"}));
  EXPECT_EQ(result.result->top().vertex_count(), 1U);
  EXPECT_TRUE(result.report.efficient());
}

TEST(MakeEfficient, AlignsThenFoldsDuplicates) {
  auto equal = make_efficient(testing::parallel_edges("t[b]"), kRadius);
  ASSERT_TRUE(equal.result) << equal.failure;
  EXPECT_EQ(trace(equal), (std::vector<std::string>{"fold e onto g"}));
  EXPECT_TRUE(equal.report.efficient());

  auto conjugate = make_efficient(testing::parallel_edges("a.t[b].A"), kRadius);
  ASSERT_TRUE(conjugate.result) << conjugate.failure;
  EXPECT_EQ(trace(conjugate), (std::vector<std::string>{"align e to g", "fold e onto g"}));
  EXPECT_TRUE(conjugate.report.efficient());
  EXPECT_EQ(images(*conjugate.result).size(), 4U);
}

TEST(MakeEfficient, SubdividesADoublyNonZeroEdge) {
  auto twist = testing::fixture_b_with_reverse("T[b]");
  auto result = make_efficient(twist, kRadius);
  ASSERT_TRUE(result.result) << result.failure;
  EXPECT_EQ(trace(result), (std::vector<std::string>{"subdivide c"}));
  EXPECT_TRUE(result.report.efficient());
  EXPECT_EQ(images(*result.result), images(twist));
}

TEST(MakeEfficient, ReportsTheBlowUpBoundary) {
  auto result = make_efficient(testing::blow_up_needed(), kRadius);
  EXPECT_FALSE(result.result);
  EXPECT_EQ(result.failure, "contract: edge 'd': general blow-up not implemented (out of scope)");
  EXPECT_FALSE(result.report.efficient());
}

TEST(TopDLength, Fixture) {
  auto b = testing::fixture_b();
  auto marking = top_marking(b);
  EXPECT_EQ(top_d_length(b, Edge{0}, marking, marking.basis()), Rational(1, 2));
  EXPECT_EQ(top_d_length(b, Edge{1}, marking, marking.basis()), Rational(0));
}

}  // namespace
}  // namespace gog
