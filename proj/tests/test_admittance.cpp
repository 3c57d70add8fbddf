#include <doctest.h>

#include "polygrid/admittance.hpp"
#include "support/random_grids.hpp"
#include "support/rank_oracle.hpp"

using namespace polygrid;
using testing::Rng;

namespace {

GridModel two_node_line() {
  GridModelBuilder b(1);
  b.add_node("a");
  b.add_node("b");
  ComplexMatrix z(1, 1);
  z(0, 0) = Complex(1.0, 1.0);
  b.add_branch("a", "b", CompoundBranchImpedance::from_matrix(z));
  return std::move(b).build();
}

}  // namespace

TEST_CASE("model builder bookkeeping") {
  GridModelBuilder b(2);
  b.add_node("a");
  b.add_node("b", CompoundShuntAdmittance::from_matrix(
                      Complex(0.2, 0.3) * ComplexMatrix::Identity(2, 2)));
  b.add_branch("a", "b", CompoundBranchImpedance::from_matrix(
                             Complex(1.0, 0.5) * ComplexMatrix::Identity(2, 2)));
  const TeeSection tee{
      CompoundBranchImpedance::from_matrix(Complex(0.5, 1.0) * ComplexMatrix::Identity(2, 2)),
      CompoundBranchImpedance::from_matrix(Complex(0.5, 1.0) * ComplexMatrix::Identity(2, 2)),
      CompoundShuntAdmittance::from_matrix(Complex(0.1, 0.4) * ComplexMatrix::Identity(2, 2))};
  CHECK(b.add_tee("a", "b", tee) == "a__b__T0");

  const GridModel m = std::move(b).build();
  CHECK(m.node_count() == 3);
  CHECK(m.branch_graph().edge_count() == 3);
  CHECK(m.virtual_node_count() == 1);
  CHECK(m.is_virtual(m.node_index("a__b__T0")));
  CHECK_FALSE(m.is_virtual(m.node_index("a")));
  CHECK_THROWS_AS(m.node_index("missing"), Error);

  GridModelBuilder dup(1);
  dup.add_node("x");
  CHECK_THROWS_AS(dup.add_node("x"), Error);
}

TEST_CASE("assembly of the elementary two-node line") {
  const GridModel m = two_node_line();
  const BlockMatrix y = assemble(m);
  const Complex expected(0.5, -0.5);  // inverse of 1 + j
  CHECK(std::abs(y.data()(0, 0) - expected) < 1e-15);
  CHECK(std::abs(y.data()(1, 1) - expected) < 1e-15);
  CHECK(std::abs(y.data()(0, 1) + expected) < 1e-15);
  CHECK(std::abs(y.data()(1, 0) + expected) < 1e-15);
}

TEST_CASE("primitive branch admittance is block diagonal with exact inverses") {
  GridModelBuilder b(2);
  b.add_node("a");
  b.add_node("b");
  b.add_node("c");
  ComplexMatrix z1(2, 2), z2(2, 2);
  z1 << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(1, 0);
  z2 = 2.0 * ComplexMatrix::Identity(2, 2);
  b.add_branch("a", "b", CompoundBranchImpedance::from_matrix(z1));
  b.add_branch("b", "c", CompoundBranchImpedance::from_matrix(z2));
  const GridModel m = std::move(b).build();

  const ComplexMatrix yl = primitive_branch_admittance(m);
  REQUIRE(yl.rows() == 4);
  CHECK((z1 * yl.block(0, 0, 2, 2) - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((yl.block(2, 2, 2, 2) - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK(yl.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(yl.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an isolated node with a shunt assembles to that shunt") {
  GridModelBuilder b(2);
  const ComplexMatrix y = Complex(0.3, 0.7) * ComplexMatrix::Identity(2, 2);
  b.add_node("only", CompoundShuntAdmittance::from_matrix(y));
  const GridModel m = std::move(b).build();
  CHECK((assemble(m).data() - y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block and subblock indexing") {
  Rng rng(31);
  testing::GridOptions opt;
  opt.nodes = 4;
  opt.phases = 2;
  opt.shunt_count = 1;
  const GridModel m = testing::random_connected_grid(rng, opt);
  const BlockMatrix y = assemble(m);

  CHECK((y.block(0, 0) - y.data().block(0, 0, 2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((y.block(3, 1) - y.data().block(6, 2, 2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(y.block(4, 0), Error);

  CHECK((y.subblock({0, 1, 2, 3}, {0, 1, 2, 3}) - y.data()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((y.subblock({2}, {1}) - y.block(2, 1)).cwiseAbs().maxCoeff() == 0.0);

  const ComplexMatrix gathered = y.subblock({0, 3}, {1, 2});
  CHECK(gathered.rows() == 4);
  CHECK(gathered.cols() == 4);
  CHECK((gathered.block(2, 0, 2, 2) - y.block(3, 1)).cwiseAbs().maxCoeff() == 0.0);

  // Ascending gather regardless of the order given.
  CHECK((y.subblock({3, 0}, {2, 1}) - gathered).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Ohm's law application") {
  const GridModel m = two_node_line();
  const BlockMatrix y = assemble(m);
  const Complex admittance(0.5, -0.5);

  NodalVector v{1, 2, ComplexVector::Zero(2)};
  CHECK(apply_ohm(y, v).values.cwiseAbs().maxCoeff() == 0.0);

  v.values << Complex(1, 0), Complex(0, 0);
  const NodalVector i = apply_ohm(y, v);
  CHECK(std::abs(i.values(0) - admittance) < 1e-15);
  CHECK(std::abs(i.values(1) + admittance) < 1e-15);

  // Common-mode rejection: equal voltages drive no current without shunts.
  v.values << Complex(1, 0), Complex(1, 0);
  CHECK(apply_ohm(y, v).values.cwiseAbs().maxCoeff() < 1e-15);

  NodalVector wrong{1, 3, ComplexVector::Zero(3)};
  CHECK_THROWS_AS(apply_ohm(y, wrong), Error);
}

TEST_CASE("row and column block sums reproduce the shunts") {
  SUBCASE("single node") {
    GridModelBuilder b(1);
    b.add_node("only");
    const GridModel m = std::move(b).build();
    const ShuntSumReport r = check_shunt_sum_lemma(m, assemble(m), 1e-12);
    CHECK(r.max_residual == 0.0);
    CHECK(r.passed);
  }

  SUBCASE("exact cancellation on a resistive chain") {
    GridModelBuilder b(1);
    b.add_node("a");
    b.add_node("b");
    b.add_node("c");
    ComplexMatrix unit = ComplexMatrix::Identity(1, 1);
    b.add_branch("a", "b", CompoundBranchImpedance::from_matrix(unit));
    b.add_branch("b", "c", CompoundBranchImpedance::from_matrix(unit));
    const GridModel m = std::move(b).build();
    const ShuntSumReport r = check_shunt_sum_lemma(m, assemble(m), 1e-12);
    CHECK(r.max_residual == 0.0);
  }

  SUBCASE("random grids stay below 1e-12") {
    Rng rng(32);
    for (int trial = 0; trial < 25; ++trial) {
      testing::GridOptions opt;
      opt.nodes = 3 + static_cast<Index>(trial % 8);
      opt.phases = 1 + static_cast<Index>(trial % 3);
      opt.shunt_count = static_cast<Index>(trial % 3);
      const GridModel m = testing::random_connected_grid(rng, opt);
      const ShuntSumReport r = check_shunt_sum_lemma(m, assemble(m), 1e-12);
      CHECK(r.max_residual < 1e-12);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("whole-matrix rank prediction") {
  SUBCASE("two nodes without shunts") {
    const GridModel m = two_node_line();
    const RankReport r = rank_report(m);
    CHECK(r.predicted_rank == 1);
    CHECK(r.measured_rank == 1);
    CHECK(r.agrees);
  }

  SUBCASE("one shunt restores full rank") {
    GridModelBuilder b(1);
    ComplexMatrix shunt(1, 1);
    shunt(0, 0) = Complex(0.0, 0.1);
    b.add_node("a", CompoundShuntAdmittance::from_matrix(shunt));
    b.add_node("b");
    ComplexMatrix z(1, 1);
    z(0, 0) = Complex(1.0, 1.0);
    b.add_branch("a", "b", CompoundBranchImpedance::from_matrix(z));
    const RankReport r = rank_report(std::move(b).build());
    CHECK(r.predicted_rank == 2);
    CHECK(r.measured_rank == 2);
    CHECK(r.agrees);
  }

  SUBCASE("an 8-node 3-phase grid without shunts has rank 21") {
    Rng rng(33);
    testing::GridOptions opt;
    opt.nodes = 8;
    opt.phases = 3;
    opt.extra_edges = 5;
    const GridModel m = testing::random_connected_grid(rng, opt);
    const RankReport r = rank_report(m);
    CHECK(r.predicted_rank == 21);
    CHECK(r.measured_rank == 21);
    CHECK(testing::elimination_rank(assemble(m).data()) == 21);
  }

  SUBCASE("disconnected graphs are refused unless forced") {
    GridModelBuilder b(1);
    b.add_node("a");
    b.add_node("b");
    const GridModel m = std::move(b).build();
    try {
      rank_report(m);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PreconditionViolated);
      CHECK(std::string(e.what()).find("not_weakly_connected") != std::string::npos);
    }
    const RankReport forced = rank_report(m, kDefaultRankRelTol, true);
    CHECK(forced.forced);
    CHECK(forced.measured_rank == 0);
    CHECK_FALSE(forced.agrees);  // prediction assumes connectivity
  }
}

TEST_CASE("diagonal subblock rank prediction") {
  Rng rng(34);

  SUBCASE("middle of a strictly passive chain") {
    testing::GridOptions opt;
    opt.nodes = 3;
    opt.phases = 2;
    opt.extra_edges = 0;
    const GridModel m = testing::random_connected_grid(rng, opt);
    const RankReport r = block_rank_report(m, {1});
    CHECK(r.predicted_rank == 2);
    CHECK(r.agrees);
  }

  SUBCASE("subsets disconnected inside the branch graph stay full rank") {
    GridModelBuilder b(1);
    for (int i = 0; i < 4; ++i) b.add_node("n" + std::to_string(i));
    for (int i = 0; i < 3; ++i) {
      b.add_branch(static_cast<NodeId>(i), static_cast<NodeId>(i + 1),
                   CompoundBranchImpedance::from_matrix(testing::random_strict_branch(rng, 1)));
    }
    const GridModel chain = std::move(b).build();
    const RankReport r = block_rank_report(chain, {0, 3});  // two far ends
    CHECK(r.predicted_rank == 2);
    CHECK(r.agrees);
  }

  SUBCASE("the full node set is not a proper subset") {
    const GridModel m = two_node_line();
    CHECK_THROWS_AS(block_rank_report(m, {0, 1}), Error);
  }

  SUBCASE("lossless grids are gated unless forced") {
    testing::GridOptions opt;
    opt.nodes = 4;
    opt.phases = 1;
    opt.all_lossless = true;
    const GridModel m = testing::random_connected_grid(rng, opt);
    try {
      block_rank_report(m, {1, 2});
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PreconditionViolated);
      CHECK(std::string(e.what()).find("not_strictly_passive") != std::string::npos);
    }
    // Forcing skips the gate and reports whatever the numbers say.
    const RankReport forced = block_rank_report(m, {1, 2}, kDefaultRankRelTol, true);
    CHECK(forced.forced);
    CHECK(forced.measured_rank >= 0);
  }
}

TEST_CASE("assembled matrices are complex-symmetric for conformant grids") {
  Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    testing::GridOptions opt;
    opt.nodes = 2 + static_cast<Index>(trial % 9);
    opt.phases = 1 + static_cast<Index>(trial % 4);
    opt.shunt_count = static_cast<Index>(trial % 4);
    opt.strictly_passive = (trial % 2) == 0;
    const GridModel m = testing::random_connected_grid(rng, opt);
    CHECK(is_symmetric(assemble(m).data(), 1e-12));
  }
}
