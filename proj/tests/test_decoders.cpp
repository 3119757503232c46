#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

#include "erasim/circuit_builders.hpp"
#include "erasim/decode.hpp"
#include "erasim/ml_oracle.hpp"
#include "erasim/rng.hpp"
#include "erasim/stabilizer_code.hpp"
#include "erasim/stats.hpp"

using namespace erasim;

namespace {

LogicalClass class_from_flips(bool x_flip, bool z_flip) {
  if (x_flip && z_flip) return LogicalClass::Y;
  if (x_flip) return LogicalClass::X;
  if (z_flip) return LogicalClass::Z;
  return LogicalClass::I;
}

LogicalClass actual_class(const StabilizerCode& code, const PauliOp& error) {
  return class_from_flips(!pauli_commutes(error, code.logical_z),
                          !pauli_commutes(error, code.logical_x));
}

// Fixture for explicit erasure patterns on a code-capacity circuit.
struct ErasureFixture {
  StabilizerCode code;
  Circuit circuit;
  GraphPair graphs;

  explicit ErasureFixture(const StabilizerCode& c, double e = 0.25)
      : code(c), circuit(build_code_capacity_circuit(code, e, 0.0)),
        graphs(build_decoding_graphs(circuit)) {}

  ShotRecord make_shot(const std::vector<int>& erased_qubits, const PauliOp& error) const {
    ShotRecord shot;
    shot.detectors = syndrome_of(code, error);  // detector order equals stabilizer order
    shot.flags = erased_qubits;                 // code-capacity check id = qubit index
    shot.observables = BitVec(1);
    if (!pauli_commutes(error, code.logical_z)) shot.observables.set(0, true);
    return shot;
  }

  LogicalClass decode_class(const std::vector<int>& erased_qubits, const PauliOp& error,
                            DecoderKind decoder, bool check_validity = false) const {
    const ShotRecord shot = make_shot(erased_qubits, error);
    if (check_validity) {
      const auto erased = erased_edges_from_flags(graphs, shot.flags);
      const BitVec sx = graph_syndrome(graphs.x, shot.detectors);
      const Correction cx = decode_side(graphs.x, erased.first, sx, decoder);
      REQUIRE(correction_valid(graphs.x, cx, sx));
      const BitVec sz = graph_syndrome(graphs.z, shot.detectors);
      const Correction cz = decode_side(graphs.z, erased.second, sz, decoder);
      REQUIRE(correction_valid(graphs.z, cz, sz));
    }
    const ShotDecision d = decode_shot(graphs, shot, decoder);
    return class_from_flips(d.x_flip, d.z_flip);
  }
};

// All Pauli assignments supported on the given qubits (identity included).
void for_each_assignment(std::size_t n, const std::vector<int>& support,
                         const std::function<void(const PauliOp&)>& fn) {
  static const Pauli table[4] = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};
  unsigned total = 1;
  for (std::size_t i = 0; i < support.size(); ++i) total *= 4;
  for (unsigned a = 0; a < total; ++a) {
    unsigned rest = a;
    PauliOp op(n);
    for (int q : support) {
      op.set(static_cast<std::size_t>(q), table[rest % 4]);
      rest /= 4;
    }
    fn(op);
  }
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset;
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (remaining == 0) {
      fn(subset);
      return;
    }
    for (int q = start; q <= n - remaining; ++q) {
      subset.push_back(q);
      rec(q + 1, remaining - 1);
      subset.pop_back();
    }
  };
  rec(0, k);
}

}  // namespace

TEST_CASE("trivial decodes return empty corrections") {
  ErasureFixture fix(build_rotated_surface_code(3));
  const BitVec empty_syndrome(static_cast<std::size_t>(fix.graphs.x.num_vertices));
  const auto peeled = peel_decode(fix.graphs.x, {}, empty_syndrome);
  REQUIRE(peeled);
  CHECK(peeled->edges.empty());
  const Correction uf = union_find_decode(fix.graphs.x, {}, empty_syndrome);
  CHECK(uf.edges.empty());
}

TEST_CASE("forced single-edge selection and not-covered fallback") {
  ErasureFixture fix(build_rotated_surface_code(3));
  const DecodingGraph& g = fix.graphs.x;
  // Find an interior edge; flag its endpoints as the syndrome.
  int interior = -1;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (g.edges[static_cast<std::size_t>(e)].u != kBoundary &&
        g.edges[static_cast<std::size_t>(e)].v != kBoundary)
      interior = e;
  REQUIRE(interior >= 0);
  BitVec syndrome(static_cast<std::size_t>(g.num_vertices));
  syndrome.set(static_cast<std::size_t>(g.edges[static_cast<std::size_t>(interior)].u), true);
  syndrome.set(static_cast<std::size_t>(g.edges[static_cast<std::size_t>(interior)].v), true);

  const auto peeled = peel_decode(g, {interior}, syndrome);
  REQUIRE(peeled);
  CHECK(peeled->edges == std::vector<int>{interior});

  // Same syndrome with no erasure: peeling refuses, union-find copes.
  CHECK_FALSE(peel_decode(g, {}, syndrome).has_value());
  const Correction uf = union_find_decode(g, {}, syndrome);
  CHECK(correction_valid(g, uf, syndrome));
}

TEST_CASE("d-1 erasures are always corrected at d=3 (exhaustive)") {
  ErasureFixture fix(build_rotated_surface_code(3));
  int cases = 0, failures = 0, uf_disagreements = 0, sets = 0;
  for (int k = 1; k <= 2; ++k) {
    for_each_subset(9, k, [&](const std::vector<int>& subset) {
      ++sets;
      for_each_assignment(9, subset, [&](const PauliOp& error) {
        ++cases;
        const LogicalClass truth = actual_class(fix.code, error);
        const LogicalClass peel = fix.decode_class(subset, error, DecoderKind::Peeling);
        const LogicalClass uf = fix.decode_class(subset, error, DecoderKind::UnionFind);
        if (peel != truth) ++failures;
        if ((peel == truth) != (uf == truth)) ++uf_disagreements;
      });
    });
  }
  CHECK(sets == 45);
  CHECK(cases == 45 * 4 + 36 * 12);  // 4^1 and 4^2 assignments per set
  CHECK(failures == 0);
  CHECK(uf_disagreements == 0);
}

TEST_CASE("single erasures are always corrected on the example code") {
  ErasureFixture fix(build_d2_surface_code());
  int failures = 0;
  for (int q = 0; q < 4; ++q)
    for_each_assignment(4, {q}, [&](const PauliOp& error) {
      const LogicalClass truth = actual_class(fix.code, error);
      if (fix.decode_class({q}, error, DecoderKind::Peeling, true) != truth) ++failures;
    });
  CHECK(failures == 0);
}

TEST_CASE("an erased logical fails exactly half the time") {
  ErasureFixture fix(build_rotated_surface_code(3));
  // Logical X runs down the left column.
  const std::vector<int> column = {0, 3, 6};
  int cases = 0, failures = 0;
  for_each_assignment(9, column, [&](const PauliOp& error) {
    ++cases;
    const LogicalClass truth = actual_class(fix.code, error);
    if (fix.decode_class(column, error, DecoderKind::Peeling) != truth) ++failures;
  });
  // The span carries the X logical and nothing else: the Z side always
  // succeeds, the X side is a fair coin against the peeled representative.
  CHECK(cases == 64);
  CHECK(failures == 32);

  // The maximum-likelihood oracle sees the same tie.
  const MlResult ml = ml_decode_bruteforce(fix.code, std::vector<double>(9, 0.0),
                                           {true, false, false, true, false, false, true,
                                            false, false},
                                           BitVec(8));
  CHECK(ml.coset_prob[0] == Catch::Approx(ml.coset_prob[1]).epsilon(1e-12));
  CHECK(ml.coset_prob[0] > 0.0);
  CHECK(ml.coset_prob[2] == Catch::Approx(0.0).margin(1e-30));
  CHECK(ml.predicted == LogicalClass::I);  // tie broken toward I
}

TEST_CASE("ml oracle basics") {
  const StabilizerCode code = build_d2_surface_code();
  // Zero noise prior: only the identity coset survives.
  const MlResult trivial = ml_decode_bruteforce(code, std::vector<double>(4, 0.0),
                                                std::vector<bool>(4, false), BitVec(3));
  CHECK(trivial.predicted == LogicalClass::I);
  CHECK(trivial.coset_prob[0] == Catch::Approx(1.0));
  CHECK(trivial.coset_prob[1] + trivial.coset_prob[2] + trivial.coset_prob[3] ==
        Catch::Approx(0.0).margin(1e-30));

  // Syndrome 010 under uniform small p: a single X beats the weight-3 cosets.
  BitVec syndrome(3);
  syndrome.set(1, true);
  const MlResult x_case = ml_decode_bruteforce(code, std::vector<double>(4, 0.01),
                                               std::vector<bool>(4, false), syndrome);
  CHECK(x_case.predicted == LogicalClass::X);

  CHECK_THROWS_AS(ml_decode_bruteforce(build_rotated_surface_code(5),
                                       std::vector<double>(25, 0.0),
                                       std::vector<bool>(25, false), BitVec(24)),
                  std::invalid_argument);
}

TEST_CASE("peeling matches the ml oracle on every erasure set up to size 3") {
  ErasureFixture fix(build_rotated_surface_code(3));
  const std::vector<double> zero_rate(9, 0.0);
  for (int k = 1; k <= 3; ++k) {
    for_each_subset(9, k, [&](const std::vector<int>& subset) {
      std::vector<bool> erased(9, false);
      for (int q : subset) erased[static_cast<std::size_t>(q)] = true;
      int peel_successes = 0, ml_successes = 0;
      for_each_assignment(9, subset, [&](const PauliOp& error) {
        const LogicalClass truth = actual_class(fix.code, error);
        if (fix.decode_class(subset, error, DecoderKind::Peeling) == truth) ++peel_successes;
        const MlResult ml =
            ml_decode_bruteforce(fix.code, zero_rate, erased, syndrome_of(fix.code, error));
        if (ml.predicted == truth) ++ml_successes;
      });
      CHECK(peel_successes == ml_successes);
    });
  }
}

TEST_CASE("union-find agrees with the ml oracle on single faults") {
  ErasureFixture fix(build_rotated_surface_code(3));
  for (int q = 0; q < 9; ++q)
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const PauliOp error = PauliOp::single(9, static_cast<std::size_t>(q), p);
      const LogicalClass uf = fix.decode_class({}, error, DecoderKind::UnionFind, true);
      CHECK(uf == actual_class(fix.code, error));
    }
}

TEST_CASE("union-find corrections are always valid on random noise") {
  ErasureFixture fix(build_rotated_surface_code(5), 0.0);
  ShotRng rng(555);
  for (int trial = 0; trial < 500; ++trial) {
    PauliOp error(25);
    for (std::size_t q = 0; q < 25; ++q) {
      const double u = rng.uniform();
      if (u < 0.05)
        error.set(q, Pauli::X);
      else if (u < 0.10)
        error.set(q, Pauli::Z);
      else if (u < 0.13)
        error.set(q, Pauli::Y);
    }
    const BitVec detectors = syndrome_of(fix.code, error);
    const BitVec sx = graph_syndrome(fix.graphs.x, detectors);
    const Correction cx = union_find_decode(fix.graphs.x, {}, sx);
    REQUIRE(correction_valid(fix.graphs.x, cx, sx));
    const BitVec sz = graph_syndrome(fix.graphs.z, detectors);
    const Correction cz = union_find_decode(fix.graphs.z, {}, sz);
    REQUIRE(correction_valid(fix.graphs.z, cz, sz));
  }
}

TEST_CASE("true-location flags never hurt union-find") {
  for (int d : {3, 5}) {
    const StabilizerCode code = build_rotated_surface_code(d);
    ErasureFixture fix(code, 0.0);
    ShotRng rng(777 + static_cast<uint64_t>(d));
    const int shots = 100000;
    const double p = 0.06;
    int64_t fail_plain = 0, fail_flagged = 0;
    int64_t plain_only = 0, flagged_only = 0;
    for (int s = 0; s < shots; ++s) {
      PauliOp error(code.n);
      std::vector<int> fault_qubits;
      for (std::size_t q = 0; q < code.n; ++q) {
        const double u = rng.uniform();
        if (u < p) {
          const double which = rng.uniform();
          error.set(q, which < 1.0 / 3 ? Pauli::X : which < 2.0 / 3 ? Pauli::Y : Pauli::Z);
          fault_qubits.push_back(static_cast<int>(q));
        }
      }
      const LogicalClass truth = actual_class(code, error);
      const LogicalClass plain = fix.decode_class({}, error, DecoderKind::UnionFind);
      const LogicalClass flagged =
          fix.decode_class(fault_qubits, error, DecoderKind::UnionFind);
      const bool fp = plain != truth, ff = flagged != truth;
      fail_plain += fp;
      fail_flagged += ff;
      plain_only += fp && !ff;
      flagged_only += ff && !fp;
    }
    INFO("d=" << d << " plain=" << fail_plain << " flagged=" << fail_flagged);
    // Paired comparison: the discordant counts decide the sign.
    const double sigma = std::sqrt(static_cast<double>(plain_only + flagged_only));
    CHECK(static_cast<double>(flagged_only) <=
          static_cast<double>(plain_only) + 3.0 * sigma);
    CHECK(fail_flagged <= fail_plain);
  }
}

TEST_CASE("union-find decode time grows near-linearly on pure erasures") {
  std::vector<double> log_edges, log_times;
  ShotRng rng(2025);
  for (int d : {5, 9, 13, 17, 21}) {
    const StabilizerCode code = build_rotated_surface_code(d);
    ErasureFixture fix(code, 0.2);
    const DecodingGraph& g = fix.graphs.x;
    const int reps = 400;
    // Pre-draw shots so timing covers decoding only.
    std::vector<std::vector<int>> erased_sets;
    std::vector<BitVec> syndromes;
    for (int r = 0; r < reps; ++r) {
      std::vector<int> flags;
      PauliOp error(code.n);
      for (std::size_t q = 0; q < code.n; ++q)
        if (rng.uniform() < 0.2) {
          flags.push_back(static_cast<int>(q));
          if (rng.bit()) error.set(q, Pauli::X);
        }
      const auto erased = erased_edges_from_flags(fix.graphs, flags);
      erased_sets.push_back(erased.first);
      syndromes.push_back(graph_syndrome(g, syndrome_of(fix.code, error)));
    }
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r)
      union_find_decode(g, erased_sets[static_cast<std::size_t>(r)],
                        syndromes[static_cast<std::size_t>(r)]);
    const auto stop = std::chrono::steady_clock::now();
    const double mean_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count() /
        static_cast<double>(reps);
    log_edges.push_back(std::log(static_cast<double>(g.edges.size())));
    log_times.push_back(std::log(mean_ns));
  }
  const LineFit fit = least_squares(log_edges, log_times);
  INFO("log-log slope " << fit.slope);
  CHECK(fit.slope < 1.3);
}
