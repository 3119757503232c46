#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "erasim/circuit.hpp"
#include "erasim/circuit_builders.hpp"
#include "erasim/frame_sampler.hpp"
#include "erasim/rng.hpp"
#include "erasim/stabilizer_code.hpp"
#include "erasim/stats.hpp"
#include "erasim/tableau.hpp"

using namespace erasim;

namespace {

bool records_equal(const ShotRecord& a, const ShotRecord& b) {
  return a.detectors == b.detectors && a.flags == b.flags && a.observables == b.observables;
}

std::string detector_string(const ShotRecord& r) { return r.detectors.to_string(); }

// Positions of noise-site instructions per data qubit.
std::vector<int> noise_site_positions(const Circuit& c) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(c.instructions.size()); ++i)
    if (c.instructions[i].kind == OpKind::NoiseSite) out.push_back(i);
  return out;
}

Circuit random_corpus_circuit(ShotRng& rng) {
  const int pick = static_cast<int>(rng.below(3));
  const StabilizerCode code = rng.bit() ? build_d2_surface_code() : build_rotated_surface_code(3);
  if (pick == 0) return build_code_capacity_circuit(code, 0.0, 0.0);
  if (pick == 1)
    return build_phenomenological_circuit(code, 1 + static_cast<int>(rng.below(3)), 0.0, 0.0,
                                          0.0);
  DualRailParams dual;
  Schedule sched;
  switch (rng.below(4)) {
    case 0: sched = Schedule::every_gate(); break;
    case 1: sched = Schedule::every_round(); break;
    case 2: sched = Schedule::every_n(2); break;
    default: sched = Schedule::end_only(); break;
  }
  return build_memory_circuit(code, 1 + static_cast<int>(rng.below(3)), dual, sched);
}

}  // namespace

TEST_CASE("noiseless circuits sample all-zero records") {
  const StabilizerCode code = build_rotated_surface_code(3);
  for (const Circuit& circuit :
       {build_code_capacity_circuit(code, 0.0, 0.0),
        build_phenomenological_circuit(code, 2, 0.0, 0.0, 0.0),
        build_memory_circuit(code, 2, DualRailParams{}, Schedule::every_round())}) {
    FrameSampler sampler(circuit);
    for (int s = 0; s < 50; ++s) {
      const ShotRecord shot = sampler.sample(7, static_cast<uint64_t>(s));
      CHECK_FALSE(shot.detectors.any());
      CHECK_FALSE(shot.observables.any());
      CHECK(shot.flags.empty());
    }
  }
  CHECK_THROWS_AS(sample_shots(build_code_capacity_circuit(code, 0.0, 0.0), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("sampling is deterministic in (circuit, seed)") {
  const StabilizerCode code = build_rotated_surface_code(3);
  DualRailParams dual;
  dual.gamma = 0.02;
  dual.phi = 0.01;
  dual.f_pos = 0.003;
  dual.f_neg = 0.1;
  const Circuit circuit = build_memory_circuit(code, 3, dual, Schedule::every_round());
  const auto a = sample_shots(circuit, 200, 42);
  const auto b = sample_shots(circuit, 200, 42);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(records_equal(a[i], b[i]));

  // Shots are independent streams: sampling shot 137 alone matches the batch.
  FrameSampler sampler(circuit);
  CHECK(records_equal(sampler.sample(42, 137), a[137]));

  const auto c = sample_shots(circuit, 200, 43);
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += records_equal(a[i], c[i]) ? 0 : 1;
  CHECK(differing > 0);
}

TEST_CASE("single injected X on the example code yields syndrome 010") {
  const StabilizerCode code = build_d2_surface_code();
  const Circuit circuit = build_code_capacity_circuit(code, 0.0, 0.0);
  const std::vector<int> sites = noise_site_positions(circuit);
  REQUIRE(sites.size() == 4);

  FrameSampler sampler(circuit);
  const ShotRecord shot = sampler.propagate({{sites[0], 0, Pauli::X}});
  CHECK(detector_string(shot) == "010");
  CHECK(shot.observables.get(0));  // d1 sits on the logical-Z string

  const ShotRecord tableau = tableau_reference_sim(circuit, {{sites[0], 0, Pauli::X}});
  CHECK(records_equal(shot, tableau));
}

TEST_CASE("stabilizer-element errors are invisible") {
  const StabilizerCode code = build_rotated_surface_code(3);
  const Circuit circuit = build_code_capacity_circuit(code, 0.0, 0.0);
  const std::vector<int> sites = noise_site_positions(circuit);
  // Inject a full X-type stabilizer (first stabilizer is X-type).
  std::vector<FrameSampler::Injection> faults;
  for (std::size_t q = 0; q < code.n; ++q) {
    const Pauli p = code.stabilizers[0].op.at(q);
    if (p != Pauli::I) faults.push_back({sites[q], static_cast<int>(q), p});
  }
  FrameSampler sampler(circuit);
  const ShotRecord shot = sampler.propagate(faults);
  CHECK_FALSE(shot.detectors.any());
  CHECK_FALSE(shot.observables.any());
  const ShotRecord tableau = tableau_reference_sim(circuit, faults);
  CHECK(records_equal(shot, tableau));
}

TEST_CASE("data X before round 1 flips the adjacent Z-detectors once") {
  const StabilizerCode code = build_rotated_surface_code(3);
  const Circuit circuit = build_phenomenological_circuit(code, 3, 0.0, 0.0, 0.0);
  const std::vector<int> sites = noise_site_positions(circuit);
  const int center = 4;  // interior data qubit (1,1)
  FrameSampler sampler(circuit);
  const ShotRecord shot = sampler.propagate({{sites[static_cast<std::size_t>(center)],
                                              center, Pauli::X}});
  const ShotRecord tableau =
      tableau_reference_sim(circuit, {{sites[static_cast<std::size_t>(center)], center, Pauli::X}});
  CHECK(records_equal(shot, tableau));

  // Cross-check against the code-level syndrome: the error fires exactly the
  // round-1 detectors of the stabilizers it anticommutes with.
  const BitVec syndrome = syndrome_of(code, PauliOp::single(code.n, 4, Pauli::X));
  int fired = 0;
  for (int d = 0; d < circuit.num_detectors; ++d) {
    const DetectorMeta& meta = circuit.detector_meta[static_cast<std::size_t>(d)];
    const bool expect =
        meta.round == 1 && syndrome.get(static_cast<std::size_t>(meta.stab_index));
    CHECK(shot.detectors.get(static_cast<std::size_t>(d)) == expect);
    fired += shot.detectors.get(static_cast<std::size_t>(d)) ? 1 : 0;
    if (expect) CHECK_FALSE(meta.x_type);
  }
  CHECK(fired == 2);
}

TEST_CASE("frame sampler equals tableau oracle on a random corpus") {
  ShotRng rng(20240601);
  for (int entry = 0; entry < 300; ++entry) {
    const Circuit circuit = random_corpus_circuit(rng);
    std::vector<FrameSampler::Injection> faults;
    std::vector<FrameSampler::MeasInjection> meas_faults;
    const int num_faults = 1 + static_cast<int>(rng.below(6));
    for (int f = 0; f < num_faults; ++f) {
      const int idx = static_cast<int>(rng.below(circuit.instructions.size()));
      const int q = static_cast<int>(rng.below(static_cast<uint64_t>(circuit.num_qubits)));
      static const Pauli paulis[3] = {Pauli::X, Pauli::Y, Pauli::Z};
      faults.push_back({idx, q, paulis[rng.below(3)]});
    }
    std::sort(faults.begin(), faults.end(),
              [](const auto& a, const auto& b) { return a.instr_index < b.instr_index; });
    if (rng.bit()) {
      for (int i = 0; i < static_cast<int>(circuit.instructions.size()); ++i)
        if (circuit.instructions[static_cast<std::size_t>(i)].kind == OpKind::MeasureZ &&
            rng.below(16) == 0)
          meas_faults.push_back({i});
    }
    FrameSampler sampler(circuit);
    const ShotRecord frame = sampler.propagate(faults, meas_faults);
    const ShotRecord tableau = tableau_reference_sim(circuit, faults, meas_faults);
    REQUIRE(records_equal(frame, tableau));
  }
}

TEST_CASE("forced checks herald on every shot") {
  const StabilizerCode code = build_d2_surface_code();
  DualRailParams dual;
  dual.gamma = 0.0;
  Circuit circuit = build_memory_circuit(code, 1, dual, Schedule::every_gate());
  circuit.forced_checks = {7};
  FrameSampler sampler(circuit);
  for (int s = 0; s < 100; ++s) {
    const ShotRecord shot = sampler.sample(3, static_cast<uint64_t>(s));
    CHECK(std::find(shot.flags.begin(), shot.flags.end(), 7) != shot.flags.end());
  }
}

TEST_CASE("herald rate at a check matches the closed form") {
  const StabilizerCode code = build_rotated_surface_code(3);
  CheckParams check;
  check.f_pos = 0.02;
  check.f_neg = 0.1;
  const double gamma = 0.03;
  const Circuit circuit = build_code_capacity_circuit(code, gamma, 0.0, check);

  DualRailParams dual;
  dual.gamma = gamma;
  dual.f_pos = check.f_pos;
  dual.f_neg = check.f_neg;
  const double expected = dual_rail_step(dual).e;

  const int shots = 100000;
  FrameSampler sampler(circuit);
  int heralds = 0;
  for (int s = 0; s < shots; ++s) {
    const ShotRecord shot = sampler.sample(11, static_cast<uint64_t>(s));
    for (int f : shot.flags)
      if (f == 4) ++heralds;
  }
  const double rate = static_cast<double>(heralds) / shots;
  const double sigma = std::sqrt(expected * (1.0 - expected) / shots);
  CHECK(std::abs(rate - expected) < 3.0 * sigma);
}

TEST_CASE("flag-conditioned conversion is uniform for mixed, dephasing for biased") {
  // One qubit, one noise site, one check, then readout in Z (X-frame bit) or
  // in X basis via H (Z-frame bit).
  auto build = [](bool hadamard_before_readout, ConversionMode mode) {
    Circuit c;
    c.num_qubits = 1;
    c.append_noise(0, 0.5, 0.0, 0.0, 0.0);
    c.append_check(0, 0.0, 0.0, mode, ResetMode::OneWay);
    if (hadamard_before_readout) c.append_h(0);
    c.append_measure_z(0);
    c.append_detector({0});
    return c;
  };

  const int shots = 40000;
  for (bool hadamard : {false, true}) {
    const Circuit c = build(hadamard, ConversionMode::Mixed);
    FrameSampler sampler(c);
    int64_t flagged = 0, flips = 0;
    for (int s = 0; s < shots; ++s) {
      const ShotRecord shot = sampler.sample(5, static_cast<uint64_t>(s));
      if (shot.flags.empty()) continue;
      ++flagged;
      flips += shot.detectors.get(0) ? 1 : 0;
    }
    REQUIRE(flagged > shots / 3);
    const double p =
        chi_square_gof_pvalue({flips, flagged - flips}, {flagged / 2.0, flagged / 2.0});
    CHECK(p > 0.01);
  }

  // Biased conversion never flips the Z-basis value but randomizes the phase.
  {
    const Circuit z_circuit = build(false, ConversionMode::Biased);
    const Circuit x_circuit = build(true, ConversionMode::Biased);
    FrameSampler z_sampler(z_circuit);
    FrameSampler x_sampler(x_circuit);
    int64_t flagged = 0, z_flips = 0, x_flips = 0;
    for (int s = 0; s < shots; ++s) {
      const ShotRecord zshot = z_sampler.sample(6, static_cast<uint64_t>(s));
      if (!zshot.flags.empty()) {
        ++flagged;
        z_flips += zshot.detectors.get(0) ? 1 : 0;
      }
      const ShotRecord xshot = x_sampler.sample(6, static_cast<uint64_t>(s));
      if (!xshot.flags.empty()) x_flips += xshot.detectors.get(0) ? 1 : 0;
    }
    CHECK(z_flips == 0);
    REQUIRE(flagged > shots / 3);
    const double p =
        chi_square_gof_pvalue({x_flips, flagged - x_flips}, {flagged / 2.0, flagged / 2.0});
    CHECK(p > 0.01);
  }
}

TEST_CASE("mixed conversion at an erased location equals depolarizing") {
  const StabilizerCode code = build_rotated_surface_code(3);
  // Noise confined to the central qubit: always-erased-and-converted vs an
  // explicit uniform Pauli channel. Detector distributions must agree.
  Circuit erased = build_code_capacity_circuit(code, 0.0, 0.0);
  Circuit depolarized = build_code_capacity_circuit(code, 0.0, 0.0);
  for (auto* c : {&erased, &depolarized})
    for (auto& in : c->instructions)
      if (in.kind == OpKind::NoiseSite && in.a == 4) {
        if (c == &erased) {
          in.e = 1.0;
        } else {
          in.px = in.py = in.pz = 0.25;
        }
      }

  const int shots = 100000;
  std::map<std::string, std::array<int64_t, 2>> counts;
  FrameSampler se(erased), sd(depolarized);
  for (int s = 0; s < shots; ++s) {
    counts[detector_string(se.sample(21, static_cast<uint64_t>(s)))][0]++;
    counts[detector_string(sd.sample(22, static_cast<uint64_t>(s)))][1]++;
  }
  std::vector<int64_t> a, b;
  for (const auto& [pattern, c] : counts) {
    a.push_back(c[0]);
    b.push_back(c[1]);
  }
  CHECK(counts.size() == 4);  // I, X, Z, Y signatures of the central qubit
  CHECK(chi_square_two_sample_pvalue(a, b) > 0.01);
}

TEST_CASE("unitary reset false positives leak until the next check") {
  Circuit c;
  c.num_qubits = 1;
  c.append_check(0, 1.0, 0.0, ConversionMode::Mixed, ResetMode::Unitary);
  c.append_check(0, 0.0, 0.0, ConversionMode::Mixed, ResetMode::OneWay);
  c.append_check(0, 0.0, 0.0, ConversionMode::Mixed, ResetMode::OneWay);
  FrameSampler sampler(c);
  for (int s = 0; s < 200; ++s) {
    const ShotRecord shot = sampler.sample(1, static_cast<uint64_t>(s));
    CHECK(shot.flags == std::vector<int>{0, 1});  // leaked qubit caught once
  }

  Circuit ow;
  ow.num_qubits = 1;
  ow.append_check(0, 1.0, 0.0, ConversionMode::Mixed, ResetMode::OneWay);
  ow.append_check(0, 0.0, 0.0, ConversionMode::Mixed, ResetMode::OneWay);
  FrameSampler ow_sampler(ow);
  for (int s = 0; s < 200; ++s) {
    const ShotRecord shot = ow_sampler.sample(1, static_cast<uint64_t>(s));
    CHECK(shot.flags == std::vector<int>{0});  // converted on the spot
  }
}

TEST_CASE("pure measurement noise fires comparison detectors half the time") {
  const StabilizerCode code = build_rotated_surface_code(3);
  const Circuit circuit = build_phenomenological_circuit(code, 2, 0.0, 0.0, 0.5);
  const int shots = 20000;
  FrameSampler sampler(circuit);
  int64_t fired = 0;
  int64_t total = 0;
  for (int s = 0; s < shots; ++s) {
    const ShotRecord shot = sampler.sample(17, static_cast<uint64_t>(s));
    for (int d = 0; d < circuit.num_detectors; ++d) {
      ++total;
      fired += shot.detectors.get(static_cast<std::size_t>(d)) ? 1 : 0;
    }
  }
  const double rate = static_cast<double>(fired) / static_cast<double>(total);
  CHECK(std::abs(rate - 0.5) < 0.01);
}

TEST_CASE("one phenomenological round with q=0 matches code capacity") {
  const StabilizerCode code = build_rotated_surface_code(3);
  const double e = 0.12, p = 0.06;
  const Circuit cc = build_code_capacity_circuit(code, e, p);
  const Circuit ph = build_phenomenological_circuit(code, 1, e, p, 0.0);
  REQUIRE(ph.num_detectors == 16);

  const int shots = 60000;
  FrameSampler sc(cc), sp(ph);
  std::map<std::string, std::array<int64_t, 2>> counts;
  for (int s = 0; s < shots; ++s) {
    counts[detector_string(sc.sample(31, static_cast<uint64_t>(s)))][0]++;
    const ShotRecord shot = sp.sample(32, static_cast<uint64_t>(s));
    // Final-round detectors are exactly zero with q=0 (no noise after round 1).
    std::string first8;
    for (int d = 0; d < 16; ++d) {
      const bool bit = shot.detectors.get(static_cast<std::size_t>(d));
      if (d < 8)
        first8.push_back(bit ? '1' : '0');
      else
        REQUIRE_FALSE(bit);
    }
    counts[first8][1]++;
  }
  // Coarse pattern comparison; pool rare patterns to keep expected counts sane.
  std::vector<int64_t> a, b;
  int64_t rare_a = 0, rare_b = 0;
  for (const auto& [pattern, c] : counts) {
    if (c[0] + c[1] < 50) {
      rare_a += c[0];
      rare_b += c[1];
      continue;
    }
    a.push_back(c[0]);
    b.push_back(c[1]);
  }
  a.push_back(rare_a);
  b.push_back(rare_b);
  CHECK(chi_square_two_sample_pvalue(a, b) > 0.01);
}
