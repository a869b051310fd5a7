#include <random>

#include <gtest/gtest.h>

#include "locc/discrimination.hpp"
#include "locc/random.hpp"
#include "locc/weyl.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace locc;

namespace {

using Labels = std::vector<std::pair<int, int>>;

Labels to_pairs(const std::vector<BellIndex>& idx) {
  Labels out;
  for (const auto& i : idx) out.emplace_back(i.n, i.m);
  return out;
}

using fixtures::lattice_breaker;
using fixtures::power;

// Member probabilities from the full post-instrument density matrix.
std::vector<double> distribution_oracle(const MESet& set, const Instrument& inst, int secret) {
  const int d = set.dim();
  CVector ancilla = CVector::Zero(d);
  ancilla[0] = 1.0;
  const CVector input = oracle::kron_loops(CVector(set.state(secret)), ancilla);
  std::vector<double> probs(set.size(), 0.0);
  for (const auto& f : inst.kraus) {
    const CVector out = f * input;
    const CMatrix bob = oracle::trace_out_first(out * out.adjoint(), d, d * d);
    for (int a = 0; a < set.size(); ++a) probs[a] += (set.state(a).adjoint() * bob * set.state(a))(0, 0).real();
  }
  return probs;
}

std::vector<std::vector<BellIndex>> bell_subsets(int d, int max_size) {
  const auto labels = all_labels(d);
  const int n = static_cast<int>(labels.size());
  std::vector<std::vector<BellIndex>> out;
  for (long mask = 1; mask < (1L << n); ++mask) {
    if (__builtin_popcountl(mask) > max_size) continue;
    std::vector<BellIndex> idx;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) idx.push_back(labels[i]);
    out.push_back(idx);
  }
  return out;
}

}  // namespace

TEST(SsdCheckBell, Examples) {
  const auto two = ssd_check_bell(2, {{0, 0}, {1, 0}});
  ASSERT_TRUE(two.has_value());
  EXPECT_EQ(*two, (SsdCertificate{0, 1, 0}));
  EXPECT_FALSE(ssd_check_bell(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}).has_value());

  const std::vector<BellIndex> line{{0, 1}, {1, 0}, {2, 2}};  // m = 2n + 1
  const auto cert = ssd_check_bell(3, line);
  ASSERT_TRUE(cert.has_value());
  EXPECT_TRUE(certificate_holds(3, line, *cert));
  EXPECT_TRUE(certificate_holds(3, line, {2, 2, 2}));
  EXPECT_FALSE(certificate_holds(3, line, {0, 0, 0}));
  EXPECT_THROW(ssd_check_bell(4, {{0, 0}}), Error);
}

TEST(SsdCheckBell, MatchesBruteForceAndLineOracle) {
  for (int d : {2, 3}) {
    for (const auto& idx : bell_subsets(d, d == 2 ? 4 : 3)) {
      const bool found = ssd_check_bell(d, idx).has_value();
      EXPECT_EQ(found, oracle::bell_ssd(to_pairs(idx), d));
      EXPECT_EQ(found, oracle::labels_collinear(to_pairs(idx), d));
    }
  }
}

TEST(SsdCheckMes, Examples) {
  const auto w = ssd_check_mes(bell_set(3, {{0, 0}, {1, 0}, {2, 0}}));
  ASSERT_TRUE(w.has_value());
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(w->e_basis.col(c).cwiseAbs().maxCoeff(), 1.0, 1e-10);
  EXPECT_FALSE(ssd_check_mes(bell_set(2, {{0, 0}, {0, 1}, {1, 0}})).has_value());
}

TEST(SsdCheckMes, AgreesWithBellCriterion) {
  // Every subset of sizes 2..4 at D = 2.
  for (const auto& idx : bell_subsets(2, 4)) {
    if (idx.size() < 2) continue;
    EXPECT_EQ(ssd_check_mes(bell_set(2, idx)).has_value(), ssd_check_bell(2, idx).has_value());
  }
  // Random subsets at D = 3 and D = 5.
  std::mt19937_64 rng(13);
  for (int d : {3, 5}) {
    auto labels = all_labels(d);
    const int samples = d == 3 ? 500 : 200;
    std::uniform_int_distribution<int> size(2, d + 1);
    for (int t = 0; t < samples; ++t) {
      std::shuffle(labels.begin(), labels.end(), rng);
      const std::vector<BellIndex> idx(labels.begin(), labels.begin() + size(rng));
      const MESet set = bell_set(d, idx);
      const auto w = ssd_check_mes(set);
      EXPECT_EQ(w.has_value(), ssd_check_bell(d, idx).has_value());
      if (w) {
        EXPECT_LE(schmidt_residual(set, *w), 1e-7);
        EXPECT_LE(max_abs_diff(CMatrix(w->coeffs.cwiseAbs()), CMatrix::Constant(set.size(), d, 1 / std::sqrt(double(d)))), 1e-9);
      }
    }
  }
}

TEST(CanonicalCyclic, Examples) {
  EXPECT_TRUE(canonical_cyclic_check(bell_set(3, {{0, 0}, {1, 0}, {2, 0}})));
  EXPECT_FALSE(canonical_cyclic_check(MESet(5, {Unitary::identity(5), Unitary(lattice_breaker())})));
  EXPECT_TRUE(canonical_cyclic_check(bell_set(5, {{2, 3}})));
  std::mt19937_64 rng(4);
  EXPECT_TRUE(canonical_cyclic_check(MESet(3, {random_unitary(3, rng)})));
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_set(bell_set(3, {{0, 0}, {1, 0}, {2, 0}})), Tier::LocallyCopiable);
  EXPECT_EQ(classify_set(MESet(5, {Unitary::identity(5), Unitary(lattice_breaker())})), Tier::SSDNotCopiable);
  EXPECT_EQ(classify_set(bell_set(3, {{0, 0}, {0, 1}, {1, 0}})), Tier::NotSSD_LDUndetermined);
  EXPECT_EQ(classify_set(bell_set(2, {{0, 0}, {0, 1}, {1, 0}})), Tier::TooLargeForLD);
  EXPECT_THROW(classify_set(MESet(4, {Unitary::identity(4)})), Error);
}

TEST(Classify, CopiableExactlyWhenSsdAndCyclic) {
  for (int d : {2, 3}) {
    for (const auto& idx : bell_subsets(d, 3)) {
      const MESet set = bell_set(d, idx);
      const Classification c = classify_set_detailed(set);
      if (c.tier == Tier::TooLargeForLD) continue;
      const bool rhs = ssd_check_bell(d, idx).has_value() && canonical_cyclic_check(set);
      EXPECT_EQ(c.tier == Tier::LocallyCopiable, rhs);
      EXPECT_EQ(c.tier == Tier::LocallyCopiable, oracle::labels_collinear(to_pairs(idx), d));
    }
  }
}

TEST(Classify, TargetedFamiliesAtD5AndD7) {
  std::mt19937_64 rng(31);
  for (int d : {5, 7}) {
    for (int trial = 0; trial < 20; ++trial) {
      // Bell lines, with and without a conjugating unitary; plus non-lines.
      auto labels = all_labels(d);
      std::shuffle(labels.begin(), labels.end(), rng);
      std::vector<BellIndex> idx(labels.begin(), labels.begin() + 2 + trial % (d - 1));
      if (trial % 2 == 0) {
        const BellIndex dir = labels[0].n || labels[0].m ? labels[0] : BellIndex{1, 0};
        const BellIndex start = labels[1];
        idx.clear();
        for (int t = 0; t < 2 + trial % (d - 1); ++t) idx.push_back({mod(start.n + t * dir.n, d), mod(start.m + t * dir.m, d)});
      }
      const MESet set = bell_set(d, idx);
      const Tier tier = classify_set(set);
      const bool rhs = ssd_check_mes(set).has_value() && canonical_cyclic_check(set);
      EXPECT_EQ(tier == Tier::LocallyCopiable, rhs) << "D=" << d << " trial " << trial;
      EXPECT_EQ(tier == Tier::LocallyCopiable, oracle::labels_collinear(to_pairs(idx), d));

      const CMatrix h = random_unitary(d, rng).matrix();
      std::vector<Unitary> us;
      for (const auto& u : set.unitaries()) us.emplace_back(h * u.matrix() * h.adjoint(), Tolerance{1e-8});
      const MESet rotated(d, us);
      const bool rhs_rotated = ssd_check_mes(rotated).has_value() && canonical_cyclic_check(rotated);
      EXPECT_EQ(classify_set(rotated) == Tier::LocallyCopiable, rhs_rotated);
      EXPECT_EQ(classify_set(rotated), tier);
    }
  }
}

TEST(Classify, HierarchyIsStrict) {
  EXPECT_EQ(classify_set(MESet(5, {Unitary::identity(5), Unitary(lattice_breaker())})), Tier::SSDNotCopiable);
  EXPECT_EQ(classify_set(bell_set(5, {{0, 0}, {1, 0}, {0, 1}})), Tier::NotSSD_LDUndetermined);
  EXPECT_EQ(classify_set(bell_set(5, {{0, 0}, {1, 0}, {2, 0}})), Tier::LocallyCopiable);
}

TEST(Instrument, CompletenessAndProjectors) {
  for (int d : {2, 3, 5}) {
    const auto w = ssd_check_mes(bell_set(d, {{0, 0}, {1, 0}}));
    ASSERT_TRUE(w.has_value());
    const Instrument inst = build_instrument(*w, d);
    ASSERT_EQ(static_cast<int>(inst.kraus.size()), d);
    EXPECT_LE(completeness_error(inst), 1e-9);
    // F_k^dag F_k = P_k (x) I with P_k a rank-one projector.
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& f : inst.kraus) {
      const CMatrix p = oracle::trace_out_second(f.adjoint() * f, d, d * d) / double(d * d);
      EXPECT_LE(max_abs_diff(p * p, p), 1e-12);
      EXPECT_NEAR(p.trace().real(), 1.0, 1e-12);
      EXPECT_LE(max_abs_diff(f.adjoint() * f, oracle::kron_loops(p, CMatrix(CMatrix::Identity(d * d, d * d)))), 1e-12);
      sum += p;
    }
    EXPECT_LE(max_abs_diff(sum, CMatrix::Identity(d, d)), 1e-12);
  }
}

TEST(Instrument, MovesTheStateToBob) {
  for (int d : {2, 3}) {
    const MESet set = bell_set(d, d == 2 ? std::vector<BellIndex>{{0, 0}, {1, 1}} : std::vector<BellIndex>{{0, 0}, {1, 2}, {2, 1}});
    const auto w = ssd_check_mes(set);
    ASSERT_TRUE(w.has_value());
    const Instrument inst = build_instrument(*w, d);
    CVector ancilla = CVector::Zero(d);
    ancilla[0] = 1.0;
    for (int a = 0; a < set.size(); ++a) {
      const CVector in = kron(set.state(a), ancilla);
      for (const auto& f : inst.kraus) {
        const CVector out = f * in;
        const double p = out.squaredNorm();
        EXPECT_NEAR(p, 1.0 / d, 1e-12);
        const CMatrix bob = oracle::trace_out_first(out * out.adjoint(), d, d * d) / p;
        EXPECT_NEAR((set.state(a).adjoint() * bob * set.state(a))(0, 0).real(), 1.0, 1e-12);
      }
    }
  }
}

TEST(Instrument, RejectsBadWitness) {
  SchmidtWitness w;
  w.dim = 2;
  w.e_basis = CMatrix::Ones(2, 2);
  w.f_basis = CMatrix::Identity(2, 2);
  w.coeffs = CMatrix::Ones(1, 2);
  try {
    build_instrument(w, 2);
    FAIL() << "non-unitary basis accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidWitness);
  }
  w.e_basis = CMatrix::Identity(3, 3);
  EXPECT_THROW(build_instrument(w, 2), Error);
}

TEST(ExecuteDiscrimination, Examples) {
  const MESet zz = bell_set(2, {{0, 0}, {1, 0}});
  const auto w = *ssd_check_mes(zz);
  const auto r = execute_discrimination(zz, w, 1);
  EXPECT_EQ(r.identified, 1);
  EXPECT_NEAR(r.distribution[1], 1.0, 1e-12);

  const MESet z5 = bell_set(5, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
  const auto w5 = *ssd_check_mes(z5);
  for (int s = 0; s < 5; ++s) {
    const auto r5 = execute_discrimination(z5, w5, s);
    EXPECT_EQ(r5.identified, s);
    EXPECT_GE(r5.distribution[s], 1 - 1e-9);
  }

  std::mt19937_64 rng(6);
  const MESet single(3, {random_unitary(3, rng)});
  const auto rs = execute_discrimination(single, *ssd_check_mes(single), 0);
  EXPECT_EQ(rs.identified, 0);
  EXPECT_NEAR(rs.distribution[0], 1.0, 1e-12);
}

TEST(ExecuteDiscrimination, ForeignWitnessIsNotApplicable) {
  const MESet xs = bell_set(2, {{0, 0}, {0, 1}});
  const auto wz = *ssd_check_mes(bell_set(2, {{0, 0}, {1, 0}}));
  try {
    execute_discrimination(xs, wz, 0);
    FAIL() << "witness of another set accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotApplicable);
  }
}

TEST(ExecuteDiscrimination, EverySsdSetAgreesWithDensityOracle) {
  std::mt19937_64 rng(23);
  for (int d : {2, 3, 5}) {
    std::vector<MESet> sets;
    for (const auto& idx : std::vector<std::vector<BellIndex>>{{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}, {{1, 1}, {2 % d, 2 % d}}}) {
      if (idx.size() > 1 && idx[0] == idx[1]) continue;
      sets.push_back(bell_set(d, idx));
    }
    // Conjugated cyclic families with a random anchor and member phases.
    for (int t = 0; t < 3; ++t) {
      const CMatrix h = random_unitary(d, rng).matrix();
      const CMatrix anchor = random_unitary(d, rng).matrix();
      std::vector<Unitary> us;
      for (int j = 0; j < d; ++j)
        us.emplace_back(std::polar(1.0, 0.1 * j) * h * power(pauli_z(d).matrix(), j) * h.adjoint() * anchor, Tolerance{1e-8});
      sets.emplace_back(d, us);
    }
    // SSD but not copiable at D = 5.
    if (d == 5) sets.emplace_back(5, std::vector<Unitary>{Unitary::identity(5), Unitary(lattice_breaker())});

    for (const auto& set : sets) {
      const auto w = ssd_check_mes(set);
      ASSERT_TRUE(w.has_value());
      const Instrument inst = build_instrument(*w, d);
      EXPECT_LE(completeness_error(inst), 1e-9);
      for (int s = 0; s < set.size(); ++s) {
        const auto r = execute_discrimination(set, *w, s);
        EXPECT_EQ(r.identified, s);
        EXPECT_GE(r.distribution[s], 1 - 1e-9);
        const auto ref = distribution_oracle(set, inst, s);
        for (int a = 0; a < set.size(); ++a) EXPECT_NEAR(r.distribution[a], ref[a], 1e-10);
      }
    }
  }
}
