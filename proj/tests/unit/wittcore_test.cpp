#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "wittdeform/wittcore.hpp"

using namespace wd;

namespace {

class CacheEnv : public ::testing::Environment {
 public:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("wd-witt-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
    ::setenv("WITTDEFORM_CACHE_DIR", dir_.c_str(), 1);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

 private:
  std::filesystem::path dir_;
};

const auto* const kEnv = ::testing::AddGlobalTestEnvironment(new CacheEnv);

WittVec vec(const Ring& r, unsigned p, std::initializer_list<const char*> comps) {
  std::vector<RingElem> c;
  for (auto s : comps) c.push_back(r->parse(s));
  return WittVec(p, c);
}

WittVec sample_vec(const Ring& r, unsigned p, std::size_t m, std::uint64_t seed) {
  SamplePolicy pol;
  pol.coeff_bound = 4;
  std::vector<RingElem> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(sample(r, seed * 31 + i, pol));
  return WittVec(p, c);
}

}  // namespace

TEST(Ghost, Examples) {
  auto z = RingCtx::integers();
  EXPECT_EQ(ghost(vec(z, 2, {"1", "1"})), (std::vector<RingElem>{z->from_int(1), z->from_int(3)}));
  EXPECT_EQ(ghost(vec(z, 3, {"1", "0", "0"})), (std::vector<RingElem>(3, z->one())));
  EXPECT_EQ(ghost(vec(z, 2, {"2", "1"})), (std::vector<RingElem>{z->from_int(2), z->from_int(6)}));
}

TEST(Derive, KnownComponents) {
  auto s2 = op_table(2, 2, OpKind::Sum);
  EXPECT_EQ(s2->polys[1], s2->ring->parse("x1 + y1 - x0*y0"));
  auto s3 = op_table(3, 2, OpKind::Sum);
  EXPECT_EQ(s3->polys[1], s3->ring->parse("x1 + y1 - (x0^2*y0 + x0*y0^2)"));
  auto f = op_table(2, 2, OpKind::Frobenius);
  ASSERT_EQ(f->polys.size(), 1u);
  EXPECT_EQ(f->polys[0], f->ring->parse("x0^2 + 2*x1"));
}

TEST(Derive, DeterministicAndHashStable) {
  auto a = derive_op_polys(2, 3, OpKind::Prod);
  auto b = derive_op_polys(2, 3, OpKind::Prod);
  EXPECT_EQ(a->body_sha256, b->body_sha256);
  EXPECT_EQ(a->body_text(), b->body_text());
}

TEST(Derive, RespectsLengthLimit) {
  try {
    derive_op_polys(5, 4, OpKind::Sum);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(Cache, RoundTripAndCorruptionRecovery) {
  auto t = op_table(3, 2, OpKind::Prod);
  std::string path = cache_dir() + "/optable-p3-m2-prod.txt";
  ASSERT_TRUE(std::filesystem::exists(path));
  auto loaded = load_cached_table(3, 2, OpKind::Prod);
  ASSERT_TRUE(loaded);
  EXPECT_EQ(loaded->body_text(), t->body_text());
  for (std::size_t i = 0; i < t->polys.size(); ++i) EXPECT_EQ(loaded->polys[i].str(), t->polys[i].str());
  {
    std::ofstream out(path, std::ios::app);
    out << "1 0 0 0 0\n";
  }
  EXPECT_FALSE(load_cached_table(3, 2, OpKind::Prod));
  auto again = derive_op_polys(3, 2, OpKind::Prod);
  EXPECT_EQ(again->body_sha256, t->body_sha256);
}

TEST(Cache, ConcurrentRequestsShareOneTable) {
  std::vector<std::shared_ptr<const OpPolyTable>> got(8);
  std::vector<std::thread> th;
  for (int i = 0; i < 8; ++i) th.emplace_back([&, i] { got[i] = op_table(2, 4, OpKind::Sum); });
  for (auto& x : th) x.join();
  for (auto& g : got) EXPECT_EQ(g.get(), got[0].get());
}

TEST(Derive, LargestDefaultTablesAreIntegral) {
  for (OpKind op : {OpKind::Sum, OpKind::Prod, OpKind::Neg, OpKind::Frobenius}) EXPECT_NO_THROW(op_table(2, 5, op));
  for (OpKind op : {OpKind::Sum, OpKind::Prod, OpKind::Frobenius}) EXPECT_NO_THROW(op_table(3, 4, op));
}

TEST(Arith, F2Examples) {
  auto f2 = ring_make("zmod:2");
  EXPECT_EQ(witt_add(vec(f2, 2, {"1", "0"}), vec(f2, 2, {"1", "0"})), vec(f2, 2, {"0", "1"}));
  auto x = vec(f2, 2, {"1", "1"});
  EXPECT_EQ(witt_add(x, witt_zero(f2, 2, 2)), x);
  EXPECT_EQ(witt_mul(teichmuller(f2->one(), 2, 2), x), x);
}

TEST(Ops, FrobeniusVerschiebung) {
  auto z = RingCtx::integers();
  auto v = verschiebung(vec(z, 2, {"1"}));
  EXPECT_EQ(v, vec(z, 2, {"0", "1"}));
  EXPECT_EQ(ghost(v), (std::vector<RingElem>{z->zero(), z->from_int(2)}));
  EXPECT_TRUE(frobenius(witt_zero(z, 2, 3)).is_zero());
  EXPECT_TRUE(verschiebung(witt_zero(z, 2, 2)).is_zero());
  auto eps = ring_make("polyquot:zmod:2;e^2");
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto w = sample_vec(eps, 2, 3, s);
    auto fw = frobenius(w);
    EXPECT_EQ(fw, truncate(comp_power(w, 1), 2));
  }
}

TEST(Ops, TeichmullerAndScale) {
  auto l = ring_make("laurent:p=2;gens=a,w0,w1,w2;laurent=");
  auto w = generic_vec(l, 2, "w", 3);
  EXPECT_EQ(teich_scale(l->symbol("a"), w)[1], l->parse("a^2*w1"));
  EXPECT_EQ(teich_scale(l->one(), w), w);
  EXPECT_TRUE(teich_scale(l->zero(), w).is_zero());
  EXPECT_TRUE(teichmuller(l->zero(), 2, 3).is_zero());
  auto g = ghost(teichmuller(l->symbol("a"), 2, 3));
  EXPECT_EQ(g[2], l->parse("a^4"));
}

TEST(Ops, FLambdaExamples) {
  auto f2 = ring_make("zmod:2");
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto w = sample_vec(f2, 2, 3, s);
    EXPECT_TRUE(f_lambda(f2->one(), w).is_zero());
    EXPECT_EQ(f_lambda(f2->zero(), w), frobenius(w));
  }
  auto l = ring_make("laurent:p=3;gens=L,x;laurent=L");
  auto lam = l->symbol("L"), x = l->symbol("x");
  auto lhs = f_lambda(lam, teichmuller(x, 3, 3));
  auto rhs = witt_sub(teichmuller(pow(x, 3), 3, 2), teichmuller(pow(lam, 2) * x, 3, 2));
  EXPECT_EQ(lhs, rhs);
}

TEST(Ops, TMapExamples) {
  auto l = ring_make("laurent:p=2;gens=a0,a1,a2,x0,x1,x2,mu;laurent=");
  auto a = generic_vec(l, 2, "a", 3);
  auto x = generic_vec(l, 2, "x", 3);
  EXPECT_EQ(t_map(teichmuller(l->one(), 2, 3), x), x);
  EXPECT_EQ(t_map(a, x)[0], l->parse("a0*x0"));
  auto tm = t_map(a, teichmuller(l->symbol("mu"), 2, 3));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(tm[i], a[i] * l->symbol("mu"));
}

TEST(Ops, CompPowerAndMakeA) {
  auto l = ring_make("laurent:p=2;gens=L;laurent=L");
  auto lam = l->symbol("L");
  EXPECT_EQ(comp_power(teichmuller(lam, 2, 2), 1), teichmuller(pow(lam, 2), 2, 2));
  auto ma = make_a(lam, 2, 1, 3);
  EXPECT_EQ(ma.method, "closed-form");
  EXPECT_EQ(ma.a[0], l->parse("2*L^-1"));
  auto f2 = ring_make("zmod:2");
  auto a = make_a(f2->one(), 2, 1, 3).a;
  EXPECT_EQ(a, vec(f2, 2, {"0", "1", "0"}));
  auto z4 = ring_make("zmod:4");
  EXPECT_TRUE(make_a(z4->zero(), 2, 1, 2).a.is_zero());
}

TEST(Properties, GhostHomomorphismSampled) {
  auto z = RingCtx::integers();
  for (unsigned p : {2u, 3u}) {
    for (std::uint64_t s = 0; s < 30; ++s) {
      auto x = sample_vec(z, p, 3, 2 * s), y = sample_vec(z, p, 3, 2 * s + 1);
      auto gx = ghost(x), gy = ghost(y), gs = ghost(witt_add(x, y)), gm = ghost(witt_mul(x, y));
      for (std::size_t n = 0; n < 3; ++n) {
        EXPECT_EQ(gs[n], gx[n] + gy[n]);
        EXPECT_EQ(gm[n], gx[n] * gy[n]);
      }
      EXPECT_TRUE(witt_add(x, witt_neg(x)).is_zero());
    }
  }
}

TEST(Properties, SymbolicPhantomLaws) {
  auto l = ring_make("laurent:p=2;gens=a0,a1,a2,x0,x1,x2;laurent=");
  auto a = generic_vec(l, 2, "a", 3);
  auto x = generic_vec(l, 2, "x", 3);
  auto gf = ghost(frobenius(x));
  auto gx = ghost(x);
  for (std::size_t i = 0; i + 1 < 3; ++i) EXPECT_EQ(gf[i], gx[i + 1]);
  auto gt = ghost(t_map(a, x));
  auto tbl = op_table(2, 3, OpKind::TMapComponent);
  std::vector<RingElem> in = a.c;
  in.insert(in.end(), x.c.begin(), x.c.end());
  EXPECT_EQ(t_map(a, x).c, eval_table(*tbl, in));
  for (std::size_t n = 0; n < 3; ++n) {
    RingElem rhs = l->zero();
    long pi = 1;
    for (std::size_t i = 0; i <= n; ++i) {
      rhs += times_int(pow(a[i], 1ul << (n - i)) * gx[n - i], pi);
      pi *= 2;
    }
    EXPECT_EQ(gt[n], rhs);
  }
}

TEST(Properties, LinearIdentitiesSampled) {
  auto z = RingCtx::integers();
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto w = sample_vec(z, 2, 3, s);
    EXPECT_EQ(frobenius(verschiebung(w)), witt_times(2, w));
    auto a = sample_vec(z, 2, 1, s + 100)[0];
    EXPECT_EQ(teich_scale(a, w), witt_mul(teichmuller(a, 2, 3), w));
    auto x = sample_vec(z, 2, 3, s + 200), av = sample_vec(z, 2, 3, s + 300);
    EXPECT_EQ(t_map(av, witt_add(x, w)), witt_add(t_map(av, x), t_map(av, w)));
    EXPECT_EQ(f_lambda(a, witt_add(x, w)), witt_add(f_lambda(a, x), f_lambda(a, w)));
  }
}
