#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "lwhac/cluster_state.hpp"
#include "lwhac/condensed_matrix.hpp"
#include "lwhac/dendrogram.hpp"
#include "lwhac/errors.hpp"
#include "lwhac/linkage.hpp"
#include "lwhac/serial.hpp"
#include "oracles.hpp"

using namespace lwhac;

namespace {

const CondensedMatrix kThree(3, {1.0, 4.0, 5.0});  // d01=1, d02=4, d12=5

std::size_t ulps_apart(double a, double b) {
  std::size_t steps = 0;
  while (a != b && steps < 64) {
    a = std::nextafter(a, b);
    ++steps;
  }
  return steps;
}

}  // namespace

TEST_SUITE("condensed_index") {
  TEST_CASE("examples") {
    CHECK(condensed_index(0, 1, 8) == 0);
    CHECK(condensed_index(6, 7, 8) == 27);
    // Row 0 holds offsets 0..6, so (1,2)=7, (1,3)=8, (1,4)=9.
    CHECK(condensed_index(1, 4, 8) == oracle::enumerate_offset(1, 4, 8));
    CHECK(condensed_index(1, 4, 8) == 9);
  }

  TEST_CASE("matches enumeration and inverts, n <= 12") {
    for (std::size_t n = 2; n <= 12; ++n) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const auto off = condensed_index(i, j, n);
          REQUIRE(off == oracle::enumerate_offset(i, j, n));
          REQUIRE(off < triangle_size(n));
          REQUIRE(condensed_pair(off, n) == std::pair{i, j});
          REQUIRE(pair_offset(j, i, n) == off);
        }
      }
    }
  }

  TEST_CASE("inverse at large n") {
    const std::size_t n = 100000;
    for (std::size_t off : {std::size_t{0}, std::size_t{99998}, std::size_t{99999},
                            triangle_size(n) / 2, triangle_size(n) - 1}) {
      const auto [i, j] = condensed_pair(off, n);
      CHECK(condensed_index(i, j, n) == off);
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(condensed_index(3, 3, 8), std::domain_error);
    CHECK_THROWS_AS(condensed_index(4, 2, 8), std::domain_error);
    CHECK_THROWS_AS(condensed_index(2, 8, 8), std::domain_error);
    CHECK_THROWS_AS(condensed_pair(28, 8), std::domain_error);
  }
}

TEST_SUITE("CondensedMatrix") {
  TEST_CASE("construction validates") {
    CHECK(CondensedMatrix(4, std::vector<double>(6, 1.0)).cell_count() == 6);
    CHECK(CondensedMatrix(0, {}).cell_count() == 0);
    CHECK(CondensedMatrix(1, {}).cell_count() == 0);
    CHECK_THROWS_AS(CondensedMatrix(4, std::vector<double>(5, 1.0)), InputError);
    CHECK_THROWS_AS(CondensedMatrix(3, {1.0, -0.5, 2.0}), InputError);
    CHECK_THROWS_AS(CondensedMatrix(3, {1.0, std::nan(""), 2.0}), InputError);
    CHECK_THROWS_AS(CondensedMatrix(3, {1.0, INFINITY, 2.0}), InputError);
    CHECK_NOTHROW(CondensedMatrix(3, {0.0, 0.0, 0.0}));
  }

  TEST_CASE("error names the offending pair") {
    try {
      CondensedMatrix(4, {1, 1, 1, 1, -2, 1});
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("(1, 3)") != std::string::npos);
    }
  }

  TEST_CASE("negative zero is stored as positive zero") {
    CondensedMatrix m(2, {-0.0});
    CHECK_FALSE(std::signbit(m.distance(0)));
  }

  TEST_CASE("tombstones") {
    CondensedMatrix m(3, {1, 2, 3});
    CHECK(m.alive_count() == 3);
    m.kill(1);
    CHECK_FALSE(m.alive(1));
    CHECK(m.alive_count() == 2);
  }
}

TEST_SUITE("scheme_coefficients") {
  TEST_CASE("table rows") {
    CHECK(scheme_coefficients(LinkageScheme::Complete, 3, 7, 2) ==
          LinkageCoefficients{0.5, 0.5, 0, 0.5});
    CHECK(scheme_coefficients(LinkageScheme::Single, 3, 7, 2) ==
          LinkageCoefficients{0.5, 0.5, 0, -0.5});
    CHECK(scheme_coefficients(LinkageScheme::WeightedAverage, 3, 7, 2) ==
          LinkageCoefficients{0.5, 0.5, 0, 0});
    CHECK(scheme_coefficients(LinkageScheme::GroupAverage, 2, 3, 9) ==
          LinkageCoefficients{0.4, 0.6, 0, 0});
    CHECK(scheme_coefficients(LinkageScheme::Centroid, 1, 1, 9) ==
          LinkageCoefficients{0.5, 0.5, -0.25, 0});
    CHECK(scheme_coefficients(LinkageScheme::Ward, 1, 1, 1) ==
          LinkageCoefficients{2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0, 0});
  }

  TEST_CASE("n_k only matters for Ward") {
    for (LinkageScheme s : kAllSchemes) {
      if (s == LinkageScheme::Ward) continue;
      CHECK(scheme_coefficients(s, 4, 5, 1) == scheme_coefficients(s, 4, 5, 1000));
    }
    CHECK_FALSE(scheme_coefficients(LinkageScheme::Ward, 4, 5, 1) ==
                scheme_coefficients(LinkageScheme::Ward, 4, 5, 2));
  }

  TEST_CASE("zero sizes rejected") {
    CHECK_THROWS_AS(scheme_coefficients(LinkageScheme::Complete, 0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(scheme_coefficients(LinkageScheme::Ward, 1, 1, 0), std::domain_error);
  }

  TEST_CASE("names round-trip") {
    for (LinkageScheme s : kAllSchemes) CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK_FALSE(parse_scheme("median").has_value());
  }
}

TEST_SUITE("lw_update") {
  const auto complete = scheme_coefficients(LinkageScheme::Complete, 1, 1, 1);
  const auto single = scheme_coefficients(LinkageScheme::Single, 1, 1, 1);

  TEST_CASE("examples") {
    CHECK(lw_update(2, 5, 3, complete) == 5);
    CHECK(lw_update(2, 5, 3, single) == 2);
  }

  TEST_CASE("group average equals the brute-force mean") {
    // Items 0,1 form cluster i; 2,3,4 form cluster j; item 5 is k.
    oracle::Square s(6, std::vector<double>(6, 1.0));
    for (std::size_t a : {0, 1}) s[a][5] = s[5][a] = 2;
    for (std::size_t b : {2, 3, 4}) s[b][5] = s[5][b] = 5;
    const double expected = oracle::mean_pairwise(s, {5}, {0, 1, 2, 3, 4});
    CHECK(expected == doctest::Approx(3.8).epsilon(1e-15));
    const auto ga = scheme_coefficients(LinkageScheme::GroupAverage, 2, 3, 1);
    CHECK(lw_update(2, 5, 3, ga) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("equal inputs are a fixed point when beta is zero") {
    for (double d : {0.0, 0.1, 1.0, 7.25, 1e6}) {
      for (double x : {0.0, 3.0, 50.0}) {
        CHECK(lw_update(d, d, x, single) == d);
        CHECK(lw_update(d, d, x, complete) == d);
        CHECK(lw_update(d, d, x, scheme_coefficients(LinkageScheme::WeightedAverage, 1, 1, 1)) == d);
        // Group average: exact up to the rounding of alpha_i + alpha_j.
        const auto ga = scheme_coefficients(LinkageScheme::GroupAverage, 3, 7, 1);
        CHECK(ulps_apart(lw_update(d, d, x, ga), d) <= 2);
      }
    }
  }

  TEST_CASE("single/complete select an endpoint on random inputs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1000);
    for (int t = 0; t < 10000; ++t) {
      const double a = u(rng), b = u(rng), x = u(rng);
      const double hi = lw_update(a, b, x, complete);
      const double lo = lw_update(a, b, x, single);
      REQUIRE(std::isfinite(hi));
      REQUIRE(std::isfinite(lo));
      // The gamma term cancels against max(a, b), so error scales with it.
      const double tol = 4 * std::numeric_limits<double>::epsilon() * std::max(a, b);
      REQUIRE(std::abs(hi - std::max(a, b)) <= tol);
      REQUIRE(std::abs(lo - std::min(a, b)) <= tol);
    }
  }

  TEST_CASE("output is finite for every scheme") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1e6);
    std::uniform_int_distribution<std::size_t> sz(1, 500);
    for (LinkageScheme s : kAllSchemes) {
      for (int t = 0; t < 2000; ++t) {
        const auto c = scheme_coefficients(s, sz(rng), sz(rng), sz(rng));
        REQUIRE(std::isfinite(lw_update(u(rng), u(rng), u(rng), c)));
      }
    }
  }
}

TEST_SUITE("serial_cluster") {
  TEST_CASE("two items") {
    for (LinkageScheme s : kAllSchemes) {
      const auto d = serial_cluster(CondensedMatrix(2, {7.0}), s);
      REQUIRE(d.merges.size() == 1);
      CHECK(d.merges[0] == Merge{0, 1, 7.0, 2});
    }
  }

  TEST_CASE("three items, complete and single") {
    CHECK(serial_cluster(kThree, LinkageScheme::Complete).merges ==
          std::vector<Merge>{{0, 1, 1, 2}, {2, 3, 5, 3}});
    CHECK(serial_cluster(kThree, LinkageScheme::Single).merges ==
          std::vector<Merge>{{0, 1, 1, 2}, {2, 3, 4, 3}});
  }

  TEST_CASE("degenerate sizes") {
    CHECK(serial_cluster(CondensedMatrix(0, {}), LinkageScheme::Ward).merges.empty());
    CHECK(serial_cluster(CondensedMatrix(1, {}), LinkageScheme::Ward).merges.empty());
  }

  TEST_CASE("ties go to the lexicographically smallest pair") {
    // All equal: (0,1) first, then the new cluster in slot 0 against 2, ...
    const auto d = serial_cluster(CondensedMatrix(4, std::vector<double>(6, 1.0)),
                                  LinkageScheme::Complete);
    CHECK(d.merges == std::vector<Merge>{{0, 1, 1, 2}, {2, 4, 1, 3}, {3, 5, 1, 4}});
  }

  TEST_CASE("structural invariants on random inputs") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 1 + rng() % 30;
      const auto m = oracle::random_matrix(n, rng, t % 2 == 0);
      for (LinkageScheme s : kAllSchemes) {
        const auto d = serial_cluster(m, s);
        CHECK(d.n == n);
        CHECK_NOTHROW(validate(d));
        if (n > 0) {
          CHECK(oracle::members(d).back().size() == n);
        }
      }
    }
  }

  TEST_CASE("complete linkage heights are the maximum member distance") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 2 + rng() % 9;
      const auto m = oracle::random_matrix(n, rng, t % 3 == 0);
      const auto sq = oracle::to_square(m);
      const auto d = serial_cluster(m, LinkageScheme::Complete);
      const auto mem = oracle::members(d);
      for (const Merge& mg : d.merges) {
        REQUIRE(oracle::close_rel(mg.height, oracle::max_pairwise(sq, mem[mg.left], mem[mg.right]),
                                  1e-9));
      }
    }
  }

  TEST_CASE("single linkage heights are the minimum member distance and the MST weights") {
    std::mt19937_64 rng(202);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 2 + rng() % 9;
      const auto m = oracle::random_matrix(n, rng, false);
      const auto sq = oracle::to_square(m);
      const auto d = serial_cluster(m, LinkageScheme::Single);
      const auto mem = oracle::members(d);
      std::vector<double> heights;
      for (const Merge& mg : d.merges) {
        REQUIRE(oracle::close_rel(mg.height, oracle::min_pairwise(sq, mem[mg.left], mem[mg.right]),
                                  1e-9));
        heights.push_back(mg.height);
      }
      std::sort(heights.begin(), heights.end());
      const auto mst = oracle::mst_weights(sq);
      REQUIRE(heights.size() == mst.size());
      for (std::size_t e = 0; e < mst.size(); ++e) {
        REQUIRE(oracle::close_rel(heights[e], mst[e], 1e-9));
      }
    }
  }

  TEST_CASE("group average keeps every live distance equal to the mean member distance") {
    std::mt19937_64 rng(303);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + rng() % 9;
      const auto m = oracle::random_matrix(n, rng, t % 2 == 0);
      const auto sq = oracle::to_square(m);
      std::map<std::size_t, std::vector<std::size_t>> members;
      for (std::size_t i = 0; i < n; ++i) members[i] = {i};
      std::size_t next_id = n;
      std::size_t checked = 0;
      serial_cluster(m, LinkageScheme::GroupAverage,
                     [&](const CondensedMatrix& cur, const ClusterState& cs, const Merge& mg) {
                       auto& joined = members[next_id++];
                       joined = members[mg.left];
                       joined.insert(joined.end(), members[mg.right].begin(),
                                     members[mg.right].end());
                       for (std::size_t a = 0; a < n; ++a) {
                         for (std::size_t b = a + 1; b < n; ++b) {
                           if (!cs.is_active(a) || !cs.is_active(b)) continue;
                           const double want = oracle::mean_pairwise(
                               sq, members[cs.label(a)], members[cs.label(b)]);
                           REQUIRE(oracle::close_rel(cur(a, b), want, 1e-9));
                           ++checked;
                         }
                       }
                     });
      if (n > 2) CHECK(checked > 0);
    }
  }

  TEST_CASE("monotone heights except centroid") {
    std::mt19937_64 rng(404);
    for (int t = 0; t < 100; ++t) {
      const auto m = oracle::random_matrix(2 + rng() % 31, rng, t % 4 == 0);
      for (LinkageScheme s : kAllSchemes) {
        if (!is_monotone(s)) continue;
        const auto d = serial_cluster(m, s);
        for (std::size_t k = 1; k < d.merges.size(); ++k) {
          REQUIRE(d.merges[k - 1].height <= d.merges[k].height);
        }
      }
    }
  }

  TEST_CASE("centroid can invert") {
    // Equilateral triangle: centroid of {0,1} sits closer to 2 than the side.
    const auto d = serial_cluster(CondensedMatrix(3, {1, 1, 1}), LinkageScheme::Centroid);
    CHECK(d.merges[1].height < d.merges[0].height);
    CHECK(d.merges[1].height == doctest::Approx(0.75));  // squared-distance algebra: 1/2+1/2-1/4
  }

  TEST_CASE("permutation equivariance with distinct distances") {
    std::mt19937_64 rng(505);
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = 2 + rng() % 15;
      const auto m = oracle::random_matrix(n, rng, false);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto pm = oracle::permuted(m, perm);
      for (LinkageScheme s : kAllSchemes) {
        const auto a = serial_cluster(m, s);
        const auto b = serial_cluster(pm, s);
        const auto ma = oracle::members(a);
        const auto mb = oracle::members(b);
        for (std::size_t k = 0; k < a.merges.size(); ++k) {
          REQUIRE(oracle::close_rel(a.merges[k].height, b.merges[k].height, 1e-12));
          auto mapped = ma[n + k];
          for (auto& x : mapped) x = perm[x];
          std::sort(mapped.begin(), mapped.end());
          REQUIRE(mapped == mb[n + k]);
        }
      }
    }
  }

  TEST_CASE("member count is conserved after every merge") {
    std::mt19937_64 rng(606);
    const auto m = oracle::random_matrix(20, rng, true);
    std::size_t k = 0;
    serial_cluster(m, LinkageScheme::Ward, [&](const CondensedMatrix&, const ClusterState& cs, const Merge&) {
      ++k;
      REQUIRE(cs.total_members() == 20);
      REQUIRE(cs.active_count() == 20 - k);
    });
    CHECK(k == 19);
  }
}

TEST_SUITE("ClusterState") {
  TEST_CASE("merge keeps slot i and retires j") {
    ClusterState cs(4);
    CHECK(cs.merge(1, 3, 0.5) == Merge{1, 3, 0.5, 2});
    CHECK(cs.label(1) == 4);
    CHECK_FALSE(cs.is_active(3));
    CHECK(cs.merge(0, 1, 0.7) == Merge{0, 4, 0.7, 3});
    CHECK(cs.label(0) == 5);
    CHECK_THROWS_AS(cs.merge(0, 3, 1.0), std::domain_error);
    CHECK_THROWS_AS(cs.merge(2, 0, 1.0), std::domain_error);
  }
}

TEST_SUITE("dendrogram") {
  const Dendrogram three = serial_cluster(kThree, LinkageScheme::Complete);

  TEST_CASE("flat clusters") {
    using Groups = std::vector<std::vector<std::size_t>>;
    CHECK(flat_clusters(three, 3) == Groups{{0}, {1}, {2}});
    CHECK(flat_clusters(three, 2) == Groups{{0, 1}, {2}});
    CHECK(flat_clusters(three, 1) == Groups{{0, 1, 2}});
    CHECK(cluster_labels(three, 2) == std::vector<std::size_t>{0, 0, 1});
    CHECK_THROWS_AS(flat_clusters(three, 0), std::domain_error);
    CHECK_THROWS_AS(flat_clusters(three, 4), std::domain_error);
  }

  TEST_CASE("cuts partition the items at every level") {
    std::mt19937_64 rng(9);
    const auto d = serial_cluster(oracle::random_matrix(25, rng, false), LinkageScheme::GroupAverage);
    for (std::size_t k = 1; k <= 25; ++k) {
      const auto groups = flat_clusters(d, k);
      REQUIRE(groups.size() == k);
      std::vector<std::size_t> all;
      for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
      std::sort(all.begin(), all.end());
      std::vector<std::size_t> expect(25);
      std::iota(expect.begin(), expect.end(), std::size_t{0});
      REQUIRE(all == expect);
    }
  }

  TEST_CASE("merge csv") {
    CHECK(to_merge_csv(three) == "0,1,1,2\n2,3,5,3\n");
    CHECK(parse_merge_csv("left,right,height,size\n0,1,1,2\n2,3,5,3\n") == three);
    CHECK(parse_merge_csv(to_merge_csv(three)) == three);
    CHECK_THROWS_AS(parse_merge_csv("0,1,1,2\n0,2,5,3\n"), InputError);  // 0 used twice
    CHECK_THROWS_AS(parse_merge_csv("0,1,1,3\n"), InputError);          // wrong size
    CHECK_THROWS_AS(parse_merge_csv("0,1,1,2\nx,y\n"), InputError);
  }

  TEST_CASE("merge csv heights round-trip bit for bit") {
    std::mt19937_64 rng(17);
    const auto d = serial_cluster(oracle::random_matrix(40, rng, false), LinkageScheme::Ward);
    CHECK(bitwise_equal(parse_merge_csv(to_merge_csv(d)), d));
    CHECK(dendrogram_hash(parse_merge_csv(to_merge_csv(d))) == dendrogram_hash(d));
  }

  TEST_CASE("newick") {
    CHECK(to_newick(three) == "(2:5,(0:1,1:1):4);");
    CHECK(to_newick(Dendrogram{1, {}}) == "0;");
    CHECK(to_newick(Dendrogram{0, {}}) == ";");
  }

  TEST_CASE("json") {
    const auto doc = nlohmann::json::parse(to_json(three));
    CHECK(doc["n"] == 3);
    CHECK(doc["root"]["id"] == 4);
    CHECK(doc["root"]["height"] == 5.0);
    CHECK(doc["root"]["children"][0]["id"] == 2);
    CHECK(doc["root"]["children"][1]["children"][1]["id"] == 1);
  }

  TEST_CASE("hash distinguishes heights") {
    Dendrogram other = three;
    other.merges[1].height = std::nextafter(5.0, 6.0);
    CHECK(dendrogram_hash(other) != dendrogram_hash(three));
    CHECK_FALSE(bitwise_equal(other, three));
  }
}
