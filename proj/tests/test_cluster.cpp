#include <doctest.h>

#include <map>
#include <random>

#include "support.hpp"
#include "taxoforge/error.hpp"

using namespace taxoforge;

namespace {

struct Fixture {
  IntegratedFactorSet set;
  SimilarityMatrix m;
  std::vector<FactorClassification> classes;
};

// Eight factors with the cited similarity pairs seeded into a small matrix.
Fixture clustering_fixture() {
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"safety", "[P×1, S×1, U×1, O×1, F×1]"},
      {"lighting", "[P×1, S×1, O×1]"},
      {"thermal comfort", "[P×1, U×1, O×1]"},
      {"wheelchair access", "[F×1]"},
      {"water features", "[P×1]"},
      {"biodiversity", "[P×1, G×1]"},
      {"surveillance", "[P×1, S×1]"},
      {"accessibility", "[P×1, S×1, U×1, O×4, F×2]"}};
  std::vector<IntegratedFactor> factors;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    IntegratedFactor f;
    f.canonical_name = rows[i].first;
    f.occurrence = support::occ(rows[i].second);
    f.insertion_index = i;
    for (auto t : kSpaceTypes)
      if (f.occurrence[t] > 0) f.studies[index_of(t)].insert("s" + std::to_string(i));
    factors.push_back(f);
  }
  Fixture fx;
  fx.set = IntegratedFactorSet(factors, 26);
  fx.m = SimilarityMatrix(rows.size());
  fx.m.set(0, 6, 0.77);  // safety ~ surveillance
  fx.m.set(3, 7, 0.91);  // wheelchair access ~ accessibility
  fx.m.set(1, 0, 0.55);
  fx.classes = classify_all(fx.set, support::kb(), support::lexicon());
  return fx;
}

std::string category_of(const Fixture& fx, const std::vector<CategoryAssignment>& a, const std::string& name) {
  return support::kb().domains[a[*fx.set.find(name)].category].id;
}

}  // namespace

TEST_CASE("scope priors by class") {
  const auto u = domain_priorities(FactorClass::Universal);
  CHECK(u(Scope::Broad) == 1.0);
  CHECK(u(Scope::Moderate) == 0.8);
  CHECK(u(Scope::Specialized) == 0.6);
  const auto m = domain_priorities(FactorClass::MultiSpace);
  CHECK(m(Scope::Broad) == 1.0);
  CHECK(m(Scope::Moderate) == 1.0);
  CHECK(m(Scope::Specialized) == 0.8);
  const auto s = domain_priorities(FactorClass::SpaceSpecific);
  CHECK(s(Scope::Specialized) == 1.0);
}

TEST_CASE("related factors") {
  SimilarityMatrix m(4);
  m.set(0, 1, 0.77);
  m.set(0, 2, 0.75);
  m.set(0, 3, 0.9);
  CHECK(related_factors(0, m) == std::vector<std::size_t>{3, 1});
  CHECK(related_factors(2, m).empty());
  CHECK(related_factors(0, m, 1.0).empty());
}

TEST_CASE("subclusters use single linkage at the threshold") {
  SimilarityMatrix m(4);
  m.set(0, 1, 0.59);
  CHECK(subcluster({0, 1}, m).size() == 2);
  m.set(0, 1, 0.6);
  CHECK(subcluster({0, 1}, m).size() == 1);
  m.set(1, 2, 0.93);
  CHECK(subcluster({0, 1, 2, 3}, m) == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3}});
}

TEST_CASE("raising the subcluster threshold never merges clusters") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 2 + rng() % 12;
    SimilarityMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, u(rng));
    std::vector<std::size_t> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = i;
    const double lo = u(rng), hi = lo + (1 - lo) * u(rng);
    const auto coarse = subcluster(members, m, lo);
    const auto fine = subcluster(members, m, hi);
    CHECK(fine.size() >= coarse.size());
    std::map<std::size_t, std::size_t> owner;
    for (std::size_t c = 0; c < coarse.size(); ++c)
      for (auto f : coarse[c]) owner[f] = c;
    for (const auto& cl : fine)
      for (auto f : cl) CHECK(owner[f] == owner[cl.front()]);
  }
}

TEST_CASE("eight-factor fixture lands in the expected categories") {
  const auto fx = clustering_fixture();
  const auto a = cluster_factors(fx.set, fx.m, fx.classes, support::kb(), support::lexicon());
  REQUIRE(a.size() == 8);
  CHECK(category_of(fx, a, "safety") == "SAFETY & SECURITY");
  CHECK(category_of(fx, a, "surveillance") == "SAFETY & SECURITY");
  CHECK(category_of(fx, a, "lighting") == "COMFORT");
  CHECK(category_of(fx, a, "thermal comfort") == "COMFORT");
  CHECK(category_of(fx, a, "wheelchair access") == "ACCESSIBILITY");
  CHECK(category_of(fx, a, "accessibility") == "ACCESSIBILITY");
  CHECK(category_of(fx, a, "water features") == "NATURAL ELEMENTS");
  CHECK(category_of(fx, a, "biodiversity") == "NATURAL ELEMENTS");

  const auto report = validate_hierarchy(a, fx.set.size(), support::kb());
  CHECK(report.ok());
  CHECK(report.category_count == 4);

  const auto& kb = support::kb();
  auto sub = [&](const std::string& name) {
    const auto& x = a[*fx.set.find(name)];
    return kb.domains[x.category].subcategories[x.subcategory].id;
  };
  CHECK(sub("safety") == "PERSONAL SAFETY");
  CHECK(sub("thermal comfort") == "THERMAL COMFORT");
  CHECK(sub("water features") == "WATER FEATURES");
  CHECK(sub("biodiversity") == "ECOLOGICAL QUALITY");
  CHECK(sub("wheelchair access") == "PHYSICAL ACCESS");

  for (const auto& x : a) {
    REQUIRE(x.scores.size() == kb.domains.size());
    CHECK(x.category == best_domain(x.scores));
    for (const auto& s : x.scores)
      CHECK(s.final == doctest::Approx(0.4 * s.semantic + 0.3 * s.similarity_evidence + 0.3 * s.distribution)
                           .epsilon(1e-12));
  }
}

TEST_CASE("no related factors means no similarity evidence") {
  const auto fx = clustering_fixture();
  const auto& f = fx.set[*fx.set.find("thermal comfort")];
  for (const auto& s : score_domains(f, FactorClass::MultiSpace, {}, support::kb(), support::lexicon()))
    CHECK(s.similarity_evidence == 0.0);
}

TEST_CASE("hierarchy validation catches broken assignments") {
  const auto fx = clustering_fixture();
  auto a = cluster_factors(fx.set, fx.m, fx.classes, support::kb(), support::lexicon());
  auto missing = a;
  missing.pop_back();
  CHECK_FALSE(validate_hierarchy(missing, fx.set.size(), support::kb()).ok());
  auto bad = a;
  bad[0].subcategory = 99;
  CHECK_FALSE(validate_hierarchy(bad, fx.set.size(), support::kb()).ok());
}

TEST_CASE("assignments round-trip and do not depend on job count") {
  const auto fx = clustering_fixture();
  const auto a = cluster_factors(fx.set, fx.m, fx.classes, support::kb(), support::lexicon());
  const auto j = to_json(a, support::kb());
  CHECK(to_json(assignments_from_json(nlohmann::json::parse(j.dump()), support::kb()), support::kb()) == j);
  const auto b = cluster_factors(fx.set, fx.m, fx.classes, support::kb(), support::lexicon(), {}, 8);
  CHECK(to_json(b, support::kb()) == j);
}
